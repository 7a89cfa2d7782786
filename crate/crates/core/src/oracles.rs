//! Brute-force permutation counts.
//!
//! Every function here enumerates words literally and tests the stated
//! conditions one by one; nothing is shared with the formula modules apart
//! from the partition types. Inputs are capped by a symbol bound so that a
//! single call stays in the seconds range.

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::ExactScalar;

/// Default cap on the number of symbols in one word.
pub const DEFAULT_BOUND: usize = 10;

/// A symbol `i_k`: kind `i`, ordinal `k` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: usize,
    pub ordinal: usize,
}

/// Which partition (or auxiliary symbol) a kind comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindClass {
    Sigma,
    Tau,
    Rho,
    Lambda,
    End,
    Star,
}

#[derive(Clone, Debug)]
pub struct KindSpec {
    pub class: KindClass,
    /// Position of the part inside its partition; 0 for auxiliary symbols.
    pub index: usize,
    pub count: usize,
    /// Labeled kinds have distinguishable symbols; otherwise the symbols of
    /// the kind are identical and ordinals follow positions.
    pub labeled: bool,
}

/// The symbols available to a family of words.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    pub kinds: Vec<KindSpec>,
}

impl Alphabet {
    pub fn push(&mut self, class: KindClass, index: usize, count: usize, labeled: bool) -> usize {
        self.kinds.push(KindSpec { class, index, count, labeled });
        self.kinds.len() - 1
    }

    pub fn symbol_count(&self) -> usize {
        self.kinds.iter().map(|k| k.count).sum()
    }

    pub fn kinds_of(&self, class: KindClass) -> impl Iterator<Item = usize> + '_ {
        self.kinds.iter().enumerate().filter(move |(_, k)| k.class == class).map(|(i, _)| i)
    }

    /// Calls `f` on every distinct word. Unlabeled kinds contribute repeated
    /// items to a multiset; labeled symbols are distinct items.
    pub fn visit_words(&self, bound: usize, f: &mut dyn FnMut(&SymbolWord)) -> Result<()> {
        let symbols = self.symbol_count();
        if symbols > bound {
            return Err(Error::OracleBound { symbols, bound });
        }
        // item id -> (kind, fixed ordinal or 0 for positional)
        let mut meaning: Vec<(usize, usize)> = Vec::new();
        let mut items: Vec<usize> = Vec::new();
        for (kind, spec) in self.kinds.iter().enumerate() {
            if spec.labeled {
                for ordinal in 1..=spec.count {
                    items.push(meaning.len());
                    meaning.push((kind, ordinal));
                }
            } else if spec.count > 0 {
                items.extend(std::iter::repeat_n(meaning.len(), spec.count));
                meaning.push((kind, 0));
            }
        }
        let mut word = SymbolWord { symbols: Vec::with_capacity(items.len()) };
        let mut seen = vec![0usize; self.kinds.len()];
        loop {
            word.symbols.clear();
            seen.iter_mut().for_each(|s| *s = 0);
            for &id in &items {
                let (kind, fixed) = meaning[id];
                seen[kind] += 1;
                let ordinal = if fixed == 0 { seen[kind] } else { fixed };
                word.symbols.push(Symbol { kind, ordinal });
            }
            f(&word);
            if !next_permutation(&mut items) {
                return Ok(());
            }
        }
    }
}

/// A word in the symbols of an [`Alphabet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolWord {
    pub symbols: Vec<Symbol>,
}

impl SymbolWord {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Positions of the symbols of `kind`, indexed by ordinal − 1.
    pub fn positions(&self, kind: usize, count: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; count];
        for (p, s) in self.symbols.iter().enumerate() {
            if s.kind == kind {
                pos[s.ordinal - 1] = p;
            }
        }
        pos
    }

    /// The symbol right after position `p`, if any.
    pub fn follower(&self, p: usize) -> Option<Symbol> {
        self.symbols.get(p + 1).copied()
    }

    fn last_position_of(&self, kind: usize) -> Option<usize> {
        self.symbols.iter().rposition(|s| s.kind == kind)
    }

    fn first_position_of(&self, kind: usize) -> Option<usize> {
        self.symbols.iter().position(|s| s.kind == kind)
    }

    /// Pairs `(i, j)` of distinct kinds such that the last symbol of kind `i`
    /// is immediately followed by the first symbol of kind `j`.
    pub fn last_first_adjacencies(&self, kinds: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &i in kinds {
            let Some(p) = self.last_position_of(i) else { continue };
            let Some(next) = self.follower(p) else { continue };
            if next.kind != i && kinds.contains(&next.kind) && self.first_position_of(next.kind) == Some(p + 1) {
                out.push((i, next.kind));
            }
        }
        out
    }
}

/// Lexicographic successor of a multiset arrangement; `false` after the last.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Every permutation of `0..n`, as a list of elements from smallest to largest.
fn all_orders(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// rank[x] = position of x in `order`.
fn ranks_of(order: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut rank = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::BadOrder(n));
    }
    for (r, &x) in order.iter().enumerate() {
        if x >= n || rank[x] != usize::MAX {
            return Err(Error::BadOrder(n));
        }
        rank[x] = r;
    }
    Ok(rank)
}

// ---------------------------------------------------------------------------
// Conditions, one predicate each.

/// Whenever the last symbol of a constrained kind `i` sits directly before the
/// first symbol of a constrained kind `j`, `i` ranks below `j`. `rank` maps a kind to its position in the total order, `usize::MAX` for
/// kinds outside the constrained set.
pub fn last_first_respects_order(word: &SymbolWord, constrained: &[usize], rank: &[usize]) -> bool {
    word.last_first_adjacencies(constrained).into_iter().all(|(i, j)| rank[i] < rank[j])
}

/// No λ-kind ends directly before a symbol of any λ-kind.
pub fn lambda_last_not_followed_by_lambda(word: &SymbolWord, lambda_kinds: &[usize]) -> bool {
    lambda_kinds.iter().all(|&i| {
        let p = word.last_position_of(i).expect("every λ kind has a symbol");
        word.follower(p).is_none_or(|next| !lambda_kinds.contains(&next.kind))
    })
}

/// Comb relations on a kind with 2m+1 labeled symbols: the odd ordinals
/// appear in increasing order and each `i_{2j}` precedes `i_{2j+1}`.
pub fn in_comb_order(word: &SymbolWord, kind: usize, count: usize) -> bool {
    let p = word.positions(kind, count);
    let odd_chain = (2..count).step_by(2).all(|k| p[k - 2] < p[k]);
    let pairs = (1..count).step_by(2).all(|k| p[k] < p[k + 1]);
    odd_chain && pairs
}

/// The last symbol of the kind ends the word or sits directly before a τ
/// symbol other than the first of its kind.
pub fn last_at_end_or_before_later_tau(word: &SymbolWord, kind: usize, count: usize, tau_kinds: &[usize]) -> bool {
    let p = word.positions(kind, count)[count - 1];
    match word.follower(p) {
        None => true,
        Some(next) => tau_kinds.contains(&next.kind) && next.ordinal != 1,
    }
}

/// The last symbol of the kind sits directly before an even-ordinal τ symbol
/// or the End symbol. Summing over injections φ that prescribe this follower
/// counts each word once, because a word determines φ.
pub fn last_before_even_tau_or_end(
    word: &SymbolWord,
    kind: usize,
    count: usize,
    tau_kinds: &[usize],
    end_kind: usize,
) -> bool {
    let p = word.positions(kind, count)[count - 1];
    match word.follower(p) {
        None => false,
        Some(next) => next.kind == end_kind || (tau_kinds.contains(&next.kind) && next.ordinal % 2 == 0),
    }
}

/// The last symbol of the kind does not sit directly before the first
/// symbol of a τ-comb.
pub fn last_not_before_first_tau(word: &SymbolWord, kind: usize, count: usize, tau_kinds: &[usize]) -> bool {
    let p = word.positions(kind, count)[count - 1];
    word.follower(p).is_none_or(|next| !(tau_kinds.contains(&next.kind) && next.ordinal == 1))
}

// ---------------------------------------------------------------------------
// Counts.

/// Oracle counts with a configurable symbol bound.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub bound: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { bound: DEFAULT_BOUND }
    }
}

impl Oracle {
    pub fn with_bound(bound: usize) -> Self {
        Oracle { bound }
    }

    /// Words in σ_i + 1 symbols per σ-kind and τ_i per τ-kind whose
    /// last/first adjacencies between σ-kinds respect `order` (the σ
    /// positions listed from smallest to largest).
    pub fn count_lemma_tool(&self, sigma: &Partition, tau: &Partition, order: &[usize]) -> Result<u64> {
        let rank_sigma = ranks_of(order, sigma.len())?;
        let mut alphabet = Alphabet::default();
        for (i, &s) in sigma.parts().iter().enumerate() {
            alphabet.push(KindClass::Sigma, i, s as usize + 1, false);
        }
        for (i, &t) in tau.parts().iter().enumerate() {
            alphabet.push(KindClass::Tau, i, t as usize, false);
        }
        let constrained: Vec<usize> = alphabet.kinds_of(KindClass::Sigma).collect();
        let mut rank = vec![usize::MAX; alphabet.kinds.len()];
        for (&k, &r) in constrained.iter().zip(&rank_sigma) {
            rank[k] = r;
        }
        let mut count = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if last_first_respects_order(w, &constrained, &rank) {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Words in λ_i + 1, τ_i + 1 and ρ_i symbols per kind where no λ-kind ends
    /// right before a λ symbol and last/first adjacencies among λ- and τ-kinds
    /// respect the order; averaged over the total orders of I(λ) ⊔ I(τ) that
    /// place I(τ) below I(λ). Should equal c_{λ,(d),{τ},{ρ}}.
    pub fn count_main_claim<T: ExactScalar>(&self, lambda: &Partition, tau: &Partition, rho: &Partition) -> Result<T> {
        let mut alphabet = Alphabet::default();
        for (i, &l) in lambda.parts().iter().enumerate() {
            alphabet.push(KindClass::Lambda, i, l as usize + 1, false);
        }
        for (i, &t) in tau.parts().iter().enumerate() {
            alphabet.push(KindClass::Tau, i, t as usize + 1, false);
        }
        for (i, &r) in rho.parts().iter().enumerate() {
            alphabet.push(KindClass::Rho, i, r as usize, false);
        }
        let lambda_kinds: Vec<usize> = alphabet.kinds_of(KindClass::Lambda).collect();
        let tau_kinds: Vec<usize> = alphabet.kinds_of(KindClass::Tau).collect();
        let constrained: Vec<usize> = tau_kinds.iter().chain(&lambda_kinds).copied().collect();

        // rank tables: τ kinds occupy ranks 0..ℓτ, λ kinds the ranks above
        let mut rank_tables = Vec::new();
        for tau_order in all_orders(tau_kinds.len()) {
            for lambda_order in all_orders(lambda_kinds.len()) {
                let mut rank = vec![usize::MAX; alphabet.kinds.len()];
                for (r, &x) in tau_order.iter().enumerate() {
                    rank[tau_kinds[x]] = r;
                }
                for (r, &x) in lambda_order.iter().enumerate() {
                    rank[lambda_kinds[x]] = tau_kinds.len() + r;
                }
                rank_tables.push(rank);
            }
        }

        let mut total = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if !lambda_last_not_followed_by_lambda(w, &lambda_kinds) {
                return;
            }
            for rank in &rank_tables {
                if last_first_respects_order(w, &constrained, rank) {
                    total += 1;
                }
            }
        })?;
        Ok(T::from_nat(total) / T::from_nat(rank_tables.len() as u64))
    }

    /// Words on one comb of 2π_i + 1 labeled symbols per part, each comb in
    /// comb-like order.
    pub fn count_comb_linear_extensions(&self, pi: &Partition) -> Result<u64> {
        let mut alphabet = Alphabet::default();
        let combs: Vec<(usize, usize)> = pi
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let count = 2 * p as usize + 1;
                (alphabet.push(KindClass::Tau, i, count, true), count)
            })
            .collect();
        let mut count = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if combs.iter().all(|&(k, c)| in_comb_order(w, k, c)) {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Permutation count for η′_σ(τ): τ_i + 1 symbols per τ-kind and λ_i + 1 per
    /// λ-kind, λ the odd lift of σ to length |τ| + 1, each kind in order,
    /// each λ-last at the end or right before a non-first τ symbol.
    pub fn count_a1(&self, sigma: &Partition, tau: &Partition) -> Result<u64> {
        let r = tau.size() as usize;
        if sigma.len() > r + 1 {
            return Err(Error::LengthBound { sigma: sigma.to_string(), bound: r + 1 });
        }
        let mut lambda: Vec<u32> = sigma.parts().iter().map(|&s| 2 * s + 1).collect();
        lambda.resize(r + 1, 1);
        let mut alphabet = Alphabet::default();
        let tau_kinds: Vec<usize> = tau
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &t)| alphabet.push(KindClass::Tau, i, t as usize + 1, false))
            .collect();
        let lambda_kinds: Vec<(usize, usize)> = lambda
            .iter()
            .enumerate()
            .map(|(i, &l)| (alphabet.push(KindClass::Lambda, i, l as usize + 1, false), l as usize + 1))
            .collect();
        let mut count = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if lambda_kinds.iter().all(|&(k, c)| last_at_end_or_before_later_tau(w, k, c, &tau_kinds)) {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Permutation count for η″_σ(τ): τ-combs, σ-kinds of 2σ_i + 1 symbols in
    /// order, and one End symbol; each σ-last is immediately followed by an
    /// even τ symbol or by End.
    pub fn count_a4(&self, sigma: &Partition, tau: &Partition) -> Result<u64> {
        let mut alphabet = Alphabet::default();
        let tau_combs: Vec<(usize, usize)> = tau
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &t)| (alphabet.push(KindClass::Tau, i, 2 * t as usize + 1, true), 2 * t as usize + 1))
            .collect();
        let sigma_kinds: Vec<(usize, usize)> = sigma
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &s)| (alphabet.push(KindClass::Sigma, i, 2 * s as usize + 1, false), 2 * s as usize + 1))
            .collect();
        let end = alphabet.push(KindClass::End, 0, 1, false);
        let tau_kinds: Vec<usize> = tau_combs.iter().map(|&(k, _)| k).collect();
        let mut count = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if tau_combs.iter().all(|&(k, c)| in_comb_order(w, k, c))
                && sigma_kinds.iter().all(|&(k, c)| last_before_even_tau_or_end(w, k, c, &tau_kinds, end))
            {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Permutation count for μ″_σ(τ): τ-combs, σ-combs and a ⋆ symbol; no σ-last
    /// is immediately followed by the first symbol of a τ-comb.
    pub fn count_b2(&self, sigma: &Partition, tau: &Partition) -> Result<u64> {
        let mut alphabet = Alphabet::default();
        let tau_combs: Vec<(usize, usize)> = tau
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &t)| (alphabet.push(KindClass::Tau, i, 2 * t as usize + 1, true), 2 * t as usize + 1))
            .collect();
        let sigma_combs: Vec<(usize, usize)> = sigma
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &s)| (alphabet.push(KindClass::Sigma, i, 2 * s as usize + 1, true), 2 * s as usize + 1))
            .collect();
        alphabet.push(KindClass::Star, 0, 1, false);
        let tau_kinds: Vec<usize> = tau_combs.iter().map(|&(k, _)| k).collect();
        let mut count = 0u64;
        alphabet.visit_words(self.bound, &mut |w| {
            if tau_combs.iter().chain(&sigma_combs).all(|&(k, c)| in_comb_order(w, k, c))
                && sigma_combs.iter().all(|&(k, c)| last_not_before_first_tau(w, k, c, &tau_kinds))
            {
                count += 1;
            }
        })?;
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{part, Rational};

    fn oracle() -> Oracle {
        Oracle::default()
    }

    #[test]
    fn next_permutation_multiset() {
        let mut v = vec![0, 0, 1, 1];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![1, 1, 0, 0]);
    }

    #[test]
    fn lemma_tool_examples() {
        assert_eq!(oracle().count_lemma_tool(&part![1, 1], &part![], &[0, 1]).unwrap(), 5);
        assert_eq!(oracle().count_lemma_tool(&part![1, 1], &part![], &[1, 0]).unwrap(), 5);
        assert_eq!(oracle().count_lemma_tool(&part![2, 1], &part![], &[0, 1]).unwrap(), 9);
        assert_eq!(oracle().count_lemma_tool(&part![1], &part![1, 1], &[0]).unwrap(), 12);
        assert_eq!(oracle().count_lemma_tool(&part![1], &part![], &[1]), Err(Error::BadOrder(1)));
    }

    #[test]
    fn main_claim_examples() {
        let o = oracle();
        let c: Rational = o.count_main_claim(&part![1, 1], &part![], &part![]).unwrap();
        assert_eq!(c, Rational::from_int(0));
        let c: Rational = o.count_main_claim(&part![3], &part![], &part![]).unwrap();
        assert_eq!(c, Rational::from_int(1));
        let c: Rational = o.count_main_claim(&part![1, 1], &part![1], &part![]).unwrap();
        assert_eq!(c, Rational::from_int(16));
    }

    #[test]
    fn comb_examples() {
        assert_eq!(oracle().count_comb_linear_extensions(&part![]).unwrap(), 1);
        assert_eq!(oracle().count_comb_linear_extensions(&part![1]).unwrap(), 2);
        assert_eq!(oracle().count_comb_linear_extensions(&part![1, 1]).unwrap(), 80);
    }

    #[test]
    fn interpretation_examples() {
        assert_eq!(oracle().count_b2(&part![], &part![1]).unwrap(), 8);
        assert_eq!(oracle().count_b2(&part![1], &part![]).unwrap(), 8);
        assert_eq!(oracle().count_a4(&part![], &part![1]).unwrap(), 8);
        assert_eq!(oracle().count_a1(&part![], &part![1]).unwrap(), 16);
    }

    #[test]
    fn bound_enforced() {
        let o = Oracle::with_bound(4);
        assert_eq!(o.count_lemma_tool(&part![2, 1], &part![], &[0, 1]), Err(Error::OracleBound { symbols: 5, bound: 4 }));
    }
}
