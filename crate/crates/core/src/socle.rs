//! Normalized socle evaluations.
//!
//! Every value here is expressed in units of the per-genus base integral,
//! which is nonzero; ranks and spans are unaffected by that normalization.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coeffs::MBasis;
use crate::error::{Error, Result};
use crate::exact::FactorialTable;
use crate::partitions::{visit_set_partitions, Partition};
use crate::scalar::ExactScalar;
use crate::Rational;

/// Degrees attached to `M_g`: the κ-degree `d` and the complementary degree
/// `r` with `r + d = 2g − 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModuliContext {
    pub g: u32,
    pub d: u32,
    pub r: u32,
}

impl ModuliContext {
    /// λ_g side: `g ≥ 2`, `0 ≤ d ≤ 2g − 3`.
    pub fn with_kappa_degree(g: u32, d: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::Moduli(format!("genus {g} < 2")));
        }
        if d > 2 * g - 3 {
            return Err(Error::Moduli(format!("d={d} exceeds 2g-3={}", 2 * g - 3)));
        }
        Ok(ModuliContext { g, d, r: 2 * g - 3 - d })
    }

    /// λ_gλ_{g−1} side: additionally `r ≤ g − 2`.
    pub fn with_smooth_degree(g: u32, r: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::Moduli(format!("genus {g} < 2")));
        }
        if r > g - 2 {
            return Err(Error::Moduli(format!("r={r} exceeds g-2={}", g - 2)));
        }
        Ok(ModuliContext { g, d: 2 * g - 3 - r, r })
    }

    /// `e = g − 2 − r`, the complementary degree on `M_g`.
    pub fn smooth_complement(&self) -> Option<u32> {
        (self.g - 2).checked_sub(self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum MuVariant {
    Full,
    SeparatesTau,
    SeparatesBoth,
}

/// Holds the factorial tables and memo caches for one scalar type.
///
/// All methods take `&self`; caches sit behind locks so one evaluator can be
/// shared across threads.
pub struct Evaluator<T = Rational> {
    pub(crate) facts: FactorialTable<T>,
    theta_cache: RwLock<HashMap<(Vec<u32>, Vec<u32>), T>>,
    mu_cache: RwLock<HashMap<(MuVariant, Vec<u32>, Vec<u32>), T>>,
    pub(crate) m_cache: RwLock<HashMap<u32, Arc<MBasis<T>>>>,
    cache_limit: usize,
}

impl<T: ExactScalar> Default for Evaluator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ExactScalar> Evaluator<T> {
    pub const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

    pub fn new() -> Self {
        Self::with_cache_limit(Self::DEFAULT_CACHE_LIMIT)
    }

    /// Memo caches are cleared whenever they grow past `limit` entries.
    pub fn with_cache_limit(limit: usize) -> Self {
        Evaluator {
            facts: FactorialTable::new(),
            theta_cache: RwLock::new(HashMap::new()),
            mu_cache: RwLock::new(HashMap::new()),
            m_cache: RwLock::new(HashMap::new()),
            cache_limit: limit.max(1),
        }
    }

    pub fn factorials(&self) -> &FactorialTable<T> {
        &self.facts
    }

    /// ∫ ψ^τ λ_g over M̄_{g,n} in units of ∫_{M̄_{g,1}} ψ₁^{2g−2} λ_g.
    /// Entries of `tau` may be zero; they must sum to `2g − 3 + n`.
    pub fn psi_lambda_g(&self, tau: &[u32], g: u32) -> Result<T> {
        let top = (2 * g + tau.len() as u32).checked_sub(3);
        let sum: u32 = tau.iter().sum();
        match top {
            Some(top) if g >= 1 && top == sum => self.facts.multinomial(top, tau),
            _ => Err(Error::Dimension(format!(
                "psi exponents {tau:?} sum to {sum}, need 2g-3+n for g={g}"
            ))),
        }
    }

    /// ∫ ψ^σ λ_gλ_{g−1} over M̄_{g,n} in units of the base λ_gλ_{g−1}
    /// integral. Requires `Σσ = g − 2 + n`.
    pub fn psi_lambda_g_lambda_g1(&self, sigma: &[u32], g: u32) -> Result<T> {
        let n = sigma.len() as u32;
        let sum: u32 = sigma.iter().sum();
        if g < 2 || sum != g - 2 + n {
            return Err(Error::Dimension(format!(
                "psi exponents {sigma:?} sum to {sum}, need g-2+n for g={g}"
            )));
        }
        let f = &self.facts;
        let odd = f.odd_double_factorial(g - 1);
        let denom = sigma
            .iter()
            .fold(f.factorial(2 * g - 1), |acc, &s| acc * f.odd_double_factorial(s));
        Ok(f.factorial(2 * g - 3 + n) * odd / denom)
    }

    /// ϑ(σ; τ): κ-monomial `σ` with ψ exponents `τ` at marked points, in
    /// normalized λ_g units. Computed genus-free:
    ///
    /// ϑ(σ; τ) = Σ_{P ⊢ I(σ)} (−1)^{|P|+ℓ(σ)} (|σ|+|τ|+|P|)! / (∏_{b∈P} (σ^P_b + 1)! · ∏_j τ_j!)
    pub fn theta(&self, sigma: &Partition, tau: &Partition) -> T {
        self.theta_parts(sigma.parts(), tau.parts())
    }

    /// [`Evaluator::theta`] on raw part lists (any order, no zeros).
    pub fn theta_parts(&self, sigma: &[u32], tau: &[u32]) -> T {
        let key = (sorted(sigma), sorted(tau));
        if let Some(v) = self.theta_cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let value = self.theta_uncached(&key.0, &key.1);
        let mut cache = self.theta_cache.write().unwrap();
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(key, value.clone());
        value
    }

    fn theta_uncached(&self, sigma: &[u32], tau: &[u32]) -> T {
        let f = &self.facts;
        let base: u32 = sigma.iter().sum::<u32>() + tau.iter().sum::<u32>();
        let tau_denom = tau.iter().fold(T::one(), |acc, &t| acc * f.factorial(t));
        let signed = signed_block_sums(sigma.len(), |labels, count| {
            let sums = block_sums(sigma, labels, count);
            let sign = if (count + sigma.len()).is_multiple_of(2) { 1 } else { -1 };
            Some((sums, sign))
        });
        let mut total = T::zero();
        for (sums, mult) in signed {
            let top = base + sums.len() as u32;
            let denom = sums.iter().fold(tau_denom.clone(), |acc, &b| acc * f.factorial(b + 1));
            total = total + T::from_int(mult) * f.factorial(top) / denom;
        }
        total
    }

    /// μ_σ(τ), proportional to ∫ κ_σ κ_τ λ_gλ_{g−1} with g = |σ|+|τ|+2.
    pub fn mu(&self, sigma: &Partition, tau: &Partition) -> T {
        self.mu_variant(MuVariant::Full, sigma, tau)
    }

    /// μ′_σ(τ): the μ sum restricted to set partitions separating I(τ).
    pub fn mu_prime(&self, sigma: &Partition, tau: &Partition) -> T {
        self.mu_variant(MuVariant::SeparatesTau, sigma, tau)
    }

    /// μ″_σ(τ): restricted to set partitions separating both I(τ) and I(σ).
    pub fn mu_dprime(&self, sigma: &Partition, tau: &Partition) -> T {
        self.mu_variant(MuVariant::SeparatesBoth, sigma, tau)
    }

    fn mu_variant(&self, variant: MuVariant, sigma: &Partition, tau: &Partition) -> T {
        let key = (variant, sigma.parts().to_vec(), tau.parts().to_vec());
        if let Some(v) = self.mu_cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let value = self.mu_uncached(variant, sigma.parts(), tau.parts());
        let mut cache = self.mu_cache.write().unwrap();
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(key, value.clone());
        value
    }

    fn mu_uncached(&self, variant: MuVariant, sigma: &[u32], tau: &[u32]) -> T {
        let f = &self.facts;
        let ls = sigma.len();
        let joint: Vec<u32> = sigma.iter().chain(tau).copied().collect();
        let size: u32 = joint.iter().sum();
        let outer_sign = joint.len();
        let signed = signed_block_sums(joint.len(), |labels, count| {
            let keep = match variant {
                MuVariant::Full => true,
                MuVariant::SeparatesTau => all_distinct(&labels[ls..]),
                MuVariant::SeparatesBoth => all_distinct(&labels[ls..]) && all_distinct(&labels[..ls]),
            };
            if !keep {
                return None;
            }
            let sign = if (outer_sign + count).is_multiple_of(2) { 1 } else { -1 };
            Some((block_sums(&joint, labels, count), sign))
        });
        let mut total = T::zero();
        for (sums, mult) in signed {
            let top = 2 * size + 1 + sums.len() as u32;
            let denom = sums.iter().fold(T::one(), |acc, &b| acc * f.odd_double_factorial(b));
            total = total + T::from_int(mult) * f.factorial(top) / denom;
        }
        total
    }
}

fn sorted(parts: &[u32]) -> Vec<u32> {
    let mut v = parts.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn all_distinct(labels: &[usize]) -> bool {
    labels.iter().enumerate().all(|(i, a)| !labels[..i].contains(a))
}

fn block_sums(parts: &[u32], labels: &[usize], count: usize) -> Vec<u32> {
    let mut sums = vec![0u32; count];
    for (i, &b) in labels.iter().enumerate() {
        sums[b] += parts[i];
    }
    sums.sort_unstable();
    sums
}

/// Runs over all set partitions of `0..n`, grouping the signed terms by the
/// (sorted) block sums the callback reports, so each distinct summand is
/// evaluated once.
fn signed_block_sums(
    n: usize,
    mut term: impl FnMut(&[usize], usize) -> Option<(Vec<u32>, i64)>,
) -> Vec<(Vec<u32>, i64)> {
    let mut grouped: HashMap<Vec<u32>, i64> = HashMap::new();
    visit_set_partitions(n, &mut |labels, count| {
        if let Some((sums, sign)) = term(labels, count) {
            *grouped.entry(sums).or_insert(0) += sign;
        }
    });
    let mut out: Vec<_> = grouped.into_iter().filter(|(_, m)| *m != 0).collect();
    out.sort();
    out
}
