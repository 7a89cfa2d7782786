//! Linear forms on formal κ-polynomials of a fixed degree, the `M_λ` basis,
//! expansion coefficients, the Φ transform and the η family.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partitions::{
    enumerate_partitions, visit_refining_maps, visit_set_partitions, Partition, PartitionBasis,
};
use crate::scalar::ExactScalar;
use crate::socle::Evaluator;
use crate::strata::ReducedBoundaryData;

/// A linear form on `Q^{P(d)}`, stored densely in the canonical order of P(d).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<T> {
    basis: Arc<PartitionBasis>,
    values: Vec<T>,
}

impl<T: ExactScalar> LinearForm<T> {
    pub fn zero(basis: Arc<PartitionBasis>) -> Self {
        let values = vec![T::zero(); basis.len()];
        LinearForm { basis, values }
    }

    pub fn from_fn(basis: Arc<PartitionBasis>, mut f: impl FnMut(&Partition) -> T) -> Self {
        let values = basis.partitions().iter().map(&mut f).collect();
        LinearForm { basis, values }
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn basis(&self) -> &Arc<PartitionBasis> {
        &self.basis
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value on a κ-monomial; zero for partitions of another degree.
    pub fn at(&self, p: &Partition) -> T {
        self.basis.position(p).map_or_else(T::zero, |i| self.values[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scaled(&self, k: &T) -> Self {
        let values = self.values.iter().map(|v| v.clone() * k.clone()).collect();
        LinearForm { basis: self.basis.clone(), values }
    }

    /// Support paired with values, skipping zeros.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&Partition, &T)> {
        self.basis.partitions().iter().zip(&self.values).filter(|(_, v)| !v.is_zero())
    }
}

/// The forms `M_λ(π)` for all λ, π ⊢ d; `rows[λ][π]` in canonical order.
pub struct MBasis<T> {
    basis: Arc<PartitionBasis>,
    rows: Vec<Vec<T>>,
}

impl<T: ExactScalar> MBasis<T> {
    pub fn basis(&self) -> &Arc<PartitionBasis> {
        &self.basis
    }

    pub fn row(&self, lambda: usize) -> &[T] {
        &self.rows[lambda]
    }
}

/// F(i) for one block of a set partition of I(σ).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockFactor<T> {
    pub block: Vec<usize>,
    pub value: T,
}

/// The partition of `2|σ| + r + 1` with parts `2σ_i + 1`, padded with ones to
/// length `r + 1`.
pub fn odd_lift(sigma: &Partition, r: u32) -> Result<Partition> {
    let len = r as usize + 1;
    if sigma.len() > len {
        return Err(Error::LengthBound { sigma: sigma.to_string(), bound: len });
    }
    let mut parts: Vec<u32> = sigma.parts().iter().map(|s| 2 * s + 1).collect();
    parts.resize(len, 1);
    Partition::new(parts)
}

impl<T: ExactScalar> Evaluator<T> {
    /// The cached `M_λ` table for degree `d`.
    pub fn m_basis(&self, d: u32) -> Arc<MBasis<T>> {
        if let Some(m) = self.m_cache.read().unwrap().get(&d) {
            return m.clone();
        }
        let basis = Arc::new(PartitionBasis::new(d));
        let rows = basis
            .partitions()
            .iter()
            .map(|lambda| basis.partitions().iter().map(|pi| self.m_value(lambda, pi)).collect())
            .collect();
        let m = Arc::new(MBasis { basis, rows });
        self.m_cache.write().unwrap().entry(d).or_insert(m).clone()
    }

    pub fn partition_basis(&self, d: u32) -> Arc<PartitionBasis> {
        self.m_basis(d).basis.clone()
    }

    /// M_λ(π) = (1/|Aut λ|) Σ_φ ∏_{j ∈ I(λ)} ϑ(π|_{φ⁻¹(j)}), the sum over
    /// refining functions φ of λ into π.
    pub fn m_value(&self, lambda: &Partition, pi: &Partition) -> T {
        let mut total = T::zero();
        visit_refining_maps(lambda.parts(), pi.parts(), &mut |map| {
            let term = (0..lambda.len()).fold(T::one(), |acc, j| {
                acc * self.theta_parts(&preimage_parts(pi.parts(), map, j), &[])
            });
            total = total.clone() + term;
            true
        });
        total / T::from_nat(lambda.automorphism_count())
    }

    pub fn m_form(&self, lambda: &Partition) -> LinearForm<T> {
        let m = self.m_basis(lambda.size());
        let i = m.basis.position(lambda).expect("partition of its own size");
        LinearForm { basis: m.basis.clone(), values: m.rows[i].clone() }
    }

    /// The pairing row of reduced boundary data:
    /// v(π) = Σ_φ ∏_j ϑ(π|_{φ⁻¹(j)} ⊔ τ_j; ρ_j) over refining functions φ of γ into π.
    pub fn v_form(&self, data: &ReducedBoundaryData, d: u32) -> Result<LinearForm<T>> {
        let gamma = data.gamma();
        if gamma.size() != d {
            return Err(Error::Dimension(format!("gamma {gamma} does not have size {d}")));
        }
        let triples = data.triples();
        let socle: Vec<u32> = triples.iter().map(|t| t.socle).collect();
        let basis = self.partition_basis(d);
        Ok(LinearForm::from_fn(basis, |pi| {
            let mut total = T::zero();
            visit_refining_maps(&socle, pi.parts(), &mut |map| {
                let term = triples.iter().enumerate().fold(T::one(), |acc, (j, t)| {
                    let mut kappa = preimage_parts(pi.parts(), map, j);
                    kappa.extend_from_slice(t.kappa.parts());
                    acc * self.theta_parts(&kappa, t.psi.parts())
                });
                total = total.clone() + term;
                true
            });
            total
        }))
    }

    /// The row of the κ-monomial κ_τ against degree-`d` κ-monomials:
    /// π ↦ ϑ(π ⊔ τ).
    pub fn kappa_form(&self, tau: &Partition, d: u32) -> LinearForm<T> {
        LinearForm::from_fn(self.partition_basis(d), |pi| self.theta(&pi.union(tau), &Partition::empty()))
    }

    /// Coefficients of `form` in the `M_λ` basis, by forward substitution in
    /// canonical (length-increasing) order.
    pub fn expand_in_m_basis(&self, form: &LinearForm<T>) -> LinearForm<T> {
        let m = self.m_basis(form.degree());
        let n = m.basis.len();
        let mut c: Vec<T> = Vec::with_capacity(n);
        for lam in 0..n {
            let mut value = form.values[lam].clone();
            for (mu, c_mu) in c.iter().enumerate() {
                let entry = &m.rows[mu][lam];
                if !entry.is_zero() && !c_mu.is_zero() {
                    value = value - c_mu.clone() * entry.clone();
                }
            }
            c.push(value);
        }
        LinearForm { basis: m.basis.clone(), values: c }
    }

    /// All coefficients c_{λ,γ,{τ},{ρ}} of the data, indexed by λ.
    pub fn c_coefficients(&self, data: &ReducedBoundaryData) -> LinearForm<T> {
        let d = data.gamma().size();
        let v = self.v_form(data, d).expect("gamma has its own size");
        self.expand_in_m_basis(&v)
    }

    /// c_{λ,γ,{τ},{ρ}} via the triangular solve.
    pub fn c_coefficient(&self, lambda: &Partition, data: &ReducedBoundaryData) -> T {
        if lambda.size() != data.gamma().size() {
            return T::zero();
        }
        self.c_coefficients(data).at(lambda)
    }

    /// c_{λ,γ,{τ},{ρ}} via the explicit formulas: the product reduction over
    /// refinements φ of γ into λ, with each single-vertex factor given by the
    /// alternating sum over strictly refining chains.
    pub fn c_coefficient_by_chains(&self, lambda: &Partition, data: &ReducedBoundaryData) -> T {
        let triples = data.triples();
        let socle: Vec<u32> = triples.iter().map(|t| t.socle).collect();
        let mut total = T::zero();
        visit_refining_maps(&socle, lambda.parts(), &mut |map| {
            let term = triples.iter().enumerate().fold(T::one(), |acc, (j, t)| {
                let block = Partition::from_nonneg(preimage_parts(lambda.parts(), map, j));
                acc * self.single_vertex_chain_sum(&block, &t.kappa, &t.psi)
            });
            total = total.clone() + term;
            true
        });
        total
    }

    /// c_{λ,(d),{τ},{ρ}} as Σ_l (−1)^l Σ_{λ=λ_0→…→λ_l} ϑ(λ_l ⊔ τ; ρ) ∏_i (∏_j ϑ(λ_{i−1}|φ_i⁻¹(j)) / |Aut λ_i|),
    /// enumerating every chain and every refining map.
    pub fn single_vertex_chain_sum(&self, lambda: &Partition, tau: &Partition, rho: &Partition) -> T {
        let coarser: Vec<Partition> = enumerate_partitions(lambda.size(), None);
        let mut total = T::zero();
        self.chain_rec(lambda, T::one(), &coarser, tau, rho, &mut total);
        total
    }

    fn chain_rec(
        &self,
        current: &Partition,
        weight: T,
        all: &[Partition],
        tau: &Partition,
        rho: &Partition,
        total: &mut T,
    ) {
        *total = total.clone() + weight.clone() * self.theta(&current.union(tau), rho);
        for next in all.iter().filter(|p| p.len() < current.len()) {
            let aut = T::from_nat(next.automorphism_count());
            visit_refining_maps(next.parts(), current.parts(), &mut |map| {
                let step = (0..next.len()).fold(T::one(), |acc, j| {
                    acc * self.theta_parts(&preimage_parts(current.parts(), map, j), &[])
                });
                let w = -(weight.clone() * step / aut.clone());
                self.chain_rec(next, w, all, tau, rho, total);
                true
            });
        }
    }

    /// Φ⁻¹: f ↦ (τ ↦ Σ_{P ⊢ I(τ)} (−1)^{ℓ(τ)+|P|} f(τ^P)).
    pub fn phi_inverse(&self, form: &LinearForm<T>) -> LinearForm<T> {
        LinearForm::from_fn(form.basis.clone(), |tau| {
            let mut total = T::zero();
            for (merged, sign) in signed_merges(tau) {
                total = total + T::from_int(sign) * form.at(&merged);
            }
            total
        })
    }

    /// Φ, the two-sided inverse of [`Evaluator::phi_inverse`], by triangular
    /// solve over partition length.
    pub fn phi(&self, form: &LinearForm<T>) -> LinearForm<T> {
        let basis = form.basis.clone();
        let mut out: Vec<T> = Vec::with_capacity(basis.len());
        for (i, tau) in basis.partitions().iter().enumerate() {
            let mut value = form.values[i].clone();
            for (merged, sign) in signed_merges(tau) {
                if merged.len() < tau.len() {
                    let j = basis.position(&merged).expect("same size");
                    value = value - T::from_int(sign) * out[j].clone();
                }
            }
            out.push(value);
        }
        LinearForm { basis, values: out }
    }

    /// η_σ on P(r): τ ↦ c_{λ,(d),{τ},{∅}} with λ the odd lift of σ to length
    /// r + 1 and d = |λ|.
    pub fn eta(&self, sigma: &Partition, r: u32) -> Result<LinearForm<T>> {
        let lambda = odd_lift(sigma, r)?;
        let d = lambda.size();
        Ok(LinearForm::from_fn(self.partition_basis(r), |tau| {
            let data = ReducedBoundaryData::single(d, tau.clone(), Partition::empty());
            self.c_coefficient(&lambda, &data)
        }))
    }

    /// η′_σ = Φ(η_σ).
    pub fn eta_prime(&self, sigma: &Partition, r: u32) -> Result<LinearForm<T>> {
        Ok(self.phi(&self.eta(sigma, r)?))
    }

    /// η″_σ = η′_σ / (r + 1 − ℓ(σ))!.
    pub fn eta_dprime(&self, sigma: &Partition, r: u32) -> Result<LinearForm<T>> {
        let prime = self.eta_prime(sigma, r)?;
        let k = self.facts.factorial(r + 1 - sigma.len() as u32);
        Ok(prime.scaled(&(T::one() / k)))
    }

    /// F(i) = (2σ^P_i + |i| + 1)! / ∏_{j∈i} (2σ_j + 1)!!. Entries of `parts`
    /// may be zero.
    pub fn block_factor(&self, parts: &[u32], block: &[usize]) -> Result<BlockFactor<T>> {
        if block.is_empty() {
            return Err(Error::EmptyBlock);
        }
        if let Some(&bad) = block.iter().find(|&&j| j >= parts.len()) {
            return Err(Error::BlockOutOfRange { block: vec![bad], len: parts.len() });
        }
        let sum: u32 = block.iter().map(|&j| parts[j]).sum();
        let top = 2 * sum + block.len() as u32 + 1;
        let denom = block.iter().fold(T::one(), |acc, &j| acc * self.facts.odd_double_factorial(parts[j]));
        Ok(BlockFactor { block: block.to_vec(), value: self.facts.factorial(top) / denom })
    }

    /// Checks μ″_σ(τ) = Σ_{P ⊢ I(σ)} ∏_{i∈P} F(i) · η″_{σ^P}(τ) for every τ ⊢ r.
    pub fn verify_triangular_identity(&self, sigma: &Partition, r: u32) -> Result<bool> {
        odd_lift(sigma, r)?;
        let mut rhs: Option<LinearForm<T>> = None;
        let mut etas: HashMap<Partition, LinearForm<T>> = HashMap::new();
        let mut err = None;
        visit_set_partitions(sigma.len(), &mut |labels, count| {
            if err.is_some() {
                return;
            }
            let blocks: Vec<Vec<usize>> =
                (0..count).map(|b| (0..labels.len()).filter(|&i| labels[i] == b).collect()).collect();
            let weight = blocks.iter().fold(T::one(), |acc, b| {
                acc * self.block_factor(sigma.parts(), b).expect("nonempty block").value
            });
            let merged = Partition::from_nonneg(
                blocks.iter().map(|b| b.iter().map(|&i| sigma.parts()[i]).sum::<u32>()),
            );
            let eta = match etas.get(&merged) {
                Some(e) => e.clone(),
                None => match self.eta_dprime(&merged, r) {
                    Ok(e) => {
                        etas.insert(merged, e.clone());
                        e
                    }
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                },
            };
            let term = eta.scaled(&weight);
            rhs = Some(match rhs.take() {
                None => term,
                Some(acc) => {
                    let values = acc.values.iter().zip(&term.values).map(|(a, b)| a.clone() + b.clone()).collect();
                    LinearForm { basis: acc.basis, values }
                }
            });
        });
        if let Some(e) = err {
            return Err(e);
        }
        let rhs = rhs.expect("at least one set partition");
        Ok(rhs
            .basis
            .partitions()
            .iter()
            .all(|tau| self.mu_dprime(sigma, tau) == rhs.at(tau)))
    }
}

/// Parts of `parts` at positions mapped to `j`.
fn preimage_parts(parts: &[u32], map: &[usize], j: usize) -> Vec<u32> {
    map.iter().zip(parts).filter(|(&t, _)| t == j).map(|(_, &p)| p).collect()
}

/// (τ^P, (−1)^{ℓ(τ)+|P|}) for every set partition P of I(τ).
fn signed_merges(tau: &Partition) -> Vec<(Partition, i64)> {
    let mut out = Vec::new();
    visit_set_partitions(tau.len(), &mut |labels, count| {
        let mut sums = vec![0u32; count];
        for (i, &b) in labels.iter().enumerate() {
            sums[b] += tau.parts()[i];
        }
        let sign = if (tau.len() + count).is_multiple_of(2) { 1 } else { -1 };
        out.push((Partition::from_nonneg(sums), sign));
    });
    out
}
