//! Exact ranks of pairing matrices and the theorem-level verifiers.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::fz_count;
use crate::partitions::{enumerate_partitions, Partition, PartitionBasis};
use crate::scalar::ExactScalar;
use crate::socle::{Evaluator, ModuliContext};
use crate::strata::{enumerate_boundary_generators, enumerate_pure_housing_partitions, is_housing_partition, ReducedBoundaryData};

/// What a row of a pairing matrix stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum RowLabel {
    /// Pure boundary stratum with the given housing data.
    Pure(Partition),
    /// Decorated boundary generator.
    Boundary(ReducedBoundaryData),
    /// κ-monomial κ_τ.
    Kappa(Partition),
    /// Row σ of the λ_gλ_{g−1} matrix.
    Smooth(Partition),
    /// The normalized form `M_λ`.
    M(Partition),
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Pure(p) => write!(f, "pure{p}"),
            RowLabel::Boundary(b) => write!(f, "{b}"),
            RowLabel::Kappa(p) => write!(f, "kappa{p}"),
            RowLabel::Smooth(p) => write!(f, "smooth{p}"),
            RowLabel::M(p) => write!(f, "M{p}"),
        }
    }
}

/// A labeled matrix whose columns are the partitions of a fixed degree.
#[derive(Clone, Debug)]
pub struct PairingMatrix<T> {
    pub columns: Arc<PartitionBasis>,
    pub labels: Vec<RowLabel>,
    pub rows: Vec<Vec<T>>,
}

impl<T: ExactScalar> PairingMatrix<T> {
    pub fn new(columns: Arc<PartitionBasis>) -> Self {
        PairingMatrix { columns, labels: Vec::new(), rows: Vec::new() }
    }

    pub fn push(&mut self, label: RowLabel, row: Vec<T>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension(format!("row of length {} against {} columns", row.len(), self.columns.len())));
        }
        self.labels.push(label);
        self.rows.push(row);
        Ok(())
    }

    pub fn extend(&mut self, other: PairingMatrix<T>) -> Result<()> {
        if other.columns.degree() != self.columns.degree() {
            return Err(Error::Dimension("column degrees differ".into()));
        }
        self.labels.extend(other.labels);
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        exact_rank(&self.rows)
    }
}

/// Rank over the rationals. Each row is first scaled to integral entries,
/// then reduced by fraction-free (Bareiss) elimination with the first nonzero
/// entry of each column as pivot.
pub fn exact_rank<T: ExactScalar>(rows: &[Vec<T>]) -> usize {
    let mut a: Vec<Vec<T>> = rows
        .iter()
        .map(|row| {
            let scale = row.iter().fold(T::one(), |acc, x| acc.lcm(&x.denominator()));
            row.iter().map(|x| x.clone() * scale.clone()).collect()
        })
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(p) = (rank..n_rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..n_cols {
                let v = (row[j].clone() * pivot.clone() - factor.clone() * pivot_row[j].clone()) / prev.clone();
                row[j] = v;
            }
            row[col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// `|P(d, 2g−3−d)|` plus the partitions of `d` of length exactly `2g−2−d`
/// with at least two even parts.
pub fn housing_rank_formula(g: u32, d: u32) -> Result<usize> {
    let ctx = ModuliContext::with_kappa_degree(g, d)?;
    let short = enumerate_partitions(d, Some(ctx.r as usize)).len();
    let exact_len = enumerate_partitions(d, None)
        .into_iter()
        .filter(|p| p.len() == ctx.r as usize + 1 && p.even_part_count() >= 2)
        .count();
    Ok(short + exact_len)
}

/// The three numbers compared by the Housing Theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HousingReport {
    pub g: u32,
    pub d: u32,
    pub pure_rows: usize,
    pub full_rows: usize,
    pub rank_pure: usize,
    pub rank_full: usize,
    pub formula: usize,
    pub ok: bool,
}

/// The three ranks of the Rank Theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub g: u32,
    pub r: u32,
    pub d: u32,
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
    pub ok: bool,
}

fn require_boundary(g: u32, d: u32) -> Result<ModuliContext> {
    let ctx = ModuliContext::with_kappa_degree(g, d)?;
    if ctx.r == 0 {
        return Err(Error::Moduli(format!("no boundary classes of degree 0 (g={g}, d={d})")));
    }
    Ok(ctx)
}

impl<T: ExactScalar> Evaluator<T> {
    /// Rows of the pure strata with housing data from the tree enumeration.
    /// Empty when `d = 2g − 3`: the only tree there has no edge.
    pub fn pure_matrix(&self, g: u32, d: u32) -> Result<PairingMatrix<T>> {
        if ModuliContext::with_kappa_degree(g, d)?.r == 0 {
            return Ok(PairingMatrix::new(self.partition_basis(d)));
        }
        let housing: Vec<Partition> = enumerate_pure_housing_partitions(g, d)?.into_iter().collect();
        self.rows_from(d, housing.into_iter().map(|p| (RowLabel::Pure(p.clone()), ReducedBoundaryData::pure(&p))).collect())
    }

    /// Rows of every decorated boundary generator.
    pub fn full_matrix(&self, g: u32, d: u32) -> Result<PairingMatrix<T>> {
        ModuliContext::with_kappa_degree(g, d)?;
        let gens = enumerate_boundary_generators(self, g, d)?;
        self.rows_from(d, gens.into_iter().map(|b| (RowLabel::Boundary(b.clone()), b)).collect())
    }

    /// Rows `M_λ` for the housing partitions λ ⊢ d.
    pub fn housing_m_matrix(&self, g: u32, d: u32) -> Result<PairingMatrix<T>> {
        require_boundary(g, d)?;
        let mut m = PairingMatrix::new(self.partition_basis(d));
        for lambda in enumerate_partitions(d, None) {
            if is_housing_partition(&lambda, g, d)? {
                let row = self.m_form(&lambda).into_values();
                m.push(RowLabel::M(lambda), row)?;
            }
        }
        Ok(m)
    }

    /// κ-monomial rows π ↦ ϑ(π ⊔ τ) for τ ⊢ r, columns P(d).
    pub fn kappa_matrix(&self, r: u32, d: u32) -> Result<PairingMatrix<T>> {
        let mut m = PairingMatrix::new(self.partition_basis(d));
        for tau in enumerate_partitions(r, None) {
            let row = self.kappa_form(&tau, d).into_values();
            m.push(RowLabel::Kappa(tau), row)?;
        }
        Ok(m)
    }

    /// `[μ_σ(τ)]` with σ ⊢ g−2−r as rows and τ ⊢ r as columns.
    pub fn smooth_matrix(&self, g: u32, r: u32) -> Result<PairingMatrix<T>> {
        let ctx = ModuliContext::with_smooth_degree(g, r)?;
        let e = ctx.smooth_complement().expect("r <= g-2");
        let columns = Arc::new(PartitionBasis::new(r));
        let mut m = PairingMatrix::new(columns.clone());
        for sigma in enumerate_partitions(e, None) {
            let row = columns.partitions().iter().map(|tau| self.mu(&sigma, tau)).collect();
            m.push(RowLabel::Smooth(sigma), row)?;
        }
        Ok(m)
    }

    fn rows_from(&self, d: u32, items: Vec<(RowLabel, ReducedBoundaryData)>) -> Result<PairingMatrix<T>> {
        let rows: Vec<Vec<T>> = items
            .par_iter()
            .map(|(_, data)| self.v_form(data, d).map(|f| f.into_values()))
            .collect::<Result<_>>()?;
        let mut m = PairingMatrix::new(self.partition_basis(d));
        for ((label, _), row) in items.into_iter().zip(rows) {
            m.push(label, row)?;
        }
        Ok(m)
    }

    /// At `d = 2g − 3` there are no boundary classes and every number is 0.
    pub fn verify_housing_theorem(&self, g: u32, d: u32) -> Result<HousingReport> {
        let pure = self.pure_matrix(g, d)?;
        let full = self.full_matrix(g, d)?;
        let formula = housing_rank_formula(g, d)?;
        let (rank_pure, rank_full) = (pure.rank(), full.rank());
        Ok(HousingReport {
            g,
            d,
            pure_rows: pure.row_count(),
            full_rows: full.row_count(),
            rank_pure,
            rank_full,
            formula,
            ok: rank_pure == formula && rank_full == formula,
        })
    }

    pub fn verify_rank_theorem(&self, g: u32, r: u32) -> Result<RankReport> {
        let ctx = ModuliContext::with_smooth_degree(g, r)?;
        let full = self.full_matrix(g, ctx.d)?;
        let r2 = full.rank();
        let mut stacked = full;
        stacked.extend(self.kappa_matrix(r, ctx.d)?)?;
        let r1 = stacked.rank();
        let r3 = self.smooth_matrix(g, r)?.rank();
        Ok(RankReport { g, r, d: ctx.d, r1, r2, r3, ok: r1 == r2 + r3 })
    }
}

/// One degree of the conjectural Betti table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRow {
    pub e: u32,
    pub d: u32,
    /// `|P(d, 2g−2−d)|`, the rank in genus zero with 2g markings.
    pub genus_zero_rank: usize,
    pub gamma_conjectural: u64,
    pub delta_conjectural: u64,
    pub kernel_rank_conjectural: i64,
    pub betti_conjectural: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub g: u32,
    pub status: String,
    pub rows: Vec<BettiRow>,
}

/// Degrees `d = g−1+e`, `0 ≤ e ≤ g−2`, with the predicted γ_e from the FZ
/// count and δ_d = 0. Everything except the genus-zero rank is conjectural.
pub fn betti_report(g: u32) -> Result<BettiReport> {
    if g < 2 {
        return Err(Error::Moduli(format!("genus {g} < 2")));
    }
    let rows = (0..=g - 2)
        .map(|e| {
            let d = g - 1 + e;
            let genus_zero_rank = enumerate_partitions(d, Some((2 * g - 2 - d) as usize)).len();
            let arg = if 2 * e <= g - 2 { 3 * e as i64 - g as i64 - 1 } else { 3 * (g - 2 - e) as i64 - g as i64 - 1 };
            let gamma = fz_count(arg);
            let delta = 0u64;
            let kernel = gamma as i64 - delta as i64;
            BettiRow {
                e,
                d,
                genus_zero_rank,
                gamma_conjectural: gamma,
                delta_conjectural: delta,
                kernel_rank_conjectural: kernel,
                betti_conjectural: genus_zero_rank as i64 - kernel,
            }
        })
        .collect();
    Ok(BettiReport { g, status: "CONJECTURAL".into(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{part, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rank_examples() {
        let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| q((i == j) as i64)).collect()).collect();
        assert_eq!(exact_rank(&id), 4);
        let u = [3, -1, 4, 1, 5];
        let v = [2, 7, -1, 8, 2];
        let outer: Vec<Vec<Rational>> = u.iter().map(|&a| v.iter().map(|&b| q(a * b)).collect()).collect();
        assert_eq!(exact_rank(&outer), 1);
        assert_eq!(exact_rank(&[vec![q(1), q(5)], vec![q(0), q(2)]]), 2);
        assert_eq!(exact_rank::<Rational>(&[]), 0);
        let frac = vec![vec![Rational::new(1.into(), 2.into()), Rational::new(1.into(), 3.into())], vec![q(3), q(2)]];
        assert_eq!(exact_rank(&frac), 1);
    }

    #[test]
    fn example_matrix_from_evaluations() {
        let ev = Evaluator::<Rational>::new();
        let basis = ev.partition_basis(2);
        let kappa: Vec<Rational> = basis.partitions().iter().map(|p| ev.theta(p, &part![])).collect();
        let v = ev.v_form(&ReducedBoundaryData::pure(&part![1, 1]), 2).unwrap().into_values();
        assert_eq!(kappa, vec![q(1), q(5)]);
        assert_eq!(v, vec![q(0), q(2)]);
        assert_eq!(exact_rank(&[kappa, v]), 2);
    }

    #[test]
    fn formula_examples() {
        assert_eq!(housing_rank_formula(3, 1).unwrap(), 1);
        assert_eq!(housing_rank_formula(4, 3).unwrap(), 2);
        assert_eq!(housing_rank_formula(5, 4).unwrap(), 4);
        assert!(housing_rank_formula(3, 4).is_err());
    }

    #[test]
    fn housing_examples() {
        let ev = Evaluator::<Rational>::new();
        for (g, d, n) in [(3, 1, 1), (4, 3, 2), (5, 4, 4), (3, 3, 0)] {
            let rep = ev.verify_housing_theorem(g, d).unwrap();
            assert_eq!((rep.rank_pure, rep.rank_full, rep.formula, rep.ok), (n, n, n, true), "{rep:?}");
        }
    }

    #[test]
    fn rank_theorem_examples() {
        let ev = Evaluator::<Rational>::new();
        let rep = ev.verify_rank_theorem(2, 0).unwrap();
        assert_eq!((rep.r3, rep.ok), (1, true));
        for (g, r) in [(3, 1), (4, 1)] {
            assert!(ev.verify_rank_theorem(g, r).unwrap().ok);
        }
    }

    #[test]
    fn betti_examples() {
        let rep = betti_report(3).unwrap();
        assert_eq!(rep.status, "CONJECTURAL");
        assert_eq!(rep.rows.len(), 2);
        assert_eq!((rep.rows[0].d, rep.rows[0].genus_zero_rank), (2, 2));
        assert_eq!(rep.rows[0].gamma_conjectural, 0);
    }
}
