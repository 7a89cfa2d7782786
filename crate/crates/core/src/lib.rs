//! Exact evaluation of the λ_g and λ_gλ_{g−1} socle pairings on tautological
//! rings of moduli spaces of curves, carried out at the level of partitions.
//!
//! The numeric kernels are generic over [`ExactScalar`]; the crate-level
//! aliases pick the arbitrary-precision rational type that every
//! theorem-level check uses.
//!
//! Module map:
//!
//! * [`partitions`]: partitions, set partitions, refining functions.
//! * [`exact`]: factorials, multinomials, comb counts, the FZ count `a(n)`.
//! * [`socle`]: normalized socle evaluations ϑ, μ, μ′, μ″.
//! * [`strata`]: stable trees, housing data, reduced boundary generators.
//! * [`coeffs`]: the linear forms `M_λ` and `v`, expansion coefficients,
//!   the Φ transform and the η family.
//! * [`oracles`]: brute-force permutation counts used as independent checks.
//! * [`ranks`]: exact rank and the theorem verifiers.

pub mod coeffs;
pub mod error;
pub mod exact;
pub mod oracles;
pub mod partitions;
pub mod ranks;
pub mod scalar;
pub mod socle;
pub mod strata;

pub use error::{Error, Result};
pub use partitions::{Partition, PartitionBasis, RefiningFunction, SetPartition};
pub use scalar::ExactScalar;
pub use socle::{Evaluator, ModuliContext};

/// Arbitrary-precision rational used by every theorem check.
pub type Rational = num_rational::BigRational;

/// Fixed-width rational; fine for small instances, panics on overflow.
pub type SmallRational = num_rational::Ratio<i128>;

/// Evaluator over [`Rational`].
pub type RationalEvaluator = Evaluator<Rational>;
