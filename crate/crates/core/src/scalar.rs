use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact scalar field element with a notion of integrality.
///
/// Implemented for `Ratio<I>` over any signed integer type. Rank computations
/// use the integral structure to run fraction-free elimination.
pub trait ExactScalar:
    Clone + Debug + Display + PartialEq + Num + Signed + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    fn from_nat(n: u64) -> Self;

    /// Denominator in lowest terms, as a scalar.
    fn denominator(&self) -> Self;

    fn is_integral(&self) -> bool;

    /// Least common multiple of two integral values.
    fn lcm(&self, other: &Self) -> Self;
}

impl<I> ExactScalar for Ratio<I>
where
    I: Clone + Integer + Signed + FromPrimitive + Debug + Display + Send + Sync + 'static,
{
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(I::from_i64(n).expect("integer out of range for scalar type"))
    }

    fn from_nat(n: u64) -> Self {
        Ratio::from_integer(I::from_u64(n).expect("integer out of range for scalar type"))
    }

    fn denominator(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn lcm(&self, other: &Self) -> Self {
        debug_assert!(self.is_integer() && other.is_integer());
        Ratio::from_integer(self.numer().lcm(other.numer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, SmallRational};

    #[test]
    fn exact_beyond_u64() {
        // 2^64 + 1/3 - 2^64 == 1/3
        let big = Rational::from_nat(u64::MAX) + Rational::from_nat(1);
        let third = Rational::from_nat(1) / Rational::from_nat(3);
        let sum = big.clone() + third.clone();
        assert_eq!(sum - big, third);
        assert_eq!(third.denominator(), Rational::from_nat(3));
    }

    #[test]
    fn lowest_terms_and_sign() {
        let x = SmallRational::from_int(6) / SmallRational::from_int(-4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(x.denominator(), SmallRational::from_int(2));
        assert!(!x.is_integral());
        assert_eq!(
            SmallRational::from_int(4).lcm(&SmallRational::from_int(6)),
            SmallRational::from_int(12)
        );
    }
}
