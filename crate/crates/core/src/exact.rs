//! Factorial-type counting functions over an exact scalar.

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::ExactScalar;
use crate::Rational;

/// Growable memo tables for `n!` and `n!!`.
pub struct FactorialTable<T> {
    fact: RwLock<Vec<T>>,
    dfact: RwLock<Vec<T>>,
}

impl<T: ExactScalar> Default for FactorialTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ExactScalar> FactorialTable<T> {
    pub fn new() -> Self {
        FactorialTable {
            fact: RwLock::new(vec![T::one()]),
            // 0!! = 1, 1!! = 1
            dfact: RwLock::new(vec![T::one(), T::one()]),
        }
    }

    pub fn factorial(&self, n: u32) -> T {
        let n = n as usize;
        if let Some(v) = self.fact.read().unwrap().get(n) {
            return v.clone();
        }
        let mut table = self.fact.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            let next = table[k - 1].clone() * T::from_nat(k as u64);
            table.push(next);
        }
        table[n].clone()
    }

    /// `n!!`, with `(-1)!! = 1`.
    pub fn double_factorial(&self, n: i64) -> Result<T> {
        if n == -1 {
            return Ok(T::one());
        }
        if n < 0 {
            return Err(Error::NegativeDoubleFactorial(n));
        }
        let n = n as usize;
        if let Some(v) = self.dfact.read().unwrap().get(n) {
            return Ok(v.clone());
        }
        let mut table = self.dfact.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            let next = table[k - 2].clone() * T::from_nat(k as u64);
            table.push(next);
        }
        Ok(table[n].clone())
    }

    /// `(2k+1)!!` for a nonnegative `k`.
    pub fn odd_double_factorial(&self, k: u32) -> T {
        self.double_factorial(2 * k as i64 + 1).expect("nonnegative argument")
    }

    /// `top! / ∏ parts!`; the parts must sum to `top`.
    pub fn multinomial(&self, top: u32, parts: &[u32]) -> Result<T> {
        let sum: u64 = parts.iter().map(|&p| p as u64).sum();
        if sum != top as u64 {
            return Err(Error::MultinomialMismatch { top: top as u64, sum });
        }
        let denom = parts.iter().fold(T::one(), |acc, &p| acc * self.factorial(p));
        Ok(self.factorial(top) / denom)
    }

    /// `(2|π| + ℓ(π))! / ∏ (2π_i + 1)!!`, the number of interleavings of
    /// comb-like orders, one comb of `2π_i + 1` symbols per part.
    pub fn comb_count(&self, pi: &Partition) -> T {
        let top = 2 * pi.size() + pi.len() as u32;
        let denom = pi.parts().iter().fold(T::one(), |acc, &p| acc * self.odd_double_factorial(p));
        self.factorial(top) / denom
    }
}

fn table() -> &'static FactorialTable<Rational> {
    static TABLE: OnceLock<FactorialTable<Rational>> = OnceLock::new();
    TABLE.get_or_init(FactorialTable::new)
}

pub fn factorial(n: u32) -> Rational {
    table().factorial(n)
}

pub fn double_factorial(n: i64) -> Result<Rational> {
    table().double_factorial(n)
}

pub fn multinomial(top: u32, parts: &[u32]) -> Result<Rational> {
    table().multinomial(top, parts)
}

pub fn comb_count(pi: &Partition) -> Rational {
    table().comb_count(pi)
}

/// Number of partitions of `n` with no part of size 5, 8, 11, … (sizes
/// congruent to 2 mod 3 and at least 5). Zero for negative `n`.
pub fn fz_count(n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    let n = n as usize;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in (1..=n).filter(|&p| !(p >= 5 && p % 3 == 2)) {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;
    use crate::{part, SmallRational};

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), r(1));
        assert_eq!(factorial(5), r(120));
        assert_eq!(double_factorial(7).unwrap(), r(105));
        assert_eq!(double_factorial(8).unwrap(), r(384));
        assert_eq!(double_factorial(0).unwrap(), r(1));
        assert_eq!(double_factorial(-1).unwrap(), r(1));
        assert_eq!(double_factorial(-3), Err(Error::NegativeDoubleFactorial(-3)));
    }

    #[test]
    fn factorial_past_u64() {
        // 25! = 15511210043330985984000000
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(3, &[1, 2]).unwrap(), r(3));
        assert_eq!(multinomial(5, &[2, 3]).unwrap(), r(10));
        assert_eq!(multinomial(6, &[2, 2, 2]).unwrap(), r(90));
        assert_eq!(multinomial(6, &[2, 0, 2, 2, 0]).unwrap(), r(90));
        assert_eq!(multinomial(6, &[2, 2, 2]).unwrap(), multinomial(6, &[2, 2, 2]).unwrap());
        assert!(multinomial(5, &[2, 2]).is_err());
    }

    #[test]
    fn comb_counts() {
        assert_eq!(comb_count(&Partition::empty()), r(1));
        assert_eq!(comb_count(&part![1]), r(2));
        assert_eq!(comb_count(&part![1, 1]), r(80));
        // single comb: (2m+1)!/(2m+1)!!
        for m in 0..6 {
            assert_eq!(comb_count(&Partition::from_nonneg([m])), factorial(2 * m + 1) / double_factorial(2 * m as i64 + 1).unwrap());
        }
    }

    #[test]
    fn comb_counts_are_integers() {
        for n in 0..=8 {
            for pi in enumerate_partitions(n, None) {
                assert!(comb_count(&pi).is_integer(), "{pi}");
            }
        }
    }

    #[test]
    fn fz_counts() {
        assert_eq!(fz_count(-1), 0);
        assert_eq!(fz_count(0), 1);
        assert_eq!(fz_count(4), 5);
        assert_eq!(fz_count(5), 6);
        // exclusion list read literally: 2 stays allowed
        assert_eq!(fz_count(2), 2);
        for n in 0..=14u32 {
            let brute = enumerate_partitions(n, None)
                .into_iter()
                .filter(|p| p.parts().iter().all(|&q| !(q >= 5 && q % 3 == 2)))
                .count() as u64;
            assert_eq!(fz_count(n as i64), brute);
        }
    }

    #[test]
    fn small_scalar_table_agrees() {
        let t = FactorialTable::<SmallRational>::new();
        for n in 0..20 {
            assert_eq!(t.factorial(n).to_string(), factorial(n).to_string());
        }
        assert_eq!(t.comb_count(&part![2, 1]).to_string(), comb_count(&part![2, 1]).to_string());
    }
}
