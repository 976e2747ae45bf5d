//! Scalar abstraction for probability arithmetic.
//!
//! The closed-form output-error expressions and the weight-enumerator
//! polynomials are evaluated through [`Scalar`], so the same code runs in
//! `f32`/`f64` for sweeps and in exact rationals for equivalence checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num};

/// A field-like number type usable for probability polynomials.
pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// `self^exp` by repeated squaring.
    fn powu(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for BigRational {}
impl Scalar for Ratio<i64> {}

/// Exact rational `num/den`.
pub fn exact(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `1 - p`.
pub fn complement<T: Scalar>(p: &T) -> T {
    T::one() - p.clone()
}

/// Combine two independent flip probabilities into the probability that an
/// odd number of them fire.
pub fn xor_combine<T: Scalar>(a: &T, b: &T) -> T {
    let two = T::one() + T::one();
    a.clone() + b.clone() - two * a.clone() * b.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn powu_matches_repeated_product() {
        let x = exact(3, 7);
        let mut acc = BigRational::one();
        for k in 0..12 {
            assert_eq!(x.powu(k), acc);
            acc *= x.clone();
        }
        assert!((2.0f64.powu(10) - 1024.0).abs() < 1e-12);
    }

    #[test]
    fn xor_combine_is_symmetric_and_exact() {
        let a = exact(1, 10);
        let b = exact(1, 5);
        assert_eq!(xor_combine(&a, &b), exact(13, 50));
        assert_eq!(xor_combine(&a, &b), xor_combine(&b, &a));
        assert_eq!(xor_combine(&0.0f64, &0.0), 0.0);
    }
}
