//! Scalar abstraction shared by the floating-point evaluators and the exact
//! rational oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;
use std::ops::Neg;

pub trait Field: Clone + PartialEq + Num + Neg<Output = Self> {
    fn int(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn powu(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Field for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }

    fn powu(&self, k: u32) -> Self {
        self.powi(k as i32)
    }
}

impl Field for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Evaluates `c[0] + c[1] x + c[2] x^2 + ...` by Horner's rule.
pub fn horner<T: Field>(coeffs: &[T], x: &T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Converts a finite `f64` into the exact rational it represents.
pub fn exact_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}
