use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed};

/// Exact coefficient field. Every operation in the crate is exact, so only
/// rational-like fields qualify; floating point types deliberately do not.
pub trait Scalar:
    Clone + Ord + Hash + Num + Signed + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_frac(num: i64, den: i64) -> Self;
    /// Parses "a" or "a/b" with optional sign.
    fn parse(text: &str) -> Option<Self>;
    fn is_integer_value(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn parse(text: &str) -> Option<Self> {
        BigRational::from_str_radix(text.trim(), 10).ok()
    }
    fn is_integer_value(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for Rational64 {
    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn parse(text: &str) -> Option<Self> {
        Rational64::from_str_radix(text.trim(), 10).ok()
    }
    fn is_integer_value(&self) -> bool {
        self.is_integer()
    }
}
