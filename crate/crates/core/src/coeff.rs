use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Coefficient scalar for polynomials and matrix representations.
///
/// Two implementations are used: `f64` for everything numeric, and
/// `BigRational` for the exact combinatorial identities (Tetris, fold
/// round-trips) where float rounding would mask an error.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    fn from_u128(v: u128) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Magnitude as f64, for error reporting and tolerance scaling.
    fn abs_f64(&self) -> f64;
}

impl Coeff for f64 {
    fn from_u128(v: u128) -> Self {
        v as f64
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
}

impl Coeff for BigRational {
    fn from_u128(v: u128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn abs_f64(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}
