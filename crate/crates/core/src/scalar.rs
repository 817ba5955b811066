//! The two value backends: exact rationals and compensated `f64`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{FnTable, NeumaierSum, TableValues};

/// Running sum in the backend's own arithmetic.
pub trait Accumulator<T>: Default {
    fn push(&mut self, value: &T);
    fn total(&self) -> T;
}

/// Arithmetic shared by the exact and real backends so that every sum is
/// written once.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Acc: Accumulator<Self>;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_u128(v: u128) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    /// `n^e` for an integer exponent, negative exponents included.
    fn int_pow(n: u64, e: i32) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// The table's storage if it uses this backend (index 0 included).
    fn slice(table: &FnTable) -> Option<&[Self]>;
    fn into_table(label: String, values: Vec<Self>) -> FnTable;
}

impl Accumulator<f64> for NeumaierSum {
    fn push(&mut self, value: &f64) {
        *self += *value;
    }

    fn total(&self) -> f64 {
        self.sum()
    }
}

impl Scalar for f64 {
    type Acc = NeumaierSum;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_u128(v: u128) -> Self {
        v as f64
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(v: &BigRational) -> Self {
        rational_to_f64(v)
    }
    fn int_pow(n: u64, e: i32) -> Self {
        (n as f64).powi(e)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn slice(table: &FnTable) -> Option<&[Self]> {
        match table.values() {
            TableValues::Real(v) => Some(v),
            TableValues::Exact(_) => None,
        }
    }
    fn into_table(label: String, values: Vec<Self>) -> FnTable {
        FnTable::from_real(label, values).expect("table has at least one entry")
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExactSum(Option<BigRational>);

impl Accumulator<BigRational> for ExactSum {
    fn push(&mut self, value: &BigRational) {
        match &mut self.0 {
            Some(acc) => *acc += value,
            None => self.0 = Some(value.clone()),
        }
    }

    fn total(&self) -> BigRational {
        self.0.clone().unwrap_or_else(<BigRational as Zero>::zero)
    }
}

impl Scalar for BigRational {
    type Acc = ExactSum;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_u128(v: u128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
    fn int_pow(n: u64, e: i32) -> Self {
        let p = BigInt::from(n).pow(e.unsigned_abs());
        if e >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn slice(table: &FnTable) -> Option<&[Self]> {
        table.exact()
    }
    fn into_table(label: String, values: Vec<Self>) -> FnTable {
        FnTable::from_exact(label, values).expect("table has at least one entry")
    }
}

/// Correctly scaled conversion; `BigRational::to_f64` overflows when numerator
/// and denominator are both beyond the `f64` range.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    if let Some(f) = ToPrimitive::to_f64(v) {
        if f.is_finite() {
            return f;
        }
    }
    let n = v.numer();
    let d = v.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    // Bring the quotient into [2^52, 2^54) and rescale.
    let k = 53 - shift;
    let (num, den) = if k >= 0 {
        (n.abs() << (k as usize), d.clone())
    } else {
        (n.abs(), d << ((-k) as usize))
    };
    let q = (num / den).to_f64().unwrap_or(f64::NAN);
    let mag = q * 2f64.powi(-(k as i32));
    if n.is_negative() {
        -mag
    } else {
        mag
    }
}

/// A single number produced by either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Real(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => rational_to_f64(q),
            Value::Real(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Real(_) => None,
        }
    }
}

/// Exact values print as `p/q` (always with a denominator), reals with 17
/// significant digits.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Real(v) => write!(f, "{v:.16e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rational_converts() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(big.clone() * BigInt::from(3), big * BigInt::from(7));
        assert!((rational_to_f64(&q) - 3.0 / 7.0).abs() < 1e-16);
        let q = BigRational::new(-BigInt::from(10).pow(330), BigInt::from(10).pow(329));
        assert!((rational_to_f64(&q) + 10.0).abs() < 1e-14);
    }

    #[test]
    fn exact_display_always_has_denominator() {
        let v = Value::Exact(BigRational::from_integer(BigInt::from(7)));
        assert_eq!(v.to_string(), "7/1");
        let v = Value::Exact(BigRational::new(BigInt::from(9), BigInt::from(4)));
        assert_eq!(v.to_string(), "9/4");
    }
}
