//! Scalar backends: exact rationals and binary64 floats.
//!
//! The exact layer (linear programming, vertex enumeration, gap certification)
//! requires [`Rational`]; sweeps and the SDP use `f64`. Code that works for
//! both is generic over [`Scalar`].

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision fraction. `num_rational` keeps every value in
/// reduced canonical form, so coefficient growth is controlled by GCD
/// reduction on each arithmetic operation.
pub type Rational = num_rational::BigRational;

/// Tolerance used by the float backend wherever the rational backend compares
/// exactly (table normalization, hypothesis checks, ...).
pub const FLOAT_TOL: f64 = 1e-12;

/// Denominator cap when snapping float data to rationals for the exact LP
/// layer.
pub const LP_DENOMINATOR_BOUND: u64 = 10_000_000;

/// A probability-table scalar: either [`Rational`] (exact) or `f64`.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + Sum<Self>
{
    /// True when arithmetic carries no rounding error.
    const EXACT: bool;

    /// Name used in the `"scalar"` field of JSON files.
    const BACKEND_NAME: &'static str;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Backend equality: exact for rationals, within [`FLOAT_TOL`] for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Encode one probability entry for the JSON file format.
    fn encode_json(&self) -> serde_json::Value;

    /// Decode one probability entry from the JSON file format.
    fn decode_json(value: &serde_json::Value) -> Result<Self, String>;

    /// Convert into a rational for the exact LP/polytope layer. Exact for
    /// rationals; floats are snapped to the best approximation with
    /// denominator at most [`LP_DENOMINATOR_BOUND`], which perturbs each
    /// coefficient by less than `1e-14` and keeps pivot arithmetic fast.
    fn to_lp_rational(&self) -> Rational;

    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const BACKEND_NAME: &'static str = "rational";

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }

    fn encode_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn decode_json(value: &serde_json::Value) -> Result<Self, String> {
        let text = value
            .as_str()
            .ok_or_else(|| "expected \"num/den\" string".to_string())?;
        parse_rational(text)
    }

    fn to_lp_rational(&self) -> Rational {
        self.clone()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const BACKEND_NAME: &'static str = "float";

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOL
    }

    fn encode_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }

    fn decode_json(value: &serde_json::Value) -> Result<Self, String> {
        value
            .as_f64()
            .ok_or_else(|| "expected a JSON number".to_string())
    }

    fn to_lp_rational(&self) -> Rational {
        approximate_f64(*self, LP_DENOMINATOR_BOUND)
            .unwrap_or_else(|| panic!("non-finite float {self} in exact-layer data"))
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }
}

/// Parse `"num/den"` (or a plain integer) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let mut parts = text.splitn(2, '/');
    let numer = parts
        .next()
        .unwrap()
        .trim()
        .parse::<BigInt>()
        .map_err(|e| format!("bad numerator in {text:?}: {e}"))?;
    let denom = match parts.next() {
        Some(d) => d
            .trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad denominator in {text:?}: {e}"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(numer, denom))
}

/// Exact rational value of a finite float (every finite `f64` is dyadic).
pub fn rational_from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Best rational approximation of `value` with denominator at most `max_den`,
/// via the continued-fraction expansion. Used to keep LP coefficients small
/// when an exact solver is cross-checking float-backed data.
pub fn approximate_f64(value: f64, max_den: u64) -> Option<Rational> {
    let exact = rational_from_f64(value)?;
    if exact.denom() <= &BigInt::from(max_den) {
        return Some(exact);
    }
    let limit = BigInt::from(max_den);
    // Stern-Brocot / continued fraction convergents of |value|.
    let negative = exact.is_negative();
    let mut x = exact.abs();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = x.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    let approx = Rational::new(p1, q1);
    Some(if negative { -approx } else { approx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_encode_round_trip() {
        let r = parse_rational("9/32").unwrap();
        assert_eq!(r, Rational::from_ratio(9, 32));
        assert_eq!(r.encode_json(), serde_json::json!("9/32"));
        assert_eq!(parse_rational("-3").unwrap(), Rational::from_ratio(-3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn float_backend_tolerance() {
        assert!(0.25f64.close_to(&(0.25 + 1e-13)));
        assert!(!0.25f64.close_to(&(0.25 + 1e-9)));
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        let r = rational_from_f64(0.375).unwrap();
        assert_eq!(r, Rational::from_ratio(3, 8));
    }

    #[test]
    fn bounded_denominator_approximation() {
        let r = approximate_f64(0.38, 1_000_000).unwrap();
        assert_eq!(r, Rational::from_ratio(19, 50));
        let pi = approximate_f64(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, Rational::from_ratio(355, 113));
        assert!((approximate_f64(-0.2, 100).unwrap() + Rational::from_ratio(1, 5)).is_zero());
    }
}
