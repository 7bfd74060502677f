//! Scalar fields for exact computation: the rationals and the Gaussian
//! rationals, behind a single [`ExactScalar`] trait so elimination code is
//! written once.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use serde_json::Value;

use super::ExactError;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = BigRational;

/// Gaussian rational `re + im·i` with exact rational parts.
pub type GaussRational = Complex<Rational>;

/// Floating-point counterpart of an exact scalar (`f64` or `Complex<f64>`),
/// used when handing exact data to the tomography layer.
pub trait FloatScalar:
    nalgebra::ComplexField<RealField = f64> + Copy + Send + Sync + 'static
{
    const IS_COMPLEX: bool;
    fn from_parts(re: f64, im: f64) -> Self;
    fn parts(self) -> (f64, f64);
}

impl FloatScalar for f64 {
    const IS_COMPLEX: bool = false;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn parts(self) -> (f64, f64) {
        (self, 0.0)
    }
}

impl FloatScalar for Complex<f64> {
    const IS_COMPLEX: bool = true;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }

    fn parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// A scalar from an exact field with decidable equality.
///
/// Implemented for [`Rational`] (the field ℚ) and [`GaussRational`]
/// (the field ℚ(i)). All elimination, rank and nullspace routines are
/// generic over this trait; exactness of the arithmetic is what makes
/// the certificates in this crate machine-checkable.
pub trait ExactScalar:
    Clone + PartialEq + Eq + Hash + Debug + Display + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// True for ℚ(i), false for ℚ.
    const IS_COMPLEX: bool;

    /// Floating-point image of this field.
    type Float: FloatScalar;

    fn from_rational(r: Rational) -> Self;
    fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// Builds `re + im·i`. Panics over ℚ when `im ≠ 0`.
    fn from_re_im(re: Rational, im: Rational) -> Self;

    fn conj(&self) -> Self;
    fn re(&self) -> Rational;
    fn im(&self) -> Rational;

    /// `self · conj(self)`, always a (nonnegative) rational.
    fn abs_sq(&self) -> Rational {
        let p = self.clone() * self.conj();
        p.re()
    }

    fn to_float(&self) -> Self::Float;

    /// Wire form used by every JSON interface of this crate: a rational is
    /// the string `"p"` or `"p/q"` (reduced, `q > 0`), a Gaussian rational
    /// is `{"re": "p/q", "im": "r/s"}`.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, ExactError>;
}

pub(crate) fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Parses the `"p"` / `"p/q"` text form. `Ratio::new` reduces and
/// normalizes the sign, so any nonzero denominator is accepted.
pub(crate) fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|e| ExactError::Parse(format!("bad rational {s:?}: {e}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|e| ExactError::Parse(format!("bad rational {s:?}: {e}")))?;
    if d.is_zero() {
        return Err(ExactError::Parse(format!("bad rational {s:?}: zero denominator")));
    }
    Ok(Rational::new(n, d))
}

pub(crate) fn rational_from_json(v: &Value) -> Result<Rational, ExactError> {
    let s = v
        .as_str()
        .ok_or_else(|| ExactError::Parse(format!("expected rational string, got {v}")))?;
    parse_rational(s)
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

impl ExactScalar for Rational {
    const IS_COMPLEX: bool = false;

    type Float = f64;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn from_re_im(re: Rational, im: Rational) -> Self {
        assert!(im.is_zero(), "nonzero imaginary part over the reals");
        re
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn re(&self) -> Rational {
        self.clone()
    }

    fn im(&self) -> Rational {
        Rational::zero()
    }

    fn to_float(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_json(&self) -> Value {
        rational_to_json(self)
    }

    fn from_json(v: &Value) -> Result<Self, ExactError> {
        rational_from_json(v)
    }
}

impl ExactScalar for GaussRational {
    const IS_COMPLEX: bool = true;

    type Float = Complex<f64>;

    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }

    fn from_re_im(re: Rational, im: Rational) -> Self {
        Complex::new(re, im)
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn re(&self) -> Rational {
        self.re.clone()
    }

    fn im(&self) -> Rational {
        self.im.clone()
    }

    fn to_float(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn to_json(&self) -> Value {
        serde_json::json!({
            "re": rational_to_json(&self.re),
            "im": rational_to_json(&self.im),
        })
    }

    fn from_json(v: &Value) -> Result<Self, ExactError> {
        let obj = v
            .as_object()
            .ok_or_else(|| ExactError::Parse(format!("expected {{re, im}} object, got {v}")))?;
        let re = obj
            .get("re")
            .ok_or_else(|| ExactError::Parse("missing \"re\"".into()))?;
        let im = obj
            .get("im")
            .ok_or_else(|| ExactError::Parse("missing \"im\"".into()))?;
        Ok(Complex::new(rational_from_json(re)?, rational_from_json(im)?))
    }
}

/// `p/q` as a rational, panicking on `q = 0`. Test and construction helper.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `re + im·i` with integer parts.
pub fn gauss_int(re: i64, im: i64) -> GaussRational {
    Complex::new(rat_int(re), rat_int(im))
}

/// The imaginary unit of ℚ(i).
pub fn gauss_i() -> GaussRational {
    Complex::new(Rational::zero(), Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_round_trip() {
        for r in [rat(1, 2), rat(-7, 3), rat_int(0), rat_int(42)] {
            let j = r.to_json();
            assert_eq!(Rational::from_json(&j).unwrap(), r);
        }
        // Canonical text form: reduced, positive denominator, no "/1".
        assert_eq!(rat(2, 4).to_json(), Value::String("1/2".into()));
        assert_eq!(rat(3, -6).to_json(), Value::String("-1/2".into()));
        assert_eq!(rat_int(5).to_json(), Value::String("5".into()));
    }

    #[test]
    fn gauss_json_round_trip() {
        let z = GaussRational::new(rat(1, 3), rat(-2, 5));
        let j = z.to_json();
        assert_eq!(GaussRational::from_json(&j).unwrap(), z);
    }

    #[test]
    fn gauss_with_zero_imaginary_part_equals_embedded_rational() {
        let q = rat(5, 7);
        let z = GaussRational::from_rational(q.clone());
        assert_eq!(z.re(), q);
        assert!(z.im().is_zero());
        assert_eq!(z, GaussRational::new(q, Rational::zero()));
    }

    #[test]
    fn conjugation_and_abs_sq() {
        let z = gauss_int(3, 4);
        assert_eq!(z.conj(), gauss_int(3, -4));
        assert_eq!(z.abs_sq(), rat_int(25));
        assert_eq!(rat(-2, 3).abs_sq(), rat(4, 9));
    }

    #[test]
    fn rejects_malformed_rationals() {
        assert!(Rational::from_json(&Value::String("1/0".into())).is_err());
        assert!(Rational::from_json(&Value::String("abc".into())).is_err());
        assert!(Rational::from_json(&Value::Bool(true)).is_err());
    }
}
