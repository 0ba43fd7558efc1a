//! Complex scalars in two flavours: exact Gaussian rationals and `f64`
//! complex numbers. Exact mode is the default everywhere; float mode exists
//! for spectra that have no closed form and for tolerance-based comparisons.
//!
//! Mixed-mode arithmetic promotes to float. Division is only available
//! through [`Scalar::checked_div`] / [`Ring::try_inverse`], so a division by
//! zero is always a reportable error, never a panic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::ring::Ring;

/// Exact complex number with rational real and imaginary parts.
pub type ExactComplex = num_complex::Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {input:?}: {reason}")]
    BadRational { input: String, reason: String },
}

/// Parse a rational written as `p` or `p/q` (optionally signed, `q > 0` after
/// reduction is handled by `BigRational`).
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let bad = |reason: &str| ScalarError::BadRational {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(bad("empty string"));
    }
    let mut parts = t.splitn(2, '/');
    let num_str = parts.next().unwrap().trim();
    let num: BigInt = num_str
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = match parts.next() {
        None => BigInt::one(),
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Render a rational as `p` (denominator one) or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A complex scalar, exact or floating point.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

impl Scalar {
    pub fn zero_exact() -> Self {
        Scalar::Exact(ExactComplex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn one_exact() -> Self {
        Scalar::Exact(ExactComplex::new(BigRational::one(), BigRational::zero()))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(ExactComplex::new(
            BigRational::from_integer(BigInt::from(v)),
            BigRational::zero(),
        ))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator in Scalar::from_ratio");
        Scalar::Exact(ExactComplex::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        ))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(ExactComplex::new(r, BigRational::zero()))
    }

    pub fn from_rational_pair(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(ExactComplex::new(re, im))
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Numeric view of either mode.
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => Complex64::new(
                z.re.to_f64().expect("rational out of f64 range"),
                z.im.to_f64().expect("rational out of f64 range"),
            ),
            Scalar::Float(z) => *z,
        }
    }

    /// Exact view; `None` in float mode.
    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    /// True when the imaginary part is exactly zero (exact mode) or zero as a
    /// float (float mode).
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero(),
            Scalar::Float(z) => z.im == 0.0,
        }
    }

    /// True for a real value that is strictly positive.
    pub fn is_positive_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero() && z.re.is_positive(),
            Scalar::Float(z) => z.im == 0.0 && z.re > 0.0,
        }
    }

    /// True for a real value that is strictly negative.
    pub fn is_negative_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero() && z.re.is_negative(),
            Scalar::Float(z) => z.im == 0.0 && z.re < 0.0,
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = rhs.try_inverse().ok_or(ScalarError::DivisionByZero)?;
        Ok(Ring::mul(self, &inv))
    }

    /// Absolute difference, for float-mode comparisons.
    pub fn dist(&self, rhs: &Scalar) -> f64 {
        (self.to_complex64() - rhs.to_complex64()).norm()
    }

    /// Total order used to put exact values in a canonical sequence
    /// (lexicographic on real then imaginary part; floats compare numerically
    /// and sort after exact values, which never mix in practice).
    pub fn sort_key_cmp(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
            }
            (Scalar::Float(a), Scalar::Float(b)) => a
                .re
                .partial_cmp(&b.re)
                .unwrap_or(Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)),
            (Scalar::Exact(_), Scalar::Float(_)) => Ordering::Less,
            (Scalar::Float(_), Scalar::Exact(_)) => Ordering::Greater,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_complex64() == other.to_complex64(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => {
                if z.im.is_zero() {
                    write!(f, "{}", format_rational(&z.re))
                } else if z.re.is_zero() {
                    write!(f, "{}*i", format_rational(&z.im))
                } else if z.im.is_positive() {
                    write!(f, "{}+{}*i", format_rational(&z.re), format_rational(&z.im))
                } else {
                    write!(f, "{}{}*i", format_rational(&z.re), format_rational(&z.im))
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else {
                    write!(f, "{}{}{}*i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im)
                }
            }
        }
    }
}

fn promote(a: &Scalar, b: &Scalar) -> Option<(Complex64, Complex64)> {
    match (a, b) {
        (Scalar::Exact(_), Scalar::Exact(_)) => None,
        _ => Some((a.to_complex64(), b.to_complex64())),
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero_exact()
    }

    fn one() -> Self {
        Scalar::one_exact()
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.re.is_zero() && z.im.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        match promote(self, rhs) {
            Some((a, b)) => Scalar::Float(a + b),
            None => match (self, rhs) {
                (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
                _ => unreachable!(),
            },
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        match promote(self, rhs) {
            Some((a, b)) => Scalar::Float(a - b),
            None => match (self, rhs) {
                (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
                _ => unreachable!(),
            },
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        match promote(self, rhs) {
            Some((a, b)) => Scalar::Float(a * b),
            None => match (self, rhs) {
                (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
                _ => unreachable!(),
            },
        }
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        match self {
            Scalar::Exact(z) => {
                let norm = &z.re * &z.re + &z.im * &z.im;
                Some(Scalar::Exact(ExactComplex::new(
                    &z.re / &norm,
                    -&z.im / &norm,
                )))
            }
            Scalar::Float(z) => Some(Scalar::Float(z.inv())),
        }
    }

    fn from_i64(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["3/4", "-7", "0", "22/7", "-5/9"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!(format_rational(&parse_rational("4/8").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational("9/3").unwrap()), "3");
    }

    #[test]
    fn rational_parse_errors() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_ratio(1, 3);
        assert_eq!(a.add(&b), Scalar::from_ratio(5, 6));
        assert_eq!(a.mul(&b), Scalar::from_ratio(1, 6));
        assert_eq!(a.sub(&b), Scalar::from_ratio(1, 6));
        assert_eq!(a.checked_div(&b).unwrap(), Scalar::from_ratio(3, 2));
        assert_eq!(
            Scalar::zero_exact().checked_div(&b).unwrap(),
            Scalar::zero_exact()
        );
        assert_eq!(
            a.checked_div(&Scalar::zero_exact()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn complex_inverse() {
        // (3 + 4i)^-1 = (3 - 4i)/25
        let z = Scalar::from_rational_pair(
            BigRational::from_integer(3.into()),
            BigRational::from_integer(4.into()),
        );
        let inv = z.try_inverse().unwrap();
        let expect = Scalar::from_rational_pair(
            BigRational::new(3.into(), 25.into()),
            BigRational::new((-4).into(), 25.into()),
        );
        assert_eq!(inv, expect);
        assert_eq!(z.mul(&inv), Scalar::one_exact());
    }

    #[test]
    fn mixed_mode_promotes_to_float() {
        let a = Scalar::from_ratio(1, 4);
        let b = Scalar::from_f64(1.0, 0.0);
        let c = a.add(&b);
        assert!(!c.is_exact());
        assert!((c.to_complex64().re - 1.25).abs() < 1e-15);
    }

    #[test]
    fn powers() {
        let a = Scalar::from_ratio(2, 3);
        assert_eq!(a.powi(3).unwrap(), Scalar::from_ratio(8, 27));
        assert_eq!(a.powi(-2).unwrap(), Scalar::from_ratio(9, 4));
        assert_eq!(a.powi(0).unwrap(), Scalar::one_exact());
        assert!(Scalar::zero_exact().powi(-1).is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(-3, 4).to_string(), "-3/4");
        let z = Scalar::from_rational_pair(
            BigRational::from_integer(1.into()),
            BigRational::from_integer((-2).into()),
        );
        assert_eq!(z.to_string(), "1-2*i");
    }
}
