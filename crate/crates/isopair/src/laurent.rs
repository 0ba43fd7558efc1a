//! Multivariate Laurent polynomials with rational coefficients.
//!
//! These carry the symbolic side of the construction: transfer matrices over
//! formal edge weights, and the monomial tables produced by the symbolic
//! solver. Terms live in a `BTreeMap` so every polynomial has one canonical
//! form and one canonical rendering, which the string-comparison tests rely
//! on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::ring::Ring;
use crate::scalar::format_rational;

/// Exponent vector: variable name -> nonzero integer exponent.
pub type Monomial = BTreeMap<String, i64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaurentError {
    #[error("cannot parse {input:?} at byte {at}: {reason}")]
    Parse {
        input: String,
        at: usize,
        reason: String,
    },
    #[error("variable {0:?} has no value in the evaluation environment")]
    UnboundVariable(String),
    #[error("evaluation inverts a non-invertible value for variable {0:?}")]
    BadInverse(String),
}

/// A Laurent polynomial: finite sum of `coeff * prod(var^exp)` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Laurent {
    pub fn new_zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        Laurent { terms }
    }

    pub fn from_int(v: i64) -> Self {
        Laurent::constant(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn var(name: &str) -> Self {
        Laurent::monomial(BigRational::one(), &[(name, 1)])
    }

    /// Single term `coeff * prod(var^exp)`; zero exponents are dropped.
    pub fn monomial(coeff: BigRational, vars: &[(&str, i64)]) -> Self {
        if coeff.is_zero() {
            return Laurent::new_zero();
        }
        let mut m = Monomial::new();
        for (name, e) in vars {
            if *e != 0 {
                *m.entry((*name).to_string()).or_insert(0) += e;
            }
        }
        m.retain(|_, e| *e != 0);
        let mut terms = BTreeMap::new();
        terms.insert(m, coeff);
        Laurent { terms }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// For a single-term polynomial, its coefficient and exponent vector.
    pub fn as_single_term(&self) -> Option<(&BigRational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Evaluate over any ring, mapping each variable through `env`.
    /// Negative exponents require the bound value to be invertible.
    pub fn eval<T: Ring>(&self, env: &BTreeMap<String, T>) -> Result<T, LaurentError> {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            // coefficient: c = p/q as ring element p * q^-1
            let p = T::from_i64(
                c.numer()
                    .try_into()
                    .expect("coefficient numerator exceeds i64"),
            );
            let q = T::from_i64(
                c.denom()
                    .try_into()
                    .expect("coefficient denominator exceeds i64"),
            );
            let mut t = p.mul(
                &q.try_inverse()
                    .expect("nonzero integer denominator must invert"),
            );
            for (name, e) in m {
                let v = env
                    .get(name)
                    .ok_or_else(|| LaurentError::UnboundVariable(name.clone()))?;
                let pw = v
                    .powi(*e)
                    .ok_or_else(|| LaurentError::BadInverse(name.clone()))?;
                t = t.mul(&pw);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Parse the same syntax `Display` emits: terms joined by `+`/`-`, each a
    /// `*`-separated product of rationals and `var^int` powers.
    pub fn parse(input: &str) -> Result<Laurent, LaurentError> {
        Parser {
            src: input.as_bytes(),
            pos: 0,
            input,
        }
        .parse_sum()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> LaurentError {
        LaurentError::Parse {
            input: self.input.to_string(),
            at: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_sum(mut self) -> Result<Laurent, LaurentError> {
        let mut acc = Laurent::new_zero();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            Some(_) => {}
            None => return Err(self.err("empty expression")),
        }
        loop {
            let term = self.parse_term()?;
            acc = if negate { acc.sub(&term) } else { acc.add(&term) };
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                Some(_) => return Err(self.err("expected `+` or `-` between terms")),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Laurent, LaurentError> {
        let mut acc = self.parse_factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Laurent, LaurentError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.parse_rational_literal()?;
                Ok(Laurent::constant(r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.parse_ident();
                let mut exp: i64 = 1;
                if let Some(b'^') = self.peek() {
                    self.pos += 1;
                    exp = self.parse_int()?;
                }
                Ok(Laurent::monomial(BigRational::one(), &[(&name, exp)]))
            }
            Some(_) => Err(self.err("expected a number or a variable")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        self.input[start..self.pos].to_string()
    }

    fn parse_int(&mut self) -> Result<i64, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        if let Some(b'-' | b'+') = self.src.get(self.pos) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn parse_rational_literal(&mut self) -> Result<BigRational, LaurentError> {
        let p = self.parse_int()?;
        if let Some(b'/') = self.peek() {
            self.pos += 1;
            let q = self.parse_int()?;
            if q == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(BigInt::from(p), BigInt::from(q)))
        } else {
            Ok(BigRational::from_integer(BigInt::from(p)))
        }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote_factor = false;
            if m.is_empty() || !abs.is_one() {
                write!(f, "{}", format_rational(&abs))?;
                wrote_factor = true;
            }
            for (name, e) in m {
                if wrote_factor {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

impl Ring for Laurent {
    fn zero() -> Self {
        Laurent::new_zero()
    }

    fn one() -> Self {
        Laurent::constant(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Laurent::insert_term(&mut terms, m.clone(), c.clone());
        }
        Laurent { terms }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Laurent::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Laurent { terms }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                for (name, e) in mb {
                    *m.entry(name.clone()).or_insert(0) += e;
                }
                m.retain(|_, e| *e != 0);
                Laurent::insert_term(&mut terms, m, ca * cb);
            }
        }
        Laurent { terms }
    }

    fn neg(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    /// Only single terms (units of the Laurent ring) invert.
    fn try_inverse(&self) -> Option<Self> {
        let (c, m) = self.as_single_term()?;
        let inv_m: Monomial = m.iter().map(|(k, e)| (k.clone(), -e)).collect();
        let mut terms = BTreeMap::new();
        terms.insert(inv_m, c.recip());
        Some(Laurent { terms })
    }

    fn from_i64(v: i64) -> Self {
        Laurent::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn parse_and_render_round_trip() {
        // Canonical form: terms ordered by exponent map, variables within a
        // term alphabetical, constant term first.
        let cases = [
            "0",
            "1",
            "-2/3",
            "a11",
            "a11*b21",
            "a11^-1*b11",
            "a22*a31*b21 + a31*a32*b22",
            "-1 - 3/4*x^2 + y",
        ];
        for s in cases {
            let p = Laurent::parse(s).unwrap();
            assert_eq!(p.to_string(), s, "canonical form of {s:?}");
        }
    }

    #[test]
    fn parse_normalizes() {
        // Reordering and combining does not change the canonical form.
        let a = Laurent::parse("b11*a21 + a21*b11").unwrap();
        let b = Laurent::parse("2*a21*b11").unwrap();
        assert_eq!(a, b);
        let c = Laurent::parse("x - x").unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn parse_errors() {
        assert!(Laurent::parse("").is_err());
        assert!(Laurent::parse("x +").is_err());
        assert!(Laurent::parse("1/0").is_err());
        assert!(Laurent::parse("x^").is_err());
        assert!(Laurent::parse("(x)").is_err());
    }

    #[test]
    fn ring_ops() {
        let x = Laurent::var("x");
        let y = Laurent::var("y");
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, q);
    }

    #[test]
    fn inverse_of_monomial() {
        let m = Laurent::parse("-2/3*x^2*y^-1").unwrap();
        let inv = m.try_inverse().unwrap();
        assert_eq!(inv.to_string(), "-3/2*x^-2*y");
        assert!(m.mul(&inv).eq(&Laurent::one()));
        assert!(Laurent::parse("x + 1").unwrap().try_inverse().is_none());
        assert!(Laurent::new_zero().try_inverse().is_none());
    }

    #[test]
    fn evaluation() {
        let p = Laurent::parse("x^2*y^-1 - 3").unwrap();
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Scalar::from_int(4));
        env.insert("y".to_string(), Scalar::from_int(2));
        assert_eq!(p.eval(&env).unwrap(), Scalar::from_int(5));

        let mut env2 = BTreeMap::new();
        env2.insert("x".to_string(), Scalar::from_int(4));
        env2.insert("y".to_string(), Scalar::zero_exact());
        assert!(matches!(p.eval(&env2), Err(LaurentError::BadInverse(_))));
        let mut env3 = BTreeMap::new();
        env3.insert("x".to_string(), Scalar::from_int(4));
        assert!(matches!(
            p.eval(&env3),
            Err(LaurentError::UnboundVariable(_))
        ));
    }
}
