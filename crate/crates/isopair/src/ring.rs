//! Minimal commutative-ring abstraction shared by exact scalars and symbolic
//! Laurent polynomials, so the transfer-matrix machinery can run over either.

use std::fmt::{Debug, Display};

/// A commutative ring with partial inversion.
///
/// `try_inverse` returns `None` for non-units (zero, or a polynomial that is
/// not a single monomial). All methods are by reference: the implementations
/// are arbitrary-precision types that are not `Copy`.
pub trait Ring: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        let one = Self::one();
        let mut acc = Self::zero();
        for _ in 0..v.unsigned_abs() {
            acc = acc.add(&one);
        }
        if v < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Integer power; negative exponents require invertibility.
    fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 {
            self.try_inverse()?
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
}
