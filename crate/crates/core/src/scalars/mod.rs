//! Exact scalar arithmetic: ℚ, truncated Laurent series in `h`, rational
//! functions in `h`, and exact linear algebra over those fields.

mod laurent;
mod matrix;
mod ratfunc;
mod rational;

pub use laurent::LaurentTrunc;
pub use matrix::{cohomology_dims, ComplexError, ExactMatrix, Matrix, MatrixError};
pub use ratfunc::{PolyQ, RatFunc};
pub use rational::Rat;

use std::fmt;

/// Commutative ring operations shared by all coefficient types.
///
/// `is_zero` must be certain: a truncated value that merely *looks* zero
/// below its truncation order does not count.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Hook for choosing the elimination strategy per field.
///
/// ℚ(h) overrides the default with fraction-free elimination plus content
/// extraction; pivots explode otherwise.
pub trait EliminationField: Field {
    fn matrix_rank(m: &Matrix<Self>) -> usize {
        matrix::gauss_rank(m)
    }
}

/// Rings carrying the formal variable `h`, its reflection `h -> -h`, and
/// the derivation `h d/dh`.
pub trait HbarRing: Ring {
    fn hbar_reflect(&self) -> Self;
    fn hbar_d_hbar(&self) -> Self;
    fn times_hbar_pow(&self, k: i64) -> Self;
}

impl HbarRing for LaurentTrunc {
    fn hbar_reflect(&self) -> Self {
        LaurentTrunc::hbar_reflect(self)
    }
    fn hbar_d_hbar(&self) -> Self {
        LaurentTrunc::hbar_d_hbar(self)
    }
    fn times_hbar_pow(&self, k: i64) -> Self {
        self.mul_hbar_pow(k)
    }
}

impl HbarRing for RatFunc {
    fn hbar_reflect(&self) -> Self {
        RatFunc::hbar_reflect(self)
    }
    fn hbar_d_hbar(&self) -> Self {
        let n = self.numerator();
        let d = self.denominator();
        let num = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
        RatFunc::new(num.mul(&PolyQ::hbar()), d.mul(d))
    }
    fn times_hbar_pow(&self, k: i64) -> Self {
        self.mul(&RatFunc::hbar_pow(k))
    }
}
