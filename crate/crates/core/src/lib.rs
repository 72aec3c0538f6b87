//! Exact symbolic engine for shifted Poisson structures with formal
//! derivation, their self-dual deformation quantisations, and the canonical
//! quantisation of derived critical loci, on polynomial models over ℚ.
//!
//! Everything is computed in exact arithmetic: rationals, finite Laurent
//! polynomials in `h` (with tracked truncation order), and rational
//! functions in `h`. No floating point anywhere.

pub mod algebra;
pub mod dcrit;
pub mod dgla;
pub mod laws;
pub mod polyvect;
pub mod rees;
pub mod sample;
pub mod scalars;
pub mod tdo;

pub use algebra::{Algebra, GeneratorSpec, GradedElement, Monomial, Operator};
pub use scalars::{LaurentTrunc, Rat, RatFunc};
