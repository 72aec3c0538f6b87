//! Free graded-commutative algebras on named generators with Koszul-sign
//! multiplication, and the super-Weyl operator algebra (multiplications and
//! coordinate derivations) in normal order.

mod element;
mod operator;

pub use element::GradedElement;
pub use operator::{OpTerm, Operator};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A named generator of a free graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    /// Cohomological degree; parity = degree mod 2 governs all signs.
    pub degree: i64,
    /// 𝔾ₘ-weight, default 0.
    pub weight: i64,
}

impl GeneratorSpec {
    pub fn new(name: &str, degree: i64) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            weight: 0,
        }
    }

    pub fn with_weight(name: &str, degree: i64, weight: i64) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            weight,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

#[derive(Debug)]
struct AlgebraData {
    gens: Vec<GeneratorSpec>,
}

/// Shared handle to an algebra presentation. Canonical generator order is
/// declaration order; all signs are normalised against it.
#[derive(Clone, Debug)]
pub struct Algebra(Arc<AlgebraData>);

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("generator names are not unique: {0}")]
    DuplicateName(String),
    #[error("elements belong to different algebras")]
    GeneratorMismatch,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

impl Algebra {
    pub fn new(gens: Vec<GeneratorSpec>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Algebra(Arc::new(AlgebraData { gens })))
    }

    pub fn len(&self) -> usize {
        self.0.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.gens.is_empty()
    }

    pub fn gen(&self, idx: usize) -> &GeneratorSpec {
        &self.0.gens[idx]
    }

    pub fn gens(&self) -> &[GeneratorSpec] {
        &self.0.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.gens.iter().position(|g| g.name == name)
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// Monomial in canonical generator order: sorted `(generator, exponent)`
/// pairs with positive exponents; odd generators have exponent at most 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn gen(idx: usize) -> Self {
        Monomial {
            exps: vec![(idx as u32, 1)],
        }
    }

    pub fn from_exps(mut exps: Vec<(u32, u32)>) -> Self {
        exps.retain(|&(_, e)| e > 0);
        exps.sort_unstable();
        Monomial { exps }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent_of(&self, idx: usize) -> u32 {
        self.exps
            .iter()
            .find(|&&(g, _)| g as usize == idx)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn total_exponent(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree(&self, alg: &Algebra) -> i64 {
        self.exps
            .iter()
            .map(|&(g, e)| alg.gen(g as usize).degree * e as i64)
            .sum()
    }

    pub fn weight(&self, alg: &Algebra) -> i64 {
        self.exps
            .iter()
            .map(|&(g, e)| alg.gen(g as usize).weight * e as i64)
            .sum()
    }

    pub fn parity(&self, alg: &Algebra) -> bool {
        self.degree(alg).rem_euclid(2) == 1
    }

    /// Splits off the first atom (lowest generator, one power).
    pub fn split_first(&self) -> Option<(usize, Monomial)> {
        let &(g, e) = self.exps.first()?;
        let mut rest = self.clone();
        if e == 1 {
            rest.exps.remove(0);
        } else {
            rest.exps[0] = (g, e - 1);
        }
        Some((g as usize, rest))
    }

    /// Graded-commutative product in canonical order. Returns the Koszul
    /// sign, or `None` when an odd generator squares to zero.
    pub fn mul(&self, other: &Monomial, alg: &Algebra) -> Option<(Monomial, i64)> {
        let mut sign = 1i64;
        // count transpositions: for each odd atom of `other`, the odd atoms
        // of `self` sitting strictly later in canonical order must be crossed
        let mut odd_after: Vec<u32> = Vec::with_capacity(self.exps.len());
        let mut suffix = 0u32;
        for &(g, e) in self.exps.iter().rev() {
            odd_after.push(suffix);
            if alg.gen(g as usize).is_odd() {
                suffix += e % 2;
            }
        }
        odd_after.reverse();
        for &(gb, eb) in other.exps.iter() {
            let spec = alg.gen(gb as usize);
            if !spec.is_odd() || eb % 2 == 0 {
                continue;
            }
            // odd atoms of self with generator index > gb
            let mut crossings = 0u32;
            for (k, &(ga, _)) in self.exps.iter().enumerate() {
                if ga > gb {
                    crossings = odd_after[k]
                        + if alg.gen(ga as usize).is_odd() {
                            self.exps[k].1 % 2
                        } else {
                            0
                        };
                    break;
                }
            }
            if crossings % 2 == 1 {
                sign = -sign;
            }
        }
        // merge exponents
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.exps.len() || j < other.exps.len() {
            let pick_a = match (self.exps.get(i), other.exps.get(j)) {
                (Some(&(ga, _)), Some(&(gb, _))) => {
                    if ga == gb {
                        let e = self.exps[i].1 + other.exps[j].1;
                        if alg.gen(ga as usize).is_odd() && e > 1 {
                            return None;
                        }
                        exps.push((ga, e));
                        i += 1;
                        j += 1;
                        continue;
                    }
                    ga < gb
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_a {
                exps.push(self.exps[i]);
                i += 1;
            } else {
                exps.push(other.exps[j]);
                j += 1;
            }
        }
        Some((Monomial { exps }, sign))
    }

    pub fn render(&self, alg: &Algebra) -> String {
        if self.exps.is_empty() {
            return "1".to_string();
        }
        self.exps
            .iter()
            .map(|&(g, e)| {
                let name = &alg.gen(g as usize).name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{}^{}", name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "g{}", g)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_odd() -> Algebra {
        Algebra::new(vec![GeneratorSpec::new("a", 1), GeneratorSpec::new("b", 1)]).unwrap()
    }

    #[test]
    fn odd_generators_anticommute() {
        let alg = two_odd();
        let a = Monomial::gen(0);
        let b = Monomial::gen(1);
        let (ab, s_ab) = a.mul(&b, &alg).unwrap();
        let (ba, s_ba) = b.mul(&a, &alg).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(s_ab, 1);
        assert_eq!(s_ba, -1);
    }

    #[test]
    fn odd_squares_vanish() {
        let alg = two_odd();
        let a = Monomial::gen(0);
        assert!(a.mul(&a, &alg).is_none());
    }
}
