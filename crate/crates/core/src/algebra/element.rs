use std::collections::BTreeMap;
use std::fmt;

use super::{Algebra, AlgebraError, Monomial};
use crate::scalars::{Rat, Ring};

/// Normalised sparse sum of monomials with coefficients in `K`.
///
/// No zero coefficients are stored, so two elements are equal iff their term
/// maps are equal: the normal form is canonical.
#[derive(Clone, Debug)]
pub struct GradedElement<K> {
    algebra: Algebra,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Ring> GradedElement<K> {
    pub fn zero(algebra: &Algebra) -> Self {
        GradedElement {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Algebra) -> Self {
        Self::from_monomial(algebra, Monomial::unit(), K::one())
    }

    pub fn generator(algebra: &Algebra, idx: usize) -> Self {
        Self::from_monomial(algebra, Monomial::gen(idx), K::one())
    }

    pub fn from_monomial(algebra: &Algebra, m: Monomial, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedElement {
            algebra: algebra.clone(),
            terms,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, v) in self.terms.iter() {
            out.add_term(m.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(&K::from_rat(c))
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.algebra.same_as(&other.algebra) {
            return Err(AlgebraError::GeneratorMismatch);
        }
        let mut out = Self::zero(&self.algebra);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                if let Some((m, sign)) = ma.mul(mb, &self.algebra) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Cohomological degree when homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(&self.algebra);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn split_by_degree(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let d = m.degree(&self.algebra);
            out.entry(d)
                .or_insert_with(|| Self::zero(&self.algebra))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Split by a caller-supplied monomial weight (e.g. 𝔾ₘ-weight or
    /// polyvector weight).
    pub fn split_by<F: Fn(&Monomial) -> i64>(&self, f: F) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            out.entry(f(m))
                .or_insert_with(|| Self::zero(&self.algebra))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Map coefficients; drops terms that become zero.
    pub fn map_coeffs<F: Fn(&K) -> K>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Change coefficient ring.
    pub fn convert<L: Ring, F: Fn(&K) -> L>(&self, f: F) -> GradedElement<L> {
        let mut out = GradedElement::zero(&self.algebra);
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Maximal total exponent over the given generator set (polynomial
    /// degree in those generators).
    pub fn max_exponent_in(&self, gens: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| gens.iter().map(|&g| m.exponent_of(g)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let coeff = format!("{}", c);
            if m.is_unit() {
                out.push_str(&format!("({})", coeff));
            } else if coeff == "1" {
                out.push_str(&m.render(&self.algebra));
            } else {
                out.push_str(&format!("({})*{}", coeff, m.render(&self.algebra)));
            }
        }
        out
    }
}

impl<K: Ring> PartialEq for GradedElement<K> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra) && self.terms == other.terms
    }
}

impl<K: Ring> fmt::Display for GradedElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorSpec;

    fn mixed() -> Algebra {
        Algebra::new(vec![
            GeneratorSpec::new("y", 0),
            GeneratorSpec::new("e", -1),
        ])
        .unwrap()
    }

    #[test]
    fn squares_of_odd_vanish() {
        let alg = mixed();
        let e = GradedElement::<Rat>::generator(&alg, 1);
        assert!(e.mul(&e).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares_with_signs() {
        // (y + e)(y - e) = y^2 - ye + ey - e^2 = y^2
        let alg = mixed();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let e = GradedElement::<Rat>::generator(&alg, 1);
        let lhs = y.add(&e).mul(&y.sub(&e)).unwrap();
        let y2 = y.mul(&y).unwrap();
        assert_eq!(lhs, y2);
    }

    #[test]
    fn graded_commutativity_on_homogeneous() {
        let alg = mixed();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let e = GradedElement::<Rat>::generator(&alg, 1);
        let ye = y.mul(&e).unwrap();
        let ey = e.mul(&y).unwrap();
        assert_eq!(ye, ey); // one factor even
        let degree_sum = y.degree().unwrap() + e.degree().unwrap();
        assert_eq!(ye.degree(), Some(degree_sum));
    }
}
