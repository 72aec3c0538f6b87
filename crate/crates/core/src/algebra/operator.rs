use std::collections::BTreeMap;
use std::fmt;

use super::{Algebra, AlgebraError, GradedElement, Monomial};
use crate::scalars::{HbarRing, Rat, Ring};

/// A normal-ordered operator word: all left-multiplications to the left of
/// all coordinate derivations. The derivation monomial records exponents of
/// the symbols `D_g`, with `D_g` carrying degree `-deg(g)` (so the same
/// parity as `g`); odd `D_g` squares to zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpTerm {
    pub mul: Monomial,
    pub der: Monomial,
}

impl OpTerm {
    pub fn identity() -> Self {
        OpTerm {
            mul: Monomial::unit(),
            der: Monomial::unit(),
        }
    }

    pub fn degree(&self, alg: &Algebra) -> i64 {
        self.mul.degree(alg) - self.der.degree(alg)
    }

    pub fn parity(&self, alg: &Algebra) -> bool {
        self.degree(alg).rem_euclid(2) == 1
    }

    /// Total operator order (number of derivation symbols, with
    /// multiplicity).
    pub fn der_order(&self) -> u32 {
        self.der.total_exponent()
    }
}

/// Normal-ordered element of the super-Weyl algebra acting on
/// `GradedElement`s; composition re-normalises eagerly via the graded
/// commutation relations `[D_g, g'] = delta_{g,g'}`.
#[derive(Clone, Debug)]
pub struct Operator<K> {
    algebra: Algebra,
    terms: BTreeMap<OpTerm, K>,
}

impl<K: Ring> Operator<K> {
    pub fn zero(algebra: &Algebra) -> Self {
        Operator {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(algebra: &Algebra) -> Self {
        Self::from_term(algebra, OpTerm::identity(), K::one())
    }

    pub fn from_term(algebra: &Algebra, t: OpTerm, c: K) -> Self {
        let mut op = Self::zero(algebra);
        op.add_term(t, c);
        op
    }

    /// Left multiplication by an algebra element.
    pub fn mul_by(elem: &GradedElement<K>) -> Self {
        let mut op = Self::zero(elem.algebra());
        for (m, c) in elem.terms() {
            op.add_term(
                OpTerm {
                    mul: m.clone(),
                    der: Monomial::unit(),
                },
                c.clone(),
            );
        }
        op
    }

    /// The coordinate derivation `D_g`.
    pub fn derivation(algebra: &Algebra, g: usize) -> Self {
        Self::from_term(
            algebra,
            OpTerm {
                mul: Monomial::unit(),
                der: Monomial::gen(g),
            },
            K::one(),
        )
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpTerm, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: OpTerm, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
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
        for (t, c) in other.terms.iter() {
            out.add_term(t.clone(), c.clone());
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
        for (t, v) in self.terms.iter() {
            out.add_term(t.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(&K::from_rat(c))
    }

    pub fn map_coeffs<F: Fn(&K) -> K>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (t, c) in self.terms.iter() {
            out.add_term(t.clone(), f(c));
        }
        out
    }

    pub fn degree(&self) -> Option<i64> {
        let mut deg = None;
        for t in self.terms.keys() {
            let d = t.degree(&self.algebra);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Maximal derivation order over the stored terms.
    pub fn max_der_order(&self) -> u32 {
        self.terms.keys().map(|t| t.der_order()).max().unwrap_or(0)
    }

    fn split_by_parity(&self) -> [Self; 2] {
        let mut even = Self::zero(&self.algebra);
        let mut odd = Self::zero(&self.algebra);
        for (t, c) in self.terms.iter() {
            if t.parity(&self.algebra) {
                odd.add_term(t.clone(), c.clone());
            } else {
                even.add_term(t.clone(), c.clone());
            }
        }
        [even, odd]
    }

    /// Normal-ordered composition: `apply(compose(P, Q), x) =
    /// apply(P, apply(Q, x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.algebra.same_as(&other.algebra) {
            return Err(AlgebraError::GeneratorMismatch);
        }
        let alg = &self.algebra;
        let mut out = Self::zero(alg);
        for (ta, ca) in self.terms.iter() {
            for (tb, cb) in other.terms.iter() {
                for (mid_mul, mid_der, s) in push_der_through(alg, &ta.der, &tb.mul) {
                    let Some((mul, s_m)) = ta.mul.mul(&mid_mul, alg) else {
                        continue;
                    };
                    let Some((der, s_d)) = mid_der.mul(&tb.der, alg) else {
                        continue;
                    };
                    let mut c = ca.mul(cb);
                    c = c.mul(&K::from_rat(&Rat::from_int(s * s_m * s_d)));
                    out.add_term(OpTerm { mul, der }, c);
                }
            }
        }
        Ok(out)
    }

    /// `P.Q - (-1)^{|P||Q|} Q.P`, computed per parity component.
    pub fn graded_commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(&self.algebra);
        for (pa, a) in self.split_by_parity().iter().enumerate() {
            for (pb, b) in other.split_by_parity().iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = a.compose(b)?;
                let ba = b.compose(a)?;
                let signed = if pa == 1 && pb == 1 { ba } else { ba.neg() };
                out = out.add(&ab.add(&signed));
            }
        }
        Ok(out)
    }

    /// Apply the operator to an algebra element.
    pub fn apply(&self, x: &GradedElement<K>) -> Result<GradedElement<K>, AlgebraError> {
        if !self.algebra.same_as(x.algebra()) {
            return Err(AlgebraError::GeneratorMismatch);
        }
        let alg = &self.algebra;
        let mut out = GradedElement::zero(alg);
        for (t, c) in self.terms.iter() {
            // rightmost derivation acts first
            let mut y = x.clone();
            let atoms: Vec<(u32, u32)> = t.der.exps().to_vec();
            for &(g, e) in atoms.iter().rev() {
                for _ in 0..e {
                    y = derive_element(alg, g as usize, &y);
                    if y.is_zero() {
                        break;
                    }
                }
            }
            if y.is_zero() {
                continue;
            }
            let front = GradedElement::from_monomial(alg, t.mul.clone(), c.clone());
            out = out.add(&front.mul(&y)?);
        }
        Ok(out)
    }

    /// Graded anti-involution `t`: fixes every left multiplication, negates
    /// every coordinate derivation, extended by
    /// `(PQ)^t = (-1)^{|P||Q|} Q^t P^t`.
    pub fn anti_involute(&self) -> Self {
        let alg = &self.algebra;
        let mut out = Self::zero(alg);
        for (t, c) in self.terms.iter() {
            let k = t.der_order();
            let cross = t.mul.parity(alg) && t.der.parity(alg);
            let mut sign = if k % 2 == 1 { -1i64 } else { 1 };
            if cross {
                sign = -sign;
            }
            // re-normalise der . mul
            for (mul, der, s) in push_der_through(alg, &t.der, &t.mul) {
                let c2 = c.mul(&K::from_rat(&Rat::from_int(sign * s)));
                out.add_term(OpTerm { mul, der }, c2);
            }
        }
        out
    }
}

impl<K: HbarRing> Operator<K> {
    /// `h -> -h` on every coefficient.
    pub fn hbar_reflect(&self) -> Self {
        self.map_coeffs(|c| c.hbar_reflect())
    }

    /// Coefficientwise `h d/dh`.
    pub fn hbar_d_hbar(&self) -> Self {
        self.map_coeffs(|c| c.hbar_d_hbar())
    }

    /// Sesquilinear involution `P*(h) = -P^t(-h)`.
    pub fn sesquilinear_star(&self) -> Self {
        self.anti_involute().hbar_reflect().neg()
    }
}

/// Leibniz action of the derivation `D_g` on a monomial:
/// one term `prefix_sign * e * m/g`, or `None` when `g` does not occur.
fn derive_mono(alg: &Algebra, g: usize, m: &Monomial) -> Option<(Monomial, i64)> {
    let pos = m.exps().iter().position(|&(gi, _)| gi as usize == g)?;
    let (_, e) = m.exps()[pos];
    let mut prefix_parity = 0i64;
    for &(gi, ei) in m.exps().iter().take(pos) {
        prefix_parity += alg.gen(gi as usize).degree * ei as i64;
    }
    let der_odd = alg.gen(g).is_odd();
    let sign = if der_odd && prefix_parity.rem_euclid(2) == 1 {
        -1
    } else {
        1
    };
    let mut exps = m.exps().to_vec();
    if e == 1 {
        exps.remove(pos);
    } else {
        exps[pos] = (g as u32, e - 1);
    }
    Some((Monomial::from_exps(exps), sign * e as i64))
}

fn derive_element<K: Ring>(alg: &Algebra, g: usize, x: &GradedElement<K>) -> GradedElement<K> {
    let mut out = GradedElement::zero(alg);
    for (m, c) in x.terms() {
        if let Some((m2, s)) = derive_mono(alg, g, m) {
            out.add_term(m2, c.mul(&K::from_rat(&Rat::from_int(s))));
        }
    }
    out
}

/// Normal-orders `der . mul`, returning `(mul_part, der_part, integer
/// coefficient)` triples.
fn push_der_through(
    alg: &Algebra,
    der: &Monomial,
    mul: &Monomial,
) -> Vec<(Monomial, Monomial, i64)> {
    if der.is_unit() || mul.is_unit() {
        return vec![(mul.clone(), der.clone(), 1)];
    }
    // split off the last derivation atom (highest generator index)
    let exps = der.exps();
    let &(g, e) = exps.last().unwrap();
    let mut rest = der.clone();
    {
        let mut v = rest.exps().to_vec();
        if e == 1 {
            v.pop();
        } else {
            let n = v.len();
            v[n - 1] = (g, e - 1);
        }
        rest = Monomial::from_exps(v);
    }
    let atom = Monomial::gen(g as usize);
    let der_parity = alg.gen(g as usize).is_odd();
    let mul_parity = mul.parity(alg);
    let commute_sign = if der_parity && mul_parity { -1i64 } else { 1 };

    let mut out = Vec::new();
    // (rest . mul) . D_g
    for (m_i, d_i, c_i) in push_der_through(alg, &rest, mul) {
        if let Some((d2, s_d)) = d_i.mul(&atom, alg) {
            out.push((m_i, d2, c_i * commute_sign * s_d));
        }
    }
    // rest . (D_g mul)
    if let Some((m2, c2)) = derive_mono(alg, g as usize, mul) {
        for (m_i, d_i, c_i) in push_der_through(alg, &rest, &m2) {
            out.push((m_i, d_i, c_i * c2));
        }
    }
    out
}

impl<K: Ring> PartialEq for Operator<K> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra) && self.terms == other.terms
    }
}

impl<K: Ring> fmt::Display for Operator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut body = String::new();
            if !t.mul.is_unit() {
                body.push_str(&t.mul.render(&self.algebra));
            }
            for &(g, e) in t.der.exps() {
                if !body.is_empty() {
                    body.push('*');
                }
                body.push_str(&format!("D_{}", self.algebra.gen(g as usize).name));
                if e > 1 {
                    body.push_str(&format!("^{}", e));
                }
            }
            let coeff = format!("{}", c);
            if body.is_empty() {
                write!(f, "({})", coeff)?;
            } else if coeff == "1" {
                write!(f, "{}", body)?;
            } else {
                write!(f, "({})*{}", coeff, body)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorSpec;
    use crate::scalars::LaurentTrunc;

    fn quad_algebra() -> Algebra {
        // t even, tau odd of degree -1
        Algebra::new(vec![
            GeneratorSpec::new("t", 0),
            GeneratorSpec::new("tau", -1),
        ])
        .unwrap()
    }

    fn dt(alg: &Algebra) -> Operator<Rat> {
        Operator::derivation(alg, 0)
    }

    fn dtau(alg: &Algebra) -> Operator<Rat> {
        Operator::derivation(alg, 1)
    }

    fn t_mul(alg: &Algebra) -> Operator<Rat> {
        Operator::mul_by(&GradedElement::generator(alg, 0))
    }

    fn tau_mul(alg: &Algebra) -> Operator<Rat> {
        Operator::mul_by(&GradedElement::generator(alg, 1))
    }

    #[test]
    fn even_weyl_relation() {
        let alg = quad_algebra();
        let lhs = dt(&alg).compose(&t_mul(&alg)).unwrap();
        let rhs = t_mul(&alg)
            .compose(&dt(&alg))
            .unwrap()
            .add(&Operator::identity(&alg));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_weyl_relation() {
        let alg = quad_algebra();
        let lhs = dtau(&alg).compose(&tau_mul(&alg)).unwrap();
        let rhs = Operator::identity(&alg).sub(&tau_mul(&alg).compose(&dtau(&alg)).unwrap());
        assert_eq!(lhs, rhs);
        assert!(dtau(&alg).compose(&dtau(&alg)).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_dt_and_t() {
        let alg = quad_algebra();
        let c = dt(&alg).graded_commutator(&t_mul(&alg)).unwrap();
        assert_eq!(c, Operator::identity(&alg));
    }

    #[test]
    fn odd_self_bracket_of_koszul_differential() {
        // delta = t D_tau; [delta, delta] = 2 delta^2 = 0
        let alg = quad_algebra();
        let delta = t_mul(&alg).compose(&dtau(&alg)).unwrap();
        assert!(delta.graded_commutator(&delta).unwrap().is_zero());
    }

    #[test]
    fn apply_matches_compose() {
        let alg = quad_algebra();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let tau = GradedElement::<Rat>::generator(&alg, 1);
        let x = y.mul(&y).unwrap().mul(&tau).unwrap().add(&y); // t^2 tau + t
        let p = dt(&alg).compose(&tau_mul(&alg)).unwrap().add(&dtau(&alg));
        let q = t_mul(&alg).compose(&dtau(&alg)).unwrap().add(&dt(&alg));
        let via_compose = p.compose(&q).unwrap().apply(&x).unwrap();
        let via_apply = p.apply(&q.apply(&x).unwrap()).unwrap();
        assert_eq!(via_compose, via_apply);
    }

    #[test]
    fn anti_involution_generator_rules() {
        let alg = quad_algebra();
        assert_eq!(dt(&alg).anti_involute(), dt(&alg).neg());
        // delta^t = -delta for delta = t D_tau
        let delta = t_mul(&alg).compose(&dtau(&alg)).unwrap();
        assert_eq!(delta.anti_involute(), delta.neg());
        // d^t = d for d = D_t D_tau
        let d = dt(&alg).compose(&dtau(&alg)).unwrap();
        assert_eq!(d.anti_involute(), d);
        // involutive
        let p = delta.add(&d).add(&t_mul(&alg));
        assert_eq!(p.anti_involute().anti_involute(), p);
    }

    #[test]
    fn star_fixes_hbar_d() {
        let alg = quad_algebra();
        let one = LaurentTrunc::one();
        let d: Operator<LaurentTrunc> = Operator::from_term(
            &alg,
            OpTerm {
                mul: Monomial::unit(),
                der: Monomial::from_exps(vec![(0, 1), (1, 1)]),
            },
            one,
        );
        let delta_h = d.scale(&LaurentTrunc::hbar_pow(1));
        assert_eq!(delta_h.sesquilinear_star(), delta_h);
        // constants: (c)* = -c, (h)* = h
        let c = Operator::<LaurentTrunc>::identity(&alg);
        assert_eq!(c.sesquilinear_star(), c.neg());
        let h = c.scale(&LaurentTrunc::hbar_pow(1));
        assert_eq!(h.sesquilinear_star(), h);
    }

    #[test]
    fn first_order_derivation_satisfies_leibniz() {
        let alg = quad_algebra();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let tau = GradedElement::<Rat>::generator(&alg, 1);
        let a = y.mul(&tau).unwrap().add(&y); // odd + even mix
        let b = tau.add(&y.mul(&y).unwrap());
        let p = dtau(&alg); // odd derivation
        let lhs = p.apply(&a.mul(&b).unwrap()).unwrap();
        // graded Leibniz: P(ab) = P(a) b + (-1)^{|P||a|} a P(b) per
        // homogeneous component of a
        let mut rhs = GradedElement::zero(&alg);
        for (da, part) in a.split_by_degree() {
            let term1 = p.apply(&part).unwrap().mul(&b).unwrap();
            let mut term2 = part.mul(&p.apply(&b).unwrap()).unwrap();
            if da.rem_euclid(2) == 1 {
                term2 = term2.neg();
            }
            rhs = rhs.add(&term1).add(&term2);
        }
        assert_eq!(lhs, rhs);
    }
}
