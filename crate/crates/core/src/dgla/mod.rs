//! DGLA abstraction: Maurer–Cartan defects, the weight derivation, the
//! cocone of formal derivations, gauge conjugation, and polynomial
//! simplicial de Rham forms.

mod simplicial;

pub use simplicial::{constant_extension, simplicial_mc_check, SimplicialForms, TensorElement};

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, GradedElement, Operator};
use crate::polyvect::{PolError, Polyvectors};
use crate::scalars::{Field, LaurentTrunc, Rat, Ring};

#[derive(Debug, Error)]
pub enum DglaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pol(#[from] PolError),
    #[error("gauge series did not terminate within {max} steps; first surviving term: {residual}")]
    GaugeNotNilpotent { max: usize, residual: String },
    #[error("polynomial degree cutoff exceeded: {found} > {max}")]
    CutoffOverflow { found: u32, max: u32 },
}

/// A DGLA presented by a carrier, differential, bracket, and weight
/// decomposition.
pub trait Dgla {
    type Elt: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elt;
    fn is_zero(&self, x: &Self::Elt) -> bool;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn scale_rat(&self, a: &Self::Elt, c: &Rat) -> Self::Elt;
    fn differential(&self, a: &Self::Elt) -> Result<Self::Elt, DglaError>;
    fn bracket(&self, a: &Self::Elt, b: &Self::Elt) -> Result<Self::Elt, DglaError>;
    fn weight_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt>;
    fn degree_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt>;

    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.add(a, &self.neg(b))
    }
}

/// `sigma`: multiply the weight-m component by m.
pub fn sigma<L: Dgla>(l: &L, x: &L::Elt) -> L::Elt {
    let mut out = l.zero();
    for (w, part) in l.weight_split(x) {
        out = l.add(&out, &l.scale_rat(&part, &Rat::from_int(w)));
    }
    out
}

/// Largest `p` with `x` in `F^p = prod_{m >= p-1} W_m`; `None` for zero
/// (which lies in every level).
pub fn filtration_level<L: Dgla>(l: &L, x: &L::Elt) -> Option<i64> {
    l.weight_split(x).keys().next().map(|w| w + 1)
}

/// Maurer–Cartan defect `delta x + [x, x]/2`.
pub fn mc_defect<L: Dgla>(l: &L, x: &L::Elt) -> Result<L::Elt, DglaError> {
    let half_sq = l.scale_rat(&l.bracket(x, x)?, &Rat::new(1, 2));
    Ok(l.add(&l.differential(x)?, &half_sq))
}

/// Defect of a Poisson structure with formal derivation `pi + D eps`:
/// `(mc_defect(pi), delta D + [pi, D] + sigma(pi))`.
pub fn cocone_defect<L: Dgla>(
    l: &L,
    pi: &L::Elt,
    d: &L::Elt,
) -> Result<(L::Elt, L::Elt), DglaError> {
    let first = mc_defect(l, pi)?;
    let mut second = l.differential(d)?;
    second = l.add(&second, &l.bracket(pi, d)?);
    second = l.add(&second, &sigma(l, pi));
    Ok((first, second))
}

/// Bracket on the cocone `L + L.eps` (`eps` odd, central, `eps^2 = 0`):
/// `[(a, b), (a', b')] = ([a, a'], [a, b'] + (-1)^{|a'|}[b, a'])`.
/// On elements shaped as Poisson-plus-derivation (degrees 1 and 0) this is
/// the bilinear form `[a,a'] + [a,b']eps + [a',b]eps`.
pub fn cocone_bracket<L: Dgla>(
    l: &L,
    x: &(L::Elt, L::Elt),
    y: &(L::Elt, L::Elt),
) -> Result<(L::Elt, L::Elt), DglaError> {
    let a = &x.0;
    let b = &x.1;
    let a2 = &y.0;
    let b2 = &y.1;
    let first = l.bracket(a, a2)?;
    let mut second = l.bracket(a, b2)?;
    for (deg, part) in l.degree_split(a2) {
        let br = l.bracket(b, &part)?;
        let signed = if deg.rem_euclid(2) == 1 {
            l.neg(&br)
        } else {
            br
        };
        second = l.add(&second, &signed);
    }
    Ok((first, second))
}

/// `exp(-ad_phi)(x) = sum_k (-ad_phi)^k(x) / k!`, requiring the series to
/// terminate within `max_iter` steps.
pub fn exp_neg_ad<L: Dgla>(
    l: &L,
    phi: &L::Elt,
    x: &L::Elt,
    max_iter: usize,
) -> Result<L::Elt, DglaError> {
    let mut acc = x.clone();
    let mut term = x.clone();
    let mut factorial = Rat::one();
    for k in 1..=max_iter {
        term = l.neg(&l.bracket(phi, &term)?);
        if l.is_zero(&term) {
            return Ok(acc);
        }
        factorial = factorial.mul(&Rat::from_int(k as i64));
        acc = l.add(&acc, &l.scale_rat(&term, &factorial.inv().unwrap()));
    }
    Err(DglaError::GaugeNotNilpotent {
        max: max_iter,
        residual: format!("{}", term),
    })
}

const GAUGE_MAX_ITER: usize = 64;

/// Gauge conjugation `exp(-phi) (delta0 + Delta) exp(phi)`, computed as the
/// finite sum `sum_k (-ad_phi)^k (delta0 + Delta) / k!`.
pub fn gauge_conjugate<L: Dgla>(
    l: &L,
    delta0: &L::Elt,
    big_delta: &L::Elt,
    phi: &L::Elt,
) -> Result<L::Elt, DglaError> {
    exp_neg_ad(l, phi, &l.add(delta0, big_delta), GAUGE_MAX_ITER)
}

/// Polyvector DGLA with the Schouten bracket and differential
/// `[delta_vec, -]`.
pub struct PolDgla<K: Ring> {
    pol: Polyvectors,
    _k: PhantomData<K>,
}

impl<K: Ring> PolDgla<K> {
    pub fn new(pol: Polyvectors) -> Self {
        PolDgla {
            pol,
            _k: PhantomData,
        }
    }

    pub fn pol(&self) -> &Polyvectors {
        &self.pol
    }
}

impl<K: Ring> Dgla for PolDgla<K> {
    type Elt = GradedElement<K>;

    fn zero(&self) -> Self::Elt {
        GradedElement::zero(self.pol.algebra())
    }
    fn is_zero(&self, x: &Self::Elt) -> bool {
        x.is_zero()
    }
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.add(b)
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.neg()
    }
    fn scale_rat(&self, a: &Self::Elt, c: &Rat) -> Self::Elt {
        a.scale_rat(c)
    }
    fn differential(&self, a: &Self::Elt) -> Result<Self::Elt, DglaError> {
        Ok(self.pol.differential(a)?)
    }
    fn bracket(&self, a: &Self::Elt, b: &Self::Elt) -> Result<Self::Elt, DglaError> {
        Ok(self.pol.schouten(a, b)?)
    }
    fn weight_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt> {
        self.pol.weight_split(a)
    }
    fn degree_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt> {
        a.split_by_degree()
    }
}

/// Operator DGLA: differential `[delta, -]`, bracket the graded commutator,
/// weights read off the power of `h` (so that `sigma = h d/dh`).
pub struct OperatorDgla {
    algebra: Algebra,
    delta: Operator<LaurentTrunc>,
}

impl OperatorDgla {
    pub fn new(algebra: Algebra, delta: Operator<LaurentTrunc>) -> Self {
        OperatorDgla { algebra, delta }
    }

    pub fn delta(&self) -> &Operator<LaurentTrunc> {
        &self.delta
    }
}

impl Dgla for OperatorDgla {
    type Elt = Operator<LaurentTrunc>;

    fn zero(&self) -> Self::Elt {
        Operator::zero(&self.algebra)
    }
    fn is_zero(&self, x: &Self::Elt) -> bool {
        x.is_zero()
    }
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.add(b)
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.neg()
    }
    fn scale_rat(&self, a: &Self::Elt, c: &Rat) -> Self::Elt {
        a.scale_rat(c)
    }
    fn differential(&self, a: &Self::Elt) -> Result<Self::Elt, DglaError> {
        Ok(self.delta.graded_commutator(a)?)
    }
    fn bracket(&self, a: &Self::Elt, b: &Self::Elt) -> Result<Self::Elt, DglaError> {
        Ok(a.graded_commutator(b)?)
    }
    fn weight_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt> {
        let mut out: BTreeMap<i64, Self::Elt> = BTreeMap::new();
        for (t, c) in a.terms() {
            // splitting by h-power is only faithful below the truncation order
            debug_assert!(!c.is_lossy());
            for (n, coeff) in c.terms() {
                out.entry(n).or_insert_with(|| self.zero()).add_term(
                    t.clone(),
                    LaurentTrunc::monomial(coeff.clone(), n, c.order()),
                );
            }
        }
        out
    }
    fn degree_split(&self, a: &Self::Elt) -> BTreeMap<i64, Self::Elt> {
        let mut out: BTreeMap<i64, Self::Elt> = BTreeMap::new();
        for (t, c) in a.terms() {
            out.entry(t.degree(&self.algebra))
                .or_insert_with(|| self.zero())
                .add_term(t.clone(), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcrit::CritModel;

    #[test]
    fn sigma_is_bracket_derivation_on_crit() {
        let crit = CritModel::quadratic_line();
        let l: PolDgla<Rat> = PolDgla::new(crit.polyvectors().clone());
        let alg = l.pol().algebra().clone();
        let pol = l.pol();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let xi_y = GradedElement::<Rat>::generator(&alg, pol.dual_of(0));
        let xi_e = GradedElement::<Rat>::generator(&alg, pol.dual_of(1));
        let a = xi_y.mul(&xi_e).unwrap().add(&y);
        let b = y.mul(&xi_y).unwrap();
        let lhs = sigma(&l, &l.bracket(&a, &b).unwrap());
        let rhs = l.add(
            &l.bracket(&sigma(&l, &a), &b).unwrap(),
            &l.bracket(&a, &sigma(&l, &b)).unwrap(),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mc_defect_of_zero_vanishes() {
        let crit = CritModel::quadratic_line();
        let l: PolDgla<Rat> = PolDgla::new(crit.polyvectors().clone());
        let zero = l.zero();
        assert!(l.is_zero(&mc_defect(&l, &zero).unwrap()));
    }

    #[test]
    fn gauge_with_zero_parameter_is_identity() {
        let crit = CritModel::quadratic_line();
        let q = crate::dcrit::canonical_quantisation(&crit);
        let l = OperatorDgla::new(crit.algebra().clone(), q.delta.clone());
        let out = gauge_conjugate(&l, &q.delta, &q.big_delta, &l.zero()).unwrap();
        assert_eq!(out, q.delta.add(&q.big_delta));
    }

    #[test]
    fn non_nilpotent_gauge_reports_surviving_order() {
        // ad of t D_t on D_t never dies: [t D_t, D_t] = -D_t
        let crit = CritModel::quadratic_line();
        let q = crate::dcrit::canonical_quantisation(&crit);
        let l = OperatorDgla::new(crit.algebra().clone(), q.delta.clone());
        let alg = crit.algebra().clone();
        let t_dt = Operator::mul_by(&GradedElement::generator(&alg, 0))
            .compose(&Operator::derivation(&alg, 0))
            .unwrap();
        let dt = Operator::<LaurentTrunc>::derivation(&alg, 0);
        let err = gauge_conjugate(&l, &dt, &l.zero(), &t_dt).unwrap_err();
        assert!(
            matches!(err, DglaError::GaugeNotNilpotent { .. }),
            "{}",
            err
        );
    }

    #[test]
    fn simplicial_cutoff_overflow_is_reported() {
        let crit = CritModel::quadratic_line();
        let l: PolDgla<Rat> = PolDgla::new(crit.polyvectors().clone());
        let forms = SimplicialForms::new(1, 0);
        let mut x: TensorElement<GradedElement<Rat>> = TensorElement::new();
        let t1 = crate::algebra::Monomial::gen(0);
        x.insert(t1, crit.standard_pi());
        let err = simplicial_mc_check(&l, &forms, &x).unwrap_err();
        assert!(matches!(err, DglaError::CutoffOverflow { .. }));
    }
}
