//! The canonical anti-involutive algebra of twisted differential operators
//! on affine space, built from the Lie-Rinehart star-product
//! `f * (g, u) = (fg + [f, u]/2, fu)`, with its V-filtration and
//! anti-involution.

use thiserror::Error;

use crate::algebra::{Algebra, GeneratorSpec, GradedElement, Monomial, Operator};
use crate::polyvect::{CdgaModel, PolError, Polyvectors};
use crate::scalars::Rat;

#[derive(Debug, Error)]
pub enum TdoError {
    #[error(transparent)]
    Pol(#[from] PolError),
    #[error("element is not a vector field: {0}")]
    NotAVector(String),
}

/// Polynomial model of the twisted-differential-operator construction on
/// affine m-space: the base ring sits at V-level -1 and the frame
/// derivations `d/dy_i` are global.
#[derive(Clone, Debug)]
pub struct TdoModel {
    m: usize,
    /// operators act on the plain polynomial algebra
    op_algebra: Algebra,
    /// ambient polyvectors supply the bracket (single source of signs)
    pol: Polyvectors,
}

/// An element `(g, u)` of `V_0 = A + Der(A)`, stored in the polyvector
/// algebra: `g` a function, `u` a weight-0 vector.
#[derive(Clone, Debug, PartialEq)]
pub struct V0 {
    pub g: GradedElement<Rat>,
    pub u: GradedElement<Rat>,
}

impl TdoModel {
    pub fn new(m: usize) -> Result<Self, TdoError> {
        let mut gens = Vec::with_capacity(m);
        for i in 0..m {
            gens.push(GeneratorSpec::new(&format!("y{}", i + 1), 0));
        }
        let op_algebra = Algebra::new(gens).map_err(PolError::from)?;
        let diff = vec![GradedElement::zero(&op_algebra); m];
        let cdga = CdgaModel::new(op_algebra.clone(), diff)?;
        let pol = Polyvectors::new(cdga, -1, 64)?;
        Ok(TdoModel { m, op_algebra, pol })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn op_algebra(&self) -> &Algebra {
        &self.op_algebra
    }

    pub fn pol(&self) -> &Polyvectors {
        &self.pol
    }

    pub fn function(&self, x: &GradedElement<Rat>) -> V0 {
        V0 {
            g: x.clone(),
            u: GradedElement::zero(self.pol.algebra()),
        }
    }

    pub fn frame_vector(&self, i: usize) -> V0 {
        V0 {
            g: GradedElement::zero(self.pol.algebra()),
            u: GradedElement::generator(self.pol.algebra(), self.pol.dual_of(i)),
        }
    }

    /// `f * (g, u) = (fg + [f, u]/2, fu)`, the bracket taken in the ambient
    /// polyvector DGLA.
    pub fn star_product(&self, f: &GradedElement<Rat>, theta: &V0) -> Result<V0, TdoError> {
        let fg = f.mul(&theta.g).map_err(PolError::from)?;
        let correction = self.pol.schouten(f, &theta.u)?.scale_rat(&Rat::new(1, 2));
        Ok(V0 {
            g: fg.add(&correction),
            u: f.mul(&theta.u).map_err(PolError::from)?,
        })
    }

    /// `(g, u)^t = (g, -u)`.
    pub fn v0_anti_involution(&self, theta: &V0) -> V0 {
        V0 {
            g: theta.g.clone(),
            u: theta.u.neg(),
        }
    }

    /// Bracket of `V_0` elements inside the ambient polyvector DGLA:
    /// `[(g,u), (g',u')] = (u(g') - u'(g), [u, u'])` on the even base.
    pub fn v0_bracket(&self, a: &V0, b: &V0) -> Result<V0, TdoError> {
        let total_a = a.g.add(&a.u);
        let total_b = b.g.add(&b.u);
        let br = self.pol.schouten(&total_a, &total_b)?;
        let mut parts = self.pol.weight_split(&br);
        let zero = GradedElement::zero(self.pol.algebra());
        Ok(V0 {
            g: parts.remove(&-1).unwrap_or_else(|| zero.clone()),
            u: parts.remove(&0).unwrap_or(zero),
        })
    }

    fn vector_coefficients(
        &self,
        u: &GradedElement<Rat>,
    ) -> Result<Vec<GradedElement<Rat>>, TdoError> {
        let mut coeffs = vec![GradedElement::zero(&self.op_algebra); self.m];
        for (mono, c) in u.terms() {
            let mut dual = None;
            let mut base = Vec::new();
            for &(g, e) in mono.exps() {
                if self.pol.is_dual(g as usize) {
                    if dual.is_some() || e != 1 {
                        return Err(TdoError::NotAVector(format!("{}", u)));
                    }
                    dual = Some(self.pol.base_of_dual(g as usize));
                } else {
                    base.push((g, e));
                }
            }
            let Some(i) = dual else {
                return Err(TdoError::NotAVector(format!("{}", u)));
            };
            coeffs[i].add_term(Monomial::from_exps(base), c.clone());
        }
        Ok(coeffs)
    }

    fn base_to_op(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        let mut out = GradedElement::zero(&self.op_algebra);
        for (m, c) in x.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The PBW representation on the half-density model:
    /// `(g, u) -> g + u + div(u)/2`.
    pub fn represent(&self, theta: &V0) -> Result<Operator<Rat>, TdoError> {
        let alg = &self.op_algebra;
        let mut op = Operator::mul_by(&self.base_to_op(&theta.g));
        let coeffs = self.vector_coefficients(&theta.u)?;
        let mut div = GradedElement::zero(alg);
        for (i, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            op = op.add(
                &Operator::mul_by(a)
                    .compose(&Operator::derivation(alg, i))
                    .map_err(PolError::from)?,
            );
            div = div.add(
                &Operator::derivation(alg, i)
                    .apply(a)
                    .map_err(PolError::from)?,
            );
        }
        op = op.add(&Operator::mul_by(&div.scale_rat(&Rat::new(1, 2))));
        Ok(op)
    }

    /// PBW normal form of a word of `V_0` elements: the normal-ordered
    /// operator product of their representations. Confluent because the
    /// operator algebra re-normalises eagerly.
    pub fn normalize(&self, word: &[V0]) -> Result<Operator<Rat>, TdoError> {
        let mut acc = Operator::identity(&self.op_algebra);
        for theta in word {
            acc = acc
                .compose(&self.represent(theta)?)
                .map_err(PolError::from)?;
        }
        Ok(acc)
    }

    /// V-filtration level: `V_{j-1}` is spanned by words of length `j`, so
    /// the level of a normal form is its derivation order minus one.
    pub fn v_level(&self, op: &Operator<Rat>) -> i64 {
        op.max_der_order() as i64 - 1
    }

    /// Associated-graded piece at level p: the terms of top derivation
    /// order p + 1.
    pub fn gr_v(&self, op: &Operator<Rat>, p: i64) -> Operator<Rat> {
        let mut out = Operator::zero(&self.op_algebra);
        for (t, c) in op.terms() {
            if t.der_order() as i64 == p + 1 {
                out.add_term(t.clone(), c.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> TdoModel {
        TdoModel::new(1).unwrap()
    }

    #[test]
    fn star_product_examples() {
        // x * (0, d) = (-1/2, x d) with [x, d] = -1
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let d = tdo.frame_vector(0);
        let out = tdo.star_product(&x, &d).unwrap();
        assert_eq!(out.g, GradedElement::one(&alg).scale_rat(&Rat::new(-1, 2)));
        assert_eq!(out.u, x.mul(&d.u).unwrap());
        // 1 * theta = theta, f * (g, 0) = (fg, 0)
        let one = GradedElement::one(&alg);
        assert_eq!(tdo.star_product(&one, &d).unwrap(), d);
        let g = tdo.function(&x.mul(&x).unwrap());
        let fg = tdo.star_product(&x, &g).unwrap();
        assert_eq!(fg.g, x.mul(&x).unwrap().mul(&x).unwrap());
        assert!(fg.u.is_zero());
    }

    #[test]
    fn star_relation_holds_in_representation() {
        // rho(f * theta) = rho(f) . rho(theta)
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let f = x.mul(&x).unwrap().add(&x); // x^2 + x
        let theta = V0 {
            g: x.clone(),
            u: x.mul(&tdo.frame_vector(0).u).unwrap(),
        };
        let lhs = tdo
            .represent(&tdo.star_product(&f, &theta).unwrap())
            .unwrap();
        let rhs = tdo.normalize(&[tdo.function(&f), theta]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn functions_multiply_commutatively() {
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let f = tdo.function(&x);
        let g = tdo.function(&x.mul(&x).unwrap());
        let fg = tdo.normalize(&[f, g]).unwrap();
        let x_base = GradedElement::<Rat>::generator(tdo.op_algebra(), 0);
        let x_op = Operator::mul_by(&x_base);
        let expected = x_op.compose(&x_op).unwrap().compose(&x_op).unwrap();
        assert_eq!(fg, expected);
    }

    #[test]
    fn normalize_rewrites_weyl_word() {
        // d . x = x d + 1 on the line
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let word = [tdo.frame_vector(0), tdo.function(&x)];
        let normal = tdo.normalize(&word).unwrap();
        let expected = tdo
            .normalize(&[tdo.function(&x), tdo.frame_vector(0)])
            .unwrap()
            .add(&Operator::identity(tdo.op_algebra()));
        assert_eq!(normal, expected);
    }

    #[test]
    fn anti_involution_on_generators_and_squares() {
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        // (x d + 1/2)^t = -(x d + 1/2): the half-density adjoint
        let xd = V0 {
            g: GradedElement::zero(&alg),
            u: x.mul(&tdo.frame_vector(0).u).unwrap(),
        };
        let rho = tdo.represent(&xd).unwrap();
        assert_eq!(rho.anti_involute(), rho.neg());
        // (d^2)^t = d^2
        let d2 = tdo
            .normalize(&[tdo.frame_vector(0), tdo.frame_vector(0)])
            .unwrap();
        assert_eq!(d2.anti_involute(), d2);
        // generator rule matches the representation
        let theta = V0 {
            g: x.clone(),
            u: xd.u.clone(),
        };
        let lhs = tdo.represent(&tdo.v0_anti_involution(&theta)).unwrap();
        let rhs = tdo.represent(&theta).unwrap().anti_involute();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_is_bracket_central() {
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let one = tdo.function(&GradedElement::one(&alg));
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let theta = V0 {
            g: x.clone(),
            u: x.mul(&tdo.frame_vector(0).u).unwrap(),
        };
        let br = tdo.v0_bracket(&one, &theta).unwrap();
        assert!(br.g.is_zero() && br.u.is_zero());
    }

    #[test]
    fn representation_is_a_lie_map() {
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        let a = V0 {
            g: x.clone(),
            u: x.mul(&x).unwrap().mul(&tdo.frame_vector(0).u).unwrap(),
        };
        let b = V0 {
            g: x.mul(&x).unwrap(),
            u: tdo.frame_vector(0).u.clone(),
        };
        let lhs = tdo.represent(&tdo.v0_bracket(&a, &b).unwrap()).unwrap();
        let rhs = tdo
            .represent(&a)
            .unwrap()
            .graded_commutator(&tdo.represent(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn v_levels() {
        let tdo = line();
        let alg = tdo.pol().algebra().clone();
        let x = GradedElement::<Rat>::generator(&alg, 0);
        assert_eq!(tdo.v_level(&tdo.represent(&tdo.function(&x)).unwrap()), -1);
        assert_eq!(
            tdo.v_level(&tdo.represent(&tdo.frame_vector(0)).unwrap()),
            0
        );
        let d2 = tdo
            .normalize(&[tdo.frame_vector(0), tdo.frame_vector(0)])
            .unwrap();
        assert_eq!(tdo.v_level(&d2), 1);
    }
}
