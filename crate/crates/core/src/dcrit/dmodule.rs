use super::{CheckResult, CritModel};
use crate::algebra::{GradedElement, Operator};
use crate::scalars::{LaurentTrunc, Rat, Ring};

/// A polynomial vector field `sum_i a_i(y) d/dy_i` on the base affine space.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub coeffs: Vec<GradedElement<Rat>>,
}

impl VectorField {
    pub fn coordinate(model: &CritModel, i: usize) -> Self {
        let mut coeffs = vec![GradedElement::zero(model.algebra()); model.dim()];
        coeffs[i] = GradedElement::one(model.algebra());
        VectorField { coeffs }
    }

    /// `y_j d/dy_i`.
    pub fn linear(model: &CritModel, j: usize, i: usize) -> Self {
        let mut coeffs = vec![GradedElement::zero(model.algebra()); model.dim()];
        coeffs[i] = GradedElement::generator(model.algebra(), j);
        VectorField { coeffs }
    }

    fn as_operator(&self, model: &CritModel) -> Operator<LaurentTrunc> {
        let alg = model.algebra();
        let mut op = Operator::zero(alg);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let lifted: GradedElement<LaurentTrunc> = a.convert(LaurentTrunc::from_rat);
            op = op.add(
                &Operator::mul_by(&lifted)
                    .compose(&Operator::derivation(alg, i))
                    .unwrap(),
            );
        }
        op
    }

    fn divergence(&self, model: &CritModel) -> GradedElement<Rat> {
        let alg = model.algebra();
        let mut out = GradedElement::zero(alg);
        for (i, a) in self.coeffs.iter().enumerate() {
            out = out.add(&Operator::derivation(alg, i).apply(a).unwrap());
        }
        out
    }

    fn apply_to(&self, model: &CritModel, g: &GradedElement<Rat>) -> GradedElement<Rat> {
        let alg = model.algebra();
        let mut out = GradedElement::zero(alg);
        for (i, a) in self.coeffs.iter().enumerate() {
            let dg = Operator::derivation(alg, i).apply(g).unwrap();
            out = out.add(&a.mul(&dg).unwrap());
        }
        out
    }

    fn commutator(&self, model: &CritModel, other: &VectorField) -> VectorField {
        let coeffs = (0..model.dim())
            .map(|i| {
                self.apply_to(model, &other.coeffs[i])
                    .sub(&other.apply_to(model, &self.coeffs[i]))
            })
            .collect();
        VectorField { coeffs }
    }
}

/// The right action of a vector field on the twisted module
/// `K_Y((h))^f` in the coordinate trivialisation: minus the Lie
/// derivative, shifted by the twist `-h^{-1} xi(f)`.
fn right_action(model: &CritModel, xi: &VectorField) -> Operator<LaurentTrunc> {
    let twist: GradedElement<LaurentTrunc> = xi
        .apply_to(model, model.potential())
        .convert(|c| LaurentTrunc::monomial(c.clone(), -1, 64));
    let div: GradedElement<LaurentTrunc> = xi.divergence(model).convert(LaurentTrunc::from_rat);
    xi.as_operator(model)
        .neg()
        .sub(&Operator::mul_by(&div))
        .sub(&Operator::mul_by(&twist))
}

#[derive(Clone, Debug)]
pub struct DmoduleReport {
    pub checks: Vec<CheckResult>,
    /// Rendered twist terms `-h^{-1} xi(f)` per test field.
    pub twists: Vec<String>,
    /// Rendered compatibility defects `E(xi)`.
    pub defects: Vec<String>,
}

/// Exercises the twisted right module structure on a family of coordinate
/// and linear vector fields: the right-module commutator axiom, and the
/// compatibility defect of the canonical `h d/dh`-connection
/// `D(a) = h da/dh + h^{-1} a f`, which comes out as `E(xi) =
/// h^{-1} xi(f)` and is frozen as a regression.
pub fn twisted_dmodule_action(model: &CritModel) -> DmoduleReport {
    let m = model.dim();
    let mut fields = Vec::new();
    for i in 0..m {
        fields.push((format!("d/dy{}", i + 1), VectorField::coordinate(model, i)));
    }
    for j in 0..m {
        for i in 0..m {
            fields.push((
                format!("y{}*d/dy{}", j + 1, i + 1),
                VectorField::linear(model, j, i),
            ));
        }
    }
    let mut checks = Vec::new();
    let mut twists = Vec::new();
    let mut defects = Vec::new();

    // module axiom on pairs: R_{[xi,zeta]} = -[R_xi, R_zeta]
    for (na, xi) in fields.iter() {
        for (nb, zeta) in fields.iter() {
            let lhs = right_action(model, &xi.commutator(model, zeta));
            let r_xi = right_action(model, xi);
            let r_zeta = right_action(model, zeta);
            let rhs = r_zeta
                .compose(&r_xi)
                .unwrap()
                .sub(&r_xi.compose(&r_zeta).unwrap());
            let residual = lhs.sub(&rhs);
            checks.push(CheckResult::of_residual(
                &format!("module_axiom[{},{}]", na, nb),
                &residual,
                residual.is_zero(),
            ));
        }
    }

    // connection compatibility defect E(xi) = [D, R_xi] - h d/dh(twist term)
    let f_h: GradedElement<LaurentTrunc> = model
        .potential()
        .convert(|c| LaurentTrunc::monomial(c.clone(), -1, 64));
    let mult_fh = Operator::mul_by(&f_h);
    for (name, xi) in fields.iter() {
        let r = right_action(model, xi);
        let xi_f: GradedElement<LaurentTrunc> = xi
            .apply_to(model, model.potential())
            .convert(|c| LaurentTrunc::monomial(c.clone(), -1, 64));
        twists.push(format!("twist[{}] = {}", name, xi_f.neg()));
        // [h d/dh, R] acts on coefficients; [h^{-1} f, R] is an operator
        // commutator; the connection term h d/dh(-h^{-1} xi(f)) = h^{-1} xi(f)
        let e_op = r
            .hbar_d_hbar()
            .add(&mult_fh.graded_commutator(&r).unwrap())
            .sub(&Operator::mul_by(&xi_f));
        defects.push(format!("E[{}] = {}", name, e_op));
        // frozen regression: E(xi) = h^{-1} xi(f) as a multiplication operator
        let residual = e_op.sub(&Operator::mul_by(&xi_f));
        checks.push(CheckResult::of_residual(
            &format!("connection_defect_regression[{}]", name),
            &residual,
            residual.is_zero(),
        ));
    }
    DmoduleReport {
        checks,
        twists,
        defects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untwisted_action_has_zero_defect() {
        let model = CritModel::zero_potential(1);
        let report = twisted_dmodule_action(&model);
        for c in &report.checks {
            assert!(c.pass, "{}: {:?}", c.name, c.residual);
        }
        assert!(report.defects.iter().all(|d| d.ends_with("= 0")));
    }

    #[test]
    fn quadratic_twist_is_recorded() {
        let model = CritModel::quadratic_line();
        let report = twisted_dmodule_action(&model);
        for c in &report.checks {
            assert!(c.pass, "{}: {:?}", c.name, c.residual);
        }
        // xi = d/dt has twist -h^{-1} t
        assert!(report.twists[0].contains("t"));
    }

    #[test]
    fn product_potential_commutators() {
        let model = CritModel::new(2, &vec![(vec![1, 1], Rat::one())]).unwrap();
        let report = twisted_dmodule_action(&model);
        for c in &report.checks {
            assert!(c.pass, "{}: {:?}", c.name, c.residual);
        }
    }
}
