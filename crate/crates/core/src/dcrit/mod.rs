//! Derived critical loci `Crit(A^m, f)`: the Koszul CDGA, its canonical
//! exact (-1)-shifted symplectic structure, the strict Poisson structure
//! with formal derivation, and the canonical self-dual quantisation.

mod dmodule;
mod quad;
mod twisted;

pub use dmodule::{twisted_dmodule_action, DmoduleReport, VectorField};
pub use quad::quad_regression;
pub use twisted::{koszul_h0, koszul_h0_boxed, twisted_derham_cohomology, TwistedDerhamReport};

use thiserror::Error;

use crate::algebra::{Algebra, GeneratorSpec, GradedElement, Monomial, Operator};
use crate::polyvect::{mu_contract, CdgaModel, CompatError, DeRham, PolError, Polyvectors};
use crate::scalars::{Field, LaurentTrunc, Rat, Ring};

/// One named verification with an exact residual rendering.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: Option<String>,
}

impl CheckResult {
    pub fn passing(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: true,
            residual: None,
        }
    }

    pub fn of_residual<T: std::fmt::Display>(name: &str, residual: &T, pass: bool) -> Self {
        CheckResult {
            name: name.to_string(),
            pass,
            residual: if pass {
                None
            } else {
                Some(format!("{}", residual))
            },
        }
    }
}

/// A polynomial in the base coordinates, written as exponent rows.
pub type PolySpec = Vec<(Vec<u32>, Rat)>;

#[derive(Debug, Error)]
pub enum DcritError {
    #[error(transparent)]
    Pol(#[from] PolError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error("no constant makes the strict equations hold; convention inconsistency")]
    NoStrictConstant,
    #[error("potential must have even total degree terms only in the y's: bad exponent row of length {0}, expected {1}")]
    BadSpec(usize, usize),
}

/// The derived critical locus of `f` on affine m-space: the free
/// graded-commutative algebra on `y_i` (degree 0) and `eta_i` (degree -1,
/// 𝔾ₘ-weight -1), with differential the contraction with `df`.
#[derive(Clone, Debug)]
pub struct CritModel {
    m: usize,
    algebra: Algebra,
    f: GradedElement<Rat>,
    pol: Polyvectors,
    dr: DeRham,
}

impl CritModel {
    pub fn new(m: usize, spec: &PolySpec) -> Result<Self, DcritError> {
        let mut gens = Vec::with_capacity(2 * m);
        for i in 0..m {
            let name = if m == 1 {
                "t".to_string()
            } else {
                format!("y{}", i + 1)
            };
            gens.push(GeneratorSpec::with_weight(&name, 0, 0));
        }
        for i in 0..m {
            let name = if m == 1 {
                "tau".to_string()
            } else {
                format!("eta{}", i + 1)
            };
            gens.push(GeneratorSpec::with_weight(&name, -1, -1));
        }
        let algebra = Algebra::new(gens).map_err(PolError::from)?;
        let mut f = GradedElement::zero(&algebra);
        for (exps, c) in spec {
            if exps.len() != m {
                return Err(DcritError::BadSpec(exps.len(), m));
            }
            let mono = Monomial::from_exps(
                exps.iter()
                    .enumerate()
                    .map(|(i, &e)| (i as u32, e))
                    .collect(),
            );
            f.add_term(mono, c.clone());
        }
        // delta(eta_i) = df/dy_i, delta(y_i) = 0
        let mut diff = vec![GradedElement::zero(&algebra); 2 * m];
        for i in 0..m {
            diff[m + i] = Operator::derivation(&algebra, i).apply(&f).unwrap();
        }
        let cdga = CdgaModel::new(algebra.clone(), diff)?;
        let pol = Polyvectors::new(cdga.clone(), -1, 64)?;
        let dr = DeRham::new(pol.base().clone())?;
        Ok(CritModel {
            m,
            algebra,
            f,
            pol,
            dr,
        })
    }

    pub fn zero_potential(m: usize) -> Self {
        Self::new(m, &Vec::new()).unwrap()
    }

    /// `Crit(A^1, t^2/2)`, the quadratic example.
    pub fn quadratic_line() -> Self {
        Self::new(1, &vec![(vec![2], Rat::new(1, 2))]).unwrap()
    }

    /// `Crit(A^1, t^3/3)`.
    pub fn cubic_line() -> Self {
        Self::new(1, &vec![(vec![3], Rat::new(1, 3))]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn potential(&self) -> &GradedElement<Rat> {
        &self.f
    }

    pub fn polyvectors(&self) -> &Polyvectors {
        &self.pol
    }

    pub fn derham(&self) -> &DeRham {
        &self.dr
    }

    pub fn cdga(&self) -> &CdgaModel {
        self.pol.base()
    }

    pub fn partial(&self, i: usize) -> GradedElement<Rat> {
        Operator::derivation(&self.algebra, i)
            .apply(&self.f)
            .unwrap()
    }

    /// The standard bivector `sum_i xi_{y_i} xi_{eta_i}`.
    pub fn standard_pi(&self) -> GradedElement<Rat> {
        let alg = self.pol.algebra();
        let mut out = GradedElement::zero(alg);
        for i in 0..self.m {
            let xy = GradedElement::<Rat>::generator(alg, self.pol.dual_of(i));
            let xe = GradedElement::<Rat>::generator(alg, self.pol.dual_of(self.m + i));
            out = out.add(&xy.mul(&xe).unwrap());
        }
        out
    }

    /// The Euler field of the weight grading (`eta_i` of weight -1):
    /// `-sum_i eta_i xi_{eta_i}`.
    pub fn euler_field(&self) -> GradedElement<Rat> {
        let alg = self.pol.algebra();
        let mut out = GradedElement::zero(alg);
        for i in 0..self.m {
            let eta = GradedElement::<Rat>::generator(alg, self.m + i);
            let xe = GradedElement::<Rat>::generator(alg, self.pol.dual_of(self.m + i));
            out = out.add(&eta.mul(&xe).unwrap());
        }
        out.neg()
    }
}

/// The canonical exact structure: `omega = sum dy_i d(eta_i)`,
/// `lambda = sum eta_i dy_i - f`, and the tautological one-form.
#[derive(Clone, Debug)]
pub struct ExactSymplectic {
    pub omega: GradedElement<Rat>,
    pub lambda: GradedElement<Rat>,
    pub tautological_form: GradedElement<Rat>,
}

pub fn canonical_exact_structure(model: &CritModel) -> ExactSymplectic {
    let dr = model.derham();
    let alg = dr.algebra();
    let m = model.dim();
    let mut taut = GradedElement::zero(alg);
    let mut omega = GradedElement::zero(alg);
    for i in 0..m {
        let eta = GradedElement::<Rat>::generator(alg, m + i);
        let dy = GradedElement::<Rat>::generator(alg, dr.d_of(i));
        let deta = GradedElement::<Rat>::generator(alg, dr.d_of(m + i));
        taut = taut.add(&eta.mul(&dy).unwrap());
        omega = omega.add(&dy.mul(&deta).unwrap());
    }
    let lambda = taut.sub(&dr.lift(model.potential()));
    ExactSymplectic {
        omega,
        lambda,
        tautological_form: taut,
    }
}

pub fn verify_exact_structure(model: &CritModel) -> Result<Vec<CheckResult>, DcritError> {
    let dr = model.derham();
    let ex = canonical_exact_structure(model);
    let mut checks = Vec::new();

    let total = dr.total_differential(&ex.lambda);
    checks.push(CheckResult::of_residual(
        "total_differential_of_lambda_lands_in_F2",
        &total,
        dr.in_hodge(&total, 2),
    ));
    let diff = total.sub(&ex.omega);
    checks.push(CheckResult::of_residual(
        "total_differential_of_lambda_equals_omega",
        &diff,
        diff.is_zero(),
    ));
    let delta_lambda = dr.delta(&ex.lambda);
    let df = dr.d(&dr.lift(model.potential()));
    let r = delta_lambda.sub(&df);
    checks.push(CheckResult::of_residual(
        "delta_lambda_equals_df",
        &r,
        r.is_zero(),
    ));
    let d_taut = dr.d(&ex.tautological_form).sub(&ex.omega);
    checks.push(CheckResult::of_residual(
        "omega_is_d_of_tautological_form",
        &d_taut,
        d_taut.is_zero(),
    ));
    let d_omega = dr.d(&ex.omega);
    checks.push(CheckResult::of_residual(
        "d_omega_zero",
        &d_omega,
        d_omega.is_zero(),
    ));
    let delta_omega = dr.delta(&ex.omega);
    checks.push(CheckResult::of_residual(
        "delta_omega_zero",
        &delta_omega,
        delta_omega.is_zero(),
    ));
    let nondeg = model.polyvectors().nondegenerate(&model.standard_pi())?;
    checks.push(CheckResult::of_residual(
        "standard_bivector_nondegenerate",
        &"degenerate pairing",
        nondeg,
    ));
    Ok(checks)
}

/// Strict Poisson structure with formal derivation on the critical locus.
#[derive(Clone, Debug)]
pub struct StrictTriple {
    pub pi: GradedElement<Rat>,
    pub d0: GradedElement<Rat>,
    pub d1: GradedElement<Rat>,
    /// The frozen constant with `d0 = constant . f`.
    pub constant: Rat,
}

/// Solves `delta D_1 + c [pi, f] = 0` for the constant and returns the
/// strict triple `(pi, c f, Euler field)`.
pub fn strict_poisson_with_derivation(model: &CritModel) -> Result<StrictTriple, DcritError> {
    let pol = model.polyvectors();
    let pi = model.standard_pi();
    let d1 = model.euler_field();
    let f_lifted: GradedElement<Rat> = pol.lift(model.potential());
    let a = pol.differential(&d1)?;
    let b = pol.schouten(&pi, &f_lifted)?;
    let constant = if a.is_zero() {
        Rat::zero()
    } else {
        let (m0, ca) = a.terms().next().unwrap();
        let cb = b.coeff(m0);
        if cb.is_zero() {
            return Err(DcritError::NoStrictConstant);
        }
        let c = ca.neg().mul(&cb.inv().unwrap());
        let residual = a.add(&b.scale_rat(&c));
        if !residual.is_zero() {
            return Err(DcritError::NoStrictConstant);
        }
        c
    };
    let d0 = f_lifted.scale_rat(&constant);
    Ok(StrictTriple {
        pi,
        d0,
        d1,
        constant,
    })
}

/// Checks the strict triple equations and the compatibility calibration
/// `mu(omega, pi) = sigma(pi)`.
pub fn verify_strict_derivation(model: &CritModel) -> Result<Vec<CheckResult>, DcritError> {
    let pol = model.polyvectors();
    let triple = strict_poisson_with_derivation(model)?;
    let (e0, e1, e2) = crate::rees::strict_triple_check(pol, &triple.pi, &triple.d0, &triple.d1)?;
    let mut checks = vec![
        CheckResult::of_residual("strict_equation_delta_d0", &e0, e0.is_zero()),
        CheckResult::of_residual("strict_equation_delta_d1_plus_pi_d0", &e1, e1.is_zero()),
        CheckResult::of_residual("strict_equation_pi_d1_plus_pi", &e2, e2.is_zero()),
    ];
    let ex = canonical_exact_structure(model);
    let mu = mu_contract(model.derham(), pol, &ex.omega, &triple.pi)?;
    let diff = mu.sub(&pol.sigma(&triple.pi));
    checks.push(CheckResult::of_residual(
        "mu_of_omega_pi_equals_sigma_pi",
        &diff,
        diff.is_zero(),
    ));
    Ok(checks)
}

/// The canonical quantisation operators on the eta-model of `i^* K_Y`.
#[derive(Clone, Debug)]
pub struct Quantisation {
    pub algebra: Algebra,
    /// Koszul differential `sum_i (df/dy_i) D_{eta_i}`.
    pub delta: Operator<LaurentTrunc>,
    /// The BV-style second-order term `sum_i D_{y_i} D_{eta_i}`.
    pub d: Operator<LaurentTrunc>,
    /// `Delta = h d`.
    pub big_delta: Operator<LaurentTrunc>,
    /// `h d/dh`-connection `sum eta_i D_{eta_i} - m/2 - f/h`.
    pub big_d: Operator<LaurentTrunc>,
    /// The eta-degree counting operator.
    pub eta_count: Operator<LaurentTrunc>,
}

pub fn canonical_quantisation(model: &CritModel) -> Quantisation {
    let alg = model.algebra().clone();
    let m = model.dim();
    let mut delta = Operator::zero(&alg);
    let mut d = Operator::zero(&alg);
    let mut eta_count = Operator::zero(&alg);
    for i in 0..m {
        let fi: GradedElement<LaurentTrunc> =
            model.partial(i).convert(|c| LaurentTrunc::from_rat(c));
        delta = delta.add(
            &Operator::mul_by(&fi)
                .compose(&Operator::derivation(&alg, m + i))
                .unwrap(),
        );
        d = d.add(
            &Operator::derivation(&alg, i)
                .compose(&Operator::derivation(&alg, m + i))
                .unwrap(),
        );
        let eta = GradedElement::<LaurentTrunc>::generator(&alg, m + i);
        eta_count = eta_count.add(
            &Operator::mul_by(&eta)
                .compose(&Operator::derivation(&alg, m + i))
                .unwrap(),
        );
    }
    let big_delta = d.scale(&LaurentTrunc::hbar_pow(1));
    let f_h: GradedElement<LaurentTrunc> = model
        .potential()
        .convert(|c| LaurentTrunc::monomial(c.clone(), -1, 64));
    let half_m = Operator::identity(&alg).scale_rat(&Rat::new(m as i64, 2));
    let big_d = eta_count.sub(&half_m).sub(&Operator::mul_by(&f_h));
    Quantisation {
        algebra: alg,
        delta,
        d,
        big_delta,
        big_d,
        eta_count,
    }
}

/// All the commutator and self-duality identities of the canonical
/// quantisation, verified exactly.
pub fn verify_quantisation(model: &CritModel) -> Vec<CheckResult> {
    let q = canonical_quantisation(model);
    let m = model.dim();
    let mut checks = Vec::new();
    let comm =
        |a: &Operator<LaurentTrunc>, b: &Operator<LaurentTrunc>| a.graded_commutator(b).unwrap();

    let r = comm(&q.delta, &q.delta);
    checks.push(CheckResult::of_residual(
        "bracket_delta_delta_zero",
        &r,
        r.is_zero(),
    ));
    let r = comm(&q.delta, &q.d);
    checks.push(CheckResult::of_residual(
        "bracket_delta_d_zero",
        &r,
        r.is_zero(),
    ));
    let r = comm(&q.d, &q.d);
    checks.push(CheckResult::of_residual(
        "bracket_d_d_zero",
        &r,
        r.is_zero(),
    ));
    let r = comm(&q.delta, &q.big_d).sub(&q.delta);
    checks.push(CheckResult::of_residual(
        "bracket_delta_D_equals_delta",
        &r,
        r.is_zero(),
    ));
    let expected = q.d.sub(&q.delta.scale(&LaurentTrunc::hbar_pow(-1)));
    let r = comm(&q.d, &q.big_d).sub(&expected);
    checks.push(CheckResult::of_residual(
        "bracket_d_D_equals_d_minus_hinv_delta",
        &r,
        r.is_zero(),
    ));
    let total = q.delta.add(&q.big_delta);
    let r = comm(&total, &q.big_d).sub(&q.big_delta);
    checks.push(CheckResult::of_residual(
        "bracket_total_differential_D_equals_hbar_d",
        &r,
        r.is_zero(),
    ));
    let r = comm(&total, &q.big_d).sub(&q.big_delta.hbar_d_hbar());
    checks.push(CheckResult::of_residual(
        "bracket_total_differential_D_equals_sigma_of_Delta",
        &r,
        r.is_zero(),
    ));
    let r = q.big_delta.sesquilinear_star().sub(&q.big_delta);
    checks.push(CheckResult::of_residual(
        "Delta_star_equals_Delta",
        &r,
        r.is_zero(),
    ));
    let r = q.big_d.sesquilinear_star().sub(&q.big_d);
    checks.push(CheckResult::of_residual("D_star_equals_D", &r, r.is_zero()));
    // degree dictionary: deg_Omega + eta-count = m
    let deg_omega = Operator::identity(&q.algebra)
        .scale_rat(&Rat::from_int(m as i64))
        .sub(&q.eta_count);
    let r = deg_omega
        .add(&q.eta_count)
        .sub(&Operator::identity(&q.algebra).scale_rat(&Rat::from_int(m as i64)));
    checks.push(CheckResult::of_residual(
        "degree_operator_dictionary",
        &r,
        r.is_zero(),
    ));
    checks
}

/// Anti-involution table: `delta^t = -delta`, `d^t = d`,
/// `deg_Omega^t = m - deg_Omega`.
pub fn verify_anti_involution(model: &CritModel) -> Vec<CheckResult> {
    let q = canonical_quantisation(model);
    let m = model.dim();
    let mut checks = Vec::new();
    let r = q.delta.anti_involute().add(&q.delta);
    checks.push(CheckResult::of_residual(
        "delta_t_equals_minus_delta",
        &r,
        r.is_zero(),
    ));
    let r = q.d.anti_involute().sub(&q.d);
    checks.push(CheckResult::of_residual("d_t_equals_d", &r, r.is_zero()));
    let deg_omega = Operator::identity(&q.algebra)
        .scale_rat(&Rat::from_int(m as i64))
        .sub(&q.eta_count);
    let expected = Operator::identity(&q.algebra)
        .scale_rat(&Rat::from_int(m as i64))
        .sub(&deg_omega);
    let r = deg_omega.anti_involute().sub(&expected);
    checks.push(CheckResult::of_residual(
        "deg_t_equals_m_minus_deg",
        &r,
        r.is_zero(),
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_line_differential() {
        let crit = CritModel::quadratic_line();
        // delta tau = t
        let cdga = crit.cdga();
        let tau = GradedElement::<Rat>::generator(crit.algebra(), 1);
        let t = GradedElement::<Rat>::generator(crit.algebra(), 0);
        assert_eq!(cdga.delta(&tau), t);
        assert!(cdga.delta(&t).is_zero());
    }

    #[test]
    fn zero_potential_has_zero_differential() {
        let crit = CritModel::zero_potential(2);
        let eta1 = GradedElement::<Rat>::generator(crit.algebra(), 2);
        assert!(crit.cdga().delta(&eta1).is_zero());
    }

    #[test]
    fn product_potential_partials() {
        // f = y1 y2: delta(eta1) = y2, delta(eta2) = y1
        let crit = CritModel::new(2, &vec![(vec![1, 1], Rat::one())]).unwrap();
        let y1 = GradedElement::<Rat>::generator(crit.algebra(), 0);
        let y2 = GradedElement::<Rat>::generator(crit.algebra(), 1);
        let eta1 = GradedElement::<Rat>::generator(crit.algebra(), 2);
        let eta2 = GradedElement::<Rat>::generator(crit.algebra(), 3);
        assert_eq!(crit.cdga().delta(&eta1), y2);
        assert_eq!(crit.cdga().delta(&eta2), y1);
    }

    #[test]
    fn exact_structure_quadratic() {
        let crit = CritModel::quadratic_line();
        for check in verify_exact_structure(&crit).unwrap() {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn exact_structure_generic_cubic_m2() {
        let crit = CritModel::new(
            2,
            &vec![
                (vec![3, 0], Rat::one()),
                (vec![1, 2], Rat::new(-2, 3)),
                (vec![0, 3], Rat::new(1, 5)),
            ],
        )
        .unwrap();
        for check in verify_exact_structure(&crit).unwrap() {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn strict_triple_quadratic() {
        let crit = CritModel::quadratic_line();
        for check in verify_strict_derivation(&crit).unwrap() {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn strict_constant_is_frozen() {
        // the regression value for the sign convention relating D_0 to f
        let crit = CritModel::quadratic_line();
        let triple = strict_poisson_with_derivation(&crit).unwrap();
        assert_eq!(triple.constant, Rat::one());
        let zero = CritModel::zero_potential(2);
        let triple = strict_poisson_with_derivation(&zero).unwrap();
        assert!(triple.d0.is_zero());
    }

    #[test]
    fn quantisation_identities_quadratic() {
        let crit = CritModel::quadratic_line();
        for check in verify_quantisation(&crit) {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
        for check in verify_anti_involution(&crit) {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn quantisation_identities_zero_potential_m2() {
        // f = 0, m = 2: D = eta-count - 1; all identities pass
        let crit = CritModel::zero_potential(2);
        let q = canonical_quantisation(&crit);
        let expected = q.eta_count.sub(&Operator::identity(&q.algebra));
        assert_eq!(q.big_d, expected);
        for check in verify_quantisation(&crit) {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn perturbed_bivector_has_nonzero_defect() {
        // pi = y1 . (standard bivector) fails Maurer-Cartan once m >= 2;
        // at m = 1 the defect degenerates because xi_eta squares to zero
        let crit = CritModel::new(2, &vec![(vec![1, 1], Rat::one())]).unwrap();
        let pol = crit.polyvectors();
        let alg = pol.algebra();
        let y1 = GradedElement::<Rat>::generator(alg, 0);
        let pi = y1.mul(&crit.standard_pi()).unwrap();
        let l: crate::dgla::PolDgla<Rat> = crate::dgla::PolDgla::new(pol.clone());
        let defect = crate::dgla::mc_defect(&l, &pi).unwrap();
        assert!(!defect.is_zero());
    }

    #[test]
    fn standard_pi_is_maurer_cartan() {
        for crit in [
            CritModel::quadratic_line(),
            CritModel::new(2, &vec![(vec![3, 0], Rat::one()), (vec![0, 2], Rat::one())]).unwrap(),
        ] {
            let l: crate::dgla::PolDgla<Rat> =
                crate::dgla::PolDgla::new(crit.polyvectors().clone());
            let defect = crate::dgla::mc_defect(&l, &crit.standard_pi()).unwrap();
            assert!(defect.is_zero(), "defect {}", defect);
        }
    }

    #[test]
    fn degenerate_bivector_detected() {
        let crit = CritModel::quadratic_line();
        let pol = crit.polyvectors();
        let y = GradedElement::<Rat>::generator(pol.algebra(), 0);
        let pi = y.mul(&crit.standard_pi()).unwrap();
        assert!(!pol.nondegenerate(&pi).unwrap());
        assert!(!pol
            .nondegenerate(&GradedElement::zero(pol.algebra()))
            .unwrap());
        assert!(pol.nondegenerate(&crit.standard_pi()).unwrap());
    }
}
