use super::{canonical_quantisation, CheckResult, CritModel};
use crate::algebra::{GradedElement, Monomial, OpTerm, Operator};
use crate::dgla::{gauge_conjugate, OperatorDgla};
use crate::scalars::{LaurentTrunc, Rat};

/// The quadratic-example regression on `Crit(A^1, t^2/2)`: the nilpotency
/// pattern of `ad_phi` for `phi = h D_t^2 / 2`, the gauge conjugation back
/// to the Koszul differential, and the transported connection
/// `tau D_tau + t D_t - h^{-1} t^2/2 = [delta, tau D_t - h^{-1} tau t / 2]`.
pub fn quad_regression() -> Vec<CheckResult> {
    let model = CritModel::quadratic_line();
    let q = canonical_quantisation(&model);
    let alg = q.algebra.clone();
    let mut checks = Vec::new();

    let t_mul = Operator::<LaurentTrunc>::mul_by(&GradedElement::generator(&alg, 0));
    let tau_mul = Operator::<LaurentTrunc>::mul_by(&GradedElement::generator(&alg, 1));
    let d_t = Operator::<LaurentTrunc>::derivation(&alg, 0);
    let d_tau = Operator::<LaurentTrunc>::derivation(&alg, 1);
    let half = Rat::new(1, 2);

    // phi = h D_t^2 / 2
    let phi = Operator::from_term(
        &alg,
        OpTerm {
            mul: Monomial::unit(),
            der: Monomial::from_exps(vec![(0, 2)]),
        },
        LaurentTrunc::monomial(half.clone(), 1, 64),
    );

    // ad_phi(D) = -t D_t - 1/2
    let ad1 = phi.graded_commutator(&q.big_d).unwrap();
    let expected1 = t_mul
        .compose(&d_t)
        .unwrap()
        .neg()
        .sub(&Operator::identity(&alg).scale_rat(&half));
    let r = ad1.sub(&expected1);
    checks.push(CheckResult::of_residual("ad_phi_D", &r, r.is_zero()));

    // ad_phi^2(D) = -h D_t^2
    let ad2 = phi.graded_commutator(&ad1).unwrap();
    let expected2 = d_t
        .compose(&d_t)
        .unwrap()
        .scale(&LaurentTrunc::hbar_pow(1))
        .neg();
    let r = ad2.sub(&expected2);
    checks.push(CheckResult::of_residual(
        "ad_phi_squared_D",
        &r,
        r.is_zero(),
    ));

    // ad_phi^3(D) = 0
    let ad3 = phi.graded_commutator(&ad2).unwrap();
    checks.push(CheckResult::of_residual(
        "ad_phi_cubed_D",
        &ad3,
        ad3.is_zero(),
    ));

    // gauge conjugation exp(-phi)(delta + Delta)exp(phi) = delta
    let l = OperatorDgla::new(alg.clone(), q.delta.clone());
    let conj = gauge_conjugate(&l, &q.delta, &q.big_delta, &phi).unwrap();
    let r = conj.sub(&q.delta);
    checks.push(CheckResult::of_residual(
        "gauge_conjugation_returns_delta",
        &r,
        r.is_zero(),
    ));

    // transported connection: h d/dh(phi) + sum_k (-ad_phi)^k(D)/k!
    let series = crate::dgla::exp_neg_ad(&l, &phi, &q.big_d, 16).unwrap();
    let transported = phi.hbar_d_hbar().add(&series);
    let expected = tau_mul
        .compose(&d_tau)
        .unwrap()
        .add(&t_mul.compose(&d_t).unwrap())
        .sub(
            &t_mul
                .compose(&t_mul)
                .unwrap()
                .scale(&LaurentTrunc::monomial(half.clone(), -1, 64)),
        );
    let r = transported.sub(&expected);
    checks.push(CheckResult::of_residual(
        "transported_connection",
        &r,
        r.is_zero(),
    ));

    // ... which is the delta-coboundary of theta = tau D_t - h^{-1} tau t/2
    let theta = tau_mul.compose(&d_t).unwrap().sub(
        &tau_mul
            .compose(&t_mul)
            .unwrap()
            .scale(&LaurentTrunc::monomial(half, -1, 64)),
    );
    let r = q.delta.graded_commutator(&theta).unwrap().sub(&expected);
    checks.push(CheckResult::of_residual(
        "transported_connection_is_delta_of_theta",
        &r,
        r.is_zero(),
    ));

    // explicit operator forms from the model: Delta = h D_t D_tau and
    // D = tau D_tau - 1/2 - h^{-1} t^2/2
    let expected_delta = d_t
        .compose(&d_tau)
        .unwrap()
        .scale(&LaurentTrunc::hbar_pow(1));
    let r = q.big_delta.sub(&expected_delta);
    checks.push(CheckResult::of_residual(
        "Delta_is_h_dt_dtau",
        &r,
        r.is_zero(),
    ));
    let expected_d = tau_mul
        .compose(&d_tau)
        .unwrap()
        .sub(&Operator::identity(&alg).scale_rat(&Rat::new(1, 2)))
        .sub(
            &t_mul
                .compose(&t_mul)
                .unwrap()
                .scale(&LaurentTrunc::monomial(Rat::new(1, 2), -1, 64)),
        );
    let r = q.big_d.sub(&expected_d);
    checks.push(CheckResult::of_residual(
        "D_is_tau_dtau_minus_half_minus_f_over_h",
        &r,
        r.is_zero(),
    ));

    // delta gauge orbit realised as a straight simplicial line: the path
    // (1 - t1) Delta with homotopy component phi dt1 satisfies Maurer-Cartan
    let forms = crate::dgla::SimplicialForms::new(1, 16);
    let mut path = crate::dgla::TensorElement::new();
    let t1 = Monomial::gen(0);
    let dt1 = Monomial::gen(1);
    path.insert(Monomial::unit(), q.big_delta.clone());
    path.insert(t1, q.big_delta.neg());
    path.insert(dt1, phi.clone());
    match crate::dgla::simplicial_mc_check(&l, &forms, &path) {
        Ok((pass, defect)) => {
            let rendered = defect
                .terms()
                .map(|(m, e)| format!("{} (x) {}", m, e))
                .collect::<Vec<_>>()
                .join(" + ");
            checks.push(CheckResult {
                name: "gauge_line_is_simplicial_mc".to_string(),
                pass,
                residual: if pass { None } else { Some(rendered) },
            });
        }
        Err(e) => checks.push(CheckResult {
            name: "gauge_line_is_simplicial_mc".to_string(),
            pass: false,
            residual: Some(e.to_string()),
        }),
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_quadratic_example_values_reproduce() {
        for check in quad_regression() {
            assert!(check.pass, "{}: {:?}", check.name, check.residual);
        }
    }
}
