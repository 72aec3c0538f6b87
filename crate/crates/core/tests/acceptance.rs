//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//! Everything is exact arithmetic, zero tolerance.

use shifted_poisson::dcrit::{
    koszul_h0, koszul_h0_boxed, quad_regression, twisted_derham_cohomology, CheckResult, CritModel,
};
use shifted_poisson::laws;
use shifted_poisson::scalars::Rat;
use shifted_poisson::scalars::Ring;

fn report(idx: u32, label: &str, checks: &[CheckResult]) {
    let failed: Vec<&CheckResult> = checks.iter().filter(|c| !c.pass).collect();
    if failed.is_empty() {
        println!("ACCEPTANCE {:2}: PASS - {}", idx, label);
    } else {
        println!("ACCEPTANCE {:2}: FAIL - {}", idx, label);
        for c in &failed {
            println!("    {}: {}", c.name, c.residual.clone().unwrap_or_default());
        }
    }
    assert!(failed.is_empty(), "criterion {} failed", idx);
}

#[test]
fn criterion_01_dcritprop_identity_suite() {
    // m in {1,2,3}, 20 random potentials of degree <= 4 each; all of
    // [delta,delta], [delta,d], [d,d], [delta,D]=delta, [d,D]=d-h^{-1}delta,
    // [delta+hd,D]=hd, Delta*=Delta, D*=D hold exactly
    let checks = laws::dcritprop_suite(20, 4, 0);
    report(
        1,
        "quantisation identity suite, 20 random potentials per dimension",
        &checks,
    );
}

#[test]
fn criterion_02_quadratic_example_regression() {
    let started = std::time::Instant::now();
    let checks = quad_regression();
    let elapsed = started.elapsed();
    report(2, "quadratic example regression", &checks);
    assert!(
        elapsed < std::time::Duration::from_secs(1),
        "quadratic regression took {:?}, budget is 1s",
        elapsed
    );
}

#[test]
fn criterion_03_strict_formal_derivation_equations() {
    let checks = laws::strict_suite(20, 4, 0);
    report(
        3,
        "strict derivation equations on Crit and cotangent triples",
        &checks,
    );
}

#[test]
fn criterion_04_compatibility_calibration() {
    // calibrated once at m = 1; the same constants must work at m = 2, 3
    let checks = laws::calibration_suite();
    report(
        4,
        "mu(omega, pi) = sigma(pi) with one-time calibration",
        &checks,
    );
}

#[test]
fn criterion_05_schouten_dgla_laws() {
    let mut checks = Vec::new();
    for m in 1..=3usize {
        checks.extend(laws::schouten_law_suite(m, 200, 0));
        checks.extend(laws::cocone_law_suite(m, 200, 1));
    }
    checks.extend(laws::operator_law_suite(1000, 2));
    report(
        5,
        "Schouten/DGLA laws, 200 samples per law per dimension",
        &checks,
    );
}

#[test]
fn criterion_06_rees_identities() {
    let checks = laws::rees_suite(200, 0, 6);
    report(
        6,
        "Rees sign table, filtration identity, parity characterisation",
        &checks,
    );
}

#[test]
fn criterion_07_tdo() {
    let mut checks = Vec::new();
    for m in 1..=2usize {
        checks.extend(laws::tdo_suite(m, 200, 0));
    }
    report(
        7,
        "TDO: PBW independence, anti-involution signs, V-level drops",
        &checks,
    );
}

#[test]
fn criterion_08_cohomology_oracles() {
    let mut checks = Vec::new();
    // Koszul H^0 = Jacobian ring dimension, against the frozen Milnor numbers
    let cases: Vec<(&str, usize, shifted_poisson::dcrit::PolySpec, usize)> = vec![
        ("f=t^2", 1, vec![(vec![2], Rat::one())], 1),
        ("f=t^3", 1, vec![(vec![3], Rat::one())], 2),
        (
            "f=y1^2+y2^2",
            2,
            vec![(vec![2, 0], Rat::one()), (vec![0, 2], Rat::one())],
            1,
        ),
    ];
    for (label, m, spec, expected) in &cases {
        let (dim, stable) = koszul_h0(*m, spec, 6);
        let (dim_boxed, stable_boxed) = koszul_h0_boxed(*m, spec, 6);
        let ok = stable && stable_boxed && dim == *expected && dim_boxed == *expected;
        checks.push(CheckResult {
            name: format!("koszul_h0_two_routes[{}]", label),
            pass: ok,
            residual: if ok {
                None
            } else {
                Some(format!(
                    "saturated {} (stable {}), boxed {} (stable {}), expected {}",
                    dim, stable, dim_boxed, stable_boxed, expected
                ))
            },
        });
    }
    // mixed-degree partials: the cusp regression
    let cusp: shifted_poisson::dcrit::PolySpec =
        vec![(vec![3, 0], Rat::one()), (vec![0, 2], Rat::one())];
    let (dim, stable) = koszul_h0(2, &cusp, 6);
    checks.push(CheckResult {
        name: "koszul_h0[cusp y1^3+y2^2]".to_string(),
        pass: stable && dim == 2,
        residual: if stable && dim == 2 {
            None
        } else {
            Some(format!("dim {} (stable {})", dim, stable))
        },
    });
    let rep = twisted_derham_cohomology(2, &cusp, 6);
    checks.push(CheckResult {
        name: "twisted_derham[cusp y1^3+y2^2]".to_string(),
        pass: rep.stabilized && rep.dims == vec![0, 0, 2],
        residual: if rep.stabilized && rep.dims == vec![0, 0, 2] {
            None
        } else {
            Some(format!("dims {:?} / next {:?}", rep.dims, rep.dims_next))
        },
    });
    // twisted de Rham dimensions over Q(h), stabilised across cutoffs
    let twisted_cases: Vec<(
        &str,
        usize,
        shifted_poisson::dcrit::PolySpec,
        Vec<usize>,
        u32,
    )> = vec![
        ("f=0", 1, vec![], vec![1, 0], 6),
        ("f=t^2/2", 1, vec![(vec![2], Rat::new(1, 2))], vec![0, 1], 6),
        ("f=t^3/3", 1, vec![(vec![3], Rat::new(1, 3))], vec![0, 2], 8),
    ];
    for (label, m, spec, expected, cutoff) in &twisted_cases {
        let rep = twisted_derham_cohomology(*m, spec, *cutoff);
        let ok = rep.stabilized && rep.dims == *expected;
        checks.push(CheckResult {
            name: format!("twisted_derham[{}]", label),
            pass: ok,
            residual: if ok {
                None
            } else {
                Some(format!(
                    "dims {:?} / next {:?}, expected {:?}",
                    rep.dims, rep.dims_next, expected
                ))
            },
        });
        // for quasi-homogeneous isolated singularities the top twisted
        // dimension matches the independently eliminated Jacobian dimension
        if !spec.is_empty() {
            let (jac, stable) = koszul_h0(*m, spec, *cutoff);
            let top = rep.dims[*m];
            checks.push(CheckResult {
                name: format!("twisted_top_matches_jacobian[{}]", label),
                pass: stable && jac == top,
                residual: if stable && jac == top {
                    None
                } else {
                    Some(format!("jacobian {} vs top twisted {}", jac, top))
                },
            });
        }
    }
    report(
        8,
        "cohomology oracles: Jacobian rings and twisted de Rham",
        &checks,
    );
}

#[test]
fn criterion_09_anti_involution_consistency() {
    let mut checks = Vec::new();
    for m in 1..=3usize {
        // a nonzero potential so that delta is nonzero
        let mut exps = vec![0u32; m];
        exps[0] = 2;
        let mut spec = vec![(exps, Rat::new(1, 2))];
        if m >= 2 {
            let mut cross = vec![0u32; m];
            cross[0] = 1;
            cross[m - 1] = 1;
            spec.push((cross, Rat::one()));
        }
        let model = CritModel::new(m, &spec).unwrap();
        for c in shifted_poisson::dcrit::verify_anti_involution(&model) {
            checks.push(CheckResult {
                name: format!("m={}: {}", m, c.name),
                pass: c.pass,
                residual: c.residual,
            });
        }
    }
    report(
        9,
        "generator-rule anti-involution reproduces the operator table",
        &checks,
    );
}
