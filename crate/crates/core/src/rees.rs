//! Rees constructions over the weight grading: the `h`-scaling isomorphism,
//! the sesquilinear involution `*`, the derivation `h d/dh`, filtration
//! identities, and strict/`h`-expanded formal-derivation checks.

use thiserror::Error;

use crate::algebra::GradedElement;
use crate::dcrit::CheckResult;
use crate::polyvect::{PolError, Polyvectors};
use crate::scalars::{LaurentTrunc, Rat, Ring};

pub const DEFAULT_REES_ORDER: i64 = 6;

#[derive(Debug, Error)]
pub enum ReesError {
    #[error(transparent)]
    Pol(#[from] PolError),
    #[error(
        "h-divisibility violated at arity {arity}: lowest h-power {found}, required {required}"
    )]
    Divisibility {
        arity: i64,
        found: i64,
        required: i64,
    },
}

/// Rees elements are polyvectors with truncated-Laurent coefficients; the
/// membership predicates below read the pair (monomial weight, h-power) of
/// every stored term.
pub type ReesElement = GradedElement<LaurentTrunc>;

/// Multiplies the weight-m part by `h^m`; intertwines `sigma + h d/dh` with
/// `h d/dh` on the Rees side.
pub fn hbar_scaling(pol: &Polyvectors, x: &GradedElement<Rat>, order: i64) -> ReesElement {
    let mut out = GradedElement::zero(pol.algebra());
    for (m, c) in x.terms() {
        let w = pol.weight_of(m);
        out.add_term(m.clone(), LaurentTrunc::monomial(c.clone(), w, order));
    }
    out
}

/// `(v h^n)* = (-1)^{m+n} v h^n` for `v` of weight m.
pub fn star_involution(pol: &Polyvectors, x: &ReesElement) -> ReesElement {
    let mut out = GradedElement::zero(pol.algebra());
    for (m, c) in x.terms() {
        let w = pol.weight_of(m);
        let reflected = c.hbar_reflect();
        let signed = if w.rem_euclid(2) == 1 {
            reflected.neg()
        } else {
            reflected
        };
        out.add_term(m.clone(), signed);
    }
    out
}

/// `sigma~ = h d/dh` on Rees elements.
pub fn sigma_tilde(x: &ReesElement) -> ReesElement {
    x.map_coeffs(|c| c.hbar_d_hbar())
}

pub fn star_fixed(pol: &Polyvectors, x: &ReesElement) -> bool {
    star_involution(pol, x) == *x
}

/// Characterisation of the `*`-fixed part: every stored (weight, h-power)
/// pair has matching parity.
pub fn parity_matched(pol: &Polyvectors, x: &ReesElement) -> bool {
    x.terms().all(|(m, c)| {
        let w = pol.weight_of(m);
        c.terms().all(|(n, _)| (w - n).rem_euclid(2) == 0)
    })
}

/// Membership flavors for the Rees filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReesFlavor {
    /// `W_m` is exactly the weight-m piece: the `h^n` coefficient must have
    /// weight equal to n.
    Graded,
    /// `W_m` accumulates all weights `<= m` (the power-series flavor): the
    /// `h^n` coefficient may have any weight `<= n`.
    Cumulative,
}

/// Is every term of `x` inside `F~^p = prod_{m >= p-1} h^m W_m`?
pub fn in_tilde_f(pol: &Polyvectors, x: &ReesElement, p: i64, flavor: ReesFlavor) -> bool {
    x.terms().all(|(m, c)| {
        let w = pol.weight_of(m);
        c.terms().all(|(n, _)| {
            n >= p - 1
                && match flavor {
                    ReesFlavor::Graded => w == n,
                    ReesFlavor::Cumulative => w <= n,
                }
        })
    })
}

/// Is `x` in the whole Rees algebra for the given flavor?
pub fn in_rees(pol: &Polyvectors, x: &ReesElement, flavor: ReesFlavor) -> bool {
    in_tilde_f(pol, x, i64::MIN + 1, flavor)
}

/// Is `x` in `h . L~`?
pub fn in_hbar_rees(pol: &Polyvectors, x: &ReesElement, flavor: ReesFlavor) -> bool {
    x.terms().all(|(m, c)| {
        let w = pol.weight_of(m);
        c.terms().all(|(n, _)| match flavor {
            ReesFlavor::Graded => w == n - 1,
            ReesFlavor::Cumulative => w <= n - 1,
        })
    })
}

/// Divide by `h` (exact; the inverse of multiplication by `h`).
pub fn divide_hbar(x: &ReesElement) -> ReesElement {
    x.map_coeffs(|c| c.mul_hbar_pow(-1))
}

pub fn multiply_hbar(x: &ReesElement) -> ReesElement {
    x.map_coeffs(|c| c.mul_hbar_pow(1))
}

/// The filtration identity `F~^q intersect h L~ = h F~^{q-1}` in the
/// cumulative flavor, checked on one sample in both directions.
pub fn filtration_identity_holds(pol: &Polyvectors, x: &ReesElement, q: i64) -> bool {
    let fl = ReesFlavor::Cumulative;
    let in_lhs = in_tilde_f(pol, x, q, fl) && in_hbar_rees(pol, x, fl);
    let in_rhs = in_tilde_f(pol, &divide_hbar(x), q - 1, fl) && in_rees(pol, &divide_hbar(x), fl);
    in_lhs == in_rhs
}

/// Strict formal-derivation equations: returns
/// `(delta D0, delta D1 + [pi, D0], [pi, D1] + pi)`; all three vanish iff
/// the triple is a strict Poisson structure with formal derivation.
pub fn strict_triple_check(
    pol: &Polyvectors,
    pi: &GradedElement<Rat>,
    d0: &GradedElement<Rat>,
    d1: &GradedElement<Rat>,
) -> Result<(GradedElement<Rat>, GradedElement<Rat>, GradedElement<Rat>), PolError> {
    let e0 = pol.differential(d0)?;
    let e1 = pol.differential(d1)?.add(&pol.schouten(pi, d0)?);
    let e2 = pol.schouten(pi, d1)?.add(pi);
    Ok((e0, e1, e2))
}

/// Report of the `h`-expanded formal derivation `D_h + h d/dh`.
#[derive(Clone, Debug)]
pub struct FormalDerivationReport {
    pub scaled: ReesElement,
    pub checks: Vec<CheckResult>,
}

/// Builds `D_h = hbar_scaling(D)` and verifies, per arity `p = weight + 1`:
/// the component lies in `h^{p-1}`; it is `*`-fixed; the arity-1 part kills
/// the constants (so the whole derivation restricts to `h d/dh` on the
/// scalars).
pub fn expand_formal_derivation(
    pol: &Polyvectors,
    d: &GradedElement<Rat>,
    order: i64,
) -> Result<FormalDerivationReport, ReesError> {
    let scaled = hbar_scaling(pol, d, order);
    let mut checks = Vec::new();
    for (w, part) in pol.weight_split(&scaled) {
        let arity = w + 1;
        let required = arity - 1;
        let found = part
            .terms()
            .filter_map(|(_, c)| c.min_exp())
            .min()
            .unwrap_or(required);
        if found < required {
            return Err(ReesError::Divisibility {
                arity,
                found,
                required,
            });
        }
        checks.push(CheckResult::passing(&format!(
            "arity_{}_component_in_hbar_power_{}",
            arity, required
        )));
        let fixed = star_fixed(pol, &part);
        checks.push(CheckResult::of_residual(
            &format!("arity_{}_component_star_fixed", arity),
            &star_involution(pol, &part).sub(&part),
            fixed,
        ));
    }
    // fixed subring: the derivation part kills 1, leaving h d/dh alone on
    // the constants
    let one = GradedElement::<LaurentTrunc>::one(pol.algebra());
    let on_constants = pol.schouten(&scaled, &one)?;
    checks.push(CheckResult::of_residual(
        "restricts_to_hbar_ddhbar_on_constants",
        &on_constants,
        on_constants.is_zero(),
    ));
    Ok(FormalDerivationReport { scaled, checks })
}

/// The sign table `(v h^n)* = (-1)^{m+n} v h^n` probed on one (weight,
/// power) cell; used by the acceptance sweep over `|m|, |n| <= 4`.
pub fn star_sign(weight: i64, power: i64) -> i64 {
    if (weight + power).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
