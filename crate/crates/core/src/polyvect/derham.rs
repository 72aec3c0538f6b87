use std::sync::Arc;

use super::{CdgaModel, CompatError, PolError, Polyvectors};
use crate::algebra::{Algebra, GeneratorSpec, GradedElement, Monomial, Operator};
use crate::scalars::{Rat, Ring};

/// Algebra data for the de Rham complex of a CDGA model: base generators
/// plus symbols `d<g>` of degree `deg(g) + 1`. The Hodge filtration `F^p` is
/// spanned by form-degree `>= p`.
#[derive(Debug)]
pub struct DrData {
    base: CdgaModel,
    algebra: Algebra,
    base_len: usize,
    d_of: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct DeRham {
    data: Arc<DrData>,
}

impl DeRham {
    pub fn new(base: CdgaModel) -> Result<Self, PolError> {
        let base_len = base.algebra().len();
        let mut gens: Vec<GeneratorSpec> = base.algebra().gens().to_vec();
        for g in base.algebra().gens() {
            gens.push(GeneratorSpec::with_weight(
                &format!("d{}", g.name),
                g.degree + 1,
                0,
            ));
        }
        let algebra = Algebra::new(gens)?;
        let d_of = (0..base_len).map(|i| base_len + i).collect();
        Ok(DeRham {
            data: Arc::new(DrData {
                base,
                algebra,
                base_len,
                d_of,
            }),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.data.algebra
    }

    pub fn base(&self) -> &CdgaModel {
        &self.data.base
    }

    pub fn base_len(&self) -> usize {
        self.data.base_len
    }

    pub fn d_of(&self, base_idx: usize) -> usize {
        self.data.d_of[base_idx]
    }

    pub fn is_d_symbol(&self, idx: usize) -> bool {
        idx >= self.data.base_len
    }

    /// Lift a base element into the de Rham algebra.
    pub fn lift(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        let mut out = GradedElement::zero(&self.data.algebra);
        for (m, c) in x.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The de Rham differential `d` as a first-order operator:
    /// `d(g) = dg`, `d(dg) = 0`, extended as a degree +1 derivation.
    pub fn d_operator(&self) -> Operator<Rat> {
        let alg = &self.data.algebra;
        let mut op = Operator::zero(alg);
        for idx in 0..self.data.base_len {
            let dsym = GradedElement::generator(alg, self.data.d_of[idx]);
            let term = Operator::mul_by(&dsym)
                .compose(&Operator::derivation(alg, idx))
                .unwrap();
            op = op.add(&term);
        }
        op
    }

    pub fn d(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        self.d_operator().apply(x).expect("same algebra")
    }

    /// The internal differential extended to the de Rham algebra by
    /// `delta(dg) := -d(delta g)`, which enforces `d.delta + delta.d = 0`.
    pub fn delta_operator(&self) -> Operator<Rat> {
        let alg = &self.data.algebra;
        let mut op = Operator::zero(alg);
        for idx in 0..self.data.base_len {
            let dg = self.lift(self.data.base.diff_of_gen(idx));
            if !dg.is_zero() {
                op = op.add(
                    &Operator::mul_by(&dg)
                        .compose(&Operator::derivation(alg, idx))
                        .unwrap(),
                );
            }
            let d_dg = self.d(&dg).neg();
            if !d_dg.is_zero() {
                op = op.add(
                    &Operator::mul_by(&d_dg)
                        .compose(&Operator::derivation(alg, self.data.d_of[idx]))
                        .unwrap(),
                );
            }
        }
        op
    }

    pub fn delta(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        self.delta_operator().apply(x).expect("same algebra")
    }

    pub fn total_differential(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        self.delta(x).add(&self.d(x))
    }

    /// Form degree of a monomial: total exponent of the `d`-symbols.
    pub fn form_degree(&self, m: &Monomial) -> i64 {
        m.exps()
            .iter()
            .filter(|&&(g, _)| self.is_d_symbol(g as usize))
            .map(|&(_, e)| e as i64)
            .sum()
    }

    /// Hodge level: the largest `p` with the element in
    /// `F^p = (form-degree >= p)`.
    pub fn hodge_level(&self, x: &GradedElement<Rat>) -> Option<i64> {
        x.terms().map(|(m, _)| self.form_degree(m)).min()
    }

    pub fn in_hodge(&self, x: &GradedElement<Rat>, p: i64) -> bool {
        self.hodge_level(x).map_or(true, |l| l >= p)
    }
}

/// Calibration constants of the contraction map: `c_p = (-1)^{p(p-1)/2}`,
/// fixed once by requiring `mu(omega, pi) = sigma(pi)` on the standard
/// cotangent pair at m = 1 and never re-tuned.
fn contraction_constant(p: u32) -> Rat {
    if (p * (p.saturating_sub(1)) / 2) % 2 == 1 {
        Rat::from_int(-1)
    } else {
        Rat::one()
    }
}

/// Contraction `mu(omega, pi)`: on a term `a db_1 ... db_p` returns
/// `c_p . a [b_1, pi] ... [b_p, pi]`, summed over form degrees.
pub fn mu_contract<K: Ring>(
    dr: &DeRham,
    pol: &Polyvectors,
    omega: &GradedElement<Rat>,
    pi: &GradedElement<K>,
) -> Result<GradedElement<K>, CompatError> {
    let pol_alg = pol.algebra().clone();
    let mut out = GradedElement::zero(&pol_alg);
    for (m, c) in omega.terms() {
        let mut base_exps = Vec::new();
        let mut d_atoms: Vec<(usize, u32)> = Vec::new();
        for &(g, e) in m.exps() {
            if dr.is_d_symbol(g as usize) {
                d_atoms.push((g as usize - dr.base_len(), e));
            } else {
                base_exps.push((g, e));
            }
        }
        let p: u32 = d_atoms.iter().map(|&(_, e)| e).sum();
        let mut term = GradedElement::from_monomial(
            &pol_alg,
            Monomial::from_exps(base_exps),
            K::from_rat(&c.mul(&contraction_constant(p))),
        );
        for (base_gen, e) in d_atoms {
            let g_elt = GradedElement::<K>::generator(&pol_alg, base_gen);
            let bracket = pol.schouten(&g_elt, pi)?;
            for _ in 0..e {
                term = term.mul(&bracket)?;
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Linearisation of `mu` in the Poisson direction:
/// `nu(omega, pi)(b)` replaces one contraction factor `[g, pi]` by `[g, b]`.
pub fn nu_map<K: Ring>(
    dr: &DeRham,
    pol: &Polyvectors,
    omega: &GradedElement<Rat>,
    pi: &GradedElement<K>,
    b: &GradedElement<K>,
) -> Result<GradedElement<K>, CompatError> {
    let pol_alg = pol.algebra().clone();
    let mut out = GradedElement::zero(&pol_alg);
    for (m, c) in omega.terms() {
        let mut base_exps = Vec::new();
        let mut d_atoms: Vec<(usize, u32)> = Vec::new();
        for &(g, e) in m.exps() {
            if dr.is_d_symbol(g as usize) {
                d_atoms.push((g as usize - dr.base_len(), e));
            } else {
                base_exps.push((g, e));
            }
        }
        let p: u32 = d_atoms.iter().map(|&(_, e)| e).sum();
        if p == 0 {
            continue;
        }
        let front = GradedElement::from_monomial(
            &pol_alg,
            Monomial::from_exps(base_exps),
            K::from_rat(&c.mul(&contraction_constant(p))),
        );
        for replace in 0..d_atoms.len() {
            let mut term = front.clone();
            for (k, &(base_gen, e)) in d_atoms.iter().enumerate() {
                let g_elt = GradedElement::<K>::generator(&pol_alg, base_gen);
                let with_pi = pol.schouten(&g_elt, pi)?;
                if k == replace {
                    for _ in 0..e - 1 {
                        term = term.mul(&with_pi)?;
                    }
                    let with_b = pol.schouten(&g_elt, b)?;
                    term = term.mul(&with_b)?.scale(&K::from_int(e as i64));
                } else {
                    for _ in 0..e {
                        term = term.mul(&with_pi)?;
                    }
                }
            }
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// Enumerates the weight-w monomial basis with bounded base degree.
fn weight_basis(pol: &Polyvectors, weight: i64, max_base: u32) -> Vec<Monomial> {
    let alg = pol.algebra().clone();
    let duals_needed = (weight + 1) as u32;
    let mut out = vec![Vec::<(u32, u32)>::new()];
    for g in 0..alg.len() {
        let cap = if alg.gen(g).is_odd() {
            1
        } else {
            max_base.max(duals_needed)
        };
        let mut extended = Vec::new();
        for exps in &out {
            for e in 1..=cap {
                let mut next = exps.clone();
                next.push((g as u32, e));
                extended.push(next);
            }
        }
        out.extend(extended);
    }
    out.into_iter()
        .map(Monomial::from_exps)
        .filter(|m| {
            let duals: u32 = m
                .exps()
                .iter()
                .filter(|&&(g, _)| pol.is_dual(g as usize))
                .map(|&(_, e)| e)
                .sum();
            let base: u32 = m
                .exps()
                .iter()
                .filter(|&&(g, _)| !pol.is_dual(g as usize))
                .map(|&(_, e)| e)
                .sum();
            duals == duals_needed && base <= max_base
        })
        .collect()
}

/// Exact invertibility of `nu(omega, pi) - sigma` on the weight-w graded
/// piece, restricted to base degree at most `max_base`: the key estimate of
/// the comparison argument, checked as a matrix over ℚ.
pub fn nu_minus_sigma_invertible(
    dr: &DeRham,
    pol: &Polyvectors,
    omega: &GradedElement<Rat>,
    pi: &GradedElement<Rat>,
    weight: i64,
    max_base: u32,
) -> Result<bool, CompatError> {
    let basis = weight_basis(pol, weight, max_base);
    let index: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = crate::scalars::Matrix::<Rat>::zero(basis.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        let b_elt = GradedElement::from_monomial(pol.algebra(), b.clone(), Rat::one());
        let image = nu_map(dr, pol, omega, &pi.clone(), &b_elt)?
            .sub(&b_elt.scale_rat(&Rat::from_int(weight)));
        for (m, c) in image.terms() {
            match index.get(m) {
                Some(&row) => {
                    let prev = mat.get(row, col).add(c);
                    mat.set(row, col, prev);
                }
                // image left the truncated span: not invertible there
                None => return Ok(false),
            }
        }
    }
    Ok(mat.rank() == basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcrit::CritModel;

    #[test]
    fn d_squares_to_zero_and_anticommutes_with_delta() {
        let crit = CritModel::quadratic_line();
        let dr = crit.derham();
        let d = dr.d_operator();
        let delta = dr.delta_operator();
        assert!(d.compose(&d).unwrap().is_zero());
        assert!(delta.compose(&delta).unwrap().is_zero());
        assert!(d.graded_commutator(&delta).unwrap().is_zero());
    }

    #[test]
    fn d_of_square() {
        let crit = CritModel::quadratic_line();
        let dr = crit.derham();
        let alg = dr.algebra().clone();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let dy = GradedElement::<Rat>::generator(&alg, dr.d_of(0));
        let y2 = y.mul(&y).unwrap();
        assert_eq!(dr.d(&y2), y.mul(&dy).unwrap().scale_rat(&Rat::from_int(2)));
        // d(eta dy) = d(eta) dy
        let eta = GradedElement::<Rat>::generator(&alg, 1);
        let deta = GradedElement::<Rat>::generator(&alg, dr.d_of(1));
        assert_eq!(dr.d(&eta.mul(&dy).unwrap()), deta.mul(&dy).unwrap());
    }

    #[test]
    fn contraction_on_low_forms() {
        // mu of a 0-form is the function itself (weight -1); on a 1-form
        // g dy it is the single contraction g [y, pi]
        let crit = CritModel::quadratic_line();
        let dr = crit.derham();
        let pol = crit.polyvectors();
        let pi = crit.standard_pi();
        let g = GradedElement::<Rat>::generator(dr.algebra(), 0); // t
        let mu0 = mu_contract(dr, pol, &g, &pi).unwrap();
        assert_eq!(mu0, GradedElement::generator(pol.algebra(), 0));
        assert_eq!(pol.weight_of(mu0.terms().next().unwrap().0), -1);
        let dy = GradedElement::<Rat>::generator(dr.algebra(), dr.d_of(0));
        let one_form = g.mul(&dy).unwrap();
        let mu1 = mu_contract(dr, pol, &one_form, &pi).unwrap();
        let g_pol = GradedElement::<Rat>::generator(pol.algebra(), 0);
        let expected = g_pol.mul(&pol.schouten(&g_pol, &pi).unwrap()).unwrap();
        assert_eq!(mu1, expected);
    }

    #[test]
    fn mu_is_hodge_compatible() {
        // form-degree p input lands in F^p of the polyvector filtration
        let crit = CritModel::new(2, &vec![(vec![2, 1], Rat::one())]).unwrap();
        let dr = crit.derham();
        let pol = crit.polyvectors();
        let pi = crit.standard_pi();
        let mut sampler = crate::sample::Sampler::new(5);
        for _ in 0..50 {
            let omega: GradedElement<Rat> = sampler.element(dr.algebra(), 4, 3);
            for (p, part) in omega.split_by(|m| dr.form_degree(m)) {
                let mu = mu_contract(dr, pol, &part, &pi).unwrap();
                assert!(
                    pol.in_filtration(&mu, p),
                    "mu of a {}-form fell below F^{}: {}",
                    p,
                    p,
                    mu
                );
            }
        }
    }

    #[test]
    fn nu_examples() {
        let crit = CritModel::quadratic_line();
        let dr = crit.derham();
        let pol = crit.polyvectors();
        let pi = crit.standard_pi();
        let ex = crate::dcrit::canonical_exact_structure(&crit);
        // b = 0 -> 0
        let zero = GradedElement::<Rat>::zero(pol.algebra());
        assert!(nu_map(dr, pol, &ex.omega, &pi, &zero).unwrap().is_zero());
        // b = xi_y maps to a multiple of xi_y
        let xi_y = GradedElement::<Rat>::generator(pol.algebra(), pol.dual_of(0));
        let image = nu_map(dr, pol, &ex.omega, &pi, &xi_y).unwrap();
        assert!(!image.is_zero());
        assert_eq!(image.num_terms(), 1);
        let (m, _) = image.terms().next().unwrap();
        assert_eq!(*m, xi_y.terms().next().unwrap().0.clone());
    }

    #[test]
    fn nu_minus_sigma_invertibility_pattern() {
        let crit = CritModel::zero_potential(1);
        let dr = crit.derham();
        let pol = crit.polyvectors();
        let pi = crit.standard_pi();
        let ex = crate::dcrit::canonical_exact_structure(&crit);
        for w in -1..=1i64 {
            assert!(
                nu_minus_sigma_invertible(dr, pol, &ex.omega, &pi, w, 2).unwrap(),
                "nu - sigma should be invertible on weight {}",
                w
            );
        }
        // degenerate omega = 0: nu vanishes, so nu - sigma = -sigma is
        // singular exactly on weight 0
        let zero = GradedElement::<Rat>::zero(dr.algebra());
        assert!(!nu_minus_sigma_invertible(dr, pol, &zero, &pi, 0, 2).unwrap());
        assert!(nu_minus_sigma_invertible(dr, pol, &zero, &pi, 1, 2).unwrap());
        assert!(nu_minus_sigma_invertible(dr, pol, &zero, &pi, -1, 2).unwrap());
    }
}
