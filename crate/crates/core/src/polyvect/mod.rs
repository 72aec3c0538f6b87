//! Shifted polyvectors with the Schouten–Nijenhuis bracket, the de Rham
//! complex with its Hodge filtration, and the compatibility maps between
//! them.

mod derham;

pub use derham::{mu_contract, nu_map, nu_minus_sigma_invertible, DeRham, DrData};

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, GeneratorSpec, GradedElement, Monomial, Operator};
use crate::scalars::{Rat, Ring};

#[derive(Debug, Error)]
pub enum PolError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("bracket left the truncation window: base degree {found} exceeds {max}")]
    WindowOverflow { found: u32, max: u32 },
    #[error("differential does not square to zero on generator {0}")]
    NotSquareZero(String),
    #[error("pairing matrix is not square: {rows}x{cols}")]
    NonSquarePairing { rows: usize, cols: usize },
}

/// A CDGA presented by generators and a differential given on generators.
#[derive(Clone, Debug)]
pub struct CdgaModel {
    algebra: Algebra,
    diff: Vec<GradedElement<Rat>>,
}

impl CdgaModel {
    pub fn new(algebra: Algebra, diff: Vec<GradedElement<Rat>>) -> Result<Self, PolError> {
        assert_eq!(diff.len(), algebra.len());
        let model = CdgaModel { algebra, diff };
        model.check_square_zero()?;
        Ok(model)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn diff_of_gen(&self, idx: usize) -> &GradedElement<Rat> {
        &self.diff[idx]
    }

    /// The differential as a first-order operator `sum_g delta(g) . D_g`.
    pub fn delta_operator(&self) -> Operator<Rat> {
        let mut op = Operator::zero(&self.algebra);
        for (idx, dg) in self.diff.iter().enumerate() {
            if dg.is_zero() {
                continue;
            }
            let term = Operator::mul_by(dg)
                .compose(&Operator::derivation(&self.algebra, idx))
                .expect("same algebra");
            op = op.add(&term);
        }
        op
    }

    /// Extends the differential to products as a degree +1 derivation.
    pub fn delta(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        self.delta_operator().apply(x).expect("same algebra")
    }

    fn check_square_zero(&self) -> Result<(), PolError> {
        for idx in 0..self.algebra.len() {
            let d2 = self.delta(&self.diff[idx]);
            if !d2.is_zero() {
                return Err(PolError::NotSquareZero(self.algebra.gen(idx).name.clone()));
            }
        }
        Ok(())
    }
}

/// Data shared by the polyvector complexes over one CDGA model: the extended
/// algebra on base generators plus dual symbols.
#[derive(Debug)]
pub struct PolData {
    base: CdgaModel,
    algebra: Algebra,
    shift: i64,
    /// dual symbol index for each base generator
    dual_of: Vec<usize>,
    base_len: usize,
    max_base_degree: u32,
}

/// The shifted-polyvector DGLA `Pol(A, n)` on a polynomial model; weight `m`
/// holds the `(m+1)`-vectors.
#[derive(Clone, Debug)]
pub struct Polyvectors {
    data: Arc<PolData>,
}

impl Polyvectors {
    /// Builds `Pol(A, n)`: dual symbols acquire degree `-deg(g) - n - 1`.
    pub fn new(base: CdgaModel, shift: i64, max_base_degree: u32) -> Result<Self, PolError> {
        let base_len = base.algebra().len();
        let mut gens: Vec<GeneratorSpec> = base.algebra().gens().to_vec();
        for g in base.algebra().gens() {
            gens.push(GeneratorSpec::with_weight(
                &format!("xi_{}", g.name),
                -g.degree - shift - 1,
                0,
            ));
        }
        let algebra = Algebra::new(gens)?;
        let dual_of = (0..base_len).map(|i| base_len + i).collect();
        Ok(Polyvectors {
            data: Arc::new(PolData {
                base,
                algebra,
                shift,
                dual_of,
                base_len,
                max_base_degree,
            }),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.data.algebra
    }

    pub fn base(&self) -> &CdgaModel {
        &self.data.base
    }

    pub fn shift(&self) -> i64 {
        self.data.shift
    }

    pub fn base_len(&self) -> usize {
        self.data.base_len
    }

    pub fn dual_of(&self, base_idx: usize) -> usize {
        self.data.dual_of[base_idx]
    }

    pub fn is_dual(&self, idx: usize) -> bool {
        idx >= self.data.base_len
    }

    pub fn base_of_dual(&self, idx: usize) -> usize {
        idx - self.data.base_len
    }

    /// Weight of a monomial: number of dual factors minus one.
    pub fn weight_of(&self, m: &Monomial) -> i64 {
        let duals: u32 = m
            .exps()
            .iter()
            .filter(|&&(g, _)| self.is_dual(g as usize))
            .map(|&(_, e)| e)
            .sum();
        duals as i64 - 1
    }

    pub fn weight_split<K: Ring>(&self, x: &GradedElement<K>) -> BTreeMap<i64, GradedElement<K>> {
        x.split_by(|m| self.weight_of(m))
    }

    /// `sigma`: multiplies the weight-m component by m.
    pub fn sigma<K: Ring>(&self, x: &GradedElement<K>) -> GradedElement<K> {
        let mut out = GradedElement::zero(&self.data.algebra);
        for (w, part) in self.weight_split(x) {
            out = out.add(&part.scale(&K::from_int(w)));
        }
        out
    }

    /// Lift a base-algebra element into the polyvector algebra.
    pub fn lift<K: Ring>(&self, x: &GradedElement<Rat>) -> GradedElement<K> {
        let mut out = GradedElement::zero(&self.data.algebra);
        for (m, c) in x.terms() {
            out.add_term(m.clone(), K::from_rat(c));
        }
        out
    }

    /// The vector field representing the CDGA differential.
    pub fn differential_vector<K: Ring>(&self) -> GradedElement<K> {
        let alg = &self.data.algebra;
        let mut out = GradedElement::zero(alg);
        for idx in 0..self.data.base_len {
            let dg = self.data.base.diff_of_gen(idx);
            if dg.is_zero() {
                continue;
            }
            let dual = GradedElement::<K>::generator(alg, self.data.dual_of[idx]);
            let lifted: GradedElement<K> = self.lift(dg);
            out = out.add(&lifted.mul(&dual).expect("same algebra"));
        }
        out
    }

    /// DGLA differential `[delta_vec, -]`.
    pub fn differential<K: Ring>(
        &self,
        x: &GradedElement<K>,
    ) -> Result<GradedElement<K>, PolError> {
        self.schouten(&self.differential_vector(), x)
    }

    /// Schouten–Nijenhuis bracket; graded antisymmetric for the shifted
    /// grading, a biderivation in each slot, `[v, g] = v(g)` on a vector
    /// and a function.
    pub fn schouten<K: Ring>(
        &self,
        a: &GradedElement<K>,
        b: &GradedElement<K>,
    ) -> Result<GradedElement<K>, PolError> {
        let alg = &self.data.algebra;
        let mut out = GradedElement::zero(alg);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let br = self.bracket_mono(ma, mb);
                let scaled: GradedElement<K> = br.convert(|cc| K::from_rat(cc).mul(ca).mul(cb));
                out = out.add(&scaled);
            }
        }
        let base_gens: Vec<usize> = (0..self.data.base_len).collect();
        let found = out.max_exponent_in(&base_gens);
        if found > self.data.max_base_degree {
            return Err(PolError::WindowOverflow {
                found,
                max: self.data.max_base_degree,
            });
        }
        Ok(out)
    }

    fn mono_eps_parity(&self, m: &Monomial) -> bool {
        (m.degree(&self.data.algebra) + self.data.shift + 1).rem_euclid(2) == 1
    }

    /// Bracket of two monomials, over ℚ.
    fn bracket_mono(&self, a: &Monomial, b: &Monomial) -> GradedElement<Rat> {
        let alg = &self.data.algebra;
        let zero = GradedElement::zero(alg);
        let Some((xa, rest_a)) = a.split_first() else {
            return zero;
        };
        if rest_a.is_unit() {
            // a is a single atom
            let Some((xb, rest_b)) = b.split_first() else {
                return zero;
            };
            if rest_b.is_unit() {
                return self.bracket_atoms(xa, xb);
            }
            // [x, y.rest] = [x,y].rest + (-1)^{eps(x)|y|} y.[x, rest]
            let x_mono = Monomial::gen(xa);
            let y_mono = Monomial::gen(xb);
            let term1 = self
                .bracket_atoms(xa, xb)
                .mul(&GradedElement::from_monomial(
                    alg,
                    rest_b.clone(),
                    Rat::one(),
                ))
                .expect("same algebra");
            let mut term2 = GradedElement::from_monomial(alg, y_mono, Rat::one())
                .mul(&self.bracket_mono(&x_mono, &rest_b))
                .expect("same algebra");
            let eps_x = self.mono_eps_parity(&x_mono);
            let par_y = alg.gen(xb).is_odd();
            if eps_x && par_y {
                term2 = term2.neg();
            }
            term1.add(&term2)
        } else {
            // [x.rest, b] = x.[rest, b] + (-1)^{|rest| eps(b)} [x, b].rest
            let x_mono = Monomial::gen(xa);
            let term1 = GradedElement::from_monomial(alg, x_mono.clone(), Rat::one())
                .mul(&self.bracket_mono(&rest_a, b))
                .expect("same algebra");
            let mut term2 = self
                .bracket_mono(&x_mono, b)
                .mul(&GradedElement::from_monomial(
                    alg,
                    rest_a.clone(),
                    Rat::one(),
                ))
                .expect("same algebra");
            let par_rest = rest_a.parity(alg);
            let eps_b = self.mono_eps_parity(b);
            if par_rest && eps_b {
                term2 = term2.neg();
            }
            term1.add(&term2)
        }
    }

    fn bracket_atoms(&self, x: usize, y: usize) -> GradedElement<Rat> {
        let alg = &self.data.algebra;
        if self.is_dual(x) && !self.is_dual(y) {
            if self.base_of_dual(x) == y {
                return GradedElement::one(alg);
            }
        } else if !self.is_dual(x) && self.is_dual(y) && self.base_of_dual(y) == x {
            // [g, xi_g] = -(-1)^{eps(g) eps(xi_g)}
            let eps_g = self.mono_eps_parity(&Monomial::gen(x));
            let eps_xi = self.mono_eps_parity(&Monomial::gen(y));
            let sign = if eps_g && eps_xi { 1 } else { -1 };
            return GradedElement::from_monomial(alg, Monomial::unit(), Rat::from_int(sign));
        }
        GradedElement::zero(alg)
    }

    /// Largest p with the whole element inside `F^p = prod_{m >= p-1} W_m`.
    pub fn filtration_level<K: Ring>(&self, x: &GradedElement<K>) -> Option<i64> {
        self.weight_split(x).keys().next().map(|w| w + 1)
    }

    /// `F`-level of the whole DGLA (no constraint) is 0; an empty element is
    /// in every level.
    pub fn in_filtration<K: Ring>(&self, x: &GradedElement<K>, p: i64) -> bool {
        self.filtration_level(x).map_or(true, |l| l >= p)
    }

    /// Non-degeneracy of a Poisson structure: the pairing `dg -> [g, pi_2]`
    /// must be invertible over the base algebra. Odd generators span a
    /// nilpotent ideal, so invertibility reduces to the body ring, where the
    /// determinant has to be a nonzero constant.
    pub fn nondegenerate(&self, pi: &GradedElement<Rat>) -> Result<bool, PolError> {
        let alg = &self.data.algebra;
        let n = self.data.base_len;
        let pi2 = self
            .weight_split(pi)
            .remove(&1)
            .unwrap_or_else(|| GradedElement::zero(alg));
        // entries over the body ring: even degree-0 generators only
        let mut body = vec![vec![GradedElement::<Rat>::zero(alg); n]; n];
        for g in 0..n {
            let g_elt = GradedElement::<Rat>::generator(alg, g);
            let row = self.schouten(&g_elt, &pi2)?;
            for (m, c) in row.terms() {
                let mut dual = None;
                let mut base_exps = Vec::new();
                let mut odd_body = false;
                for &(gi, e) in m.exps() {
                    if self.is_dual(gi as usize) {
                        if dual.is_some() || e != 1 {
                            return Err(PolError::NonSquarePairing {
                                rows: n,
                                cols: n + 1,
                            });
                        }
                        dual = Some(self.base_of_dual(gi as usize));
                    } else {
                        if alg.gen(gi as usize).degree != 0 {
                            odd_body = true;
                        }
                        base_exps.push((gi, e));
                    }
                }
                let Some(h) = dual else {
                    return Err(PolError::NonSquarePairing {
                        rows: n,
                        cols: n + 1,
                    });
                };
                if !odd_body {
                    body[g][h].add_term(Monomial::from_exps(base_exps), c.clone());
                }
            }
        }
        // exact determinant of the commutative body matrix
        let det = body_determinant(alg, &body);
        let unit = det.num_terms() == 1 && det.terms().next().map_or(false, |(m, _)| m.is_unit());
        Ok(unit)
    }
}

/// Cofactor-expansion determinant of a matrix of commuting (even, degree-0)
/// elements.
fn body_determinant(alg: &Algebra, m: &[Vec<GradedElement<Rat>>]) -> GradedElement<Rat> {
    let n = m.len();
    if n == 0 {
        return GradedElement::one(alg);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = GradedElement::zero(alg);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GradedElement<Rat>>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        let mut term = m[0][j]
            .mul(&body_determinant(alg, &minor))
            .expect("same algebra");
        if j % 2 == 1 {
            term = term.neg();
        }
        det = det.add(&term);
    }
    det
}

#[derive(Debug, Error)]
pub enum CompatError {
    #[error(transparent)]
    Pol(#[from] PolError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcrit::CritModel;

    #[test]
    fn anchor_normalisation() {
        // [xi_y, y] = 1 and [xi_y xi_e, y] = +xi_e with the frozen convention
        let crit = CritModel::quadratic_line();
        let pol = crit.polyvectors();
        let alg = pol.algebra().clone();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let xi_y = GradedElement::<Rat>::generator(&alg, pol.dual_of(0));
        assert_eq!(pol.schouten(&xi_y, &y).unwrap(), GradedElement::one(&alg));
        let xi_e = GradedElement::<Rat>::generator(&alg, pol.dual_of(1));
        let pi = xi_y.mul(&xi_e).unwrap();
        assert_eq!(pol.schouten(&pi, &y).unwrap(), xi_e);
    }

    #[test]
    fn sigma_scales_by_weight() {
        let crit = CritModel::quadratic_line();
        let pol = crit.polyvectors();
        let alg = pol.algebra().clone();
        let y = GradedElement::<Rat>::generator(&alg, 0);
        let xi_y = GradedElement::<Rat>::generator(&alg, pol.dual_of(0));
        let xi_e = GradedElement::<Rat>::generator(&alg, pol.dual_of(1));
        let pi = xi_y.mul(&xi_e).unwrap();
        assert_eq!(pol.sigma(&pi), pi);
        assert_eq!(pol.sigma(&y), y.neg());
        // trivector scales by 2, and sigma is weightwise linear
        let tri = xi_y.mul(&pi).unwrap();
        let mixed = pi.add(&tri);
        assert_eq!(pol.sigma(&mixed), pi.add(&tri.scale_rat(&Rat::from_int(2))));
        assert_eq!(pol.filtration_level(&pi), Some(2));
        assert_eq!(pol.filtration_level(&y), Some(0));
        assert_eq!(pol.filtration_level(&pi.add(&y)), Some(0));
    }
}
