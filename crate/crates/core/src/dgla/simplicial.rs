use std::collections::BTreeMap;

use super::{Dgla, DglaError};
use crate::algebra::{Algebra, GeneratorSpec, GradedElement, Monomial, Operator};
use crate::scalars::{Rat, Ring};

/// De Rham polynomial forms on the n-simplex, presented on the free
/// coordinates `t_1..t_n` (degree 0) and `dt_1..dt_n` (degree 1) after
/// eliminating `t_0 = 1 - sum t_i`, `dt_0 = -sum dt_i`. Supported for
/// `n <= 2`.
#[derive(Clone, Debug)]
pub struct SimplicialForms {
    n: usize,
    algebra: Algebra,
    poly_cutoff: u32,
}

impl SimplicialForms {
    pub fn new(n: usize, poly_cutoff: u32) -> Self {
        assert!(n <= 2, "simplicial levels are capped at n = 2");
        let mut gens = Vec::new();
        for i in 1..=n {
            gens.push(GeneratorSpec::new(&format!("t{}", i), 0));
        }
        for i in 1..=n {
            gens.push(GeneratorSpec::new(&format!("dt{}", i), 1));
        }
        let algebra = Algebra::new(gens).expect("unique names");
        SimplicialForms {
            n,
            algebra,
            poly_cutoff,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coordinate(&self, i: usize) -> GradedElement<Rat> {
        assert!((1..=self.n).contains(&i));
        GradedElement::generator(&self.algebra, i - 1)
    }

    pub fn one(&self) -> GradedElement<Rat> {
        GradedElement::one(&self.algebra)
    }

    /// The simplicial de Rham differential `d(t_i) = dt_i`.
    pub fn d_operator(&self) -> Operator<Rat> {
        let mut op = Operator::zero(&self.algebra);
        for i in 0..self.n {
            let dt = GradedElement::generator(&self.algebra, self.n + i);
            op = op.add(
                &Operator::mul_by(&dt)
                    .compose(&Operator::derivation(&self.algebra, i))
                    .unwrap(),
            );
        }
        op
    }

    pub fn d(&self, x: &GradedElement<Rat>) -> GradedElement<Rat> {
        self.d_operator().apply(x).expect("same algebra")
    }

    /// Restriction along a map of simplices given by the pullback images of
    /// the coordinates `t_1..t_n`; `dt_i` maps to `d(image)`. An algebra
    /// morphism by construction.
    pub fn restrict(
        &self,
        target: &SimplicialForms,
        images: &[GradedElement<Rat>],
        x: &GradedElement<Rat>,
    ) -> GradedElement<Rat> {
        assert_eq!(images.len(), self.n);
        let mut out = GradedElement::zero(target.algebra());
        for (m, c) in x.terms() {
            let mut term =
                GradedElement::from_monomial(target.algebra(), Monomial::unit(), c.clone());
            for &(g, e) in m.exps() {
                let img = if (g as usize) < self.n {
                    images[g as usize].clone()
                } else {
                    target.d(&images[g as usize - self.n])
                };
                for _ in 0..e {
                    term = term.mul(&img).expect("same algebra");
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Face maps to the (n-1)-simplex: pullback images of `t_1..t_n`.
    pub fn face_images(&self, j: usize, target: &SimplicialForms) -> Vec<GradedElement<Rat>> {
        assert_eq!(target.dim() + 1, self.n);
        let zero = GradedElement::zero(target.algebra());
        let one = target.one();
        match (self.n, j) {
            (1, 0) => vec![zero],
            (1, 1) => vec![one],
            (2, 0) => {
                let v = target.coordinate(1);
                vec![one.sub(&v), v]
            }
            (2, 1) => {
                let v = target.coordinate(1);
                vec![zero, v]
            }
            (2, 2) => {
                let v = target.coordinate(1);
                vec![v, zero]
            }
            _ => panic!("face index {} out of range for n = {}", j, self.n),
        }
    }

    fn form_degree(&self, m: &Monomial) -> i64 {
        m.exps()
            .iter()
            .filter(|&&(g, _)| g as usize >= self.n)
            .map(|&(_, e)| e as i64)
            .sum()
    }

    fn poly_degree(&self, m: &Monomial) -> u32 {
        m.exps()
            .iter()
            .filter(|&&(g, _)| (g as usize) < self.n)
            .map(|&(_, e)| e)
            .sum()
    }
}

/// An element of `L (x) Omega(Delta^n)`, stored form-monomial major.
#[derive(Clone, Debug)]
pub struct TensorElement<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq> TensorElement<E> {
    pub fn new() -> Self {
        TensorElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(e: E) -> Self {
        let mut t = Self::new();
        t.terms.insert(Monomial::unit(), e);
        t
    }

    pub fn insert(&mut self, form: Monomial, e: E) {
        self.terms.insert(form, e);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }
}

impl<E: Clone + PartialEq> Default for TensorElement<E> {
    fn default() -> Self {
        Self::new()
    }
}

fn tensor_add<L: Dgla>(
    l: &L,
    a: &TensorElement<L::Elt>,
    b: &TensorElement<L::Elt>,
) -> TensorElement<L::Elt> {
    let mut out = a.terms.clone();
    for (m, e) in b.terms.iter() {
        let merged = match out.get(m) {
            Some(prev) => l.add(prev, e),
            None => e.clone(),
        };
        if l.is_zero(&merged) {
            out.remove(m);
        } else {
            out.insert(m.clone(), merged);
        }
    }
    TensorElement { terms: out }
}

fn tensor_prune<L: Dgla>(l: &L, x: &mut TensorElement<L::Elt>) {
    x.terms.retain(|_, e| !l.is_zero(e));
}

/// Total differential `delta (x) 1 + (-1)^{|e|} 1 (x) d` on the tensor DGLA.
fn tensor_differential<L: Dgla>(
    l: &L,
    forms: &SimplicialForms,
    x: &TensorElement<L::Elt>,
) -> Result<TensorElement<L::Elt>, DglaError> {
    let mut out = TensorElement::new();
    for (form, e) in x.terms.iter() {
        // delta part
        let de = l.differential(e)?;
        if !l.is_zero(&de) {
            let mut one_term = TensorElement::new();
            one_term.insert(form.clone(), de);
            out = tensor_add(l, &out, &one_term);
        }
        // form part, with the Koszul sign of moving d past e
        let dform = forms.d(&GradedElement::from_monomial(
            forms.algebra(),
            form.clone(),
            Rat::one(),
        ));
        if dform.is_zero() {
            continue;
        }
        for (deg, part) in l.degree_split(e) {
            let signed = if deg.rem_euclid(2) == 1 {
                l.neg(&part)
            } else {
                part.clone()
            };
            for (fm, fc) in dform.terms() {
                let mut one_term = TensorElement::new();
                one_term.insert(fm.clone(), l.scale_rat(&signed, fc));
                out = tensor_add(l, &out, &one_term);
            }
        }
    }
    tensor_prune(l, &mut out);
    Ok(out)
}

fn tensor_bracket<L: Dgla>(
    l: &L,
    forms: &SimplicialForms,
    a: &TensorElement<L::Elt>,
    b: &TensorElement<L::Elt>,
) -> Result<TensorElement<L::Elt>, DglaError> {
    let mut out = TensorElement::new();
    for (fa, ea) in a.terms.iter() {
        for (fb, eb) in b.terms.iter() {
            let Some((fm, fsign)) = fa.mul(fb, forms.algebra()) else {
                continue;
            };
            let omega_parity = forms.form_degree(fa).rem_euclid(2) == 1;
            for (deg_b, part_b) in l.degree_split(eb) {
                let mut br = l.bracket(ea, &part_b)?;
                let cross = omega_parity && deg_b.rem_euclid(2) == 1;
                let mut sign = fsign;
                if cross {
                    sign = -sign;
                }
                if sign < 0 {
                    br = l.neg(&br);
                }
                let mut one_term = TensorElement::new();
                one_term.insert(fm.clone(), br);
                out = tensor_add(l, &out, &one_term);
            }
        }
    }
    tensor_prune(l, &mut out);
    Ok(out)
}

/// Maurer–Cartan check in `L (x) Omega(Delta^n)`; returns the defect, empty
/// iff the element satisfies the equation. Polynomial degrees in the `t_i`
/// are bounded by the cutoff of `forms`.
pub fn simplicial_mc_check<L: Dgla>(
    l: &L,
    forms: &SimplicialForms,
    x: &TensorElement<L::Elt>,
) -> Result<(bool, TensorElement<L::Elt>), DglaError> {
    for (m, _) in x.terms() {
        let found = forms.poly_degree(m);
        if found > forms.poly_cutoff {
            return Err(DglaError::CutoffOverflow {
                found,
                max: forms.poly_cutoff,
            });
        }
    }
    let d = tensor_differential(l, forms, x)?;
    let br = tensor_bracket(l, forms, x, x)?;
    let mut half = TensorElement::new();
    for (m, e) in br.terms.iter() {
        half.insert(m.clone(), l.scale_rat(e, &Rat::new(1, 2)));
    }
    let mut defect = tensor_add(l, &d, &half);
    for (m, _) in defect.terms.clone() {
        let found = forms.poly_degree(&m);
        if found > forms.poly_cutoff {
            return Err(DglaError::CutoffOverflow {
                found,
                max: forms.poly_cutoff,
            });
        }
    }
    tensor_prune(l, &mut defect);
    Ok((defect.terms.is_empty(), defect))
}

/// Constant extension of an element along the simplex coordinates.
pub fn constant_extension<L: Dgla>(x: &L::Elt) -> TensorElement<L::Elt> {
    TensorElement::constant(x.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_d_squares_to_zero() {
        for n in 0..=2 {
            let forms = SimplicialForms::new(n, 16);
            let d = forms.d_operator();
            assert!(d.compose(&d).unwrap().is_zero());
        }
    }

    #[test]
    fn faces_commute_with_d() {
        let two = SimplicialForms::new(2, 16);
        let one = SimplicialForms::new(1, 16);
        let t1 = two.coordinate(1);
        let t2 = two.coordinate(2);
        let x = t1.mul(&t2).unwrap().add(&two.d(&t1).mul(&t2).unwrap());
        for j in 0..=2 {
            let images = two.face_images(j, &one);
            let lhs = one.d(&two.restrict(&one, &images, &x));
            let rhs = two.restrict(&one, &images, &two.d(&x));
            assert_eq!(lhs, rhs);
        }
    }
}
