use std::collections::BTreeMap;

use super::PolySpec;
use crate::scalars::{cohomology_dims, Matrix, PolyQ, Rat, RatFunc, Ring};

/// Dimensions of twisted de Rham cohomology at a cutoff, together with the
/// cutoff+1 recomputation used for the stabilisation rule.
#[derive(Clone, Debug)]
pub struct TwistedDerhamReport {
    pub dims: Vec<usize>,
    pub dims_next: Vec<usize>,
    pub stabilized: bool,
    pub cutoff: u32,
}

fn monomials_up_to(m: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; m]];
    for i in 0..m {
        let mut extended = Vec::new();
        for mono in &out {
            let used: u32 = mono.iter().sum();
            for e in 1..=(max_deg - used) {
                let mut next = mono.clone();
                next[i] = e;
                extended.push(next);
            }
        }
        out.extend(extended);
    }
    out.sort();
    out
}

fn poly_terms(spec: &PolySpec) -> Vec<(Vec<u32>, Rat)> {
    spec.iter().filter(|(_, c)| !c.is_zero()).cloned().collect()
}

fn spec_degree(spec: &PolySpec) -> Option<u32> {
    poly_terms(spec).iter().map(|(e, _)| e.iter().sum()).max()
}

/// Degree headroom for the saturated image computation: zero when every
/// partial derivative is homogeneous of the same degree, and the degree
/// spread of the partials otherwise. Cross-degree cancellations deeper than
/// this are left to the cutoff-stabilisation guard.
fn source_headroom(m: usize, f: &[(Vec<u32>, Rat)]) -> i64 {
    let mut max_deg: i64 = -1;
    let mut min_deg: i64 = i64::MAX;
    for i in 0..m {
        for (fe, _) in f {
            if fe[i] == 0 {
                continue;
            }
            let d = fe.iter().sum::<u32>() as i64 - 1;
            max_deg = max_deg.max(d);
            min_deg = min_deg.min(d);
        }
    }
    if max_deg < 0 {
        0
    } else {
        max_deg - min_deg
    }
}

/// Subsets of coordinates as sorted index lists, grouped by size.
fn subsets(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m + 1];
    for mask in 0u32..(1 << m) {
        let set: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        by_size[set.len()].push(set);
    }
    for group in by_size.iter_mut() {
        group.sort();
    }
    by_size
}

struct FormBasis {
    index: BTreeMap<(Vec<u32>, Vec<usize>), usize>,
    basis: Vec<(Vec<u32>, Vec<usize>)>,
}

fn form_basis(m: usize, p: usize, max_deg: i64, sets: &[Vec<Vec<usize>>]) -> FormBasis {
    let mut index = BTreeMap::new();
    let mut basis = Vec::new();
    if max_deg >= 0 {
        for mono in monomials_up_to(m, max_deg as u32) {
            for set in &sets[p] {
                index.insert((mono.clone(), set.clone()), basis.len());
                basis.push((mono.clone(), set.clone()));
            }
        }
    }
    FormBasis { index, basis }
}

/// Sign of inserting `dy_i` in front of `dy_S`; `None` if `i` is in `S`.
fn wedge_sign(i: usize, set: &[usize]) -> Option<(Vec<usize>, i64)> {
    if set.contains(&i) {
        return None;
    }
    let pos = set.iter().position(|&j| j > i).unwrap_or(set.len());
    let mut out = set.to_vec();
    out.insert(pos, i);
    Some((out, if pos % 2 == 0 { 1 } else { -1 }))
}

/// Matrix of `d + h^{-1} df` from p-forms of coefficient degree `<= src_deg`
/// to (p+1)-forms of coefficient degree `<= dst_deg`, together with the
/// coefficient degree of each target row. The target bound must contain
/// every image, so no component is clipped.
fn twisted_matrix(
    m: usize,
    f: &[(Vec<u32>, Rat)],
    p: usize,
    src_deg: i64,
    dst_deg: i64,
    sets: &[Vec<Vec<usize>>],
) -> (Matrix<RatFunc>, Vec<i64>) {
    let src = form_basis(m, p, src_deg, sets);
    let dst = form_basis(m, p + 1, dst_deg, sets);
    let row_degrees: Vec<i64> = dst
        .basis
        .iter()
        .map(|(mono, _)| mono.iter().sum::<u32>() as i64)
        .collect();
    let mut mat = Matrix::<RatFunc>::zero(dst.basis.len(), src.basis.len());
    let h_inv = RatFunc::new(PolyQ::one(), PolyQ::hbar());
    for (col, (mono, set)) in src.basis.iter().enumerate() {
        // exterior derivative of the coefficient
        for i in 0..m {
            if mono[i] == 0 {
                continue;
            }
            let Some((new_set, sign)) = wedge_sign(i, set) else {
                continue;
            };
            let mut new_mono = mono.clone();
            new_mono[i] -= 1;
            if let Some(&row) = dst.index.get(&(new_mono, new_set)) {
                let c = RatFunc::from_rat(&Rat::from_int(mono[i] as i64 * sign));
                let prev = mat.get(row, col).add(&c);
                mat.set(row, col, prev);
            }
        }
        // h^{-1} df wedge
        for (fe, fc) in f {
            for i in 0..m {
                if fe[i] == 0 {
                    continue;
                }
                let Some((new_set, sign)) = wedge_sign(i, set) else {
                    continue;
                };
                let mut new_mono = mono.clone();
                let coeff = fc.mul(&Rat::from_int(fe[i] as i64 * sign));
                for j in 0..m {
                    new_mono[j] += fe[j];
                }
                new_mono[i] -= 1;
                if let Some(&row) = dst.index.get(&(new_mono, new_set)) {
                    let c = RatFunc::from_rat(&coeff).mul(&h_inv);
                    let prev = mat.get(row, col).add(&c);
                    mat.set(row, col, prev);
                }
            }
        }
    }
    (mat, row_degrees)
}

/// Splits the rows of a matrix by a predicate on the row index.
fn restrict_rows<K: Ring>(mat: &Matrix<K>, keep: impl Fn(usize) -> bool) -> Matrix<K> {
    let rows: Vec<Vec<K>> = (0..mat.rows())
        .filter(|&r| keep(r))
        .map(|r| (0..mat.cols()).map(|c| mat.get(r, c).clone()).collect())
        .collect();
    if rows.is_empty() {
        Matrix::zero(0, mat.cols())
    } else {
        Matrix::from_rows(rows)
    }
}

fn twisted_dims_at(m: usize, f: &[(Vec<u32>, Rat)], f_deg: Option<u32>, cutoff: i64) -> Vec<usize> {
    let sets = subsets(m);
    let shrink: i64 = match f_deg {
        Some(d) if d >= 1 => d as i64 - 1,
        _ => -1,
    };
    let headroom = source_headroom(m, f);
    let mut dims = Vec::with_capacity(m + 1);
    for p in 0..=m {
        let space = form_basis(m, p, cutoff, &sets).basis.len();
        // dim ker on the window: the target box contains every image, so
        // the rank is that of the honest restriction
        let rank_out = if p < m {
            let (mat, _) = twisted_matrix(m, f, p, cutoff, cutoff + shrink.max(1), &sets);
            mat.rank()
        } else {
            0
        };
        // dim (im cap window), saturated: sources run a headroom above the
        // window and the part of the image escaping the window is quotiented
        // out by the two-rank formula rank(full) - rank(above-window rows)
        let rank_in = if p > 0 {
            // the d-part lowers degree by one, so sources reach one above
            // the window even before any potential-degree spread
            let src_deg = cutoff + headroom.max(1);
            let (mat, row_degrees) =
                twisted_matrix(m, f, p - 1, src_deg, src_deg + shrink.max(1), &sets);
            let high = restrict_rows(&mat, |r| row_degrees[r] > cutoff);
            mat.rank() - high.rank()
        } else {
            0
        };
        dims.push(space - rank_out - rank_in);
    }
    dims
}

/// Cohomology of `(polynomial forms, d + h^{-1} df)` over ℚ(h), computed at
/// a cutoff and at cutoff+1; the result is trusted only when both agree.
pub fn twisted_derham_cohomology(m: usize, spec: &PolySpec, cutoff: u32) -> TwistedDerhamReport {
    let f = poly_terms(spec);
    let f_deg = spec_degree(spec);
    let dims = twisted_dims_at(m, &f, f_deg, cutoff as i64);
    let dims_next = twisted_dims_at(m, &f, f_deg, cutoff as i64 + 1);
    let stabilized = dims == dims_next;
    TwistedDerhamReport {
        dims,
        dims_next,
        stabilized,
        cutoff,
    }
}

fn koszul_incoming_matrix(
    m: usize,
    f: &[(Vec<u32>, Rat)],
    src_deg: i64,
    dst_deg: i64,
) -> (Matrix<Rat>, Vec<i64>) {
    let monos = if dst_deg >= 0 {
        monomials_up_to(m, dst_deg as u32)
    } else {
        Vec::new()
    };
    let idx: BTreeMap<Vec<u32>, usize> = monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let src = if src_deg >= 0 {
        monomials_up_to(m, src_deg as u32)
    } else {
        Vec::new()
    };
    let row_degrees: Vec<i64> = monos.iter().map(|v| v.iter().sum::<u32>() as i64).collect();
    let mut mat = Matrix::<Rat>::zero(monos.len(), src.len() * m);
    for (k, mono) in src.iter().enumerate() {
        for i in 0..m {
            let col = k * m + i;
            // delta(eta_i y^mono) = (df/dy_i) y^mono
            for (fe, fc) in f {
                if fe[i] == 0 {
                    continue;
                }
                let mut target = mono.clone();
                for j in 0..m {
                    target[j] += fe[j];
                }
                target[i] -= 1;
                if let Some(&row) = idx.get(&target) {
                    let add = fc.mul(&Rat::from_int(fe[i] as i64));
                    let prev = mat.get(row, col).add(&add);
                    mat.set(row, col, prev);
                }
            }
        }
    }
    (mat, row_degrees)
}

/// `H^0` of the Koszul CDGA at a cutoff: the Jacobian ring dimension for
/// isolated singularities. The incoming image is saturated by the same
/// two-rank formula as the twisted complex.
pub fn koszul_h0(m: usize, spec: &PolySpec, cutoff: u32) -> (usize, bool) {
    let f = poly_terms(spec);
    let f_deg = spec_degree(spec);
    let headroom = source_headroom(m, &f);
    let shrink: i64 = match f_deg {
        Some(d) if d >= 1 => d as i64 - 1,
        _ => -1,
    };
    let dim_at = |c: i64| -> usize {
        let space = monomials_up_to(m, c.max(0) as u32).len();
        let src_deg = c + headroom.max(1);
        let (mat, row_degrees) = koszul_incoming_matrix(m, &f, src_deg, src_deg + shrink.max(0));
        let high = restrict_rows(&mat, |r| row_degrees[r] > c);
        space - (mat.rank() - high.rank())
    };
    let d0 = dim_at(cutoff as i64);
    let d1 = dim_at(cutoff as i64 + 1);
    (d0, d0 == d1)
}

/// Independent elimination route for the same dimension: the boxed Koszul
/// complex in degrees -1, 0 fed through the generic complex machinery. The
/// boxes are only faithful when every partial derivative has one degree, so
/// this is the oracle path for the quasi-homogeneous samples.
pub fn koszul_h0_boxed(m: usize, spec: &PolySpec, cutoff: u32) -> (usize, bool) {
    let f = poly_terms(spec);
    let f_deg = spec_degree(spec);
    let shrink: i64 = match f_deg {
        Some(d) if d >= 1 => d as i64 - 1,
        _ => -1,
    };
    let dim_at = |c: i64| -> usize {
        let monos = monomials_up_to(m, c.max(0) as u32);
        let (mat, _) = koszul_incoming_matrix(m, &f, c - shrink, c);
        let zero_out = Matrix::<Rat>::zero(1, monos.len());
        match cohomology_dims(&[mat, zero_out]) {
            Ok(v) => v[1],
            Err(_) => usize::MAX,
        }
    };
    let d0 = dim_at(cutoff as i64);
    let d1 = dim_at(cutoff as i64 + 1);
    (d0, d0 == d1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poincare_lemma_for_zero_potential() {
        let report = twisted_derham_cohomology(1, &Vec::new(), 6);
        assert!(report.stabilized);
        assert_eq!(report.dims, vec![1, 0]);
    }

    #[test]
    fn quadratic_potential_line() {
        let spec = vec![(vec![2], Rat::new(1, 2))];
        let report = twisted_derham_cohomology(1, &spec, 6);
        assert!(report.stabilized);
        assert_eq!(report.dims, vec![0, 1]);
    }

    #[test]
    fn cubic_potential_line() {
        let spec = vec![(vec![3], Rat::new(1, 3))];
        let report = twisted_derham_cohomology(1, &spec, 8);
        assert!(report.stabilized);
        assert_eq!(report.dims, vec![0, 2]);
    }

    #[test]
    fn koszul_h0_matches_milnor_numbers() {
        let (d, stable) = koszul_h0(1, &vec![(vec![2], Rat::one())], 5);
        assert!(stable);
        assert_eq!(d, 1);
        let (d, stable) = koszul_h0(1, &vec![(vec![3], Rat::one())], 6);
        assert!(stable);
        assert_eq!(d, 2);
        let (d, stable) = koszul_h0(
            2,
            &vec![(vec![2, 0], Rat::one()), (vec![0, 2], Rat::one())],
            5,
        );
        assert!(stable);
        assert_eq!(d, 1);
    }

    #[test]
    fn boxed_route_agrees_on_quasi_homogeneous_samples() {
        for (m, spec) in [
            (1usize, vec![(vec![2], Rat::one())]),
            (1, vec![(vec![3], Rat::one())]),
            (2, vec![(vec![2, 0], Rat::one()), (vec![0, 2], Rat::one())]),
        ] {
            assert_eq!(koszul_h0(m, &spec, 6), koszul_h0_boxed(m, &spec, 6));
        }
    }

    #[test]
    fn cusp_has_milnor_number_two() {
        // f = y1^3 + y2^2: partials of mixed degrees 2 and 1; the Jacobian
        // ring Q[y]/(y1^2, y2) has basis {1, y1}
        let spec = vec![(vec![3, 0], Rat::one()), (vec![0, 2], Rat::one())];
        let (d, stable) = koszul_h0(2, &spec, 6);
        assert!(stable);
        assert_eq!(d, 2);
        let report = twisted_derham_cohomology(2, &spec, 6);
        assert!(
            report.stabilized,
            "{:?} vs {:?}",
            report.dims, report.dims_next
        );
        assert_eq!(report.dims, vec![0, 0, 2]);
    }

    #[test]
    fn node_with_linear_term_is_smooth() {
        // f = t^2 + t has a single nondegenerate critical point at -1/2
        let spec = vec![(vec![2], Rat::one()), (vec![1], Rat::one())];
        let (d, stable) = koszul_h0(1, &spec, 6);
        assert!(stable);
        assert_eq!(d, 1);
        let report = twisted_derham_cohomology(1, &spec, 6);
        assert!(report.stabilized);
        assert_eq!(report.dims, vec![0, 1]);
    }
}
