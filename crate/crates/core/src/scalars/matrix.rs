use std::fmt;

use thiserror::Error;

use super::{EliminationField, Field, LaurentTrunc, PolyQ, Rat, RatFunc, Ring};

/// Dense rectangular matrix over an exact scalar ring.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix entries over truncated Laurent series do not form a field; kernel computation refused")]
    LaurentNotAField,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

impl<K: Ring> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    pub fn compose(&self, other: &Self) -> Result<Self, MatrixError> {
        // self: K^b -> K^c, other: K^a -> K^b; result self . other
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = K::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.get(r, c).is_zero() {
                    return Some((r, c));
                }
            }
        }
        None
    }
}

impl<K: Field> Matrix<K> {
    /// Reduced row echelon form; returns pivot columns.
    fn rref(&self) -> (Matrix<K>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(row * m.cols + c, p * m.cols + c);
            }
            let inv = m.get(row, col).inv().unwrap();
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c).sub(&factor.mul(m.get(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space; rank-nullity holds exactly.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_row: std::collections::BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        for free in 0..self.cols {
            if pivot_row.contains_key(&free) {
                continue;
            }
            let mut v = vec![K::zero(); self.cols];
            v[free] = K::one();
            for (&pc, &pr) in &pivot_row {
                v[pc] = rref.get(pr, free).neg();
            }
            basis.push(v);
        }
        basis
    }
}

pub(super) fn gauss_rank<K: Field>(m: &Matrix<K>) -> usize {
    m.rref().1.len()
}

impl<K: EliminationField> Matrix<K> {
    pub fn rank(&self) -> usize {
        K::matrix_rank(self)
    }
}

/// Fraction-free elimination over ℚ(h): rows are cleared to polynomials and
/// each elimination step is followed by content extraction, which keeps the
/// pivot entries from exploding.
pub(super) fn rank_fraction_free(m: &Matrix<RatFunc>) -> usize {
    let mut rows: Vec<Vec<PolyQ>> = (0..m.rows())
        .map(|r| {
            // common denominator of the row
            let mut den = PolyQ::one();
            for c in 0..m.cols() {
                den = den.mul(m.get(r, c).denominator());
            }
            (0..m.cols())
                .map(|c| {
                    let e = m.get(r, c);
                    e.numerator().mul(&den.divmod(e.denominator()).0)
                })
                .collect()
        })
        .collect();
    for row in rows.iter_mut() {
        extract_content(row);
    }
    let cols = m.cols();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !Ring::is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if Ring::is_zero(&rows[r][col]) {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..cols {
                let v = rows[r][c].mul(&pivot).sub(&rows[rank][c].mul(&factor));
                rows[r][c] = v;
            }
            extract_content(&mut rows[r]);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn extract_content(row: &mut [PolyQ]) {
    let mut content = PolyQ::zero();
    for p in row.iter() {
        content = content.gcd(p);
        if content.is_one() {
            break;
        }
    }
    if content.degree().unwrap_or(0) > 0 {
        for p in row.iter_mut() {
            *p = p.divmod(&content).0;
        }
    }
    // normalise the rational scale as well
    if let Some(first) = row.iter().find(|p| !Ring::is_zero(*p)) {
        let lead = first.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            for p in row.iter_mut() {
                *p = p.scale(&inv);
            }
        }
    }
}

/// Runtime-tagged exact matrix over one of the three scalar types.
#[derive(Clone, Debug)]
pub enum ExactMatrix {
    Rat(Matrix<Rat>),
    RatFunc(Matrix<RatFunc>),
    Laurent(Matrix<LaurentTrunc>),
}

impl ExactMatrix {
    pub fn cols(&self) -> usize {
        match self {
            ExactMatrix::Rat(m) => m.cols(),
            ExactMatrix::RatFunc(m) => m.cols(),
            ExactMatrix::Laurent(m) => m.cols(),
        }
    }

    /// Kernel basis, rendered column vectors. Truncated Laurent entries are
    /// rejected: they are not a field at the truncation order.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<String>>, MatrixError> {
        match self {
            ExactMatrix::Rat(m) => Ok(render_basis(m.kernel_basis())),
            ExactMatrix::RatFunc(m) => Ok(render_basis(m.kernel_basis())),
            ExactMatrix::Laurent(_) => Err(MatrixError::LaurentNotAField),
        }
    }

    pub fn rank(&self) -> Result<usize, MatrixError> {
        match self {
            ExactMatrix::Rat(m) => Ok(m.rank()),
            ExactMatrix::RatFunc(m) => Ok(m.rank()),
            ExactMatrix::Laurent(_) => Err(MatrixError::LaurentNotAField),
        }
    }
}

fn render_basis<K: fmt::Display>(basis: Vec<Vec<K>>) -> Vec<Vec<String>> {
    basis
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.to_string()).collect())
        .collect()
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("d.d != 0 at step {step}: first nonzero entry at row {row}, column {col}")]
    NotAComplex { step: usize, row: usize, col: usize },
    #[error("differential shapes do not chain: {0}")]
    Shape(String),
}

/// Cohomology dimensions of a finite complex presented by its differentials
/// `d_0: C^0 -> C^1, ..., d_{k-1}: C^{k-1} -> C^k`.
///
/// `d.d = 0` is checked exactly before anything else is computed.
pub fn cohomology_dims<K: EliminationField>(
    differentials: &[Matrix<K>],
) -> Result<Vec<usize>, ComplexError> {
    for (i, w) in differentials.windows(2).enumerate() {
        let comp = w[1]
            .compose(&w[0])
            .map_err(|e| ComplexError::Shape(e.to_string()))?;
        if let Some((row, col)) = comp.first_nonzero() {
            return Err(ComplexError::NotAComplex { step: i, row, col });
        }
    }
    let n = differentials.len();
    let mut dims = Vec::with_capacity(n + 1);
    let ranks: Vec<usize> = differentials.iter().map(|d| d.rank()).collect();
    for i in 0..=n {
        let dim_space = if i < n {
            differentials[i].cols()
        } else {
            differentials[n - 1].rows()
        };
        let rank_out = if i < n { ranks[i] } else { 0 };
        let rank_in = if i > 0 { ranks[i - 1] } else { 0 };
        dims.push(dim_space - rank_out - rank_in);
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_matrix(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_trivial_cases() {
        let z = Matrix::<Rat>::zero(1, 1);
        assert_eq!(z.kernel_basis().len(), 1);
        let id = rat_matrix(&[&[1, 0], &[0, 1]]);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_over_ratfunc() {
        // rows normalised over Q(h): [[1, h], [1, h]] has kernel spanned by (h, -1)
        let h = RatFunc::hbar();
        let one = RatFunc::one();
        let m = Matrix::from_rows(vec![
            vec![one.clone(), h.clone()],
            vec![one.clone(), h.clone()],
        ]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        // normalised with free column set to 1: (-h, 1); check it spans (h, -1)
        let v = &basis[0];
        let scaled: Vec<RatFunc> = v.iter().map(|x| x.mul(&RatFunc::from_int(-1))).collect();
        assert_eq!(scaled[0], h);
        assert_eq!(scaled[1], RatFunc::from_int(-1));
    }

    #[test]
    fn laurent_matrices_are_rejected() {
        let m = ExactMatrix::Laurent(Matrix::<LaurentTrunc>::zero(1, 1));
        assert!(matches!(
            m.kernel_basis(),
            Err(MatrixError::LaurentNotAField)
        ));
    }

    #[test]
    fn rank_nullity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let m = Matrix::from_rows(
                (0..rows)
                    .map(|_| {
                        (0..cols)
                            .map(|_| Rat::from_int(rng.gen_range(-3..4)))
                            .collect()
                    })
                    .collect::<Vec<Vec<Rat>>>(),
            );
            assert_eq!(m.rank() + m.kernel_basis().len(), cols);
        }
    }

    #[test]
    fn cohomology_zero_and_identity_complexes() {
        let z = Matrix::<Rat>::zero(1, 1);
        assert_eq!(cohomology_dims(&[z]).unwrap(), vec![1, 1]);
        let id = rat_matrix(&[&[1]]);
        assert_eq!(cohomology_dims(&[id]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn non_complex_is_reported() {
        let d0 = rat_matrix(&[&[1]]);
        let d1 = rat_matrix(&[&[1]]);
        let err = cohomology_dims(&[d0, d1]).unwrap_err();
        assert!(matches!(
            err,
            ComplexError::NotAComplex {
                step: 0,
                row: 0,
                col: 0
            }
        ));
    }

    #[test]
    fn fraction_free_rank_matches_gauss() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let m = Matrix::from_rows(
                (0..rows)
                    .map(|_| {
                        (0..cols)
                            .map(|_| {
                                let c0 = Rat::from_int(rng.gen_range(-2..3));
                                let c1 = Rat::from_int(rng.gen_range(-2..3));
                                RatFunc::from_poly(PolyQ::from_coeffs(vec![c0, c1]))
                            })
                            .collect()
                    })
                    .collect::<Vec<Vec<RatFunc>>>(),
            );
            assert_eq!(rank_fraction_free(&m), gauss_rank(&m));
            assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }
    }
}
