//! Dense exact linear algebra: rank, kernels, solving and incremental
//! echelon bases.
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! results are deterministic.

use std::fmt;

use crate::field::Field;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share the given width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &F {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: F) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[F] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Submatrix keeping the listed columns in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn is_zero_column(&self, col: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, col).is_zero())
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, vector: &[F]) -> Vec<F> {
        assert_eq!(vector.len(), self.rows);
        let mut out = vec![F::zero(); self.cols];
        for (r, coeff) in vector.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let entry = self.get(r, c);
                if !entry.is_zero() {
                    *slot = slot.clone() + coeff.clone() * entry.clone();
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn right_mul(&self, vector: &[F]) -> Vec<F> {
        assert_eq!(vector.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(vector)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> RowEchelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = m.get(pivot_row, col).inverse().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(pivot_row, c).clone();
                if !v.is_zero() {
                    m.set(pivot_row, c, v * inv.clone());
                }
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let p = m.get(pivot_row, c).clone();
                    if !p.is_zero() {
                        let v = m.get(r, c).clone() - factor.clone() * p;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        RowEchelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().pivots.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn right_kernel_basis(&self) -> Vec<Vec<F>> {
        let echelon = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &col) in echelon.pivots.iter().enumerate() {
            is_pivot[col] = Some(row);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &col) in echelon.pivots.iter().enumerate() {
                    let entry = echelon.matrix.get(row, free);
                    if !entry.is_zero() {
                        v[col] = -entry.clone();
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of `{c : c M = 0}`; empty iff the rows are independent.
    pub fn left_kernel_basis(&self) -> Vec<Vec<F>> {
        self.transpose().right_kernel_basis()
    }

    /// Some `c` with `c M = target`, if one exists.
    pub fn solve_left(&self, target: &[F]) -> Option<Vec<F>> {
        assert_eq!(target.len(), self.cols);
        // Solve M^T c^T = target^T through the augmented system.
        let t = self.transpose();
        let mut aug = Matrix::zeros(t.rows, t.cols + 1);
        for (r, value) in target.iter().enumerate() {
            for c in 0..t.cols {
                aug.set(r, c, t.get(r, c).clone());
            }
            aug.set(r, t.cols, value.clone());
        }
        let echelon = aug.rref();
        if echelon.pivots.last() == Some(&t.cols) {
            return None;
        }
        let mut solution = vec![F::zero(); self.rows];
        for (row, &col) in echelon.pivots.iter().enumerate() {
            solution[col] = echelon.matrix.get(row, t.cols).clone();
        }
        Some(solution)
    }

    /// A row combination `c` whose image `c M` is nonzero and vanishes
    /// outside `support`, or `None` when no such combination exists.
    ///
    /// Such a `c` exists iff deleting the columns in `support` lowers the rank.
    pub fn solve_in_row_space(&self, support: &[usize]) -> Option<Vec<F>> {
        let mut inside = vec![false; self.cols];
        for &c in support {
            assert!(c < self.cols, "support index {c} out of range");
            inside[c] = true;
        }
        let complement: Vec<usize> = (0..self.cols).filter(|&c| !inside[c]).collect();
        let restricted = self.select_columns(&complement);
        restricted
            .left_kernel_basis()
            .into_iter()
            .find(|c| self.left_mul(c).iter().any(|x| !x.is_zero()))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`Matrix::rref`].
#[derive(Clone)]
pub struct RowEchelon<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for RowEchelon<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowEchelon").field("matrix", &self.matrix).field("pivots", &self.pivots).finish()
    }
}

/// Outcome of inserting a vector into an [`EchelonBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion<F> {
    Independent,
    /// Coefficients `λ` over all inserted vectors (the new one last, with
    /// coefficient one) such that `Σ λ_j v_j = 0`. Empty when tracking is off.
    Dependent(Vec<F>),
}

#[derive(Clone, Debug)]
struct EchelonRow<F> {
    pivot: usize,
    vector: Vec<F>,
    combination: Vec<F>,
}

/// Incrementally maintained echelon basis of a growing list of vectors.
///
/// Independent insertions are kept and can be undone with
/// [`EchelonBasis::truncate`]; dependent insertions leave the basis untouched.
/// With tracking enabled every stored row remembers how it is combined from
/// the independent vectors inserted so far, which yields explicit dependency
/// coefficients.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    track: bool,
    rows: Vec<EchelonRow<F>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize, track: bool) -> Self {
        EchelonBasis { dim, track, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn truncate(&mut self, rank: usize) {
        self.rows.truncate(rank);
    }

    pub fn insert(&mut self, vector: &[F]) -> Insertion<F> {
        assert_eq!(vector.len(), self.dim);
        let n = self.rows.len();
        let mut w = vector.to_vec();
        let mut combo = if self.track {
            let mut c = vec![F::zero(); n + 1];
            c[n] = F::one();
            c
        } else {
            Vec::new()
        };
        for row in &self.rows {
            let factor = w[row.pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (slot, x) in w.iter_mut().zip(&row.vector).skip(row.pivot) {
                if !x.is_zero() {
                    *slot = slot.clone() - factor.clone() * x.clone();
                }
            }
            if self.track {
                for (slot, x) in combo.iter_mut().zip(&row.combination) {
                    if !x.is_zero() {
                        *slot = slot.clone() - factor.clone() * x.clone();
                    }
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => Insertion::Dependent(combo),
            Some(pivot) => {
                let inv = w[pivot].inverse().expect("nonzero pivot");
                for x in w.iter_mut().skip(pivot) {
                    if !x.is_zero() {
                        *x = x.clone() * inv.clone();
                    }
                }
                for x in combo.iter_mut() {
                    if !x.is_zero() {
                        *x = x.clone() * inv.clone();
                    }
                }
                self.rows.push(EchelonRow { pivot, vector: w, combination: combo });
                Insertion::Independent
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Q>::zeros(0, 0).rank(), 0);
        assert_eq!(Matrix::<Q>::identity(3).rank(), 3);
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1, 1, 0, 0], &[0, 1, 1, 1, 0], &[0, 0, 1, 1, 1]]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn left_kernel_examples() {
        assert!(Matrix::<Q>::identity(2).left_kernel_basis().is_empty());
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let basis = m.left_kernel_basis();
        assert_eq!(basis.len(), 1);
        let c = &basis[0];
        assert_eq!(c[0].clone() + c[1].clone(), q(0));
        assert!(!c[0].is_zero());
    }

    #[test]
    fn principal_restriction_has_one_dimensional_kernel() {
        // Columns (4,0), (2,2), (1,3) of the principal-ideal matrix, as rows
        // of p-forms: left kernel of the 3x3 transpose.
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1, 1, 0, 0], &[0, 1, 1, 1, 0], &[0, 0, 1, 1, 1]]);
        let restricted = m.select_columns(&[0, 2, 3]).transpose();
        assert_eq!(restricted.rank(), 2);
        assert_eq!(restricted.left_kernel_basis().len(), 1);
    }

    #[test]
    fn solve_in_row_space_examples() {
        let id = Matrix::<Q>::identity(3);
        assert!(id.solve_in_row_space(&[]).is_none());
        assert!(id.solve_in_row_space(&[0, 1, 2]).is_some());
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1, 1, 0, 0], &[0, 1, 1, 1, 0], &[0, 0, 1, 1, 1]]);
        let c = m.solve_in_row_space(&[0, 3]).expect("binomial exists");
        let image = m.left_mul(&c);
        assert!(image[1].is_zero() && image[2].is_zero() && image[4].is_zero());
        assert_eq!(image[0].clone() + image[3].clone(), q(0));
        assert!(m.solve_in_row_space(&[0]).is_none());
    }

    #[test]
    fn solve_left_roundtrip() {
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1, 1, 0, 0], &[0, 1, 1, 1, 0], &[0, 0, 1, 1, 1]]);
        let target: Vec<Q> = [1, 0, 0, -1, 0].iter().map(|&x| q(x)).collect();
        let c = m.solve_left(&target).unwrap();
        assert_eq!(m.left_mul(&c), target);
        let bad: Vec<Q> = [1, 0, 0, 0, 0].iter().map(|&x| q(x)).collect();
        assert!(m.solve_left(&bad).is_none());
    }

    #[test]
    fn echelon_basis_reports_dependencies() {
        let mut basis = EchelonBasis::<Q>::new(3, true);
        let v1 = vec![q(1), q(2), q(0)];
        let v2 = vec![q(0), q(1), q(1)];
        let v3 = vec![q(2), q(5), q(1)];
        assert_eq!(basis.insert(&v1), Insertion::Independent);
        assert_eq!(basis.insert(&v2), Insertion::Independent);
        let Insertion::Dependent(lambda) = basis.insert(&v3) else { panic!("expected dependency") };
        assert_eq!(lambda.len(), 3);
        for k in 0..3 {
            let sum = lambda[0].clone() * v1[k].clone()
                + lambda[1].clone() * v2[k].clone()
                + lambda[2].clone() * v3[k].clone();
            assert!(sum.is_zero());
        }
        basis.truncate(1);
        assert_eq!(basis.insert(&v3), Insertion::Independent);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
        })
    }

    fn to_matrix<F: Field>(rows: &[Vec<i64>]) -> Matrix<F> {
        let cols = rows[0].len();
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in small_matrix()) {
            let m: Matrix<Q> = to_matrix(&rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rational_and_prime_ranks_agree(rows in small_matrix()) {
            // Entries are tiny, so no pivot can be divisible by this prime.
            let q_rank = to_matrix::<Q>(&rows).rank();
            let p_rank = to_matrix::<Fp<1_000_003>>(&rows).rank();
            prop_assert_eq!(q_rank, p_rank);
        }

        #[test]
        fn solve_in_row_space_respects_support(rows in small_matrix(), mask in 0u32..64) {
            let m: Matrix<Q> = to_matrix(&rows);
            let support: Vec<usize> = (0..m.ncols()).filter(|c| mask & (1 << c) != 0).collect();
            let complement: Vec<usize> = (0..m.ncols()).filter(|c| mask & (1 << c) == 0).collect();
            let expected = m.select_columns(&complement).rank() < m.rank();
            match m.solve_in_row_space(&support) {
                Some(c) => {
                    prop_assert!(expected);
                    let image = m.left_mul(&c);
                    prop_assert!(image.iter().any(|x| !x.is_zero()));
                    for col in complement {
                        prop_assert!(image[col].is_zero());
                    }
                }
                None => prop_assert!(!expected),
            }
        }

        #[test]
        fn kernel_vectors_annihilate(rows in small_matrix()) {
            let m: Matrix<Q> = to_matrix(&rows);
            let basis = m.left_kernel_basis();
            prop_assert_eq!(basis.len(), m.nrows() - m.rank());
            for c in basis {
                prop_assert!(m.left_mul(&c).iter().all(|x| x.is_zero()));
            }
        }
    }
}
