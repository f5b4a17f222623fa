use std::fmt;

use num_traits::Zero;

use super::scalar::Field;

/// Dense row-major matrix over an exact field.
///
/// A matrix represents a linear map on column vectors: an `m × n` matrix sends
/// `F^n` to `F^m`. Empty shapes (`0 × n`, `n × 0`) are ordinary values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis: one column per free variable, with a 1 in that free
    /// position and 0 in every other free position.
    pub fn kernel_basis(&self) -> Matrix<F> {
        let free = self.free_columns();
        let n = self.reduced.cols;
        let mut k = Matrix::zeros(n, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, F::one());
            for (i, &p) in self.pivots.iter().enumerate() {
                let v = self.reduced.get(i, f);
                if !v.is_zero() {
                    k.set(p, col, -v.clone());
                }
            }
        }
        k
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect(),
            cols,
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Column matrix.
    pub fn column(v: Vec<F>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = rhs.row(k);
                let orow: &mut [F] = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = o.add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix<F> {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; rhs]`.
    pub fn vstack(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[Matrix<F>]) -> Matrix<F> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Overwrites the block whose top-left corner is `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<F>) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Adds `c * b` into the block whose top-left corner is `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Matrix<F>, c: &F) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = b.get(i, j);
                if !v.is_zero() {
                    let cur = self.get(r0 + i, c0 + j).add_ref(&v.mul_ref(c));
                    self.set(r0 + i, c0 + j, cur);
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<F> {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<F> {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix<F> {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Gauss–Jordan reduction. The reduced form is unique, so the pivot
    /// heuristic only affects cost, never the result.
    pub fn rref(&self) -> Rref<F> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let best = (r..m)
                .filter(|&i| !a[i * n + c].is_zero())
                .min_by_key(|&i| (a[i * n + c].height(), i));
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..n {
                    a.swap(p * n + j, r * n + j);
                }
            }
            let inv = a[r * n + c].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..n {
                    if !a[r * n + j].is_zero() {
                        a[r * n + j] = a[r * n + j].mul_ref(&inv);
                    }
                }
            }
            let pivot_row: Vec<(usize, F)> = (c..n)
                .filter(|&j| !a[r * n + j].is_zero())
                .map(|j| (j, a[r * n + j].clone()))
                .collect();
            for i in 0..m {
                if i == r {
                    continue;
                }
                let factor = a[i * n + c].clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let idx = i * n + j;
                    a[idx] = a[idx].sub_ref(&factor.mul_ref(v));
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: Matrix { rows: m, cols: n, data: a }, pivots }
    }

    /// Rank by fraction-free (Bareiss) elimination on row-normalized data.
    pub fn rank(&self) -> usize {
        let (m, n) = (self.rows, self.cols);
        if m == 0 || n == 0 {
            return 0;
        }
        let mut a = self.data.clone();
        for row in a.chunks_mut(n) {
            F::normalize_row(row);
        }
        let mut prev = F::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let best = (r..m)
                .filter(|&i| !a[i * n + c].is_zero())
                .min_by_key(|&i| (a[i * n + c].height(), i));
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..n {
                    a.swap(p * n + j, r * n + j);
                }
            }
            let piv = a[r * n + c].clone();
            for i in r + 1..m {
                let lead = a[i * n + c].clone();
                for j in c + 1..n {
                    let x = &a[i * n + j];
                    let y = &a[r * n + j];
                    let t = match (x.is_zero(), lead.is_zero() || y.is_zero()) {
                        (true, true) => continue,
                        (false, true) => piv.mul_ref(x),
                        (true, false) => -lead.mul_ref(y),
                        (false, false) => piv.mul_ref(x).sub_ref(&lead.mul_ref(y)),
                    };
                    a[i * n + j] = if prev.is_one() { t } else { t.div_ref(&prev) };
                }
                a[i * n + c] = F::zero();
            }
            prev = piv;
            r += 1;
        }
        r
    }

    /// Basis of the kernel as columns.
    pub fn kernel(&self) -> Matrix<F> {
        self.rref().kernel_basis()
    }

    /// Basis of the image as columns: the pivot columns of `self`.
    pub fn image(&self) -> Matrix<F> {
        self.select_cols(&self.rref().pivots)
    }

    pub fn is_iso(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Some `x` with `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        self.solve_matrix(&Matrix::column(b.to_vec())).map(|x| x.col(0))
    }

    /// Some `X` with `self · X = rhs`, free variables set to zero.
    pub fn solve_matrix(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs).rref();
        if aug.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in aug.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, aug.reduced.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.rows))?;
        // A one-sided solution of a square system is two-sided only at full rank.
        (self.rows == 0 || x.mul(self) == Matrix::identity(self.rows)).then_some(x)
    }

    /// `L` with `L · self = I`; exists iff `self` has full column rank.
    pub fn left_inverse(&self) -> Option<Matrix<F>> {
        if self.rank() != self.cols {
            return None;
        }
        self.transpose()
            .solve_matrix(&Matrix::identity(self.cols))
            .map(|x| x.transpose())
    }

    /// `R` with `self · R = I`; exists iff `self` has full row rank.
    pub fn right_inverse(&self) -> Option<Matrix<F>> {
        if self.rank() != self.rows {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.rows))
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    /// Row-major text entries, the serialized form.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Field::to_text).collect())
            .collect()
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::scalar::{Fp, Rational};

    type M = Matrix<Rational>;

    #[test]
    fn rank_examples() {
        assert_eq!(M::identity(3).rank(), 3);
        assert_eq!(M::zeros(2, 5).rank(), 0);
        assert_eq!(M::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(M::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn kernel_of_row_sum() {
        let k = M::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k, M::from_i64(&[&[-1], &[1]]));
    }

    #[test]
    fn kernel_of_empty_constraint_is_everything() {
        let k = M::zeros(0, 3).kernel();
        assert_eq!(k, M::identity(3));
    }

    #[test]
    fn image_of_identity() {
        assert_eq!(M::identity(3).image(), M::identity(3));
    }

    #[test]
    fn iso_and_solve() {
        assert!(M::from_i64(&[&[2]]).is_iso());
        assert!(!M::from_i64(&[&[1, 0]]).is_iso());
        let a = M::from_i64(&[&[1, 2]]);
        let x = a.solve(&[Rational::from(3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Rational::from(3)]);
        assert!(M::from_i64(&[&[0, 0]]).solve(&[Rational::from(1)]).is_none());
    }

    #[test]
    fn one_sided_inverses() {
        let a = M::from_i64(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = a.left_inverse().unwrap();
        assert_eq!(l.mul(&a), M::identity(2));
        assert!(a.right_inverse().is_none());
        let r = a.transpose().right_inverse().unwrap();
        assert_eq!(a.transpose().mul(&r), M::identity(2));
    }

    #[test]
    fn rank_drops_mod_p() {
        let q = M::from_i64(&[&[1, 1], &[1, 3]]);
        let f2 = Matrix::<Fp<2>>::from_i64(&[&[1, 1], &[1, 3]]);
        assert_eq!(q.rank(), 2);
        assert_eq!(f2.rank(), 1);
    }

    #[test]
    fn fraction_free_rank_agrees_with_rref() {
        let a = M::from_rows(
            vec![
                vec![Rational::new(1, 2), Rational::new(2, 3), Rational::from(0)],
                vec![Rational::new(3, 4), Rational::from(1), Rational::new(-5, 7)],
                vec![Rational::new(1, 4), Rational::new(1, 3), Rational::new(5, 7)],
            ],
            3,
        );
        assert_eq!(a.rank(), a.rref().rank());
        assert_eq!(a.rank(), 2);
    }
}
