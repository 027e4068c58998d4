//! Dense exact matrices and Gaussian elimination.
//!
//! Elimination divides by the pivot (the field is exact, so there is no
//! rounding) and always takes the first nonzero entry in the pivot column.
//! Zero entries are skipped, which matters because most matrices built by the
//! sheaf code are sparse.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::scalar::FieldScalar;

pub type Vector = Vec<FieldScalar>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![FieldScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldScalar::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        ExactMatrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| FieldScalar::from_int(v)).collect()).collect();
        Self::from_rows(rows, cols)
    }

    /// Matrix whose columns are the given vectors of length `len`.
    pub fn from_columns(cols: &[Vector], len: usize) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &ExactMatrix) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Stacks `self` above `o`.
    pub fn vstack(&self, o: &ExactMatrix) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        ExactMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = block.get(i, j);
                if !v.is_zero() {
                    self.set(r0 + i, c0 + j, v.clone());
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.to_rows(), self.cols)
    }

    /// Rank plus a basis of the right kernel `{v : M v = 0}`.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vector>) {
        let (red, pivots) = rref(self.to_rows(), self.cols);
        let kernel = kernel_from_rref(&red, &pivots, self.cols);
        (pivots.len(), kernel)
    }

    /// Solves `M x = rhs`; `Ok(None)` when the system is inconsistent.
    pub fn solve_linear(&self, rhs: &[FieldScalar]) -> Result<Option<Vector>> {
        if rhs.len() != self.rows {
            return Err(Error::Dimension(format!("rhs has length {}, matrix has {} rows", rhs.len(), self.rows)));
        }
        let rows: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        let (red, pivots) = rref(rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![FieldScalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = red[r][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(ExactMatrix::zeros(0, 0));
        }
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { FieldScalar::one() } else { FieldScalar::zero() }));
                r
            })
            .collect();
        let (red, pivots) = rref(rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(ExactMatrix::from_rows(red.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> FieldScalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = FieldScalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return FieldScalar::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv();
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] * &inv;
                for j in c..n {
                    if a[c][j].is_zero() {
                        continue;
                    }
                    a[i][j] = &a[i][j] - &(&f * &a[c][j]);
                }
            }
        }
        det
    }

    /// Rank by fraction-free (Bareiss) elimination, scanning columns right to
    /// left and choosing the last nonzero pivot. Kept as an independent check
    /// on `rank`.
    pub fn rank_fraction_free(&self) -> usize {
        let mut a = self.to_rows();
        let m = self.rows;
        let mut prev = FieldScalar::one();
        let mut r = 0;
        for c in (0..self.cols).rev() {
            if r == m {
                break;
            }
            let Some(p) = (r..m).rev().find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let piv = a[r][c].clone();
            for i in r + 1..m {
                let lead = a[i][c].clone();
                for j in 0..self.cols {
                    let v = &(&piv * &a[i][j]) - &(&lead * &a[r][j]);
                    a[i][j] = &v / &prev;
                }
            }
            prev = piv;
            r += 1;
        }
        r
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[FieldScalar], b: &[FieldScalar]) -> FieldScalar {
    let mut acc = FieldScalar::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = &acc + &(x * y);
    }
    acc
}

/// `a -= f * b`, touching only the listed columns of `b`.
fn axpy_sub(a: &mut [FieldScalar], f: &FieldScalar, b: &[FieldScalar], support: &[usize]) {
    for &j in support {
        a[j] = &a[j] - &(f * &b[j]);
    }
}

fn support(row: &[FieldScalar], from: usize) -> Vec<usize> {
    (from..row.len()).filter(|&j| !row[j].is_zero()).collect()
}

/// Reduced row echelon form. Returns the nonzero reduced rows and their pivot columns.
pub fn rref(mut rows: Vec<Vector>, cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv();
        if !inv.is_one() {
            for j in c..cols {
                if !rows[r][j].is_zero() {
                    rows[r][j] = &rows[r][j] * &inv;
                }
            }
        }
        let sup = support(&rows[r], c);
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            axpy_sub(row, &f, prow, &sup);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank of a list of row vectors by forward elimination only.
pub fn rank_of_rows(mut rows: Vec<Vector>, cols: usize) -> usize {
    let m = rows.len();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv();
        let sup = support(&rows[r], c + 1);
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            row[c] = FieldScalar::zero();
            axpy_sub(row, &f, prow, &sup);
        }
        r += 1;
    }
    r
}

fn kernel_from_rref(red: &[Vector], pivots: &[usize], cols: usize) -> Vec<Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for f in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![FieldScalar::zero(); cols];
        v[f] = FieldScalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            if !red[r][f].is_zero() {
                v[p] = -&red[r][f];
            }
        }
        kernel.push(v);
    }
    kernel
}

/// Incrementally maintained echelon basis of a subspace of `F^cols`.
///
/// Rows are kept with pivot entry 1 and zeros in the pivot columns of all
/// later rows, so reduction is a single pass in insertion order.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` modulo the span; the result is zero iff `v` lies in it.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            let sup = support(row, *p);
            axpy_sub(&mut v, &f, row, &sup);
        }
        v
    }

    pub fn contains(&self, v: &[FieldScalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        if !inv.is_one() {
            for x in v.iter_mut().skip(p) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldScalar {
        FieldScalar::ratio(n, d)
    }

    #[test]
    fn identity_rank() {
        let (r, k) = ExactMatrix::identity(3).rank_and_kernel();
        assert_eq!(r, 3);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let (r, k) = ExactMatrix::zeros(2, 5).rank_and_kernel();
        assert_eq!(r, 0);
        assert_eq!(k.len(), 5);
    }

    #[test]
    fn symmetric_rank_one() {
        let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let (r, k) = m.rank_and_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![q(-1, 1), q(1, 1)]]);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(3, 1), q(-2, 7), q(0, 1)];
        assert_eq!(ExactMatrix::identity(3).solve_linear(&b).unwrap(), Some(b.clone()));
        assert_eq!(ExactMatrix::from_i64(&[&[2]]).solve_linear(&[q(1, 1)]).unwrap(), Some(vec![q(1, 2)]));
        assert_eq!(ExactMatrix::from_i64(&[&[1], &[1]]).solve_linear(&[q(0, 1), q(1, 1)]).unwrap(), None);
        assert!(ExactMatrix::identity(2).solve_linear(&[q(1, 1)]).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.determinant(), q(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(2));
        assert!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(vec![q(1, 1), q(2, 1), q(0, 1)]));
        assert!(b.insert(vec![q(0, 1), q(1, 1), q(1, 1)]));
        assert!(!b.insert(vec![q(1, 1), q(3, 1), q(1, 1)]));
        assert!(b.contains(&[q(2, 1), q(5, 1), q(1, 1)]));
        assert!(!b.contains(&[q(0, 1), q(0, 1), q(1, 1)]));
        assert_eq!(b.dim(), 2);
    }
}
