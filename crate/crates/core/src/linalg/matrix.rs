use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense complex matrix in row-major order.
///
/// Operators on the truncated Hilbert space are square; rectangular shapes
/// appear as orthonormal frames (`n × r`) and their compressions.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        for (i, &x) in v.iter().enumerate() {
            self.data[i * self.cols + j] = x;
        }
    }

    /// Columns `idx` gathered into a new `rows × idx.len()` matrix.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, k| self.data[i * self.cols + idx[k]])
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diag().into_iter().sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        const B: usize = 32;
        for ib in (0..self.rows).step_by(B) {
            for jb in (0..self.cols).step_by(B) {
                for i in ib..(ib + B).min(self.rows) {
                    for j in jb..(jb + B).min(self.cols) {
                        out.data[j * self.rows + i] = self.data[i * self.cols + j];
                    }
                }
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s · other`
    pub fn axpy(&mut self, s: C64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in axpy");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// `self + s·I`
    pub fn add_identity(&self, s: C64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.data[i * self.cols + i] += s;
        }
        out
    }

    /// `diag(d) · self`
    pub fn scale_rows(&self, d: &[C64]) -> Self {
        let mut out = self.clone();
        out.scale_rows_in_place(d);
        out
    }

    pub fn scale_rows_in_place(&mut self, d: &[C64]) {
        assert_eq!(d.len(), self.rows);
        let c = self.cols;
        for (i, &s) in d.iter().enumerate() {
            for z in &mut self.data[i * c..(i + 1) * c] {
                *z *= s;
            }
        }
    }

    /// `self · diag(d)`
    pub fn scale_cols(&self, d: &[C64]) -> Self {
        let mut out = self.clone();
        out.scale_cols_in_place(d);
        out
    }

    pub fn scale_cols_in_place(&mut self, d: &[C64]) {
        assert_eq!(d.len(), self.cols);
        let c = self.cols;
        for row in self.data.chunks_mut(c) {
            for (z, &s) in row.iter_mut().zip(d) {
                *z *= s;
            }
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        gemm(self.rows, self.cols, other.cols, &self.data, self.cols as isize, 1, &other.data, other.cols as isize, 1, &mut out.data);
        out
    }

    /// `self† · other` without forming the adjoint explicitly.
    pub fn adj_mul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "shape mismatch in adj_mul");
        let conj = self.conj();
        let mut out = Self::zeros(self.cols, other.cols);
        // transpose through strides, conjugate through the copy
        gemm(self.cols, self.rows, other.cols, &conj.data, 1, self.cols as isize, &other.data, other.cols as isize, 1, &mut out.data);
        out
    }

    /// `self · other†`
    pub fn mul_adj(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "shape mismatch in mul_adj");
        let conj = other.conj();
        let mut out = Self::zeros(self.rows, other.rows);
        gemm(self.rows, self.cols, other.rows, &self.data, self.cols as isize, 1, &conj.data, 1, other.cols as isize, &mut out.data);
        out
    }

    /// `W† · self · W`, the compression onto the range of an orthonormal frame.
    pub fn compress(&self, w: &Self) -> Self {
        w.adj_mul(&self.matmul(w))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        self.data.chunks(self.cols).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self† · v`
    pub fn adj_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![ZERO; self.cols];
        for (row, &vi) in self.data.chunks(self.cols).zip(v) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * vi;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius norm of `M − M†`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Frobenius norm of `M†M − I`.
    pub fn unitary_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adj_mul(self).add_identity(-ONE).frobenius_norm()
    }

    /// Frobenius-norm test, which bounds the operator-norm test from above.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self::from_fn(n, n, |i, j| (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5)
    }

    /// `(M − M†)/(2i)`
    pub fn skew_part(&self) -> Self {
        let n = self.dim();
        Self::from_fn(n, n, |i, j| (self.data[i * n + j] - self.data[j * n + i].conj()) * C64::new(0.0, -0.5))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Integer power by repeated squaring; negative powers use the adjoint
    /// and are only meaningful for unitary matrices.
    pub fn unitary_pow(&self, m: i64) -> Self {
        let base = if m < 0 { self.adjoint() } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Self::identity(self.dim());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.matmul(&sq);
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

#[allow(clippy::too_many_arguments)]
fn gemm(m: usize, k: usize, n: usize, a: &[C64], rsa: isize, csa: isize, b: &[C64], rsb: isize, csb: isize, c: &mut [C64]) {
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        c.iter_mut().for_each(|z| *z = ZERO);
        return;
    }
    // Complex64 is repr(C) {re, im}, the same layout as [f64; 2].
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            rsa,
            csa,
            b.as_ptr() as *const [f64; 2],
            rsb,
            csb,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            n as isize,
            1,
        );
    }
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
    }

    fn sample(r: usize, c: usize, seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |i, j| C64::new((i as f64 * 0.7 + j as f64 * seed).sin(), (i as f64 * seed - j as f64).cos()))
    }

    #[test]
    fn gemm_matches_naive_products() {
        let a = sample(5, 7, 0.3);
        let b = sample(7, 4, 1.1);
        assert!(a.matmul(&b).sub(&naive(&a, &b)).max_abs() < 1e-13);
        let c = sample(5, 4, 0.9);
        assert!(a.adj_mul(&c).sub(&naive(&a.adjoint(), &c)).max_abs() < 1e-13);
        let d = sample(3, 7, 0.2);
        assert!(a.mul_adj(&d).sub(&naive(&a, &d.adjoint())).max_abs() < 1e-13);
    }

    #[test]
    fn matrix_vector_products() {
        let a = sample(6, 3, 0.4);
        let v: Vec<C64> = (0..3).map(|k| C64::new(k as f64, 1.0)).collect();
        let w: Vec<C64> = (0..6).map(|k| C64::new(1.0, -(k as f64))).collect();
        let av = a.mul_vec(&v);
        let expect = naive(&a, &ComplexMatrix::from_columns(std::slice::from_ref(&v)).unwrap());
        for i in 0..6 {
            assert!((av[i] - expect[(i, 0)]).norm() < 1e-13);
        }
        let ahw = a.adj_mul_vec(&w);
        for j in 0..3 {
            let e: C64 = (0..6).map(|i| a[(i, j)].conj() * w[i]).sum();
            assert!((ahw[j] - e).norm() < 1e-13);
        }
    }

    #[test]
    fn parts_recompose() {
        let a = sample(4, 4, 0.8);
        let re = a.hermitian_part();
        let im = a.skew_part();
        assert!(re.is_hermitian(1e-14) && im.is_hermitian(1e-14));
        let back = re.add(&im.scale(C64::new(0.0, 1.0)));
        assert!(back.sub(&a).max_abs() < 1e-14);
    }

    #[test]
    fn powers_of_a_permutation() {
        let n = 5;
        let s = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
        assert!(s.unitary_pow(5).sub(&ComplexMatrix::identity(n)).max_abs() < 1e-15);
        assert!(s.unitary_pow(-2).sub(&s.unitary_pow(3)).max_abs() < 1e-15);
    }
}
