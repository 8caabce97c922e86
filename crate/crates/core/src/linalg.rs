//! Small dense complex matrices.
//!
//! Coins are `d x d` with `d` the graph degree, so everything here is written
//! for clarity over raw speed. The walk itself never materializes the
//! `d|V| x d|V|` operator; see [`crate::walker`].

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::arg("ragged rows"));
        }
        Ok(CMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
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

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Entrywise `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * s).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(Complex::zero(), |acc, (&a, &x)| acc + a * x)).collect()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns real eigenvalues (unsorted) and a unitary matrix
    /// whose columns are the matching eigenvectors, so `A = Q diag(w) Q*`.
    ///
    /// Only the Hermitian part of `self` is used.
    pub fn hermitian_eigen(&self) -> (Vec<T>, CMatrix<T>) {
        assert!(self.is_square(), "eigendecomposition needs a square matrix");
        let n = self.rows;
        let half = T::lit(0.5);
        let mut a = Self::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * half);
        let mut q = Self::identity(n);

        let scale = a.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let tiny = T::epsilon() * T::epsilon() * scale.max(T::min_positive_value());

        for _sweep in 0..64 {
            let off: T =
                (0..n).flat_map(|p| ((p + 1)..n).map(move |qq| (p, qq))).map(|(p, qq)| a[(p, qq)].norm_sqr()).sum();
            if off.sqrt() <= T::epsilon() * scale * T::lit(0.01) || off.sqrt() <= tiny {
                break;
            }
            for p in 0..n {
                for qq in (p + 1)..n {
                    rotate(&mut a, &mut q, p, qq);
                }
            }
        }
        let w = (0..n).map(|i| a[(i, i)].re).collect();
        (w, q)
    }
}

/// One Jacobi rotation annihilating `a[p][q]`.
///
/// The phase of `a[p][q]` is first absorbed into column `q` so the pivot is
/// real, then a real symmetric rotation is applied. The combined transform on
/// the `(p, q)` plane is `G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]`.
fn rotate<T: Real>(a: &mut CMatrix<T>, q_acc: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let n = a.rows;
    let phase = (apq / r).conj(); // e^{-i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
        sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();

    for k in 0..n {
        let qkp = q_acc[(k, p)];
        let qkq = q_acc[(k, q)];
        q_acc[(k, p)] = qkp * g_pp + qkq * g_qp;
        q_acc[(k, q)] = qkp * g_pq + qkq * g_qq;
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a, T: Real> Mul<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &'a CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}
