//! Coin matrices from parameter vectors.
//!
//! Two parametrizations of `U(d)` are provided:
//!
//! * torus coins, a diagonal phase matrix conjugated by the Fourier matrix,
//!   `C = F* diag(e^{i theta_k}) F`, with `d` angles;
//! * Lie coins, `C = exp(-i sum_k alpha_k lambda_k)` over a fixed basis of
//!   `d^2 - 1` traceless Hermitian generators.

use std::io::Write;

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Angle convention for torus coins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Periodicity {
    /// Phases `e^{i theta}`, period `2 pi`.
    #[default]
    TwoPi,
    /// Phases `e^{2 pi i theta}`, period 1; natural for samples in `[0, 1)`.
    Unit,
}

impl Periodicity {
    pub fn period<T: Real>(self) -> T {
        match self {
            Periodicity::TwoPi => T::TAU(),
            Periodicity::Unit => T::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TorusParams<T> {
    pub theta: Vec<T>,
    #[serde(default)]
    pub periodicity: Periodicity,
}

impl<T: Real> TorusParams<T> {
    pub fn new(theta: Vec<T>, periodicity: Periodicity) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::arg("torus coin needs at least one angle"));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::arg("torus angles must be finite"));
        }
        Ok(TorusParams { theta, periodicity })
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LieParams<T> {
    pub alpha: Vec<T>,
}

impl<T: Real> LieParams<T> {
    pub fn new(alpha: Vec<T>) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::arg("Lie coefficients must be finite"));
        }
        Ok(LieParams { alpha })
    }
}

/// Ordered traceless Hermitian basis of `su(d)`.
///
/// Order: `E_ij + E_ji` for `i < j` (row-major), then `-i E_ij + i E_ji` in
/// the same order, then `E_ii - E_{i+1,i+1}` for `i = 1..d-1`. Not normalized
/// to any trace convention.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianBasis<T> {
    dim: usize,
    matrices: Vec<CMatrix<T>>,
}

impl<T: Real> HermitianBasis<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[CMatrix<T>] {
        &self.matrices
    }

    /// `sum_k coeffs[k] * lambda_k`.
    pub fn combine(&self, coeffs: &[T]) -> Result<CMatrix<T>> {
        if coeffs.len() != self.len() {
            return Err(Error::arg(format!(
                "expected {} coefficients for su({}), got {}",
                self.len(),
                self.dim,
                coeffs.len()
            )));
        }
        Ok(self
            .matrices
            .iter()
            .zip(coeffs)
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, (m, &a)| acc.add_scaled(m, a)))
    }
}

/// `F_{jk} = e^{2 pi i (j-1)(k-1)/d} / sqrt(d)`.
pub fn fourier_matrix<T: Real>(d: usize) -> Result<CMatrix<T>> {
    if d == 0 {
        return Err(Error::arg("Fourier matrix needs d >= 1"));
    }
    let norm = T::from_usize_lossy(d).sqrt().recip();
    let dd = T::from_usize_lossy(d);
    Ok(CMatrix::from_fn(d, d, |j, k| {
        // reduce the exponent mod d before scaling to keep the phase exact-ish
        let m = T::from_usize_lossy((j * k) % d);
        Complex::from_polar(norm, T::TAU() * m / dd)
    }))
}

/// `C = F* diag(e^{i theta_k}) F` (or `e^{2 pi i theta_k}` with unit periodicity).
pub fn torus_coin<T: Real>(p: &TorusParams<T>) -> CMatrix<T> {
    let d = p.dim();
    let f = fourier_matrix::<T>(d).expect("d >= 1 by construction");
    let scale = match p.periodicity {
        Periodicity::TwoPi => T::one(),
        Periodicity::Unit => T::TAU(),
    };
    let phases: Vec<Complex<T>> = p.theta.iter().map(|&t| Complex::from_polar(T::one(), t * scale)).collect();
    &(&f.adjoint() * &CMatrix::diagonal(&phases)) * &f
}

pub fn hermitian_basis<T: Real>(d: usize) -> Result<HermitianBasis<T>> {
    if d < 2 {
        return Err(Error::arg(format!("su(d) basis needs d >= 2, got {d}")));
    }
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| ((i + 1)..d).map(move |j| (i, j))).collect();
    let one = Complex::<T>::one();
    let i_unit = Complex::<T>::i();
    let mut matrices = Vec::with_capacity(d * d - 1);
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = one;
        m[(j, i)] = one;
        matrices.push(m);
    }
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = -i_unit;
        m[(j, i)] = i_unit;
        matrices.push(m);
    }
    for i in 0..(d - 1) {
        let mut m = CMatrix::zeros(d, d);
        m[(i, i)] = one;
        m[(i + 1, i + 1)] = -one;
        matrices.push(m);
    }
    Ok(HermitianBasis { dim: d, matrices })
}

/// `C = exp(-i H)` with `H = sum_k alpha_k lambda_k`, via `H = Q diag(w) Q*`.
pub fn lie_coin<T: Real>(p: &LieParams<T>, basis: &HermitianBasis<T>) -> Result<CMatrix<T>> {
    let h = basis.combine(&p.alpha)?;
    Ok(exp_minus_i_hermitian(&h))
}

/// `exp(-i H)` for Hermitian `H`.
pub fn exp_minus_i_hermitian<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let (w, q) = h.hermitian_eigen();
    let phases: Vec<Complex<T>> = w.iter().map(|&x| Complex::from_polar(T::one(), -x)).collect();
    &(&q * &CMatrix::diagonal(&phases)) * &q.adjoint()
}

/// Largest entry of `|M* M - I|`.
pub fn unitarity_deviation<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::arg(format!("unitarity check needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok((&m.adjoint() * m).max_abs_diff(&CMatrix::identity(m.rows())))
}

pub fn is_unitary<T: Real>(m: &CMatrix<T>, tol: T) -> Result<bool> {
    Ok(unitarity_deviation(m)? <= tol)
}

/// CSV dump with header `row,col,re,im`, 1-based indices.
pub fn write_coin_csv<T: Real, W: Write>(m: &CMatrix<T>, mut out: W) -> Result<()> {
    writeln!(out, "row,col,re,im")?;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let z = m[(r, c)];
            writeln!(out, "{},{},{:e},{:e}", r + 1, c + 1, z.re, z.im)?;
        }
    }
    Ok(())
}
