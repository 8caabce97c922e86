//! Coin-position states and their evolution.
//!
//! A state lives in `H_C (x) H_P` with dimension `d |V|`. Amplitudes are
//! stored coin-major: slot `(j, v)` (both 1-based) is at index
//! `(j - 1) |V| + (v - 1)`, so each coin label owns a contiguous block.
//!
//! One walk step is `U = S C`: the coin `C_0 (x) I` acts on the `d` amplitudes
//! at each vertex, then the shift moves each label block along that label's
//! permutation. Neither operator is ever stored as a `d|V| x d|V|` matrix.

use std::io::Write;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coins::unitarity_deviation;
use crate::error::{Error, Result};
use crate::graphs::{RegularGraph, RotationMap};
use crate::linalg::CMatrix;
use crate::scalar::{coin_tolerance, unit_tolerance, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct WalkState<T> {
    degree: usize,
    num_vertices: usize,
    amplitudes: Vec<Complex<T>>,
}

/// Initial position register.
#[derive(Clone, Debug, PartialEq)]
pub enum PositionInit<T> {
    /// Basis state `|v>`, 1-based.
    Vertex(usize),
    /// Arbitrary unit vector over the vertices.
    Amplitudes(Vec<Complex<T>>),
}

/// Initial coin register.
#[derive(Clone, Debug, PartialEq)]
pub enum CoinInit<T> {
    /// `e^{2 pi i (j-1)/d} / sqrt(d)` for `j = 1..d`.
    Fourier,
    Vector(Vec<Complex<T>>),
}

impl<T: Real> WalkState<T> {
    /// Wraps a coin-major amplitude vector after checking length and norm.
    pub fn from_amplitudes(degree: usize, num_vertices: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != degree * num_vertices {
            return Err(Error::state(format!(
                "expected {} amplitudes, got {}",
                degree * num_vertices,
                amplitudes.len()
            )));
        }
        let s = WalkState { degree, num_vertices, amplitudes };
        let dev = (s.norm() - T::one()).abs();
        if !(dev <= unit_tolerance()) {
            return Err(Error::state(format!("state norm deviates from 1 by {dev:e}")));
        }
        Ok(s)
    }

    /// Basis state `|c_j> (x) |v>`, both 1-based.
    pub fn basis(degree: usize, num_vertices: usize, j: usize, v: usize) -> Result<Self> {
        if j == 0 || j > degree || v == 0 || v > num_vertices {
            return Err(Error::state(format!("basis slot ({j}, {v}) out of range")));
        }
        let mut amps = vec![Complex::zero(); degree * num_vertices];
        amps[(j - 1) * num_vertices + (v - 1)] = Complex::one();
        Ok(WalkState { degree, num_vertices, amplitudes: amps })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// Amplitude at coin label `j`, vertex `v` (1-based).
    pub fn amplitude(&self, j: usize, v: usize) -> Complex<T> {
        self.amplitudes[(j - 1) * self.num_vertices + (v - 1)]
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn renormalized(mut self) -> Self {
        let n = self.norm();
        if n > T::zero() {
            let inv = n.recip();
            self.amplitudes.iter_mut().for_each(|z| *z = *z * inv);
        }
        self
    }

    fn check_dims(&self, degree: usize, num_vertices: usize) -> Result<()> {
        if self.degree != degree || self.num_vertices != num_vertices {
            return Err(Error::state(format!(
                "state has shape d={}, |V|={} but operator expects d={degree}, |V|={num_vertices}",
                self.degree, self.num_vertices
            )));
        }
        Ok(())
    }
}

/// The Fourier coin state, normalized.
pub fn fourier_coin_state<T: Real>(d: usize) -> Vec<Complex<T>> {
    let norm = T::from_usize_lossy(d).sqrt().recip();
    let dd = T::from_usize_lossy(d);
    (0..d).map(|j| Complex::from_polar(norm, T::TAU() * T::from_usize_lossy(j) / dd)).collect()
}

fn unit_vector<T: Real>(v: &[Complex<T>], what: &str) -> Result<()> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let dev = (norm - T::one()).abs();
    if !(dev <= unit_tolerance()) {
        return Err(Error::state(format!("{what} vector norm deviates from 1 by {dev:e}")));
    }
    Ok(())
}

/// Product state `coin (x) position`.
pub fn initial_state<T: Real>(
    g: &RegularGraph,
    position: &PositionInit<T>,
    coin: &CoinInit<T>,
) -> Result<WalkState<T>> {
    let (n, d) = (g.num_vertices(), g.degree());
    let pos: Vec<Complex<T>> = match position {
        PositionInit::Vertex(v) => {
            if *v == 0 || *v > n {
                return Err(Error::state(format!("start vertex {v} outside 1..={n}")));
            }
            let mut p = vec![Complex::zero(); n];
            p[v - 1] = Complex::one();
            p
        }
        PositionInit::Amplitudes(a) => {
            if a.len() != n {
                return Err(Error::state(format!("position vector has length {}, graph has {n} vertices", a.len())));
            }
            unit_vector(a, "position")?;
            a.clone()
        }
    };
    let c: Vec<Complex<T>> = match coin {
        CoinInit::Fourier => fourier_coin_state(d),
        CoinInit::Vector(c) => {
            if c.len() != d {
                return Err(Error::state(format!("coin vector has length {}, degree is {d}", c.len())));
            }
            unit_vector(c, "coin")?;
            c.clone()
        }
    };
    let amps = c.iter().flat_map(|&cj| pos.iter().map(move |&pv| cj * pv)).collect();
    WalkState::from_amplitudes(d, n, amps)
}

/// `S |c_j, v> = |c_j, neighbor_of(v, j)>`.
pub fn shift_apply<T: Real>(rm: &RotationMap, s: &WalkState<T>) -> Result<WalkState<T>> {
    s.check_dims(rm.degree(), rm.num_vertices())?;
    let mut out = vec![Complex::zero(); s.amplitudes.len()];
    shift_into(rm, &s.amplitudes, &mut out);
    Ok(WalkState { amplitudes: out, ..*s })
}

/// `(C_0 (x) I) |psi>`. Rejects coins that are not unitary within `1e-8`.
pub fn coin_apply<T: Real>(c: &CMatrix<T>, s: &WalkState<T>) -> Result<WalkState<T>> {
    if c.rows() != s.degree || c.cols() != s.degree {
        return Err(Error::state(format!("coin is {}x{} but state degree is {}", c.rows(), c.cols(), s.degree)));
    }
    let dev = unitarity_deviation(c)?;
    if !(dev <= coin_tolerance()) {
        return Err(Error::InvalidCoin { deviation: dev.as_f64() });
    }
    let mut out = vec![Complex::zero(); s.amplitudes.len()];
    coin_into(c, s.num_vertices, &s.amplitudes, &mut out);
    Ok(WalkState { amplitudes: out, ..*s })
}

pub(crate) fn shift_into<T: Real>(rm: &RotationMap, src: &[Complex<T>], dst: &mut [Complex<T>]) {
    let n = rm.num_vertices();
    for j in 0..rm.degree() {
        let perm = rm.permutation(j);
        let (from, to) = (&src[j * n..(j + 1) * n], &mut dst[j * n..(j + 1) * n]);
        for (v, &w) in perm.iter().enumerate() {
            to[w] = from[v];
        }
    }
}

pub(crate) fn coin_into<T: Real>(c: &CMatrix<T>, n: usize, src: &[Complex<T>], dst: &mut [Complex<T>]) {
    let d = c.rows();
    for i in 0..d {
        let row = c.row(i);
        let out = &mut dst[i * n..(i + 1) * n];
        out.iter_mut().for_each(|z| *z = Complex::zero());
        for (j, &cij) in row.iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&src[j * n..(j + 1) * n]) {
                *o = *o + cij * x;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleMode {
    /// One coin reused at every step.
    #[default]
    SingleCoin,
    /// A separate coin for each step.
    PerStep,
}

/// The coins driving a walk of `steps` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinSchedule<T> {
    mode: ScheduleMode,
    coins: Vec<CMatrix<T>>,
    params: Vec<Vec<T>>,
    steps: usize,
}

impl<T: Real> CoinSchedule<T> {
    /// One coin applied `steps` times. `params` records what generated it and
    /// may be empty.
    pub fn single(coin: CMatrix<T>, params: Vec<T>, steps: usize) -> Result<Self> {
        Self::checked(ScheduleMode::SingleCoin, vec![coin], vec![params], steps)
    }

    /// One coin per step; `coins.len()` is the step count.
    pub fn per_step(coins: Vec<CMatrix<T>>, params: Vec<Vec<T>>) -> Result<Self> {
        let steps = coins.len();
        if !params.is_empty() && params.len() != steps {
            return Err(Error::arg(format!("{steps} coins but {} parameter vectors", params.len())));
        }
        Self::checked(ScheduleMode::PerStep, coins, params, steps)
    }

    fn checked(mode: ScheduleMode, coins: Vec<CMatrix<T>>, params: Vec<Vec<T>>, steps: usize) -> Result<Self> {
        let d = coins.first().map_or(0, CMatrix::rows);
        for c in &coins {
            if c.rows() != d || c.cols() != d {
                return Err(Error::arg("schedule coins must all be d x d"));
            }
            let dev = unitarity_deviation(c)?;
            if !(dev <= unit_tolerance()) {
                return Err(Error::InvalidCoin { deviation: dev.as_f64() });
            }
        }
        Ok(Self::unchecked(mode, coins, params, steps))
    }

    /// Skips the unitarity check; for coins produced by this crate's
    /// builders, which are unitary by construction.
    pub(crate) fn unchecked(mode: ScheduleMode, coins: Vec<CMatrix<T>>, params: Vec<Vec<T>>, steps: usize) -> Self {
        CoinSchedule { mode, coins, params, steps }
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn coins(&self) -> &[CMatrix<T>] {
        &self.coins
    }

    pub fn params(&self) -> &[Vec<T>] {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.coins.first().map_or(0, CMatrix::rows)
    }

    /// Coin used at 0-based step `i`.
    pub fn coin_at(&self, i: usize) -> &CMatrix<T> {
        match self.mode {
            ScheduleMode::SingleCoin => &self.coins[0],
            ScheduleMode::PerStep => &self.coins[i],
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvolveOptions {
    /// Rescale to unit norm after every step. Off by default; only useful for
    /// very long walks.
    pub renormalize: bool,
}

/// `U^t |psi_0>` with `U = S C`; step `i` uses the schedule's `i`-th coin.
pub fn evolve<T: Real>(rm: &RotationMap, sched: &CoinSchedule<T>, s0: &WalkState<T>) -> Result<WalkState<T>> {
    evolve_with(rm, sched, s0, EvolveOptions::default())
}

pub fn evolve_with<T: Real>(
    rm: &RotationMap,
    sched: &CoinSchedule<T>,
    s0: &WalkState<T>,
    opts: EvolveOptions,
) -> Result<WalkState<T>> {
    s0.check_dims(rm.degree(), rm.num_vertices())?;
    if sched.steps > 0 && sched.degree() != s0.degree {
        return Err(Error::state("schedule coin size differs from state degree"));
    }
    let mut cur = s0.amplitudes.clone();
    let mut scratch = vec![Complex::zero(); cur.len()];
    for step in 0..sched.steps {
        walk_step(rm, sched.coin_at(step), &mut cur, &mut scratch);
        if opts.renormalize {
            let norm = cur.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            let inv = norm.recip();
            cur.iter_mut().for_each(|z| *z = *z * inv);
        }
    }
    Ok(WalkState { amplitudes: cur, ..*s0 })
}

/// One `S C` step in place; `scratch` must match `cur` in length.
pub(crate) fn walk_step<T: Real>(
    rm: &RotationMap,
    coin: &CMatrix<T>,
    cur: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) {
    coin_into(coin, rm.num_vertices(), cur, scratch);
    shift_into(rm, scratch, cur);
}

/// `p_v = sum_j |psi(j, v)|^2`.
pub fn measure_positions<T: Real>(s: &WalkState<T>) -> Vec<T> {
    marginal(&s.amplitudes, s.num_vertices)
}

pub(crate) fn marginal<T: Real>(amps: &[Complex<T>], n: usize) -> Vec<T> {
    let mut p = vec![T::zero(); n];
    for block in amps.chunks_exact(n) {
        for (pv, z) in p.iter_mut().zip(block) {
            *pv = *pv + z.norm_sqr();
        }
    }
    p
}

/// CSV with header `coin_label,vertex,re,im`, 1-based labels.
pub fn write_state_csv<T: Real, W: Write>(s: &WalkState<T>, mut out: W) -> Result<()> {
    writeln!(out, "coin_label,vertex,re,im")?;
    for j in 1..=s.degree {
        for v in 1..=s.num_vertices {
            let z = s.amplitude(j, v);
            writeln!(out, "{j},{v},{:e},{:e}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// CSV with header `vertex,probability`, 1-based vertices.
pub fn write_probabilities_csv<T: Real, W: Write>(p: &[T], mut out: W) -> Result<()> {
    writeln!(out, "vertex,probability")?;
    for (i, x) in p.iter().enumerate() {
        writeln!(out, "{},{:e}", i + 1, x)?;
    }
    Ok(())
}
