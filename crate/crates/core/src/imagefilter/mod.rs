//! Column-wise image filter: every column becomes a distribution on a cycle,
//! takes a few walk steps under a random torus coin, and is rescaled back to
//! pixel values.

mod netpbm;

pub use netpbm::{read_netpbm, write_pgm, ChannelSelect, Image};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coins::{torus_coin, Periodicity, TorusParams};
use crate::error::{Error, Result};
use crate::graphs::{build_cycle, compute_rotation_map, RotationMap};
use crate::linalg::CMatrix;
use crate::trainer::symmetric_uniform;
use crate::walker::{evolve, initial_state, measure_positions, CoinInit, CoinSchedule, PositionInit};

/// One color plane, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Channel {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::arg("empty image"));
        }
        if pixels.len() != width * height {
            return Err(Error::arg(format!("{} pixels for a {width}x{height} image", pixels.len())));
        }
        Ok(Channel { width, height, pixels })
    }

    /// Pixel at column `x`, row `y` (both 0-based).
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn column(&self, x: usize) -> Vec<u8> {
        (0..self.height).map(|y| self.get(x, y)).collect()
    }

    pub fn from_columns(height: usize, columns: &[Vec<u8>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != height) {
            return Err(Error::arg("columns must all have the image height"));
        }
        let width = columns.len();
        let pixels = (0..height).flat_map(|y| columns.iter().map(move |c| c[y])).collect();
        Channel::new(width, height, pixels)
    }
}

/// `col / sum(col)`.
pub fn column_to_pmf(col: &[u8]) -> Result<Vec<f64>> {
    let total: u64 = col.iter().map(|&c| u64::from(c)).sum();
    if total == 0 {
        return Err(Error::AllZeroColumn);
    }
    Ok(col.iter().map(|&c| c as f64 / total as f64).collect())
}

/// Torus angles used for column `column`: uniform in `[-angle_scale,
/// angle_scale]`, drawn from stream `column` of the seeded generator.
pub fn column_angles(angle_scale: f64, seed: u64, column: usize) -> [f64; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(column as u64);
    [symmetric_uniform(&mut rng, angle_scale), symmetric_uniform(&mut rng, angle_scale)]
}

fn check_args(ch: &Channel, angle_scale: f64) -> Result<()> {
    if ch.width == 0 || ch.height == 0 || ch.pixels.len() != ch.width * ch.height {
        return Err(Error::arg("empty or malformed image"));
    }
    if ch.height < 3 {
        return Err(Error::arg(format!("image height {} is below the minimum cycle length 3", ch.height)));
    }
    if !(angle_scale.is_finite() && angle_scale >= 0.0) {
        return Err(Error::arg("angle_scale must be finite and non-negative"));
    }
    Ok(())
}

fn filter_column(
    rm: &RotationMap,
    g_cycle: &crate::graphs::RegularGraph,
    col: &[u8],
    coin: &CMatrix<f64>,
    steps: usize,
) -> Result<Vec<f64>> {
    let total: u64 = col.iter().map(|&c| u64::from(c)).sum();
    if total == 0 {
        return Ok(vec![0.0; col.len()]);
    }
    let amps = column_to_pmf(col)?.into_iter().map(|p| Complex::new(p.sqrt(), 0.0)).collect();
    let s0 = initial_state(g_cycle, &PositionInit::Amplitudes(amps), &CoinInit::Fourier)?;
    let sched = CoinSchedule::single(coin.clone(), vec![], steps)?;
    let p = measure_positions(&evolve(rm, &sched, &s0)?);
    Ok(p.into_iter().map(|x| x * total as f64).collect())
}

/// Filtered columns before rounding, indexed `[column][row]`.
pub fn filter_channel_unrounded(ch: &Channel, steps: usize, angle_scale: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_args(ch, angle_scale)?;
    let g = build_cycle(ch.height)?;
    let rm = compute_rotation_map(&g)?;
    (0..ch.width)
        .into_par_iter()
        .map(|x| {
            let theta = column_angles(angle_scale, seed, x).to_vec();
            let coin = torus_coin(&TorusParams::new(theta, Periodicity::TwoPi)?);
            filter_column(&rm, &g, &ch.column(x), &coin, steps)
        })
        .collect()
}

/// Round half up and clip to `[0, 255]`.
pub fn quantize(x: f64) -> u8 {
    (x + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn filter_channel(ch: &Channel, steps: usize, angle_scale: f64, seed: u64) -> Result<Channel> {
    let cols = filter_channel_unrounded(ch, steps, angle_scale, seed)?;
    let cols: Vec<Vec<u8>> = cols.iter().map(|c| c.iter().map(|&x| quantize(x)).collect()).collect();
    Channel::from_columns(ch.height, &cols)
}
