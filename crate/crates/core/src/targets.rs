//! Target probability distributions over the vertex set.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Non-negative vector over vertices summing to one (within `1e-12` in `f64`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "Vec<T>", into = "Vec<T>")]
pub struct TargetDistribution<T> {
    probs: Vec<T>,
}

impl<T: Real> TargetDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::arg("target distribution is empty"));
        }
        if let Some(i) = probs.iter().position(|p| !p.is_finite() || *p < T::zero()) {
            return Err(Error::arg(format!("target entry {} is negative or non-finite", i + 1)));
        }
        let sum: T = probs.iter().copied().sum();
        let tol = T::lit(1e-12).max(T::epsilon() * T::from_usize_lossy(probs.len()) * T::lit(4.0));
        if (sum - T::one()).abs() > tol {
            return Err(Error::arg(format!("target sums to {sum}, not 1")));
        }
        Ok(TargetDistribution { probs })
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(weights: Vec<T>) -> Result<Self> {
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::arg("weights must have a positive finite sum"));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl<T: Real> TryFrom<Vec<T>> for TargetDistribution<T> {
    type Error = Error;

    fn try_from(v: Vec<T>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T> From<TargetDistribution<T>> for Vec<T> {
    fn from(t: TargetDistribution<T>) -> Vec<T> {
        t.probs
    }
}

/// All mass on 1-based vertex `v`.
pub fn delta_target<T: Real>(n: usize, v: usize) -> Result<TargetDistribution<T>> {
    if v == 0 || v > n {
        return Err(Error::arg(format!("vertex {v} outside 1..={n}")));
    }
    let mut p = vec![T::zero(); n];
    p[v - 1] = T::one();
    TargetDistribution::new(p)
}

/// `pi_x ∝ exp(-(x - center)^2 / (2 variance))` on vertex labels `x = 1..n`.
pub fn gaussian_target<T: Real>(n: usize, center: T, variance: T) -> Result<TargetDistribution<T>> {
    if n == 0 {
        return Err(Error::arg("gaussian target needs n >= 1"));
    }
    if !(variance > T::zero()) {
        return Err(Error::arg(format!("variance must be positive, got {variance}")));
    }
    let two_var = T::lit(2.0) * variance;
    let w = (1..=n)
        .map(|x| {
            let dx = T::from_usize_lossy(x) - center;
            (-(dx * dx) / two_var).exp()
        })
        .collect();
    TargetDistribution::from_weights(w)
}

/// `pi_i ∝ exp(-beta E_i)`, shifted by the minimum energy for stability.
pub fn boltzmann_target<T: Real>(n: usize, energies: &[T], beta: T) -> Result<TargetDistribution<T>> {
    if energies.len() != n || n == 0 {
        return Err(Error::arg(format!("expected {n} energies, got {}", energies.len())));
    }
    if !(beta >= T::zero()) {
        return Err(Error::arg(format!("beta must be >= 0, got {beta}")));
    }
    let e_min = energies.iter().copied().fold(T::infinity(), T::min);
    let w = energies.iter().map(|&e| (-(beta * (e - e_min))).exp()).collect();
    TargetDistribution::from_weights(w)
}

/// Default energy ladder `E_i = i` (1-based).
pub fn linear_energies<T: Real>(n: usize) -> Vec<T> {
    (1..=n).map(T::from_usize_lossy).collect()
}

/// `n` i.i.d. uniform draws, normalized. Deterministic per seed.
pub fn random_target<T: Real>(n: usize, seed: u64) -> Result<TargetDistribution<T>> {
    if n == 0 {
        return Err(Error::arg("random target needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (0, 1]: strictly positive entries
    let w = (0..n).map(|_| T::lit(1.0 - rng.gen::<f64>())).collect();
    TargetDistribution::from_weights(w)
}

/// CSV with header `vertex,probability`.
pub fn write_target_csv<T: Real, W: Write>(t: &TargetDistribution<T>, out: W) -> Result<()> {
    crate::walker::write_probabilities_csv(t.probs(), out)
}

/// Reads `vertex,probability` rows (header optional). Vertices must be
/// `1..=n` in order.
pub fn read_target_csv<T: Real, R: Read>(reader: R) -> Result<TargetDistribution<T>> {
    let mut probs = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || (lineno == 1 && line.starts_with("vertex")) {
            continue;
        }
        let (v, p) = line.split_once(',').ok_or_else(|| Error::parse(lineno, "expected 'vertex,probability'"))?;
        let v: usize = v.trim().parse().map_err(|_| Error::parse(lineno, "bad vertex id"))?;
        if v != probs.len() + 1 {
            return Err(Error::parse(lineno, format!("expected vertex {}, got {v}", probs.len() + 1)));
        }
        let p: f64 = p.trim().parse().map_err(|_| Error::parse(lineno, "bad probability"))?;
        probs.push(T::lit(p));
    }
    TargetDistribution::new(probs)
}

/// Textual target selector: `delta:V`, `gaussian:CENTER:VAR`,
/// `boltzmann:BETA`, `random:SEED`, `uniform`, or a CSV path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TargetSpec {
    Delta(usize),
    Gaussian { center: f64, variance: f64 },
    Boltzmann { beta: f64 },
    Random { seed: u64 },
    Uniform,
    File(String),
}

/// Inverse temperature used when none is given.
pub const DEFAULT_BOLTZMANN_BETA: f64 = 0.5;

impl TargetSpec {
    /// Materializes the target for a graph with `n` vertices.
    pub fn build<T: Real>(&self, n: usize) -> Result<TargetDistribution<T>> {
        let t = match self {
            TargetSpec::Delta(v) => delta_target(n, *v)?,
            TargetSpec::Gaussian { center, variance } => gaussian_target(n, T::lit(*center), T::lit(*variance))?,
            TargetSpec::Boltzmann { beta } => boltzmann_target(n, &linear_energies::<T>(n), T::lit(*beta))?,
            TargetSpec::Random { seed } => random_target(n, *seed)?,
            TargetSpec::Uniform => TargetDistribution::from_weights(vec![T::one(); n])?,
            TargetSpec::File(path) => read_target_csv(crate::error::open_file(path)?)?,
        };
        if t.len() != n {
            return Err(Error::arg(format!("target has {} entries, graph has {n} vertices", t.len())));
        }
        Ok(t)
    }
}

impl FromStr for TargetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg(format!("malformed target spec '{s}'"));
        let f = |x: &str| x.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["delta", v] => Ok(TargetSpec::Delta(v.parse().map_err(|_| bad())?)),
            ["gaussian", c, var] => Ok(TargetSpec::Gaussian { center: f(c)?, variance: f(var)? }),
            ["boltzmann"] => Ok(TargetSpec::Boltzmann { beta: DEFAULT_BOLTZMANN_BETA }),
            ["boltzmann", b] => Ok(TargetSpec::Boltzmann { beta: f(b)? }),
            ["random", seed] => Ok(TargetSpec::Random { seed: seed.parse().map_err(|_| bad())? }),
            ["uniform"] => Ok(TargetSpec::Uniform),
            ["file", ..] => Ok(TargetSpec::File(s["file:".len()..].to_string())),
            [kw, ..] if ["delta", "gaussian", "boltzmann", "random", "uniform"].contains(kw) => Err(bad()),
            _ if s.is_empty() => Err(bad()),
            _ => Ok(TargetSpec::File(s.to_string())),
        }
    }
}

impl TryFrom<String> for TargetSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TargetSpec> for String {
    fn from(t: TargetSpec) -> String {
        t.to_string()
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Delta(v) => write!(f, "delta:{v}"),
            TargetSpec::Gaussian { center, variance } => write!(f, "gaussian:{center}:{variance}"),
            TargetSpec::Boltzmann { beta } => write!(f, "boltzmann:{beta}"),
            TargetSpec::Random { seed } => write!(f, "random:{seed}"),
            TargetSpec::Uniform => f.write_str("uniform"),
            TargetSpec::File(p) => write!(f, "file:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sums_to_one(t: &TargetDistribution<f64>) -> bool {
        (t.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12 && t.probs().iter().all(|&p| p >= 0.0)
    }

    #[test]
    fn delta_examples() {
        let t = delta_target::<f64>(10, 7).unwrap();
        assert_eq!(t.probs()[6], 1.0);
        assert_eq!(t.probs().iter().filter(|&&p| p == 0.0).count(), 9);
        assert_eq!(delta_target::<f64>(1, 1).unwrap().probs(), &[1.0]);
        assert!(matches!(delta_target::<f64>(4, 5), Err(Error::InvalidArgument(_))));
        assert!(delta_target::<f64>(4, 0).is_err());
    }

    #[test]
    fn gaussian_c60_target() {
        let t = gaussian_target::<f64>(60, 29.5, 90.0).unwrap();
        assert!(sums_to_one(&t));
        assert!((t.probs()[28] - t.probs()[29]).abs() < 1e-15);
        // unnormalized ratio check against the closed form with 2 var = 180
        let ratio = t.probs()[0] / t.probs()[29];
        assert!((ratio - (-(28.5f64 * 28.5 - 0.25) / 180.0).exp()).abs() < 1e-12);
        assert!(gaussian_target::<f64>(10, 3.0, 0.0).is_err());
    }

    #[test]
    fn boltzmann_examples() {
        let e = linear_energies::<f64>(10);
        let flat = boltzmann_target(10, &e, 0.0).unwrap();
        assert!(flat.probs().iter().all(|&p| (p - 0.1).abs() < 1e-15));
        let cold = boltzmann_target(10, &e, 200.0).unwrap();
        assert!(cold.probs()[0] > 1.0 - 1e-12);
        let warm = boltzmann_target(10, &e, 0.5).unwrap();
        assert!(warm.probs().windows(2).all(|w| w[0] > w[1]));
        assert!(matches!(boltzmann_target(9, &e, 0.5), Err(Error::InvalidArgument(_))));
        // direct evaluation oracle
        let z: f64 = (1..=10).map(|i| (-0.5 * i as f64).exp()).sum();
        for (i, p) in warm.probs().iter().enumerate() {
            assert!((p - (-0.5 * (i + 1) as f64).exp() / z).abs() < 1e-15);
        }
    }

    #[test]
    fn random_examples() {
        let a = random_target::<f64>(10, 3).unwrap();
        assert_eq!(a, random_target(10, 3).unwrap());
        assert_ne!(a, random_target(10, 4).unwrap());
        assert!(sums_to_one(&a) && a.probs().iter().all(|&p| p > 0.0));
        assert_eq!(random_target::<f64>(1, 9).unwrap().probs(), &[1.0]);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let t = random_target::<f64>(6, 1).unwrap();
        let mut buf = Vec::new();
        write_target_csv(&t, &mut buf).unwrap();
        assert_eq!(read_target_csv::<f64, _>(buf.as_slice()).unwrap(), t);
        assert!(read_target_csv::<f64, _>("1,0.5\n3,0.5\n".as_bytes()).is_err());
        assert!(read_target_csv::<f64, _>("1,0.5\n2,0.6\n".as_bytes()).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("delta:7".parse::<TargetSpec>().unwrap(), TargetSpec::Delta(7));
        assert_eq!("boltzmann".parse::<TargetSpec>().unwrap(), TargetSpec::Boltzmann { beta: 0.5 });
        assert_eq!(
            "gaussian:29.5:90".parse::<TargetSpec>().unwrap(),
            TargetSpec::Gaussian { center: 29.5, variance: 90.0 }
        );
        assert!("delta:x".parse::<TargetSpec>().is_err());
        let t: TargetDistribution<f64> = "random:5".parse::<TargetSpec>().unwrap().build(10).unwrap();
        assert_eq!(t, random_target(10, 5).unwrap());
    }

    proptest! {
        #[test]
        fn every_builder_yields_a_distribution(n in 1usize..80, seed in any::<u64>(), c in -20.0f64..80.0, var in 0.5f64..500.0, beta in 0.0f64..5.0) {
            prop_assert!(sums_to_one(&random_target(n, seed).unwrap()));
            prop_assert!(sums_to_one(&gaussian_target(n, c, var).unwrap()));
            prop_assert!(sums_to_one(&boltzmann_target(n, &linear_energies(n), beta).unwrap()));
        }

        #[test]
        fn gaussian_depends_only_on_distance_to_center(n in 2usize..60, c in 1.0f64..60.0, var in 1.0f64..200.0) {
            let t = gaussian_target(n, c, var).unwrap();
            for x in 1..=n {
                for y in 1..=n {
                    let (dx, dy) = ((x as f64 - c).abs(), (y as f64 - c).abs());
                    if (dx - dy).abs() < 1e-12 {
                        prop_assert!((t.probs()[x - 1] - t.probs()[y - 1]).abs() <= 1e-15);
                    }
                }
            }
        }
    }
}
