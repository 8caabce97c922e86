//! Small textual specs used on the command line and in config files.

use std::fmt;
use std::str::FromStr;

use dtqw::{
    fourier_matrix, hermitian_basis, lie_coin, torus_coin, CMatrix64, Complex64, LieParams, Periodicity, RegularGraph,
    TorusParams, WalkState64,
};
use dtqw::{initial_state, CoinInit, PositionInit};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `fourier`, `identity`, `torus:T1,..,Td`, `torus-unit:T1,..,Td` or
/// `lie:A1,..,A(d^2-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CoinSpec {
    Fourier,
    Identity,
    Torus { theta: Vec<f64>, periodicity: Periodicity },
    Lie { alpha: Vec<f64> },
}

fn list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::invalid(format!("bad number '{x}' in coin spec"))))
        .collect()
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl FromStr for CoinSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.split_once(':') {
            None if s == "fourier" => Ok(CoinSpec::Fourier),
            None if s == "identity" => Ok(CoinSpec::Identity),
            Some(("torus", xs)) => Ok(CoinSpec::Torus { theta: list(xs)?, periodicity: Periodicity::TwoPi }),
            Some(("torus-unit", xs)) => Ok(CoinSpec::Torus { theta: list(xs)?, periodicity: Periodicity::Unit }),
            Some(("lie", xs)) => Ok(CoinSpec::Lie { alpha: list(xs)? }),
            _ => Err(CliError::invalid(format!(
                "unknown coin spec '{s}'; expected fourier, identity, torus:.., torus-unit:.. or lie:.."
            ))),
        }
    }
}

impl TryFrom<String> for CoinSpec {
    type Error = CliError;

    fn try_from(s: String) -> CliResult<Self> {
        s.parse()
    }
}

impl From<CoinSpec> for String {
    fn from(c: CoinSpec) -> String {
        c.to_string()
    }
}

impl fmt::Display for CoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinSpec::Fourier => f.write_str("fourier"),
            CoinSpec::Identity => f.write_str("identity"),
            CoinSpec::Torus { theta, periodicity: Periodicity::TwoPi } => write!(f, "torus:{}", join(theta)),
            CoinSpec::Torus { theta, periodicity: Periodicity::Unit } => write!(f, "torus-unit:{}", join(theta)),
            CoinSpec::Lie { alpha } => write!(f, "lie:{}", join(alpha)),
        }
    }
}

impl CoinSpec {
    pub fn build(&self, d: usize) -> CliResult<CMatrix64> {
        let want = |n: usize, got: usize, what: &str| {
            if n == got {
                Ok(())
            } else {
                Err(CliError::invalid(format!("{what} coin for degree {d} needs {n} values, got {got}")))
            }
        };
        Ok(match self {
            CoinSpec::Fourier => fourier_matrix(d)?,
            CoinSpec::Identity => CMatrix64::identity(d),
            CoinSpec::Torus { theta, periodicity } => {
                want(d, theta.len(), "torus")?;
                torus_coin(&TorusParams::new(theta.clone(), *periodicity)?)
            }
            CoinSpec::Lie { alpha } => {
                want(d * d - 1, alpha.len(), "lie")?;
                lie_coin(&LieParams::new(alpha.clone())?, &hermitian_basis(d)?)?
            }
        })
    }
}

/// Starting position: a vertex, or explicit `[re, im]` amplitudes per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Vertex(usize),
    Amplitudes(Vec<[f64; 2]>),
}

impl Default for StartSpec {
    fn default() -> Self {
        StartSpec::Vertex(1)
    }
}

fn complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

/// `start (x) coin`, with the Fourier coin state unless `coin_state` is given.
pub fn build_initial_state(
    g: &RegularGraph,
    start: &StartSpec,
    coin_state: Option<&[[f64; 2]]>,
) -> CliResult<WalkState64> {
    let pos = match start {
        StartSpec::Vertex(v) => PositionInit::Vertex(*v),
        StartSpec::Amplitudes(a) => PositionInit::Amplitudes(complex(a)),
    };
    let coin = match coin_state {
        None => CoinInit::Fourier,
        Some(c) => CoinInit::Vector(complex(c)),
    };
    Ok(initial_state(g, &pos, &coin)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_specs_round_trip() {
        for s in ["fourier", "identity", "torus:0,1.5,-2", "torus-unit:0.25,0.5", "lie:0.1,0,0"] {
            assert_eq!(s.parse::<CoinSpec>().unwrap().to_string(), s);
        }
        assert!("torus:a".parse::<CoinSpec>().is_err());
        assert!("hadamard".parse::<CoinSpec>().is_err());
    }

    #[test]
    fn coin_dimension_is_checked() {
        let c: CoinSpec = "torus:0,0".parse().unwrap();
        assert!(c.build(3).is_err());
        assert!(c.build(2).unwrap().max_abs_diff(&CMatrix64::identity(2)) < 1e-14);
        assert!("lie:0,0,0".parse::<CoinSpec>().unwrap().build(3).is_err());
    }

    #[test]
    fn start_spec_json_forms() {
        assert_eq!(serde_json::from_str::<StartSpec>("3").unwrap(), StartSpec::Vertex(3));
        let a: StartSpec = serde_json::from_str("[[0.6, 0], [0, 0.8]]").unwrap();
        assert_eq!(a, StartSpec::Amplitudes(vec![[0.6, 0.0], [0.0, 0.8]]));
    }
}
