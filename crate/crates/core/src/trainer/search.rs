//! Derivative-free parameter search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{symmetric_uniform, RunMethod, RunStatus, TrainConfig, TrainRun};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unique positive root of `x^(dim+1) = x + 1`.
fn generalized_golden_ratio(dim: usize) -> f64 {
    let k = (dim + 1) as f64;
    let mut x = 2.0f64;
    for _ in 0..100 {
        let f = x.powf(k) - x - 1.0;
        let df = k * x.powf(k - 1.0) - 1.0;
        let next = x - f / df;
        if (next - x).abs() < 1e-16 {
            break;
        }
        x = next;
    }
    x
}

/// The first `count` points of the additive recurrence `frac(i * alpha)`,
/// `i = 1, 2, ...`, with `alpha_k = phi_dim^(-k)` and `phi_dim` the
/// generalized golden ratio. Every point lies in `[0, 1)^dim`.
pub fn low_discrepancy_init<T: Real>(count: usize, dim: usize) -> Result<Vec<Vec<T>>> {
    if count == 0 || dim == 0 {
        return Err(Error::arg("low-discrepancy sequence needs count >= 1 and dim >= 1"));
    }
    let phi = generalized_golden_ratio(dim);
    let alpha: Vec<f64> = (1..=dim).map(|k| phi.powi(-(k as i32)).fract()).collect();
    Ok((1..=count)
        .map(|i| {
            alpha
                .iter()
                .map(|&a| {
                    let x = (i as f64 * a).fract();
                    // fract can round up to exactly 1.0 in the last ulp
                    T::lit(if x >= 1.0 { 0.0 } else { x })
                })
                .collect()
        })
        .collect())
}

/// Candidate with the lowest walk error; ties go to the earliest.
pub fn best_of_init<T: Real>(cfg: &TrainConfig<T>, candidates: &[Vec<T>]) -> Result<Vec<T>> {
    if candidates.is_empty() {
        return Err(Error::arg("no candidates to choose from"));
    }
    let mut best: Option<(T, &Vec<T>)> = None;
    for c in candidates {
        cfg.check_len(c)?;
        let e = cfg.error_unchecked(c);
        match best {
            Some((b, _)) if !(e < b) => {}
            _ => best = Some((e, c)),
        }
    }
    Ok(best.expect("non-empty").1.clone())
}

/// Temperature as a function of the proposal index `k = 0..total`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Real")]
pub enum TemperatureSchedule<T> {
    Constant {
        temperature: T,
    },
    /// `initial * ratio^k`.
    Geometric {
        initial: T,
        ratio: T,
    },
    /// Straight line from `initial` at `k = 0` to `final` at the last proposal.
    Linear {
        initial: T,
        r#final: T,
    },
}

impl<T: Real> TemperatureSchedule<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            TemperatureSchedule::Constant { temperature } => *temperature >= T::zero(),
            TemperatureSchedule::Geometric { initial, ratio } => {
                *initial >= T::zero() && *ratio > T::zero() && *ratio <= T::one()
            }
            TemperatureSchedule::Linear { initial, r#final } => *r#final >= T::zero() && *initial >= *r#final,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::arg("temperature schedule must be non-negative and non-increasing"))
        }
    }

    pub fn temperature(&self, k: usize, total: usize) -> T {
        match self {
            TemperatureSchedule::Constant { temperature } => *temperature,
            TemperatureSchedule::Geometric { initial, ratio } => *initial * ratio.powi(k.min(i32::MAX as usize) as i32),
            TemperatureSchedule::Linear { initial, r#final } => {
                if total <= 1 {
                    return *initial;
                }
                let frac = T::from_usize_lossy(k) / T::from_usize_lossy(total - 1);
                *initial + (*r#final - *initial) * frac
            }
        }
    }
}

/// Simulated annealing over `cfg.settings.iterations` proposals.
///
/// Each proposal perturbs every parameter by an independent uniform draw in
/// `[-proposal_scale, proposal_scale]`; for small steps the error change is
/// the directional derivative along the draw, so repeated acceptance of
/// improvements behaves like a sampled gradient step. Worse proposals are
/// accepted with probability `exp(-dE / T)`; at `T = 0` only strict
/// improvements are accepted. Returns the best parameters seen.
pub fn anneal_search<T: Real>(
    cfg: &TrainConfig<T>,
    schedule: &TemperatureSchedule<T>,
    proposal_scale: T,
    seed: u64,
) -> Result<TrainRun<T>> {
    schedule.validate()?;
    if !(proposal_scale >= T::zero()) {
        return Err(Error::arg("proposal_scale must be non-negative"));
    }
    let total = cfg.settings.iterations;
    let initial_params = cfg.initial_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current = initial_params.clone();
    let mut current_err = cfg.error_unchecked(&current);
    let mut best = current.clone();
    let mut best_err = current_err;
    let mut trace = Vec::with_capacity(total + 1);
    trace.push(current_err);
    let mut accepted = 0usize;
    let mut proposal = vec![T::zero(); current.len()];

    for k in 0..total {
        let temp = schedule.temperature(k, total);
        for (p, &x) in proposal.iter_mut().zip(&current) {
            *p = x + symmetric_uniform(&mut rng, proposal_scale);
        }
        let u: f64 = rng.gen();
        let err = cfg.error_unchecked(&proposal);
        let delta = err - current_err;
        let accept = if delta < T::zero() {
            true
        } else if temp > T::zero() && delta.is_finite() {
            u < (-delta / temp).as_f64().exp()
        } else {
            false
        };
        if accept {
            std::mem::swap(&mut current, &mut proposal);
            current_err = err;
            accepted += 1;
            if current_err < best_err {
                best_err = current_err;
                best.clone_from(&current);
            }
        }
        trace.push(current_err);
    }

    let distribution = cfg.distribution_unchecked(&best);
    Ok(TrainRun {
        method: RunMethod::Annealing { schedule: schedule.clone(), proposal_scale, seed, accepted },
        settings: cfg.settings.clone(),
        target: cfg.target.probs().to_vec(),
        initial_params,
        trace,
        params: best,
        final_error: best_err,
        distribution,
        status: RunStatus::Completed,
        warnings: Vec::new(),
    })
}
