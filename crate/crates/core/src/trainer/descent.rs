use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{symmetric_uniform, RunMethod, RunStatus, TrainConfig, TrainRun};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::walker::ScheduleMode;

/// Gradient norm below which an iteration counts as stalled.
pub const VANISHING_GRADIENT_NORM: f64 = 1e-6;
/// Consecutive stalled iterations before a warning is issued.
pub const VANISHING_GRADIENT_PATIENCE: usize = 5;

/// Central differences `(f(x + eps e_j) - f(x - eps e_j)) / (2 eps)`.
///
/// The `2 len(x)` evaluations run in parallel; each component is computed
/// independently, so the result does not depend on scheduling.
pub fn central_difference<T, F>(f: F, params: &[T], eps: T) -> Vec<T>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    let two_eps = eps + eps;
    (0..params.len())
        .into_par_iter()
        .map(|j| {
            let mut probe = params.to_vec();
            probe[j] = params[j] + eps;
            let up = f(&probe);
            probe[j] = params[j] - eps;
            let down = f(&probe);
            (up - down) / two_eps
        })
        .collect()
}

/// Finite-difference gradient of the walk error at the configured `fd_epsilon`.
pub fn fd_gradient<T: Real>(params: &[T], cfg: &TrainConfig<T>) -> Result<Vec<T>> {
    cfg.check_len(params)?;
    Ok(central_difference(|p| cfg.error_unchecked(p), params, cfg.settings.fd_epsilon))
}

/// `params <- params - lr * grad`, plus optional uniform noise, for
/// `iterations` rounds. The trace holds the error before the first update and
/// after each one.
pub fn gradient_descent<T: Real>(cfg: &TrainConfig<T>) -> Result<TrainRun<T>> {
    let s = &cfg.settings;
    let initial_params = cfg.initial_params()?;
    let mut params = initial_params.clone();
    let mut noise_rng = ChaCha8Rng::seed_from_u64(s.noise_seed);
    let mut trace = Vec::with_capacity(s.iterations + 1);
    let mut warnings = Vec::new();
    let mut status = RunStatus::Completed;
    let mut stalled = 0usize;

    let e0 = cfg.error_unchecked(&params);
    trace.push(e0);
    if !e0.is_finite() {
        status = RunStatus::Diverged { iteration: 0 };
    }

    let stall_norm = T::lit(VANISHING_GRADIENT_NORM);
    for iteration in 1..=s.iterations {
        if status != RunStatus::Completed {
            break;
        }
        let grad = central_difference(|p| cfg.error_unchecked(p), &params, s.fd_epsilon);
        for (p, g) in params.iter_mut().zip(&grad) {
            *p = *p - s.learning_rate * *g;
        }
        if s.stochastic_noise > T::zero() {
            for p in params.iter_mut() {
                *p = *p + symmetric_uniform(&mut noise_rng, s.stochastic_noise);
            }
        }
        let e = cfg.error_unchecked(&params);
        trace.push(e);
        if !e.is_finite() || params.iter().any(|p| !p.is_finite()) {
            log::error!("objective became non-finite at iteration {iteration}");
            status = RunStatus::Diverged { iteration };
            break;
        }

        let gnorm = grad.iter().map(|&g| g * g).sum::<T>().sqrt();
        stalled = if gnorm < stall_norm { stalled + 1 } else { 0 };
        if stalled == VANISHING_GRADIENT_PATIENCE && s.stochastic_noise == T::zero() {
            let msg = format!(
                "gradient norm below {VANISHING_GRADIENT_NORM:e} for {VANISHING_GRADIENT_PATIENCE} consecutive \
                 iterations (at iteration {iteration}); consider a non-zero stochastic_noise"
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }

    let final_error = *trace.last().expect("trace starts with the initial error");
    let distribution = cfg.distribution_unchecked(&params);
    Ok(TrainRun {
        method: RunMethod::GradientDescent,
        settings: s.clone(),
        target: cfg.target.probs().to_vec(),
        initial_params,
        trace,
        params,
        final_error,
        distribution,
        status,
        warnings,
    })
}

/// Error of the walk driven by `params` after each step count `1..=t_max`.
///
/// A single coin is simply repeated. In per-step mode the walk runs out of
/// coins at `steps`, so the result has `min(t_max, steps)` entries.
pub fn error_vs_steps<T: Real>(params: &[T], cfg: &TrainConfig<T>, t_max: usize) -> Result<Vec<T>> {
    cfg.check_len(params)?;
    if t_max == 0 {
        return Err(Error::arg("t_max must be at least 1"));
    }
    if cfg.settings.schedule_mode == ScheduleMode::PerStep && t_max > cfg.settings.steps {
        log::debug!("per-step schedule has {} coins; truncating at that step", cfg.settings.steps);
    }
    Ok(cfg.marginals_by_step(params, t_max).iter().map(|p| cfg.distance(p)).collect())
}
