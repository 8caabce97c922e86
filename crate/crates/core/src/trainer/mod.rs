//! Fitting coin parameters to a target distribution.
//!
//! The objective is the Euclidean distance between the walk's vertex
//! marginals after `t` steps and the target. It is minimized by plain
//! gradient descent on central finite differences, optionally with additive
//! parameter noise, or by derivative-free search (low-discrepancy scan and
//! simulated annealing).

mod descent;
mod search;

use std::io::Write;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coins::{hermitian_basis, lie_coin, torus_coin, HermitianBasis, LieParams, Periodicity, TorusParams};
use crate::error::{Error, Result};
use crate::graphs::{compute_rotation_map, RegularGraph, RotationMap};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::targets::TargetDistribution;
use crate::walker::{marginal, measure_positions, walk_step, CoinSchedule, ScheduleMode, WalkState};

pub use descent::{
    central_difference, error_vs_steps, fd_gradient, gradient_descent, VANISHING_GRADIENT_NORM,
    VANISHING_GRADIENT_PATIENCE,
};
pub use search::{anneal_search, best_of_init, low_discrepancy_init, TemperatureSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parametrization {
    /// `d` angles per coin.
    Torus,
    /// `d^2 - 1` su(d) coefficients per coin.
    Lie,
}

impl Parametrization {
    pub fn params_per_coin(self, d: usize) -> usize {
        match self {
            Parametrization::Torus => d,
            Parametrization::Lie => d * d - 1,
        }
    }

    pub fn default_learning_rate<T: Real>(self) -> T {
        match self {
            Parametrization::Torus => T::lit(0.1),
            Parametrization::Lie => T::lit(0.05),
        }
    }
}

/// Starting point for the parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Real")]
pub enum Init<T> {
    Zeros,
    /// i.i.d. uniform in `[-scale, scale]`.
    Random {
        seed: u64,
        scale: T,
    },
    Explicit {
        params: Vec<T>,
    },
    /// Best of the first `count` low-discrepancy points.
    LowDiscrepancy {
        count: usize,
    },
}

impl<T: Real> Default for Init<T> {
    fn default() -> Self {
        Init::Random { seed: 0, scale: T::lit(0.1) }
    }
}

/// Hyperparameters of a training run. Everything here is plain data and is
/// echoed into the [`TrainRun`] it produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TrainSettings<T> {
    pub parametrization: Parametrization,
    #[serde(default)]
    pub periodicity: Periodicity,
    pub schedule_mode: ScheduleMode,
    pub steps: usize,
    pub learning_rate: T,
    pub fd_epsilon: T,
    pub iterations: usize,
    #[serde(default)]
    pub init: Init<T>,
    /// Half-width of the uniform noise added to every parameter after each
    /// update; zero disables it.
    #[serde(default)]
    pub stochastic_noise: T,
    #[serde(default)]
    pub noise_seed: u64,
}

impl<T: Real> TrainSettings<T> {
    pub fn new(parametrization: Parametrization, schedule_mode: ScheduleMode, steps: usize) -> Self {
        TrainSettings {
            parametrization,
            periodicity: Periodicity::TwoPi,
            schedule_mode,
            steps,
            learning_rate: parametrization.default_learning_rate(),
            fd_epsilon: T::lit(0.01),
            iterations: 300,
            init: Init::default(),
            stochastic_noise: T::zero(),
            noise_seed: 0,
        }
    }

    /// `2 * diameter(G)`.
    pub fn default_steps(g: &RegularGraph) -> Result<usize> {
        Ok(2 * g.diameter()?)
    }

    pub fn num_coins(&self) -> usize {
        match self.schedule_mode {
            ScheduleMode::SingleCoin => 1,
            ScheduleMode::PerStep => self.steps,
        }
    }

    pub fn param_count(&self, degree: usize) -> usize {
        self.num_coins() * self.parametrization.params_per_coin(degree)
    }
}

/// A fully resolved training problem.
#[derive(Clone, Debug)]
pub struct TrainConfig<T> {
    settings: TrainSettings<T>,
    graph: RegularGraph,
    rotation: RotationMap,
    initial: WalkState<T>,
    target: TargetDistribution<T>,
    basis: Option<HermitianBasis<T>>,
}

impl<T: Real> TrainConfig<T> {
    pub fn new(
        settings: TrainSettings<T>,
        graph: RegularGraph,
        initial: WalkState<T>,
        target: TargetDistribution<T>,
    ) -> Result<Self> {
        let rotation = compute_rotation_map(&graph)?;
        Self::with_rotation_map(settings, graph, rotation, initial, target)
    }

    pub fn with_rotation_map(
        settings: TrainSettings<T>,
        graph: RegularGraph,
        rotation: RotationMap,
        initial: WalkState<T>,
        target: TargetDistribution<T>,
    ) -> Result<Self> {
        rotation.validate(&graph)?;
        let (n, d) = (graph.num_vertices(), graph.degree());
        let s = &settings;
        if s.steps == 0 {
            return Err(Error::arg("steps must be positive"));
        }
        if !(s.learning_rate >= T::zero()) || !s.learning_rate.is_finite() {
            return Err(Error::arg("learning_rate must be finite and non-negative"));
        }
        if !(s.fd_epsilon > T::zero()) || !s.fd_epsilon.is_finite() {
            return Err(Error::arg("fd_epsilon must be positive"));
        }
        if !(s.stochastic_noise >= T::zero()) {
            return Err(Error::arg("stochastic_noise must be non-negative"));
        }
        if initial.degree() != d || initial.num_vertices() != n {
            return Err(Error::arg("initial state does not match the graph"));
        }
        if target.len() != n {
            return Err(Error::arg(format!("target has {} entries, graph has {n} vertices", target.len())));
        }
        let count = s.param_count(d);
        match &s.init {
            Init::Explicit { params } if params.len() != count => {
                return Err(Error::arg(format!(
                    "explicit init has {} parameters, expected {count} ({} coin(s) x {})",
                    params.len(),
                    s.num_coins(),
                    s.parametrization.params_per_coin(d)
                )));
            }
            Init::LowDiscrepancy { count: 0 } => return Err(Error::arg("low-discrepancy init needs count >= 1")),
            Init::Random { scale, .. } if !(*scale >= T::zero()) => {
                return Err(Error::arg("random init scale must be non-negative"));
            }
            _ => {}
        }
        let basis = match s.parametrization {
            Parametrization::Lie => Some(hermitian_basis(d)?),
            Parametrization::Torus => None,
        };
        let cfg = TrainConfig { settings, graph, rotation, initial, target, basis };
        cfg.check_reachability()?;
        Ok(cfg)
    }

    /// On a bipartite graph, a walker whose start is confined to one part is
    /// on a fixed part after `t` steps; reject targets with mass elsewhere.
    fn check_reachability(&self) -> Result<()> {
        let Some(side) = self.graph.bipartition() else { return Ok(()) };
        let tol = T::lit(1e-12);
        let p0 = measure_positions(&self.initial);
        let mass = |part: bool| -> T { p0.iter().zip(&side).filter(|(_, &s)| s == part).map(|(&p, _)| p).sum() };
        let (on_false, on_true) = (mass(false), mass(true));
        if on_false > tol && on_true > tol {
            return Ok(());
        }
        let start_part = on_true > tol;
        let end_part = start_part ^ (self.settings.steps % 2 == 1);
        let stray: T = self.target.probs().iter().zip(&side).filter(|(_, &s)| s != end_part).map(|(&p, _)| p).sum();
        if stray > tol {
            return Err(Error::BipartiteObstruction(format!(
                "graph is bipartite and the start lies on one part, so after {} steps the walker is confined \
                 to a single part; the target puts mass {stray} on the other. Start in a superposition across \
                 both parts or use a graph with an odd cycle",
                self.settings.steps
            )));
        }
        Ok(())
    }

    pub fn settings(&self) -> &TrainSettings<T> {
        &self.settings
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn rotation_map(&self) -> &RotationMap {
        &self.rotation
    }

    pub fn initial_state(&self) -> &WalkState<T> {
        &self.initial
    }

    pub fn target(&self) -> &TargetDistribution<T> {
        &self.target
    }

    pub fn param_count(&self) -> usize {
        self.settings.param_count(self.graph.degree())
    }

    fn check_len(&self, params: &[T]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::arg(format!("expected {} parameters, got {}", self.param_count(), params.len())));
        }
        Ok(())
    }

    fn coin(&self, chunk: &[T]) -> CMatrix<T> {
        match self.settings.parametrization {
            Parametrization::Torus => {
                torus_coin(&TorusParams { theta: chunk.to_vec(), periodicity: self.settings.periodicity })
            }
            Parametrization::Lie => {
                let basis = self.basis.as_ref().expect("basis built for Lie parametrization");
                lie_coin(&LieParams { alpha: chunk.to_vec() }, basis).expect("length checked")
            }
        }
    }

    fn coins(&self, params: &[T]) -> Vec<CMatrix<T>> {
        let per = self.settings.parametrization.params_per_coin(self.graph.degree());
        params.chunks(per).map(|c| self.coin(c)).collect()
    }

    /// The coin schedule generated by `params`.
    pub fn schedule(&self, params: &[T]) -> Result<CoinSchedule<T>> {
        self.check_len(params)?;
        let per = self.settings.parametrization.params_per_coin(self.graph.degree());
        let chunks: Vec<Vec<T>> = params.chunks(per).map(<[T]>::to_vec).collect();
        Ok(CoinSchedule::unchecked(self.settings.schedule_mode, self.coins(params), chunks, self.settings.steps))
    }

    /// Vertex marginals after walking with each step count in `1..=t_max`
    /// (capped at `steps` in per-step mode).
    fn marginals_by_step(&self, params: &[T], t_max: usize) -> Vec<Vec<T>> {
        let coins = self.coins(params);
        let limit = match self.settings.schedule_mode {
            ScheduleMode::SingleCoin => t_max,
            ScheduleMode::PerStep => t_max.min(self.settings.steps),
        };
        let n = self.graph.num_vertices();
        let mut cur = self.initial.amplitudes().to_vec();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); cur.len()];
        let mut out = Vec::with_capacity(limit);
        for step in 0..limit {
            let coin = if coins.len() == 1 { &coins[0] } else { &coins[step] };
            walk_step(&self.rotation, coin, &mut cur, &mut scratch);
            out.push(marginal(&cur, n));
        }
        out
    }

    /// Vertex marginals after `steps` steps.
    pub fn distribution(&self, params: &[T]) -> Result<Vec<T>> {
        self.check_len(params)?;
        Ok(self.distribution_unchecked(params))
    }

    fn distribution_unchecked(&self, params: &[T]) -> Vec<T> {
        let coins = self.coins(params);
        let n = self.graph.num_vertices();
        let mut cur = self.initial.amplitudes().to_vec();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); cur.len()];
        for step in 0..self.settings.steps {
            let coin = if coins.len() == 1 { &coins[0] } else { &coins[step] };
            walk_step(&self.rotation, coin, &mut cur, &mut scratch);
        }
        marginal(&cur, n)
    }

    fn distance(&self, p: &[T]) -> T {
        p.iter().zip(self.target.probs()).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt()
    }

    /// Objective without the length check; callers guarantee the length.
    pub(crate) fn error_unchecked(&self, params: &[T]) -> T {
        self.distance(&self.distribution_unchecked(params))
    }

    /// Resolves [`TrainSettings::init`] into a concrete parameter vector.
    pub fn initial_params(&self) -> Result<Vec<T>> {
        let count = self.param_count();
        Ok(match &self.settings.init {
            Init::Zeros => vec![T::zero(); count],
            Init::Random { seed, scale } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..count).map(|_| symmetric_uniform(&mut rng, *scale)).collect()
            }
            Init::Explicit { params } => params.clone(),
            Init::LowDiscrepancy { count: n } => {
                let candidates: Vec<Vec<T>> = low_discrepancy_init::<T>(*n, count)?
                    .into_iter()
                    .map(|u| u.into_iter().map(|x| self.unit_to_param(x)).collect())
                    .collect();
                best_of_init(self, &candidates)?
            }
        })
    }

    /// Maps a coordinate in `[0, 1)` onto one period of the parameter.
    fn unit_to_param(&self, u: T) -> T {
        match (self.settings.parametrization, self.settings.periodicity) {
            (Parametrization::Torus, Periodicity::Unit) => u,
            (Parametrization::Torus, Periodicity::TwoPi) => u * T::TAU(),
            (Parametrization::Lie, _) => (u * T::lit(2.0) - T::one()) * T::PI(),
        }
    }
}

/// Uniform in `[-half_width, half_width]`; consumes one draw even when the
/// width is zero so streams stay aligned.
pub(crate) fn symmetric_uniform<T: Real, R: Rng>(rng: &mut R, half_width: T) -> T {
    let u: f64 = rng.gen();
    T::lit(2.0 * u - 1.0) * half_width
}

/// Euclidean distance between the walk's vertex marginals and the target.
pub fn walk_error<T: Real>(params: &[T], cfg: &TrainConfig<T>) -> Result<T> {
    cfg.check_len(params)?;
    Ok(cfg.error_unchecked(params))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Real")]
pub enum RunMethod<T> {
    GradientDescent,
    Annealing { schedule: TemperatureSchedule<T>, proposal_scale: T, seed: u64, accepted: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// The objective became non-finite at this iteration; the trace stops there.
    Diverged {
        iteration: usize,
    },
}

/// Everything a training run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TrainRun<T> {
    pub method: RunMethod<T>,
    pub settings: TrainSettings<T>,
    pub target: Vec<T>,
    pub initial_params: Vec<T>,
    /// Objective at iteration 0, 1, ... For annealing, the error of the
    /// current (not best) state.
    pub trace: Vec<T>,
    pub params: Vec<T>,
    pub final_error: T,
    pub distribution: Vec<T>,
    pub status: RunStatus,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl<T: Real> TrainRun<T> {
    pub fn diverged(&self) -> bool {
        matches!(self.status, RunStatus::Diverged { .. })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `iteration,error`.
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "iteration,error")?;
        for (i, e) in self.trace.iter().enumerate() {
            writeln!(out, "{i},{e:e}")?;
        }
        Ok(())
    }

    /// `vertex,target,learned`.
    pub fn write_comparison_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "vertex,target,learned")?;
        for (i, (t, l)) in self.target.iter().zip(&self.distribution).enumerate() {
            writeln!(out, "{},{t:e},{l:e}", i + 1)?;
        }
        Ok(())
    }
}
