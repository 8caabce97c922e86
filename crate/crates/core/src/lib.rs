//! Coined discrete-time quantum walks on regular graphs.
//!
//! The walk lives on `coin (x) position` space of a connected `d`-regular
//! graph. Each step applies a `d x d` unitary coin at every vertex and then
//! moves amplitudes along a rotation map (an edge labeling where label `j`
//! defines a permutation of the vertices). Coins are parametrized either by
//! a torus of phases in the Fourier basis or by coordinates in `su(d)`, and
//! the [`trainer`] fits those parameters so that the vertex distribution
//! after `t` steps matches a target.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.
//!
//! ```
//! use dtqw::{build_petersen, gaussian_target, gradient_descent, initial_state};
//! use dtqw::{CoinInit, Parametrization, PositionInit, ScheduleMode, TrainConfig64, TrainSettings};
//!
//! let g = build_petersen();
//! let start = initial_state(&g, &PositionInit::Vertex(1), &CoinInit::Fourier).unwrap();
//! let target = gaussian_target(10, 5.0, 4.0).unwrap();
//! let mut settings = TrainSettings::new(Parametrization::Torus, ScheduleMode::SingleCoin, 6);
//! settings.iterations = 20;
//! let cfg = TrainConfig64::new(settings, g, start, target).unwrap();
//! let run = gradient_descent(&cfg).unwrap();
//! assert!(run.final_error <= run.trace[0]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coins;
pub mod error;
pub mod graphs;
pub mod imagefilter;
pub mod linalg;
pub mod scalar;
pub mod targets;
pub mod trainer;
pub mod walker;

pub use coins::{
    fourier_matrix, hermitian_basis, is_unitary, lie_coin, torus_coin, unitarity_deviation, HermitianBasis, LieParams,
    Periodicity, TorusParams,
};
pub use error::{Error, Result};
pub use graphs::{
    build_complete, build_cycle, build_fullerene_c60, build_petersen, build_random_regular, compute_rotation_map,
    read_edge_list, write_edge_list, GraphSpec, RegularGraph, RotationMap,
};
pub use linalg::CMatrix;
pub use scalar::Real;
pub use targets::{boltzmann_target, delta_target, gaussian_target, random_target, TargetDistribution, TargetSpec};
pub use trainer::{
    anneal_search, error_vs_steps, fd_gradient, gradient_descent, low_discrepancy_init, walk_error, Init,
    Parametrization, RunMethod, RunStatus, TemperatureSchedule, TrainConfig, TrainRun, TrainSettings,
};
pub use walker::{
    evolve, initial_state, measure_positions, CoinInit, CoinSchedule, PositionInit, ScheduleMode, WalkState,
};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type WalkState64 = WalkState<f64>;
pub type CoinSchedule64 = CoinSchedule<f64>;
pub type TargetDistribution64 = TargetDistribution<f64>;
pub type TrainSettings64 = TrainSettings<f64>;
pub type TrainConfig64 = TrainConfig<f64>;
pub type TrainRun64 = TrainRun<f64>;

pub type Complex32 = Complex<f32>;
pub type CMatrix32 = CMatrix<f32>;
pub type WalkState32 = WalkState<f32>;
pub type TrainConfig32 = TrainConfig<f32>;
pub type TrainRun32 = TrainRun<f32>;
