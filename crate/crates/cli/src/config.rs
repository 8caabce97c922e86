//! JSON documents: the training config and the persisted run.

use std::path::Path;

use dtqw::{
    GraphSpec, Init, Parametrization, Periodicity, ScheduleMode, TargetDistribution, TargetSpec, TemperatureSchedule,
    TrainConfig64, TrainRun64, TrainSettings64,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::specs::{build_initial_state, StartSpec};

fn default_fd_epsilon() -> f64 {
    0.01
}

fn default_iterations() -> usize {
    300
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Method {
    #[default]
    GradientDescent,
    Annealing {
        schedule: TemperatureSchedule<f64>,
        proposal_scale: f64,
        seed: u64,
    },
}

/// Training config file. `steps` and `learning_rate` may be omitted and are
/// filled in from the graph and parametrization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainFile {
    pub graph: GraphSpec,
    #[serde(default)]
    pub start: StartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_state: Option<Vec<[f64; 2]>>,
    pub target: TargetSpec,
    pub parametrization: Parametrization,
    #[serde(default)]
    pub periodicity: Periodicity,
    #[serde(default)]
    pub schedule_mode: ScheduleMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default = "default_fd_epsilon")]
    pub fd_epsilon: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub init: Init<f64>,
    #[serde(default)]
    pub stochastic_noise: f64,
    #[serde(default)]
    pub noise_seed: u64,
    #[serde(default)]
    pub method: Method,
}

/// Parse JSON, reporting the path of the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::invalid(format!("{what}: at `{path}`: {}", e.into_inner()))
    })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn absolutize(base: &Path, p: &str) -> CliResult<String> {
    let joined = base.join(p);
    let abs = if joined.is_absolute() {
        joined
    } else {
        std::env::current_dir().map_err(|e| CliError::io(Path::new("."), e))?.join(joined)
    };
    Ok(abs.to_string_lossy().into_owned())
}

impl TrainFile {
    /// Makes file references absolute (relative to `base`) and fills every
    /// defaulted field, so the result no longer depends on where it is read.
    pub fn resolve(mut self, base: &Path) -> CliResult<(TrainFile, TrainConfig64)> {
        if let GraphSpec::File(p) = &self.graph {
            self.graph = GraphSpec::File(absolutize(base, p)?);
        }
        if let TargetSpec::File(p) = &self.target {
            self.target = TargetSpec::File(absolutize(base, p)?);
        }
        let g = self.graph.build()?;
        let steps = match self.steps {
            Some(t) => t,
            None => TrainSettings64::default_steps(&g)?,
        };
        self.steps = Some(steps);
        self.learning_rate = Some(self.learning_rate.unwrap_or_else(|| self.parametrization.default_learning_rate()));
        let target = self.target.build(g.num_vertices())?;
        let cfg = self.config(g, target)?;
        Ok((self, cfg))
    }

    pub fn settings(&self) -> CliResult<TrainSettings64> {
        let steps = self.steps.ok_or_else(|| CliError::invalid("steps unresolved"))?;
        let mut s = TrainSettings64::new(self.parametrization, self.schedule_mode, steps);
        s.periodicity = self.periodicity;
        s.learning_rate = self.learning_rate.unwrap_or(s.learning_rate);
        s.fd_epsilon = self.fd_epsilon;
        s.iterations = self.iterations;
        s.init = self.init.clone();
        s.stochastic_noise = self.stochastic_noise;
        s.noise_seed = self.noise_seed;
        Ok(s)
    }

    /// Problem for an explicit graph and target.
    pub fn config(&self, g: dtqw::RegularGraph, target: TargetDistribution<f64>) -> CliResult<TrainConfig64> {
        let s0 = build_initial_state(&g, &self.start, self.coin_state.as_deref())?;
        Ok(TrainConfig64::new(self.settings()?, g, s0, target)?)
    }

    pub fn seeds(&self) -> Vec<(String, u64)> {
        let mut out = Vec::new();
        if let GraphSpec::Random { seed, .. } = self.graph {
            out.push(("graph".into(), seed));
        }
        if let TargetSpec::Random { seed } = self.target {
            out.push(("target".into(), seed));
        }
        if let Init::Random { seed, .. } = self.init {
            out.push(("init".into(), seed));
        }
        out.push(("noise".into(), self.noise_seed));
        if let Method::Annealing { seed, .. } = self.method {
            out.push(("annealing".into(), seed));
        }
        out
    }
}

/// What `train` writes as `run.json`: the resolved problem plus its result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunDocument {
    pub config: TrainFile,
    pub run: TrainRun64,
}

impl RunDocument {
    /// The training problem with the run's recorded settings and exact target.
    pub fn train_config(&self) -> CliResult<TrainConfig64> {
        let g = self.config.graph.build()?;
        let target = TargetDistribution::new(self.run.target.clone())?;
        let s0 = build_initial_state(&g, &self.config.start, self.config.coin_state.as_deref())?;
        Ok(TrainConfig64::new(self.run.settings.clone(), g, s0, target)?)
    }
}

pub fn read_run(path: &Path) -> CliResult<RunDocument> {
    parse_json(&read_text(path)?, &path.display().to_string())
}
