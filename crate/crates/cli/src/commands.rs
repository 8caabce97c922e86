use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dtqw::imagefilter::{filter_channel, read_netpbm, write_pgm, ChannelSelect};
use dtqw::walker::{evolve_with, write_probabilities_csv, write_state_csv, EvolveOptions};
use dtqw::{
    anneal_search, compute_rotation_map, error_vs_steps, gradient_descent, measure_positions, CoinSchedule, GraphSpec,
    RunStatus,
};
use serde::{Deserialize, Serialize};

use crate::config::{read_run, RunDocument, TrainFile};
use crate::error::{CliError, CliResult};
use crate::manifest::{manifest_path_for, timestamp, RunManifest};
use crate::specs::{build_initial_state, CoinSpec, StartSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub graph: GraphSpec,
    pub coin: CoinSpec,
    pub steps: usize,
    pub start: StartSpec,
    pub renormalize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorVsStepsConfig {
    pub run: PathBuf,
    pub t_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub input: PathBuf,
    pub channel: String,
    pub steps: usize,
    pub angle_scale: f64,
    pub seed: u64,
}

/// A fully resolved command, as recorded in a manifest.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", content = "config", rename_all = "kebab-case")]
pub enum Job {
    Walk(WalkConfig),
    Train(TrainFile),
    ErrorVsSteps(ErrorVsStepsConfig),
    FilterImage(FilterConfig),
}

pub type Outputs = BTreeMap<String, PathBuf>;

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> CliResult<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

fn output<'a>(outputs: &'a Outputs, role: &str) -> CliResult<&'a Path> {
    outputs.get(role).map(PathBuf::as_path).ok_or_else(|| CliError::invalid(format!("no output path for {role}")))
}

impl Job {
    pub fn seeds(&self) -> BTreeMap<String, u64> {
        match self {
            Job::Walk(c) => match c.graph {
                GraphSpec::Random { seed, .. } => [("graph".to_string(), seed)].into(),
                _ => BTreeMap::new(),
            },
            Job::Train(t) => t.seeds().into_iter().collect(),
            Job::ErrorVsSteps(_) => BTreeMap::new(),
            Job::FilterImage(f) => [("filter".to_string(), f.seed)].into(),
        }
    }

    /// Where the manifest goes for these outputs.
    pub fn manifest_path(&self, outputs: &Outputs) -> Option<PathBuf> {
        match self {
            Job::Train(_) => outputs.get("run").and_then(|p| p.parent()).map(|d| manifest_path_for(d, true)),
            Job::Walk(_) => {
                outputs.get("probabilities").or_else(|| outputs.get("state")).map(|p| manifest_path_for(p, false))
            }
            Job::ErrorVsSteps(_) => outputs.get("errors").map(|p| manifest_path_for(p, false)),
            Job::FilterImage(_) => outputs.get("image").map(|p| manifest_path_for(p, false)),
        }
    }

    fn run(&self, outputs: &Outputs) -> CliResult<Option<CliError>> {
        match self {
            Job::Walk(c) => run_walk(c, outputs).map(|_| None),
            Job::Train(t) => run_train(t, outputs),
            Job::ErrorVsSteps(c) => run_error_vs_steps(c, outputs).map(|_| None),
            Job::FilterImage(c) => run_filter(c, outputs).map(|_| None),
        }
    }
}

/// Runs `job`, then records a manifest beside its outputs. A diverged run
/// still gets its outputs and manifest before the error is returned.
pub fn execute(job: Job, outputs: Outputs) -> CliResult<()> {
    let started_at = timestamp();
    let late_failure = job.run(&outputs)?;
    if let Some(path) = job.manifest_path(&outputs) {
        let manifest = RunManifest {
            seeds: job.seeds(),
            job,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at,
            finished_at: timestamp(),
            outputs,
        };
        manifest.write(&path)?;
        log::info!("manifest written to {}", path.display());
    }
    match late_failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Re-runs a recorded job. With `out_dir`, outputs keep their file names but
/// move into that directory.
pub fn replay(manifest: &Path, out_dir: Option<&Path>) -> CliResult<()> {
    let m = RunManifest::read(manifest)?;
    let mut outputs = m.outputs.clone();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for p in outputs.values_mut() {
            let name = p.file_name().ok_or_else(|| CliError::invalid(format!("bad output path {}", p.display())))?;
            *p = dir.join(name);
        }
    }
    execute(m.job, outputs)
}

fn run_walk(c: &WalkConfig, outputs: &Outputs) -> CliResult<()> {
    let g = c.graph.build()?;
    let rm = compute_rotation_map(&g)?;
    let coin = c.coin.build(g.degree())?;
    let sched = CoinSchedule::single(coin, vec![], c.steps)?;
    let s0 = build_initial_state(&g, &c.start, None)?;
    let s = evolve_with(&rm, &sched, &s0, EvolveOptions { renormalize: c.renormalize })?;
    let p = measure_positions(&s);
    let total: f64 = p.iter().sum();
    match outputs.get("probabilities") {
        Some(path) => {
            let mut w = create(path)?;
            write_probabilities_csv(&p, &mut w)?;
            finish(w, path)?;
            println!("total probability: {total:.15}");
        }
        None => {
            write_probabilities_csv(&p, std::io::stdout().lock())?;
            eprintln!("total probability: {total:.15}");
        }
    }
    if let Some(path) = outputs.get("state") {
        let mut w = create(path)?;
        write_state_csv(&s, &mut w)?;
        finish(w, path)?;
    }
    Ok(())
}

fn run_train(t: &TrainFile, outputs: &Outputs) -> CliResult<Option<CliError>> {
    let (resolved, cfg) = t.clone().resolve(Path::new("."))?;
    let run = match &resolved.method {
        crate::config::Method::GradientDescent => gradient_descent(&cfg)?,
        crate::config::Method::Annealing { schedule, proposal_scale, seed } => {
            anneal_search(&cfg, schedule, *proposal_scale, *seed)?
        }
    };
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    let doc = RunDocument { config: resolved, run };
    let run_path = output(outputs, "run")?;
    if let Some(dir) = run_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::invalid(e.to_string()))?;
    std::fs::write(run_path, json + "\n").map_err(|e| CliError::io(run_path, e))?;
    let trace_path = output(outputs, "trace")?;
    let mut w = create(trace_path)?;
    doc.run.write_trace_csv(&mut w)?;
    finish(w, trace_path)?;
    let cmp_path = output(outputs, "comparison")?;
    let mut w = create(cmp_path)?;
    doc.run.write_comparison_csv(&mut w)?;
    finish(w, cmp_path)?;

    println!(
        "iterations: {}  initial error: {:.6e}  final error: {:.6e}",
        doc.run.trace.len() - 1,
        doc.run.trace[0],
        doc.run.final_error
    );
    Ok(match doc.run.status {
        RunStatus::Completed => None,
        RunStatus::Diverged { iteration } => {
            Some(CliError::Diverged(format!("training diverged at iteration {iteration}; partial results written")))
        }
    })
}

fn write_error_csv<W: Write>(errors: &[f64], mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,error")?;
    for (i, e) in errors.iter().enumerate() {
        writeln!(out, "{},{e:e}", i + 1)?;
    }
    out.flush()
}

fn run_error_vs_steps(c: &ErrorVsStepsConfig, outputs: &Outputs) -> CliResult<()> {
    let doc = read_run(&c.run)?;
    let cfg = doc.train_config()?;
    let errors = error_vs_steps(&doc.run.params, &cfg, c.t_max)?;
    match outputs.get("errors") {
        Some(path) => {
            let w = create(path)?;
            write_error_csv(&errors, w).map_err(|e| CliError::io(path, e))
        }
        None => write_error_csv(&errors, std::io::stdout().lock()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run_filter(c: &FilterConfig, outputs: &Outputs) -> CliResult<()> {
    let channel: ChannelSelect = c.channel.parse()?;
    let file = File::open(&c.input).map_err(|e| CliError::io(&c.input, e))?;
    let img = read_netpbm(std::io::BufReader::new(file))?;
    let out = filter_channel(img.channel(channel), c.steps, c.angle_scale, c.seed)?;
    let path = output(outputs, "image")?;
    let mut w = create(path)?;
    write_pgm(&out, &mut w)?;
    finish(w, path)
}

pub fn graph_info(spec: &GraphSpec) -> CliResult<()> {
    let g = spec.build()?;
    let rm = compute_rotation_map(&g);
    let valid = match &rm {
        Ok(m) => m.validate(&g).is_ok(),
        Err(_) => false,
    };
    println!("graph: {spec}");
    println!("vertices: {}", g.num_vertices());
    println!("degree: {}", g.degree());
    println!("edges: {}", g.num_edges());
    println!("diameter: {}", g.diameter()?);
    println!("bipartite: {}", g.bipartition().is_some());
    println!("rotation map valid: {valid}");
    Ok(())
}

pub fn absolute(p: &Path) -> CliResult<PathBuf> {
    if p.is_absolute() {
        Ok(p.to_path_buf())
    } else {
        Ok(std::env::current_dir().map_err(|e| CliError::io(Path::new("."), e))?.join(p))
    }
}
