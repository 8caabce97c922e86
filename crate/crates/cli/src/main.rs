mod commands;
mod config;
mod error;
mod manifest;
mod specs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtqw::imagefilter::ChannelSelect;
use dtqw::GraphSpec;

use commands::{absolute, execute, graph_info, replay, ErrorVsStepsConfig, FilterConfig, Job, Outputs, WalkConfig};
use config::{parse_json, read_text, TrainFile};
use error::{CliError, CliResult};
use specs::{CoinSpec, StartSpec};

/// Coined quantum walks on regular graphs: simulate, train coins, filter images.
#[derive(Parser, Debug)]
#[command(name = "dtqw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a walk with one coin and write the vertex distribution.
    Walk(WalkArgs),
    /// Fit coin parameters to a target distribution from a JSON config.
    Train(TrainArgs),
    /// Error of a trained run at every step count 1..=t-max.
    ErrorVsSteps(ErrorVsStepsArgs),
    /// Column-wise walk filter on one channel of a PGM/PPM image.
    FilterImage(FilterArgs),
    /// Size, degree, diameter, bipartiteness and rotation-map check.
    GraphInfo(GraphInfoArgs),
    /// Re-run a command from the manifest it wrote.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
struct WalkArgs {
    /// cycle:N, complete:N, petersen, c60, random:N:D:SEED or an edge-list path.
    #[arg(long)]
    graph: String,
    /// fourier, identity, torus:T1,..,Td, torus-unit:T1,..,Td or lie:A1,..
    #[arg(long, default_value = "fourier")]
    coin: String,
    /// Defaults to twice the diameter.
    #[arg(long)]
    steps: Option<usize>,
    /// Start vertex (1-based); the coin register starts in the Fourier state.
    #[arg(long, default_value_t = 1)]
    start: usize,
    /// Renormalize after every step.
    #[arg(long)]
    renormalize: bool,
    /// Probability CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full coin-position amplitude CSV.
    #[arg(long)]
    state_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// JSON training config.
    #[arg(long)]
    config: PathBuf,
    /// Directory for run.json, trace.csv, comparison.csv and manifest.json.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct ErrorVsStepsArgs {
    /// run.json written by `train`.
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    t_max: usize,
    /// CSV (t, error); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// red, green or blue; ignored for grayscale input.
    #[arg(long, default_value = "green")]
    channel: String,
    #[arg(long, default_value_t = 2)]
    steps: usize,
    #[arg(long, default_value_t = 0.3)]
    angle_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output P5 image.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GraphInfoArgs {
    #[arg(long)]
    graph: String,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Write outputs here instead of their recorded locations.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn parse_graph(s: &str) -> CliResult<GraphSpec> {
    Ok(s.parse::<GraphSpec>()?)
}

fn walk(a: WalkArgs) -> CliResult<()> {
    let graph = parse_graph(&a.graph)?;
    let coin: CoinSpec = a.coin.parse()?;
    let steps = match a.steps {
        Some(t) => t,
        None => 2 * graph.build()?.diameter()?,
    };
    let mut outputs = Outputs::new();
    if let Some(p) = &a.out {
        outputs.insert("probabilities".into(), absolute(p)?);
    }
    if let Some(p) = &a.state_out {
        outputs.insert("state".into(), absolute(p)?);
    }
    let job =
        Job::Walk(WalkConfig { graph, coin, steps, start: StartSpec::Vertex(a.start), renormalize: a.renormalize });
    execute(job, outputs)
}

fn train(a: TrainArgs) -> CliResult<()> {
    let text = read_text(&a.config)?;
    let file: TrainFile = parse_json(&text, &a.config.display().to_string())?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let (resolved, _) = file.resolve(base)?;
    let dir = absolute(&a.out_dir)?;
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let outputs: Outputs = [
        ("run".to_string(), dir.join("run.json")),
        ("trace".to_string(), dir.join("trace.csv")),
        ("comparison".to_string(), dir.join("comparison.csv")),
    ]
    .into();
    execute(Job::Train(resolved), outputs)
}

fn error_vs_steps(a: ErrorVsStepsArgs) -> CliResult<()> {
    let mut outputs = Outputs::new();
    if let Some(p) = &a.out {
        outputs.insert("errors".into(), absolute(p)?);
    }
    execute(Job::ErrorVsSteps(ErrorVsStepsConfig { run: absolute(&a.run)?, t_max: a.t_max }), outputs)
}

fn filter_image(a: FilterArgs) -> CliResult<()> {
    let channel: ChannelSelect = a.channel.parse()?;
    let outputs: Outputs = [("image".to_string(), absolute(&a.out)?)].into();
    let job = Job::FilterImage(FilterConfig {
        input: absolute(&a.input)?,
        channel: channel.to_string(),
        steps: a.steps,
        angle_scale: a.angle_scale,
        seed: a.seed,
    });
    execute(job, outputs)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Walk(a) => walk(a),
        Command::Train(a) => train(a),
        Command::ErrorVsSteps(a) => error_vs_steps(a),
        Command::FilterImage(a) => filter_image(a),
        Command::GraphInfo(a) => graph_info(&parse_graph(&a.graph)?),
        Command::Replay(a) => replay(&a.manifest, a.out_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CliError::Usage(String::new()).exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
