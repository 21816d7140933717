//! `msrcpspr` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a solve ends infeasible or on a limit,
//! 2 on any input or output error. Logs go to stderr (`RUST_LOG` sets the
//! level), data goes to files under `--out`.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::InstanceArgs;

#[derive(Debug, Parser)]
#[command(name = "msrcpspr", version, about = "Bi-objective multi-skill project scheduling with resource breakdowns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an instance and its extension sidecar.
    Validate {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Solve one single-objective subproblem.
    Solve(SolveArgs),
    /// Enumerate the Pareto front and rank it.
    Pareto(ParetoArgs),
    /// Re-enumerate the front with one breakdown rate scaled.
    Sweep(SweepArgs),
    /// Compare the closed-form waiting time with a simulation.
    Simulate(SimulateArgs),
    /// Solve one subproblem and draw its schedule.
    Gantt(SolveArgs),
    /// Write the default extension sidecar for a plain PSPLIB file.
    Adapt(AdaptArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Makespan,
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParameterArg {
    Retrieval,
    Disruption,
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Wall-clock limit per subproblem, in seconds.
    #[arg(long, default_value_t = 300.0, value_parser = positive)]
    time_limit: f64,
}

#[derive(Debug, Args)]
struct FrontArgs {
    /// Number of grid intervals on the cost range.
    #[arg(long = "grid", default_value_t = msrcpspr::pareto::DEFAULT_GRID)]
    grid: usize,
    /// Augmentation weight, within [1e-6, 1e-3].
    #[arg(long, default_value_t = msrcpspr::pareto::DEFAULT_EPS)]
    eps: f64,
    /// Visit every grid level instead of skipping the ones a slack covers.
    #[arg(long)]
    no_bypass: bool,
    /// Solve grid levels in parallel (implies no bypass).
    #[arg(long)]
    parallel: bool,
    /// Fill the wall_time column of the front CSV.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Makespan)]
    objective: ObjectiveArg,
    /// Upper bound on the other objective.
    #[arg(long)]
    budget: Option<f64>,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ParetoArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    front: FrontArgs,
    /// VIKOR weights for makespan and cost.
    #[arg(long, default_value = "0.5,0.5", value_parser = weight_pair)]
    weights: (f64, f64),
    /// VIKOR strategy weight.
    #[arg(long, default_value_t = msrcpspr::vikor::DEFAULT_V)]
    v: f64,
    /// Skip the plain epsilon-constraint sweep used for comparison.
    #[arg(long)]
    no_compare: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    front: FrontArgs,
    #[arg(long, value_enum)]
    parameter: ParameterArg,
    /// Comma-separated positive factors.
    #[arg(long, default_value = "1.4", value_delimiter = ',', value_parser = positive)]
    multipliers: Vec<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Instance whose resources are simulated at integer arrival rates.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    extension: Option<PathBuf>,
    #[arg(long)]
    default_adaptation: bool,
    /// Extra operating point `lambda,mu,upsilon,r`; may be repeated.
    #[arg(long = "point", value_parser = operating_point)]
    points: Vec<[f64; 4]>,
    /// Largest integer arrival rate tried per resource.
    #[arg(long, default_value_t = 3)]
    max_rate: usize,
    #[arg(long, default_value_t = 1e6, value_parser = positive)]
    horizon: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AdaptArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 4)]
    resources: usize,
    /// Defaults to one skill per renewable resource type of the file.
    #[arg(long)]
    skills: Option<usize>,
    #[arg(long, default_value_t = 2)]
    request_cap: u32,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 0.5, value_parser = positive)]
    disruption: f64,
    #[arg(long, default_value_t = 0.5, value_parser = positive)]
    retrieval: f64,
    /// Defaults to 2.5 times the executable activity count.
    #[arg(long, value_parser = positive)]
    service: Option<f64>,
    /// Sidecar path; defaults to `<instance stem>.ext.json` beside the file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s} is not a positive number"))
    }
}

fn numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| format!("expected {N} comma-separated numbers, got {s:?}"))
}

fn weight_pair(s: &str) -> Result<(f64, f64), String> {
    numbers::<2>(s).map(|[a, b]| (a, b))
}

fn operating_point(s: &str) -> Result<[f64; 4], String> {
    numbers::<4>(s)
}

/// How a command ended, when it did not fail on its inputs.
enum Outcome {
    Done,
    /// Infeasible, or stopped on a limit.
    Unsolved,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("MSRCPSPR_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| anyhow::anyhow!("MSRCPSPR_THREADS={raw:?} is not a count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Validate { instance } => commands::validate(&instance),
        Command::Solve(args) => commands::solve(&args, false),
        Command::Gantt(args) => commands::solve(&args, true),
        Command::Pareto(args) => commands::pareto(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Adapt(args) => commands::adapt(&args),
    });
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unsolved) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
