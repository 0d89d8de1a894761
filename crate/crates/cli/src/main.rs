//! `maxcov`: plan UAV routes that cover as many targets as possible.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use maxcov::experiment::{
    emit_report, emit_route_plot, resolve_flight_range, solve_once, Algorithm, ExperimentError,
    ExperimentSpec, FrMode, ReportFormat,
};
use maxcov::mmas::write_stats_csv;
use maxcov::{
    build_distance_matrix, critical_distance, parse_tsplib, run_mmas, validate_plan, Instance,
    Metric, MmasParams, ProblemConfig, RoutePlan, TauMinSchedule, UpdateRule,
};

#[derive(Parser)]
#[command(name = "maxcov", version, about = "Range-constrained multi-UAV target coverage planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one algorithm and print the plan.
    Solve(SolveArgs),
    /// Run an experiment sweep described by a JSON spec.
    Sweep(SweepArgs),
    /// Print instance summary: size, critical distance, distance statistics.
    Info(InfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Exact,
    Rounded,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Exact => Metric::Exact,
            MetricArg::Rounded => Metric::Rounded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Nn,
    Mmas,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrModeArg {
    Cd,
    CdHalf,
    CdDouble,
    Absolute,
}

#[derive(Clone, Copy, ValueEnum)]
enum UpdateRuleArg {
    PerAnt,
    IterationBest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Static,
    Dynamic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

#[derive(clap::Args)]
struct InstanceArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    metric: MetricArg,
    /// Base node index (0-based, file order).
    #[arg(long)]
    base: Option<usize>,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum)]
    fr_mode: FrModeArg,
    /// Flight range for `--fr-mode absolute`.
    #[arg(long)]
    fr: Option<f64>,
    #[arg(long)]
    uavs: usize,
    #[arg(long, default_value_t = 151)]
    ants: usize,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long, default_value_t = 7.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.01)]
    rho: f64,
    #[arg(long, value_enum, default_value = "per-ant")]
    update_rule: UpdateRuleArg,
    #[arg(long, value_enum, default_value = "static")]
    tau_min_schedule: ScheduleArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an SVG route plot.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Write the per-iteration MMAS statistics as CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(clap::Args)]
struct InfoArgs {
    #[command(flatten)]
    instance: InstanceArgs,
}

/// Failure classes, each mapped to a distinct process exit code.
enum Failure {
    Usage(anyhow::Error),
    Parse(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Parse(e) | Failure::Runtime(e) => e,
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Parse { .. } => Failure::Parse(e.into()),
            ExperimentError::Config(_)
            | ExperimentError::Params(_)
            | ExperimentError::Instance(_) => Failure::Usage(e.into()),
            ExperimentError::Io { .. } | ExperimentError::InvalidPlan { .. } => {
                Failure::Runtime(e.into())
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow::anyhow!(msg.into()))
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn load_instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))
        .map_err(Failure::Runtime)?;
    let inst = parse_tsplib(&text)
        .with_context(|| format!("parsing {}", args.instance.display()))
        .map_err(Failure::Parse)?;
    let inst = inst.with_metric(args.metric.into());
    match args.base {
        Some(b) => inst.with_base(b).map_err(|e| Failure::Usage(e.into())),
        None => Ok(inst),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime),
        None => io::stdout().write_all(bytes).map_err(runtime),
    }
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let dm = build_distance_matrix(&inst);
    let cd = critical_distance(&dm, inst.base());
    let mode = match args.fr_mode {
        FrModeArg::Cd => FrMode::Cd,
        FrModeArg::CdHalf => FrMode::CdHalf,
        FrModeArg::CdDouble => FrMode::CdDouble,
        FrModeArg::Absolute => {
            FrMode::Absolute(args.fr.ok_or_else(|| usage("--fr-mode absolute requires --fr"))?)
        }
    };
    if args.fr.is_some() && !matches!(args.fr_mode, FrModeArg::Absolute) {
        return Err(usage("--fr is only valid with --fr-mode absolute"));
    }
    let fr = resolve_flight_range(mode, cd)?;
    let cfg = ProblemConfig::new(fr, args.uavs).map_err(|e| Failure::Usage(e.into()))?;
    let params = MmasParams {
        beta: args.beta,
        rho: args.rho,
        num_ants: args.ants,
        iterations: args.iters,
        seed: args.seed,
        update_rule: match args.update_rule {
            UpdateRuleArg::PerAnt => UpdateRule::PerAnt,
            UpdateRuleArg::IterationBest => UpdateRule::IterationBest,
        },
        tau_min_schedule: match args.tau_min_schedule {
            ScheduleArg::Static => TauMinSchedule::Static,
            ScheduleArg::Dynamic => TauMinSchedule::Dynamic,
        },
    };
    params.validate().map_err(|e| Failure::Usage(e.into()))?;

    let plan: RoutePlan = match args.algorithm {
        AlgorithmArg::Nn => solve_once(Algorithm::Nn, &inst, &dm, &cfg, &params)?,
        AlgorithmArg::Mmas => {
            let outcome = run_mmas(&inst, &dm, &cfg, &params).map_err(|e| Failure::Usage(e.into()))?;
            if let Some(path) = &args.stats {
                let file = fs::File::create(path)
                    .with_context(|| format!("creating {}", path.display()))
                    .map_err(Failure::Runtime)?;
                write_stats_csv(&outcome.stats, file)
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Runtime)?;
            }
            outcome.best
        }
    };
    if args.stats.is_some() && matches!(args.algorithm, AlgorithmArg::Nn) {
        eprintln!("note: --stats ignored for nn");
    }

    let violations = validate_plan(&plan, &inst, &cfg);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(runtime(anyhow::anyhow!("infeasible plan: {}", list.join("; "))));
    }

    write_output(args.out.as_deref(), plan.to_text().as_bytes())?;
    if let Some(path) = &args.plot {
        write_output(Some(path), emit_route_plot(&inst, &plan).as_bytes())?;
    }
    eprintln!(
        "fr={fr} uavs={} coverage={:.2}% visited={}/{} distance={:.3}",
        cfg.num_uavs,
        plan.coverage(),
        plan.visited_count(),
        plan.total_targets,
        plan.total_distance
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.spec)
        .with_context(|| format!("reading {}", args.spec.display()))
        .map_err(Failure::Runtime)?;
    let dir = args.spec.parent().unwrap_or(Path::new("."));
    let spec = ExperimentSpec::from_json(&text, dir)?;
    let records = maxcov::experiment::run_sweep(&spec)?;
    let format = match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Table => ReportFormat::Table,
    };
    let mut buf = Vec::new();
    emit_report(&records, format, &mut buf).map_err(runtime)?;
    write_output(args.out.as_deref(), &buf)
}

fn info(args: InfoArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let dm = build_distance_matrix(&inst);
    let n = inst.len();
    let mut min = f64::INFINITY;
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dm.get(i, j);
            min = min.min(d);
            max = max.max(d);
            sum += d;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let mut out = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(out, "name: {}", inst.name());
    let _ = writeln!(out, "nodes: {n}");
    let _ = writeln!(out, "targets: {}", inst.num_targets());
    let _ = writeln!(out, "base: {}", inst.base());
    let _ = writeln!(out, "metric: {}", inst.metric());
    let _ = writeln!(out, "critical_distance: {}", critical_distance(&dm, inst.base()));
    let _ = writeln!(out, "distance_min: {min}");
    let _ = writeln!(out, "distance_mean: {}", sum / pairs);
    let _ = writeln!(out, "distance_max: {max}");
    write_output(None, out.as_bytes())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Info(a) => info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
