//! Command-line interface: `simulate`, `segment`, `check`, `series` and
//! `generate`.
//!
//! Exit codes: 0 when the analysis completed (verdicts live in the report),
//! 2 for invalid input, 1 for internal failures.

pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::accumulation::{segment, Direction, Segmentation};
use crate::analysis::{
    check_theorem, classify_schedule, partial_sums, GapSchedule, ScheduleKind, TheoremOptions,
};
use crate::error::Error;
use crate::generators::GeneratorSpec;
use crate::processes::{run_consensus, run_markov, RunOptions};
use crate::structure::{FormViolation, GantmacherForm};

pub use files::{trace_csv, SequenceFile};

const DEFAULT_HORIZON: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "stochprod",
    version,
    about = "Products of stochastic matrices with positive diagonals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Overrides the seed of generator inputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Convergence tolerance (simulate) or residual threshold (check).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Consensus,
    Markov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Fwd,
    Bwd,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Fwd => Direction::Forward,
            DirectionArg::Bwd => Direction::Backward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Constant,
    Log,
    Loglog,
}

impl From<KindArg> for ScheduleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Constant => ScheduleKind::Constant,
            KindArg::Log => ScheduleKind::Log,
            KindArg::Loglog => ScheduleKind::Loglog,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the consensus or Markov process and write its trace.
    Simulate {
        input: PathBuf,
        /// Initial vector: comma-separated values or a JSON array file.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, value_enum, default_value = "consensus")]
        process: Process,
        #[arg(long)]
        horizon: Option<usize>,
        /// Report destination; stderr when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Segment an accumulation into windows with a common saturated pattern.
    Segment {
        input: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_enum, default_value = "bwd")]
        direction: DirectionArg,
    },
    /// Check the convergence hypotheses and conclusion residuals.
    Check {
        input: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        /// Uniform lower bound on every matrix's positive minimum.
        #[arg(long)]
        delta_floor: Option<f64>,
        /// Gap schedule certifying the window bounds.
        #[arg(long, value_enum)]
        schedule: Option<KindArg>,
        #[arg(long, default_value_t = 1.0)]
        schedule_a: f64,
        /// Schedule delta; defaults to --delta-floor.
        #[arg(long)]
        schedule_delta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        schedule_gap: usize,
    },
    /// Partial sums and classification of a gap-schedule series.
    Series {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        delta: f64,
        /// Constant gap N.
        #[arg(long, default_value_t = 1)]
        gap: usize,
        #[arg(long)]
        upto: usize,
    },
    /// Materialize a generator spec into a sequence file.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        count: usize,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("stochprod: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate {
            input,
            x0,
            process,
            horizon,
            report,
        } => simulate(cli, input, x0, *process, *horizon, report.as_deref()),
        Command::Segment {
            input,
            horizon,
            direction,
        } => {
            let seq = load_sequence(cli, input, *horizon)?;
            let seg = segment(&seq, (*direction).into(), seq.horizon())?;
            emit(cli.out.as_deref(), &to_json(&SegmentReport::new(seg)?)?)
        }
        Command::Check {
            input,
            horizon,
            delta_floor,
            schedule,
            schedule_a,
            schedule_delta,
            schedule_gap,
        } => {
            let seq = load_sequence(cli, input, *horizon)?;
            let mut opts = TheoremOptions::new(seq.horizon());
            if let Some(tol) = cli.tol {
                opts.residual_tol = tol;
            }
            opts.delta_floor = *delta_floor;
            if let Some(kind) = schedule {
                let delta = schedule_delta
                    .or(*delta_floor)
                    .ok_or_else(|| invalid("--schedule needs --schedule-delta or --delta-floor"))?;
                let sched = build_schedule(*kind, *schedule_a, delta, *schedule_gap);
                sched.validate()?;
                opts.schedule = Some(sched);
            }
            let report = check_theorem(&seq, &opts)?;
            emit(cli.out.as_deref(), &to_json(&report)?)
        }
        Command::Series {
            kind,
            a,
            delta,
            gap,
            upto,
        } => series(cli, build_schedule(*kind, *a, *delta, *gap), *upto),
        Command::Generate { spec, count } => {
            let text = std::fs::read_to_string(spec).map_err(invalid)?;
            let mut spec: GeneratorSpec = serde_json::from_str(&text).map_err(invalid)?;
            if let Some(seed) = cli.seed {
                spec.seed = seed;
            }
            if *count == 0 {
                return Err(invalid("--count must be positive"));
            }
            let seq = crate::accumulation::MatrixSequence::from_generator(spec, *count)?;
            let file = SequenceFile::Stored(seq.to_matrices());
            emit(cli.out.as_deref(), &file.to_json()?)
        }
    }
}

fn build_schedule(kind: KindArg, a: f64, delta: f64, gap: usize) -> GapSchedule {
    match kind {
        KindArg::Constant => GapSchedule::constant(delta, gap),
        KindArg::Log => GapSchedule::log(a, delta),
        KindArg::Loglog => GapSchedule::loglog(a, delta),
    }
}

fn load_sequence(
    cli: &Cli,
    input: &Path,
    horizon: Option<usize>,
) -> Result<crate::accumulation::MatrixSequence, CliError> {
    let mut file = SequenceFile::load(input).map_err(invalid)?;
    if let Some(seed) = cli.seed {
        file.reseed(seed);
    }
    file.into_sequence(horizon, DEFAULT_HORIZON)
        .map_err(invalid)
}

fn parse_vector(arg: &str) -> Result<Vec<f64>, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(invalid)?;
        return serde_json::from_str(&text).map_err(invalid);
    }
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| invalid(format!("{s:?}: {e}")))
        })
        .collect()
}

fn simulate(
    cli: &Cli,
    input: &Path,
    x0: &str,
    process: Process,
    horizon: Option<usize>,
    report_path: Option<&Path>,
) -> Result<(), CliError> {
    let seq = load_sequence(cli, input, horizon)?;
    let v0 = parse_vector(x0)?;
    let mut opts = RunOptions::with_horizon(seq.horizon());
    if let Some(tol) = cli.tol {
        opts.tol = tol;
    }
    let format = cli.format.unwrap_or(Format::Csv);
    let (trace, report) = match process {
        Process::Consensus => {
            let run = run_consensus(&seq, &v0, &opts)?;
            let trace = match format {
                Format::Csv => {
                    trace_csv(run.trace.iter().map(|s| (s.t, s.x.as_slice())), seq.dim())
                }
                Format::Json => to_json(&run.trace)?,
            };
            let report = json!({
                "process": "consensus",
                "steps": run.final_state().t,
                "final": run.final_state().x,
                "clusters": run.report,
            });
            (trace, report)
        }
        Process::Markov => {
            let run = run_markov(&seq, &v0, &opts)?;
            let trace = match format {
                Format::Csv => {
                    trace_csv(run.trace.iter().map(|s| (s.t, s.p.as_slice())), seq.dim())
                }
                Format::Json => to_json(&run.trace)?,
            };
            let last = run.trace.last().expect("trace holds the initial state");
            let report = json!({
                "process": "markov",
                "steps": last.t,
                "final": last.p,
                "converged": run.converged,
                "last_movement": run.last_movement,
            });
            (trace, report)
        }
    };
    emit(cli.out.as_deref(), &trace)?;
    let report = to_json(&report)?;
    match report_path {
        Some(p) => std::fs::write(p, report).map_err(|e| CliError::Internal(e.to_string())),
        None => {
            eprintln!("{report}");
            Ok(())
        }
    }
}

fn series(cli: &Cli, sched: GapSchedule, upto: usize) -> Result<(), CliError> {
    sched.validate()?;
    let first = sched.first_term();
    if upto < first {
        return Err(invalid(format!("--upto must be at least {first}")));
    }
    let mut checkpoints: Vec<usize> = std::iter::successors(Some(10usize), |c| c.checked_mul(10))
        .take_while(|&c| c < upto)
        .filter(|&c| c >= first)
        .collect();
    checkpoints.push(upto);
    let sums = partial_sums(&sched, &checkpoints)?;
    let class = classify_schedule(&sched);
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("n,partial_sum\n");
            for (n, s) in &sums {
                out.push_str(&format!("{n},{s:?}\n"));
            }
            emit(cli.out.as_deref(), &out)?;
            eprintln!("{}", json!({ "schedule": sched, "classification": class }));
            Ok(())
        }
        Format::Json => {
            let table: Vec<_> = sums
                .iter()
                .map(|(n, s)| json!({ "n": n, "partial_sum": s }))
                .collect();
            let doc = json!({ "schedule": sched, "classification": class, "partial_sums": table });
            emit(cli.out.as_deref(), &to_json(&doc)?)
        }
    }
}

/// JSON document written by `segment`.
#[derive(Debug, Serialize)]
pub struct SegmentReport {
    #[serde(flatten)]
    pub segmentation: Segmentation,
    pub gantmacher: GantmacherForm,
    pub block_violations: Vec<FormViolation>,
}

impl SegmentReport {
    pub fn new(seg: Segmentation) -> Result<Self, CliError> {
        let gantmacher = GantmacherForm::from_pattern(&seg.segment_pattern)?;
        let block_violations = if seg.stabilized {
            let mut v = gantmacher.violations();
            v.extend(gantmacher.dichotomy_violations());
            v
        } else {
            Vec::new()
        };
        Ok(SegmentReport {
            segmentation: seg,
            gantmacher,
            block_violations,
        })
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    let result = match out {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes()).and_then(|_| {
                if content.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                }
            })
        }
    };
    result.map_err(|e| CliError::Internal(e.to_string()))
}
