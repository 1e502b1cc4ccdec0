//! Command-line front end.
//!
//! Kept in the library so tests can drive it without spawning a process; the
//! `ramm` binary only forwards arguments and writes the outcome.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::etc::RoundingMode;
use crate::gantt::{render_gantt, GanttStyle};
use crate::metrics::compute_metrics;
use crate::model::{ResourceId, TaskId};
use crate::oracle::{optimal_makespan, DEFAULT_LIMIT};
use crate::policy::{DivertVariant, PolicyId};
use crate::report::{emit_report, emit_reports, ComparisonReport, ReportFormat};
use crate::scenario::{generate_workload, parse_scenario, Scenario, WorkloadRanges};
use crate::time::format_approx;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ramm",
    version,
    about = "Batch task scheduling heuristics and makespan benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schedule one scenario with one policy and print the Gantt chart and metrics.
    Run(RunArgs),
    /// Evaluate every policy on one or more scenarios.
    Compare(CompareArgs),
    /// Exhaustively compute the optimal makespan of a small scenario.
    Oracle(OracleArgs),
    /// Generate a seeded random workload scenario.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    MinMin,
    MaxMin,
    ImprovedMaxMin,
    Ramm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum VariantArg {
    #[default]
    PaperConsistent,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Exact,
    Ceil,
    Nearest,
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RunFormat {
    #[default]
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl From<PolicyArg> for PolicyId {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::MinMin => PolicyId::MinMin,
            PolicyArg::MaxMin => PolicyId::MaxMin,
            PolicyArg::ImprovedMaxMin => PolicyId::ImprovedMaxMin,
            PolicyArg::Ramm => PolicyId::Ramm,
        }
    }
}

impl From<VariantArg> for DivertVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::PaperConsistent => DivertVariant::PaperConsistent,
            VariantArg::Strict => DivertVariant::Strict,
        }
    }
}

impl From<RoundingArg> for RoundingMode {
    fn from(r: RoundingArg) -> Self {
        match r {
            RoundingArg::Exact => RoundingMode::Exact,
            RoundingArg::Ceil => RoundingMode::Ceil,
            RoundingArg::Nearest => RoundingMode::Nearest,
            RoundingArg::Floor => RoundingMode::Floor,
        }
    }
}

impl From<TableFormat> for ReportFormat {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Text => ReportFormat::Text,
            TableFormat::Csv => ReportFormat::Csv,
            TableFormat::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Rounding applied when deriving execution times from a workload scenario.
    #[arg(long, value_enum)]
    pub rounding: Option<RoundingArg>,
    /// Write output to this file instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "ramm")]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value = "paper-consistent")]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: RunFormat,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(required = true)]
    pub scenarios: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "paper-consistent")]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TableFormat,
    /// Add the exhaustive optimum as an extra column.
    #[arg(long)]
    pub with_oracle: bool,
    /// Maximum number of mappings the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub limit: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub scenario: PathBuf,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub limit: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub tasks: usize,
    #[arg(long, default_value_t = 2)]
    pub resources: usize,
    /// Instruction volume range in MI, `LO..HI` inclusive.
    #[arg(long, value_parser = parse_range, default_value = "10..1000")]
    pub mi: (u64, u64),
    /// Data volume range in Mb.
    #[arg(long, value_parser = parse_range, default_value = "10..600")]
    pub mb: (u64, u64),
    /// Processing speed range in MIPS.
    #[arg(long, value_parser = parse_range, default_value = "50..300")]
    pub mips: (u64, u64),
    /// Bandwidth range in Mbps.
    #[arg(long, value_parser = parse_range, default_value = "5..300")]
    pub mbps: (u64, u64),
    /// Scenario name; defaults to `gen-<seed>-<tasks>x<resources>`.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("invalid lower bound in {s:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("invalid upper bound in {s:?}"))?;
    Ok((lo, hi))
}

/// Exit status plus captured streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InstanceTooLarge { .. } => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: format!("error: {e}"),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

/// Parses `args` (program name first) and executes the command.
pub fn run_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let (result, out) = match cli.command {
        Command::Run(args) => {
            let out = args.common.out.clone();
            (cmd_run(&args), out)
        }
        Command::Compare(args) => {
            let out = args.common.out.clone();
            (cmd_compare(&args), out)
        }
        Command::Oracle(args) => {
            let out = args.common.out.clone();
            (cmd_oracle(&args), out)
        }
        Command::Gen(args) => {
            let out = args.out.clone();
            (cmd_gen(&args), out)
        }
    };
    match (result, out) {
        (Ok(text), None) => Outcome::ok(text),
        (Ok(text), Some(path)) => match std::fs::write(&path, text) {
            Ok(()) => Outcome::ok(String::new()),
            Err(e) => Outcome::fail(EXIT_INPUT, format!("error: cannot write {}: {e}", path.display())),
        },
        (Err(f), _) => Outcome::fail(f.code, f.message),
    }
}

fn load(path: &Path) -> std::result::Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("error: cannot read {}: {e}", path.display()),
    })?;
    parse_scenario(&text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("error: {}: {e}", path.display()),
    })
}

fn cmd_run(args: &RunArgs) -> CmdResult {
    let scenario = load(&args.scenario)?;
    let etc = scenario.etc_with(args.common.rounding.map(Into::into))?;
    let labels = scenario.labels();
    let policy = PolicyId::from(args.policy);
    let variant = DivertVariant::from(args.variant);
    let report = ComparisonReport::evaluate(&scenario.name, labels.clone(), &etc, &[policy], variant, None)?;
    let result = &report.results[0];

    Ok(match args.format {
        RunFormat::Csv => emit_report(&report, ReportFormat::Csv),
        RunFormat::Json => emit_report(&report, ReportFormat::Json),
        RunFormat::Svg => render_gantt(&result.schedule, &labels, GanttStyle::Svg),
        RunFormat::Text => {
            let m = compute_metrics(&result.schedule, etc.resources());
            let mut out = String::new();
            let _ = writeln!(out, "scenario: {}", scenario.name);
            match result.variant {
                Some(v) => {
                    let _ = writeln!(out, "policy: {} ({v})", policy.title());
                }
                None => {
                    let _ = writeln!(out, "policy: {}", policy.title());
                }
            }
            out.push('\n');
            out.push_str(&render_gantt(&result.schedule, &labels, GanttStyle::Ascii));
            out.push('\n');
            let per_resource = |vals: Vec<String>| {
                vals.iter()
                    .enumerate()
                    .map(|(j, v)| format!("{}={v}", labels.resource(ResourceId(j))))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(out, "makespan: {}", m.makespan.to_display_string());
            let _ = writeln!(
                out,
                "loads: {}",
                per_resource(m.loads.iter().map(|l| l.to_display_string()).collect())
            );
            let _ = writeln!(out, "imbalance: {}", format_approx(&m.imbalance, 6));
            let _ = writeln!(
                out,
                "utilization: {}",
                per_resource(m.utilization.iter().map(|u| format_approx(u, 6)).collect())
            );
            let waiting: Vec<String> = m
                .waiting
                .iter()
                .enumerate()
                .map(|(i, w)| format!("{}={}", labels.task(TaskId(i)), w.to_display_string()))
                .collect();
            let _ = writeln!(out, "waiting: {}", waiting.join(" "));
            out
        }
    })
}

fn cmd_compare(args: &CompareArgs) -> CmdResult {
    let rounding = args.common.rounding.map(RoundingMode::from);
    let variant = DivertVariant::from(args.variant);
    let oracle_limit = args.with_oracle.then_some(args.limit);

    // Scenarios are independent; results are collected back in argument order.
    let reports: Vec<std::result::Result<ComparisonReport, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .scenarios
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let scenario = load(path)?;
                    let etc = scenario.etc_with(rounding)?;
                    Ok(ComparisonReport::evaluate(
                        &scenario.name,
                        scenario.labels(),
                        &etc,
                        &PolicyId::ALL,
                        variant,
                        oracle_limit,
                    )?)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario evaluation panicked"))
            .collect()
    });
    let reports = reports.into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(emit_reports(&reports, args.format.into()))
}

fn cmd_oracle(args: &OracleArgs) -> CmdResult {
    let scenario = load(&args.scenario)?;
    let etc = scenario.etc_with(args.common.rounding.map(Into::into))?;
    let labels = scenario.labels();
    let found = optimal_makespan(&etc, args.limit)?;
    let schedule = found.witness_schedule(&etc)?;

    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario.name);
    let _ = writeln!(out, "optimal makespan: {}", found.optimal_makespan.to_display_string());
    let _ = writeln!(out, "explored mappings: {}", found.explored);
    let witness: Vec<String> = found
        .witness
        .iter()
        .enumerate()
        .map(|(i, &r)| format!("{}->{}", labels.task(TaskId(i)), labels.resource(r)))
        .collect();
    let _ = writeln!(out, "witness: {}", witness.join(" "));
    out.push('\n');
    out.push_str(&render_gantt(&schedule, &labels, GanttStyle::Ascii));
    Ok(out)
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let ranges = WorkloadRanges {
        mi: args.mi,
        mb: args.mb,
        mips: args.mips,
        mbps: args.mbps,
    };
    let mut scenario = generate_workload(args.seed, args.tasks, args.resources, ranges)?;
    if let Some(name) = &args.name {
        scenario.name = name.clone();
    }
    Ok(scenario.to_json())
}
