use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ising_decomp::{encode, parse_dimacs, run, AnnealSchedule, FrontierOrder, RunReport, SolveConfig, Subsolver};

mod bench;
mod timing;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "ising-decomp", version, about = "Solve 3-SAT on a capacity-limited Ising subsolver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one DIMACS instance. Exit status 0 = satisfied, 2 = iteration cap reached.
    Solve {
        cnf: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every .cnf file of a directory over a range of seeds; CSV out.
    Bench(bench::BenchArgs),
    /// Evaluate the latency/energy model for a preset or a TOML config.
    Timing(timing::TimingArgs),
    /// Write the Ising encoding of an instance as an edge list.
    Encode {
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
pub struct SolveFlags {
    /// Spins per subproblem (variables plus ancillas).
    #[arg(long, default_value_t = 50)]
    capacity: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = SubsolverArg::Anneal)]
    subsolver: SubsolverArg,
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    #[arg(long, default_value_t = 3.0)]
    t_start: f64,
    #[arg(long, default_value_t = 0.05)]
    t_end: f64,
    #[arg(long, value_enum, default_value_t = FrontierArg::Shuffled)]
    frontier: FrontierArg,
    /// Start each anneal from the current spins instead of a random state.
    #[arg(long)]
    warm_start: bool,
    /// Test the random initial state before the first iteration.
    #[arg(long)]
    check_initial: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsolverArg {
    Anneal,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrontierArg {
    Shuffled,
    Ascending,
}

impl SolveFlags {
    pub fn config(&self, seed: u64) -> SolveConfig {
        SolveConfig {
            capacity: self.capacity,
            max_iters: self.max_iters,
            seed,
            schedule: AnnealSchedule {
                sweeps: self.sweeps,
                t_start: self.t_start,
                t_end: self.t_end,
            },
            subsolver: match self.subsolver {
                SubsolverArg::Anneal => Subsolver::Anneal,
                SubsolverArg::Exhaustive => Subsolver::Exhaustive,
            },
            frontier: match self.frontier {
                FrontierArg::Shuffled => FrontierOrder::Shuffled,
                FrontierArg::Ascending => FrontierOrder::Ascending,
            },
            warm_start: self.warm_start,
            check_initial: self.check_initial,
        }
    }
}

#[derive(Serialize)]
struct RunDocument<'a> {
    schema_version: u32,
    instance: String,
    config: &'a SolveConfig,
    report: &'a RunReport,
    wall_clock_ms: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve { cnf, flags, format, out } => solve(&cnf, &flags, format, out.as_deref()),
        Command::Bench(args) => bench::run(&args).map(|()| ExitCode::SUCCESS),
        Command::Timing(args) => timing::run(&args).map(|()| ExitCode::SUCCESS),
        Command::Encode { cnf, out } => {
            let formula = read_formula(&cnf)?;
            write_output(out.as_deref(), encode(&formula).to_edge_list().as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

pub fn read_formula(path: &Path) -> Result<ising_decomp::CnfFormula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn solve(cnf: &Path, flags: &SolveFlags, format: Format, out: Option<&Path>) -> Result<ExitCode> {
    let formula = read_formula(cnf)?;
    let config = flags.config(flags.seed);
    let started = Instant::now();
    let report = run(&formula, &config)?;
    let wall_clock_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(x) = &report.assignment {
        anyhow::ensure!(formula.evaluate(x)?.0, "solver returned an assignment that does not satisfy the formula");
    }

    let bytes = match format {
        Format::Json => {
            let doc = RunDocument {
                schema_version: SCHEMA_VERSION,
                instance: cnf.display().to_string(),
                config: &config,
                report: &report,
                wall_clock_ms,
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["instance", "seed", "status", "iterations", "final_energy", "assignment"])?;
            let assignment = report
                .assignment
                .as_ref()
                .map(|x| {
                    x.iter()
                        .enumerate()
                        .map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            w.write_record([
                cnf.display().to_string(),
                config.seed.to_string(),
                status(&report).to_string(),
                report.iterations_used.to_string(),
                report.final_energy.to_string(),
                assignment,
            ])?;
            w.into_inner()?
        }
    };
    write_output(out, &bytes)?;
    Ok(if report.satisfied { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

pub fn status(report: &RunReport) -> &'static str {
    if report.satisfied {
        "sat"
    } else {
        "timeout"
    }
}
