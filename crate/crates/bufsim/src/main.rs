//! Command-line front end: solve one bounded simulation game, run the
//! incremental inclusion procedure, write example instances, or
//! cross-check the pipeline on random instances.
//!
//! Every report line is `key: value`; exit codes encode the verdict
//! (see the subcommand docs).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bufsim::automata::Nba;
use bufsim::fixtures::FixtureId;
use bufsim::gamegraph::CapacityVector;
use bufsim::inclusion::{LassoBudget, Schedule, Verdict};
use bufsim::sampling::SampleConfig;
use bufsim::traces::TraceAlphabet;
use bufsim::{
    arena_size_bound, check_soundness_sample, decide_simulation, export_dot, incremental_include,
    Owner,
};

#[derive(Parser)]
#[command(
    name = "bufsim",
    version,
    about = "Bounded multi-buffer simulation games and trace-closure inclusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the bounded simulation game for one capacity vector.
    ///
    /// Exit code 0: Duplicator wins, 1: Spoiler wins, 2: error.
    Simulate(SimulateArgs),
    /// Run the incremental inclusion procedure over a uniform capacity
    /// schedule with a doubling counterexample search.
    ///
    /// Exit code 0: INCLUDED, 1: NOT_INCLUDED, 3: UNKNOWN, 2: error.
    Include(IncludeArgs),
    /// Write a named example automaton or trace alphabet to a file.
    Fixture(FixtureArgs),
    /// Cross-check game verdicts against the lasso search on seeded
    /// random instances.
    ///
    /// Exit code 0: no violations, 1: violations found, 2: error.
    RandomCheck(RandomCheckArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Automaton file for the left-hand side.
    #[arg(long = "A", value_name = "FILE")]
    a: PathBuf,
    /// Automaton file for the right-hand side.
    #[arg(long = "B", value_name = "FILE")]
    b: PathBuf,
    /// Trace alphabet file.
    #[arg(long, value_name = "FILE")]
    sigma: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Capacity per buffer, comma-separated (e.g. `2,0`).
    #[arg(long, value_name = "LIST")]
    kappa: String,
    /// Also print both players' winning regions and strategies.
    #[arg(long)]
    strategy: bool,
    /// Write the arena in Graphviz DOT format to this file.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct IncludeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest uniform capacity to try (schedule 0,1,…,n per buffer).
    #[arg(long = "max-total", value_name = "N", default_value_t = 3)]
    max_total: u32,
    /// Stem length limit for the counterexample search.
    #[arg(long, value_name = "N", default_value_t = 4)]
    stem: usize,
    /// Loop length limit for the counterexample search.
    #[arg(long = "loop", value_name = "N", default_value_t = 3)]
    cycle: usize,
    /// Print the winning strategy when the verdict is INCLUDED.
    #[arg(long)]
    strategy: bool,
}

#[derive(Args)]
struct FixtureArgs {
    /// Fixture name (see the error message of a bad name for the list).
    name: String,
    /// Family parameter, required by `thm33_A` / `thm33_B`.
    #[arg(long, value_name = "N")]
    param: Option<u32>,
    /// Directory the file is written into.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct RandomCheckArgs {
    /// Seed for the instance generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Largest uniform capacity per instance.
    #[arg(long = "max-total", value_name = "N", default_value_t = 1)]
    max_total: u32,
    /// Stem length limit for the counterexample search.
    #[arg(long, value_name = "N", default_value_t = 3)]
    stem: usize,
    /// Loop length limit for the counterexample search.
    #[arg(long = "loop", value_name = "N", default_value_t = 2)]
    cycle: usize,
}

type CliError = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    if let Err(msg) = init_logging() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// `BUFSIM_LOG` picks the log level: `quiet` (default), `info`, `debug`.
fn init_logging() -> Result<(), String> {
    let level = match std::env::var("BUFSIM_LOG") {
        Err(std::env::VarError::NotPresent) => log::LevelFilter::Off,
        Err(e) => return Err(format!("BUFSIM_LOG: {e}")),
        Ok(v) => match v.as_str() {
            "quiet" => log::LevelFilter::Off,
            "info" => log::LevelFilter::Info,
            "debug" => log::LevelFilter::Debug,
            other => {
                return Err(format!(
                    "BUFSIM_LOG must be quiet, info or debug, got `{other}`"
                ))
            }
        },
    };
    env_logger::Builder::new().filter_level(level).init();
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Include(args) => cmd_include(args),
        Command::Fixture(args) => cmd_fixture(args),
        Command::RandomCheck(args) => cmd_random_check(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_instance(args: &InstanceArgs) -> Result<(Nba, Nba, TraceAlphabet), CliError> {
    let a = Nba::parse(&read_file(&args.a)?)
        .map_err(|e| format!("{}: {e}", args.a.display()))?;
    let b = Nba::parse(&read_file(&args.b)?)
        .map_err(|e| format!("{}: {e}", args.b.display()))?;
    let sigma = TraceAlphabet::parse(&read_file(&args.sigma)?)
        .map_err(|e| format!("{}: {e}", args.sigma.display()))?;
    Ok((a, b, sigma))
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let (a, b, sigma) = load_instance(&args.instance)?;
    let kappa = CapacityVector::parse(&args.kappa)?;
    let outcome = decide_simulation(&a, &b, &sigma, &kappa)?;
    println!("winner: {}", outcome.winner);
    println!("vertices: {}", outcome.arena.vertex_count());
    println!("edges: {}", outcome.arena.edge_count());
    println!("size_bound: {}", arena_size_bound(&a, &b, &sigma, &kappa)?);
    if let Some(path) = &args.dot {
        fs::write(path, export_dot(&outcome.arena))
            .map_err(|e| format!("{}: {e}", path.display()))?;
        println!("dot: {}", path.display());
    }
    if args.strategy {
        println!("strategy:");
        print!("{}", outcome.solution.to_text());
    }
    Ok(match outcome.winner {
        Owner::Duplicator => ExitCode::SUCCESS,
        Owner::Spoiler => ExitCode::from(1),
    })
}

fn cmd_include(args: IncludeArgs) -> Result<ExitCode, CliError> {
    let (a, b, sigma) = load_instance(&args.instance)?;
    let schedule = Schedule::uniform(sigma.k(), args.max_total);
    let budget = LassoBudget::new(args.stem, args.cycle);
    let verdict = incremental_include(&a, &b, &sigma, &schedule, budget)?;
    println!("verdict: {}", verdict.record());
    Ok(match verdict {
        Verdict::Included { strategy, .. } => {
            if args.strategy {
                println!("strategy:");
                print!("{strategy}");
            }
            ExitCode::SUCCESS
        }
        Verdict::NotIncluded { .. } => ExitCode::from(1),
        Verdict::Unknown { .. } => ExitCode::from(3),
    })
}

fn cmd_fixture(args: FixtureArgs) -> Result<ExitCode, CliError> {
    let id = FixtureId::parse(&args.name, args.param)?;
    fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let path = args.out.join(id.file_name());
    fs::write(&path, id.build().to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    println!("wrote: {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_random_check(args: RandomCheckArgs) -> Result<ExitCode, CliError> {
    let budget = LassoBudget::new(args.stem, args.cycle);
    let report = check_soundness_sample(
        args.seed,
        args.count,
        &SampleConfig::small(),
        budget,
        args.max_total,
    )?;
    println!("instances: {}", report.instances);
    println!("included: {}", report.included);
    println!("not_included: {}", report.not_included);
    println!("unknown: {}", report.unknown);
    println!("violations: {}", report.violations.len());
    for v in &report.violations {
        println!("violation: {v}");
    }
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
