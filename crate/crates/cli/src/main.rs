//! `moebius` — exact checks for Moebius and sub-Moebius structures on
//! finite point sets.
//!
//! Subcommands validate semi-metric spaces, compute and check the
//! induced cross-ratio assignments, scan the chart conditions that
//! characterize metric-induced assignments, reconstruct inducing
//! semi-metrics, and exercise Gromov-product models: building,
//! perturbing, symmetrizing, deviation bounds, ball sandwich estimates,
//! and topology comparison.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed,
//! 2 malformed invocation or input, 3 precondition violated.

mod commands;
mod demo;
mod inputs;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process;

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use crate::inputs::CliError;
use crate::report::Report;

/// Everything a subcommand needs from the invocation; all randomness in
/// any command flows through the one seed.
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub scale: Option<String>,
    pub eps: Option<String>,
    pub h: Option<String>,
    pub seed: u64,
}

#[derive(Parser)]
#[command(
    name = "moebius",
    version,
    about = "Exact checks for Moebius and sub-Moebius structures on finite point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file; repeat the flag for commands comparing two documents.
    #[arg(
        long,
        global = true,
        value_name = "FILE",
        action = ArgAction::Append,
        visible_alias = "model"
    )]
    input: Vec<PathBuf>,

    /// Chart selection: three comma-separated point labels alpha,beta,omega.
    #[arg(long, global = true, value_name = "A,B,W")]
    scale: Option<String>,

    /// Perturbation amplitude, an exact rational such as 1/8.
    #[arg(long, global = true, value_name = "Q", allow_hyphen_values = true)]
    eps: Option<String>,

    /// Hyperbolicity constant override, an exact rational.
    #[arg(long, global = true, value_name = "Q", allow_hyphen_values = true)]
    h: Option<String>,

    /// Seed driving all deterministic randomness.
    #[arg(long, global = true, value_name = "N", default_value_t = 7)]
    seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the parallel scans; defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the semi-metric axioms of a space.
    Validate,
    /// Compute the assignment induced by a space and check its table axioms.
    Moebius,
    /// Check the sub-Moebius table axioms of a table, or of a space's induced table.
    SubmoebiusCheck,
    /// Scan all chart conditions to decide whether an assignment is metric-induced.
    #[command(visible_alias = "moebius-check")]
    IsMoebius,
    /// Rebuild the inducing semi-metric in the chart fixed by --scale.
    Reconstruct,
    /// Decide whether two spaces induce the same assignment.
    Equivalent,
    /// Gromov-product models: build, perturb, symmetrize, deviation.
    #[command(subcommand)]
    Hyperbolic(HyperbolicCmd),
    /// Ball-family topologies: sandwich estimates and comparison.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Run the built-in end-to-end pipeline on the bundled line and tree examples.
    Demo,
}

#[derive(Subcommand)]
enum HyperbolicCmd {
    /// Build a boundary model from a tree, or from a metric space with --basepoint.
    Build {
        /// Basepoint label; required when building from a metric space.
        #[arg(long, value_name = "LABEL")]
        basepoint: Option<String>,
    },
    /// Apply seeded noise to a model's assignment, emitting a log-scale table.
    Perturb,
    /// Average a log-scale table over the signed permutation action.
    Symmetrize,
    /// Compare two assignments' log coordinates against the 10h deviation bound.
    Deviation,
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// Sweep the ball sandwich estimates of a model (and optionally of a table's map).
    Sandwich,
    /// Decide whether two structures generate the same ball-family topology.
    Compare,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        // Failure here means a pool already exists; the run proceeds on it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let config = RunConfig {
        inputs: cli.input,
        scale: cli.scale,
        eps: cli.eps,
        h: cli.h,
        seed: cli.seed,
    };
    let outcome = match &cli.command {
        Command::Validate => commands::validate(&config),
        Command::Moebius => commands::moebius(&config),
        Command::SubmoebiusCheck => commands::submoebius_check(&config),
        Command::IsMoebius => commands::is_moebius_cmd(&config),
        Command::Reconstruct => commands::reconstruct(&config),
        Command::Equivalent => commands::equivalent(&config),
        Command::Hyperbolic(HyperbolicCmd::Build { basepoint }) => {
            commands::hyperbolic_build(&config, basepoint.as_deref())
        }
        Command::Hyperbolic(HyperbolicCmd::Perturb) => commands::hyperbolic_perturb(&config),
        Command::Hyperbolic(HyperbolicCmd::Symmetrize) => commands::hyperbolic_symmetrize(&config),
        Command::Hyperbolic(HyperbolicCmd::Deviation) => commands::hyperbolic_deviation(&config),
        Command::Topology(TopologyCmd::Sandwich) => commands::topology_sandwich(&config),
        Command::Topology(TopologyCmd::Compare) => commands::topology_compare(&config),
        Command::Demo => demo::demo(&config),
    };
    match outcome {
        Ok(report) => {
            emit(&report, cli.format);
            process::exit(if report.pass() { 0 } else { 1 });
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            process::exit(2);
        }
        Err(CliError::Precondition(message)) => {
            eprintln!("error: {message}");
            process::exit(3);
        }
    }
}

fn emit(report: &Report, format: Format) {
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    let mut stdout = io::stdout().lock();
    let written = stdout.write_all(rendered.as_bytes()).and_then(|()| stdout.flush());
    if let Err(err) = written {
        // A consumer such as `head` may close the pipe early; the verdict in
        // the exit code still stands, so a broken pipe is not reported.
        if err.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write the report: {err}");
        }
    }
}
