//! `pmcsolve`: optimal induced subgraphs of bounded treewidth.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 infeasible, 3 budget
//! exceeded, 4 oracle disagreement (`verify`).

mod enumerate;
mod input;
mod solve;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::graph::to_pace;
use pmcsolve_core::{Error, GraphFormat};

#[derive(Parser)]
#[command(name = "pmcsolve", version, about = "Optimal induced subgraphs of bounded treewidth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an optimization problem on a graph
    Solve(solve::SolveArgs),
    /// List minimal separators, potential maximal cliques, full blocks or good triples
    Enumerate(enumerate::EnumerateArgs),
    /// Compare against the brute-force oracles on a generated corpus
    Verify(verify::VerifyArgs),
    /// Write a generated graph
    Generate(GenerateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec, e.g. `gnp:n=40,p=0.5`, `interval:n=60`, `grid:rows=3,cols=3`
    kind: GraphKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: `pace` or `edges`
    #[arg(long, default_value = "pace")]
    format: GraphFormat,
    /// Write here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("PMCSOLVE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().with_context(|| format!("PMCSOLVE_THREADS must be a number, got `{value}`"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn generate(args: &GenerateArgs) -> Result<ExitCode> {
    let g = gen_graph(&args.kind, args.seed)?;
    let text = match args.format {
        GraphFormat::PaceGr => to_pace(&g),
        GraphFormat::EdgeList => g.edges().map(|(u, v)| format!("{} {}\n", u + 1, v + 1)).collect(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Enumerate(args) => enumerate::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Generate(args) => generate(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Infeasible) => ExitCode::from(EXIT_INFEASIBLE),
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::from(1),
            }
        }
    }
}
