use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgGroup, Args};
use pmcsolve_core::triangulation::{
    enumerate_full_blocks, enumerate_good_triples, enumerate_minimal_separators, enumerate_pmcs, pmc_count_bound,
};
use pmcsolve_core::Error;

use crate::input::{BudgetArgs, InputArgs};

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["separators", "pmcs", "blocks", "triples"])))]
pub struct EnumerateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Minimal separators
    #[arg(long)]
    separators: bool,
    /// Potential maximal cliques
    #[arg(long)]
    pmcs: bool,
    /// Full blocks, as `S | C`
    #[arg(long)]
    blocks: bool,
    /// Good triples, as `S | C | Ω`
    #[arg(long)]
    triples: bool,
    /// Print counts (and the PMC count bound) instead of the listing
    #[arg(long)]
    stats: bool,
    #[command(flatten)]
    budgets: BudgetArgs,
}

pub fn run(args: &EnumerateArgs) -> Result<ExitCode> {
    let g = args.input.load()?;
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected.into());
    }
    let budgets = args.budgets.budgets();
    let seps = enumerate_minimal_separators(&g, budgets.separators)?;
    let mut out = std::io::stdout().lock();
    if args.separators {
        if args.stats {
            writeln!(out, "separators: {}", seps.len())?;
        } else {
            for s in &seps {
                writeln!(out, "{}", s.one_based())?;
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    let pmcs = enumerate_pmcs(&g, &seps, &budgets)?;
    let blocks = enumerate_full_blocks(&g, &seps);
    let triples = if args.triples || args.stats { enumerate_good_triples(&g, &blocks, &pmcs) } else { Vec::new() };
    if args.stats {
        let bound = pmc_count_bound(g.n(), seps.len());
        writeln!(out, "separators: {}", seps.len())?;
        writeln!(out, "pmcs: {}", pmcs.len())?;
        writeln!(out, "blocks: {}", blocks.len())?;
        writeln!(out, "good triples: {}", triples.len())?;
        let verdict = if pmcs.len() as u128 <= bound { "ok" } else { "violated" };
        writeln!(out, "{} ≤ {}: {}", pmcs.len(), bound, verdict)?;
    } else if args.pmcs {
        for p in &pmcs {
            writeln!(out, "{}", p.one_based())?;
        }
    } else if args.blocks {
        for b in &blocks {
            writeln!(out, "{} | {}", b.separator.one_based(), b.component.one_based())?;
        }
    } else {
        for t in &triples {
            writeln!(out, "{} | {} | {}", t.separator.one_based(), t.component.one_based(), t.pmc.one_based())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
