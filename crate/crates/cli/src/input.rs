use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::graph::detect_format;
use pmcsolve_core::triangulation::Budgets;
use pmcsolve_core::{parse_graph, Graph, GraphFormat};

#[derive(Args, Clone, Debug)]
pub struct InputArgs {
    /// Graph file: PACE `.gr` (`p tw n m` header) or an edge list, 1-indexed
    #[arg(long, short, conflicts_with = "generate", required_unless_present = "generate")]
    pub input: Option<PathBuf>,
    /// Use a generated graph instead, e.g. `gnp:n=20,p=0.3`
    #[arg(long)]
    pub generate: Option<GraphKind>,
    /// Seed for `--generate`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input format (`pace` or `edges`); detected from the file when omitted
    #[arg(long)]
    pub graph_format: Option<GraphFormat>,
}

impl InputArgs {
    pub fn load(&self) -> Result<Graph> {
        if let Some(kind) = &self.generate {
            return Ok(gen_graph(kind, self.seed)?);
        }
        let Some(path) = &self.input else {
            bail!("either --input or --generate is required");
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let format = self.graph_format.unwrap_or_else(|| detect_format(&text));
        parse_graph(&text, format).with_context(|| format!("cannot parse {}", path.display()))
    }
}

#[derive(Args, Clone, Debug)]
pub struct BudgetArgs {
    /// Abort once this many minimal separators have been found
    #[arg(long, default_value_t = Budgets::default().separators, value_parser = positive)]
    pub budget_seps: usize,
    /// Abort once this many potential maximal cliques have been found
    #[arg(long, default_value_t = Budgets::default().pmcs, value_parser = positive)]
    pub budget_pmcs: usize,
}

impl BudgetArgs {
    pub fn budgets(&self) -> Budgets {
        Budgets { separators: self.budget_seps, pmcs: self.budget_pmcs }
    }
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}
