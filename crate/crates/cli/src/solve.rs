use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use pmcsolve_core::automata::parse_one_based_list;
use pmcsolve_core::engine::{Mode, Solution, SolveOptions};
use pmcsolve_core::problems::{check_class_caveats, resolve_problem, solve_problem, ProblemSpec};
use pmcsolve_core::{Error, Graph, VertexSet};
use serde::Serialize;
use serde_json::Value;

use crate::input::{BudgetArgs, InputArgs};
use crate::EXIT_INFEASIBLE;

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Catalog name (`max-induced-forest`, ...) or property (`forest`, `colorable:q=3`, `connected:T=1,4`, ...)
    #[arg(long)]
    problem: String,
    /// Treewidth bound; defaults to the bound the property guarantees
    #[arg(long)]
    t: Option<usize>,
    /// Terminal vertices for `connected` and `tree`, 1-indexed, comma-separated
    #[arg(long)]
    terminals: Option<String>,
    /// Vertex weights, one `<v> <w>` line per vertex (1-indexed); unlisted vertices weigh 1
    #[arg(long)]
    weights_file: Option<PathBuf>,
    /// Vertices that must belong to F, 1-indexed, comma-separated
    #[arg(long)]
    annotate: Option<String>,
    /// `max` or `min`
    #[arg(long)]
    mode: Option<Mode>,
    /// Require |X| to equal this value
    #[arg(long)]
    exact_size: Option<usize>,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
    /// Report 0 ms so that repeated runs print identical output
    #[arg(long)]
    no_timing: bool,
    /// Write every DP table entry to this file
    #[arg(long)]
    dump_tables: Option<PathBuf>,
}

#[derive(Serialize)]
struct StatsOut {
    separators: usize,
    pmcs: usize,
    good_triples: usize,
    dp_keys: usize,
    ms: u64,
}

#[derive(Serialize)]
struct SolveOut<'a> {
    problem: &'a str,
    n: usize,
    m: usize,
    value: Value,
    #[serde(rename = "F")]
    f: Vec<usize>,
    #[serde(rename = "X")]
    x: Vec<usize>,
    feasible: bool,
    stats: StatsOut,
}

/// Integral values print without a fractional part.
fn number(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Value::from(v as i64)
    } else {
        serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
    }
}

fn ids(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

pub fn read_weights(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut weights = vec![1.0; n];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(v), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("{}:{}: expected `<v> <w>`", path.display(), i + 1);
        };
        let v: usize = v.parse().with_context(|| format!("{}:{}: bad vertex `{v}`", path.display(), i + 1))?;
        let w: f64 = w.parse().with_context(|| format!("{}:{}: bad weight `{w}`", path.display(), i + 1))?;
        if v == 0 || v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n }).with_context(|| format!("{}:{}", path.display(), i + 1));
        }
        if !w.is_finite() {
            bail!("{}:{}: weight must be finite", path.display(), i + 1);
        }
        weights[v - 1] = w;
    }
    Ok(weights)
}

fn build_spec(args: &SolveArgs, g: &Graph) -> Result<ProblemSpec> {
    let mut spec = resolve_problem(&args.problem)?;
    if let Some(ts) = &args.terminals {
        spec = spec.with_terminals(parse_one_based_list(ts)?)?;
    }
    if let Some(t) = args.t {
        spec.t = t;
    }
    if let Some(mode) = args.mode {
        spec.mode = mode;
    }
    if let Some(path) = &args.weights_file {
        spec.weights = Some(read_weights(path, g.n())?);
    }
    if let Some(list) = &args.annotate {
        spec.annotations.union_with(&parse_one_based_list(list)?);
    }
    spec.exact_size = args.exact_size;
    Ok(spec)
}

fn print(args: &SolveArgs, spec: &ProblemSpec, g: &Graph, sol: Option<&Solution>) -> Result<()> {
    let empty = VertexSet::new();
    let (f, x) = sol.map_or((&empty, &empty), |s| (&s.f, &s.x));
    let stats = sol.map(|s| s.stats.clone()).unwrap_or_default();
    let out = SolveOut {
        problem: &spec.name,
        n: g.n(),
        m: g.m(),
        value: sol.map_or(Value::Null, |s| number(s.value)),
        f: ids(f),
        x: ids(x),
        feasible: sol.is_some(),
        stats: StatsOut {
            separators: stats.separators,
            pmcs: stats.pmcs,
            good_triples: stats.good_triples,
            dp_keys: stats.dp_keys,
            ms: if args.no_timing { 0 } else { stats.ms },
        },
    };
    let mut stdout = std::io::stdout().lock();
    match args.format {
        OutputFormat::Json => writeln!(stdout, "{}", serde_json::to_string(&out)?)?,
        OutputFormat::Text => {
            writeln!(stdout, "problem: {}", out.problem)?;
            writeln!(stdout, "graph: n={} m={}", out.n, out.m)?;
            if out.feasible {
                writeln!(stdout, "value: {}", out.value)?;
                writeln!(stdout, "F: {}", f.one_based())?;
                writeln!(stdout, "X: {}", x.one_based())?;
            } else {
                writeln!(stdout, "infeasible")?;
            }
            let s = &out.stats;
            writeln!(
                stdout,
                "separators: {}  pmcs: {}  good triples: {}  dp keys: {}  ms: {}",
                s.separators, s.pmcs, s.good_triples, s.dp_keys, s.ms
            )?;
        }
    }
    Ok(())
}

pub fn run(args: &SolveArgs) -> Result<ExitCode> {
    let g = args.input.load()?;
    let spec = build_spec(args, &g)?;
    for warning in check_class_caveats(&g, &spec) {
        eprintln!("warning: {warning}");
    }
    let opts = SolveOptions { budgets: args.budgets.budgets(), record_tables: args.dump_tables.is_some() };
    match solve_problem(&g, &spec, &opts) {
        Ok(sol) => {
            if let Some(path) = &args.dump_tables {
                let dump: String = sol.tables.iter().map(|r| format!("{r}\n")).collect();
                std::fs::write(path, dump).with_context(|| format!("cannot write {}", path.display()))?;
            }
            print(args, &spec, &g, Some(&sol))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::Infeasible) => {
            print(args, &spec, &g, None)?;
            Ok(ExitCode::from(EXIT_INFEASIBLE))
        }
        Err(e) => Err(e.into()),
    }
}
