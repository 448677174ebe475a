use std::io::Write;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use pmcsolve_core::automata::{make_automaton, PropertySpec};
use pmcsolve_core::engine::{Solution, SolveOptions};
use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::oracle::{
    brute_force_pmcs, brute_force_problem, brute_force_separators, check_automaton_integrity,
    check_terminal_treewidth, check_triangulation_extension, OracleReport,
};
use pmcsolve_core::problems::{problem_catalog, resolve_problem, solve_problem, ProblemSpec};
use pmcsolve_core::triangulation::{enumerate_minimal_separators, enumerate_pmcs, Budgets};
use pmcsolve_core::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::EXIT_DISAGREEMENT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Engine against brute-force optimization, per problem
    Engine,
    /// Separator and PMC enumeration against exhaustive listing
    Enumeration,
    /// Automaton verdicts against direct evaluation
    Automata,
    /// Minimal connected supersets of terminal sets have small treewidth
    TerminalTw,
    /// Minimal triangulations of induced subgraphs extend to the whole graph
    TriangulationExtension,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::Engine)]
    suite: Suite,
    /// Run a lemma sweep (`terminal-tw` or `triangulation-extension`) instead of a suite
    #[arg(long, value_enum)]
    lemma: Option<Suite>,
    /// Vertex counts, e.g. `4-8`
    #[arg(long, default_value = "4-8", value_parser = parse_range)]
    sizes: RangeInclusive<usize>,
    /// Edge probabilities of the G(n, p) corpus
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5")]
    p: Vec<f64>,
    /// Instances per (size, p)
    #[arg(long, default_value_t = 3)]
    instances: usize,
    /// Problems for the engine suite (default: the whole catalog)
    #[arg(long, value_delimiter = ',')]
    problems: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shift every engine value by one (negative control)
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let a: usize = a.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

struct Instance {
    name: String,
    graph: Graph,
    rng: ChaCha8Rng,
}

fn corpus(args: &VerifyArgs, connected: bool) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seeds = ChaCha8Rng::seed_from_u64(args.seed);
    for n in args.sizes.clone() {
        for &p in &args.p {
            for _ in 0..args.instances {
                let kind = GraphKind::Gnp { n, p };
                let mut seed: u64 = seeds.gen();
                let mut graph = gen_graph(&kind, seed).expect("valid generator");
                while connected && !graph.is_connected() {
                    seed = seeds.gen();
                    graph = gen_graph(&kind, seed).expect("valid generator");
                }
                let rng = ChaCha8Rng::seed_from_u64(seed);
                out.push(Instance { name: format!("{kind} seed={seed}"), graph, rng });
            }
        }
    }
    out
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> VertexSet {
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    ids[..k.min(n)].iter().copied().collect()
}

fn report(instance: String, agree: bool, oracle: Option<f64>, engine: Option<f64>) -> OracleReport {
    OracleReport { instance, oracle_value: oracle, engine_value: engine, agree, f: Vec::new(), x: Vec::new() }
}

fn engine_reports(args: &VerifyArgs) -> Result<Vec<OracleReport>> {
    let specs: Vec<ProblemSpec> = if args.problems.is_empty() {
        problem_catalog()
    } else {
        args.problems.iter().map(|p| resolve_problem(p)).collect::<pmcsolve_core::Result<_>>()?
    };
    let instances = corpus(args, false);
    let reports = instances
        .into_par_iter()
        .flat_map_iter(|mut inst| {
            let g = &inst.graph;
            let mut out = Vec::new();
            for spec in &specs {
                let spec = match &spec.property {
                    PropertySpec::Connected { .. } | PropertySpec::Tree { .. } => {
                        let k = inst.rng.gen_range(1..=3.min(g.n()));
                        spec.clone().with_terminals(random_subset(&mut inst.rng, g.n(), k)).expect("terminal property")
                    }
                    _ => spec.clone(),
                };
                let mut engine = solve_problem(g, &spec, &SolveOptions::default());
                if args.inject_fault {
                    engine = engine.map(|s| Solution { value: s.value + 1.0, ..s });
                }
                let oracle = brute_force_problem(g, &spec);
                let a = make_automaton(&spec.property).expect("valid property");
                let name = format!("{} problem={} t={} mode={}", inst.name, spec.property, spec.t, spec.mode);
                out.push(OracleReport::compare(name, g, spec.t, &a, &spec.objective(), &engine, &oracle));
            }
            out
        })
        .collect();
    Ok(reports)
}

fn enumeration_reports(args: &VerifyArgs) -> Vec<OracleReport> {
    corpus(args, true)
        .into_par_iter()
        .flat_map_iter(|inst| {
            let g = &inst.graph;
            let seps = enumerate_minimal_separators(g, Budgets::default().separators);
            let pmcs = seps.as_ref().ok().map(|s| enumerate_pmcs(g, s, &Budgets::default()));
            let brute_seps = brute_force_separators(g);
            let brute_pmcs = brute_force_pmcs(g);
            let count = |r: Option<usize>| r.map(|c| c as f64);
            let sep_ok = matches!((&seps, &brute_seps), (Ok(a), Ok(b)) if a == b);
            let pmc_ok = matches!((&pmcs, &brute_pmcs), (Some(Ok(a)), Ok(b)) if a == b);
            [
                report(
                    format!("{} separators", inst.name),
                    sep_ok,
                    count(brute_seps.as_ref().ok().map(Vec::len)),
                    count(seps.as_ref().ok().map(Vec::len)),
                ),
                report(
                    format!("{} pmcs", inst.name),
                    pmc_ok,
                    count(brute_pmcs.as_ref().ok().map(Vec::len)),
                    count(pmcs.and_then(|r| r.ok()).map(|p| p.len())),
                ),
            ]
        })
        .collect()
}

fn automata_reports(args: &VerifyArgs) -> Vec<OracleReport> {
    corpus(args, false)
        .into_par_iter()
        .flat_map_iter(|inst| {
            let g = &inst.graph;
            let ends: VertexSet = [0, g.n() - 1].into_iter().collect();
            let mut specs: Vec<PropertySpec> = problem_catalog().into_iter().map(|p| p.property).collect();
            for s in &mut specs {
                if let PropertySpec::Connected { terminals } | PropertySpec::Tree { terminals } = s {
                    *terminals = ends.clone();
                }
            }
            match check_automaton_integrity(g, &specs) {
                Ok(counts) => counts
                    .into_iter()
                    .map(|c| {
                        let name = format!("{} property={}", inst.name, c.property);
                        let ok = (c.checked - c.mismatches) as f64;
                        report(name, c.mismatches == 0, Some(c.checked as f64), Some(ok))
                    })
                    .collect(),
                Err(e) => vec![report(format!("{}: {e}", inst.name), false, None, None)],
            }
        })
        .collect()
}

fn lemma_reports(args: &VerifyArgs, suite: Suite) -> Vec<OracleReport> {
    corpus(args, true)
        .into_par_iter()
        .map(|mut inst| {
            let g = &inst.graph;
            let (what, result) = if suite == Suite::TerminalTw {
                let k = inst.rng.gen_range(1..=4.min(g.n()));
                let ts = random_subset(&mut inst.rng, g.n(), k);
                (format!("T={}", ts.one_based()), check_terminal_treewidth(g, &ts))
            } else {
                let k = inst.rng.gen_range(1..=g.n());
                let f = random_subset(&mut inst.rng, g.n(), k);
                (format!("F={}", f.one_based()), check_triangulation_extension(g, &f))
            };
            match result {
                Ok(ok) => report(format!("{} {what}", inst.name), ok, None, None),
                Err(e) => report(format!("{} {what}: {e}", inst.name), false, None, None),
            }
        })
        .collect()
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let suite = args.lemma.unwrap_or(args.suite);
    if args.lemma.is_some_and(|l| !matches!(l, Suite::TerminalTw | Suite::TriangulationExtension)) {
        bail!("--lemma takes `terminal-tw` or `triangulation-extension`");
    }
    let reports = match suite {
        Suite::Engine => engine_reports(args)?,
        Suite::Enumeration => enumeration_reports(args),
        Suite::Automata => automata_reports(args),
        Suite::TerminalTw | Suite::TriangulationExtension => lemma_reports(args, suite),
    };
    let mut out = std::io::stdout().lock();
    for r in &reports {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    let bad = reports.iter().filter(|r| !r.agree).count();
    eprintln!("{} checks, {} disagreements", reports.len(), bad);
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_DISAGREEMENT) })
}
