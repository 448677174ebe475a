//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use pmcsolve_core::automata::PropertySpec;
use pmcsolve_core::engine::{Mode, SolveOptions};
use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::oracle::{
    brute_force_pmcs, brute_force_problem, brute_force_separators, check_automaton_integrity,
    check_terminal_treewidth, check_triangulation_extension, witness_is_valid,
};
use pmcsolve_core::automata::make_automaton;
use pmcsolve_core::problems::{problem_catalog, solve_problem, ProblemSpec};
use pmcsolve_core::triangulation::{enumerate_minimal_separators, enumerate_pmcs, pmc_count_bound, Budgets, Skeleton};
use pmcsolve_core::{Error, Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `", first: ..."` when there are failures.
fn first_failure<T: std::fmt::Display>(bad: &[T]) -> String {
    bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
}

fn named(kind: &str) -> Graph {
    gen_graph(&kind.parse().unwrap(), 0).unwrap()
}

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    gen_graph(&GraphKind::Gnp { n, p }, seed).unwrap()
}

fn interval(n: usize) -> GraphKind {
    GraphKind::Interval { n, max_len: 0.1 }
}

fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    (0..).map(|i| gnp(n, p, seed.wrapping_mul(7919).wrapping_add(i))).find(Graph::is_connected).unwrap()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> VertexSet {
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    ids[..k.min(n)].iter().copied().collect()
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
    format!("n={} [{}]", g.n(), edges.join(" "))
}

/// Named small graphs plus at least 500 random connected G(n, p), n ≤ 7.
fn enumeration_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 3..=7 {
        out.push(named(&format!("path:n={n}")));
        out.push(named(&format!("cycle:n={n}")));
        out.push(named(&format!("star:n={n}")));
    }
    for n in 2..=6 {
        out.push(named(&format!("complete:n={n}")));
    }
    out.push(named("grid:rows=3,cols=3"));
    for i in 0..540u64 {
        let n = 2 + (i as usize % 6);
        let p = [0.2, 0.4, 0.6][(i / 6) as usize % 3];
        out.push(connected_gnp(n, p, i));
    }
    out
}

fn criterion_1() -> Outcome {
    let corpus = enumeration_corpus();
    let bad: Vec<String> = corpus
        .par_iter()
        .filter_map(|g| {
            let seps = enumerate_minimal_separators(g, Budgets::default().separators).ok()?;
            let pmcs = enumerate_pmcs(g, &seps, &Budgets::default()).ok()?;
            let ok = brute_force_separators(g).is_ok_and(|b| b == seps) && brute_force_pmcs(g).is_ok_and(|b| b == pmcs);
            (!ok).then(|| describe(g))
        })
        .collect();
    outcome(bad.is_empty(), format!("{} graphs, {} mismatches{}", corpus.len(), bad.len(), first_failure(&bad)))
}

fn criterion_2() -> Outcome {
    let mut corpus = enumeration_corpus();
    for n in [10, 20, 30] {
        corpus.push(gen_graph(&interval(n), 1).unwrap());
        corpus.push(connected_gnp(n.min(14), 0.3, n as u64));
    }
    let violations = corpus
        .par_iter()
        .filter(|g| g.is_connected())
        .filter(|g| {
            let skel = Skeleton::build(g, &Budgets::default()).unwrap();
            skel.pmcs.len() as u128 > pmc_count_bound(g.n(), skel.separators.len())
        })
        .count();
    let c4 = Skeleton::build(&named("cycle:n=4"), &Budgets::default()).unwrap();
    let c4_ok = c4.separators.len() == 2 && c4.pmcs.len() == 4;
    outcome(
        violations == 0 && c4_ok,
        format!("{} graphs, {violations} violations, C4 has {} separators and {} PMCs", corpus.len(), c4.separators.len(), c4.pmcs.len()),
    )
}

/// Engine and brute force agree on the value, both report infeasible, or
/// neither; the engine witness must check out.
fn agree(g: &Graph, spec: &ProblemSpec) -> Result<(), String> {
    let engine = solve_problem(g, spec, &SolveOptions::default());
    let oracle = brute_force_problem(g, spec);
    let a = make_automaton(&spec.property).unwrap();
    match (&engine, &oracle) {
        (Ok(e), Ok(o)) if e.value == o.value && witness_is_valid(g, spec.t, &a, &spec.objective(), e) => Ok(()),
        (Err(Error::Infeasible), Err(Error::Infeasible)) => Ok(()),
        _ => Err(format!(
            "{} t={} {:?}: engine {:?} oracle {:?} on {}",
            spec.property,
            spec.t,
            spec.objective(),
            engine.map(|s| s.value),
            oracle.map(|s| s.value),
            describe(g)
        )),
    }
}

fn base_specs() -> Vec<ProblemSpec> {
    let with_t = |p: PropertySpec, t: usize| {
        let mut s = ProblemSpec::from_property(p).unwrap();
        s.t = t;
        s
    };
    vec![
        with_t(PropertySpec::IndependentSet, 0),
        with_t(PropertySpec::Forest, 1),
        with_t(PropertySpec::True, 1),
        with_t(PropertySpec::True, 2),
        with_t(PropertySpec::Packing { family: vec!["K2".into()] }, 1),
        with_t(PropertySpec::Packing { family: vec!["K3".into()] }, 2),
        with_t(PropertySpec::Colorable { q: 2 }, 1),
        with_t(PropertySpec::MaxDegree { d: 2 }, 2),
        {
            let mut s = ProblemSpec::from_property(PropertySpec::Connected { terminals: VertexSet::new() }).unwrap();
            s.mode = Mode::Min;
            s
        },
    ]
}

/// Gives connectivity specs a random terminal set of size 1 to 3.
fn instantiate(spec: &ProblemSpec, n: usize, rng: &mut ChaCha8Rng) -> ProblemSpec {
    match spec.property {
        PropertySpec::Connected { .. } => {
            let k = rng.gen_range(1..=3.min(n));
            spec.clone().with_terminals(random_subset(rng, n, k)).unwrap()
        }
        _ => spec.clone(),
    }
}

fn criterion_3() -> Outcome {
    const PER_SPEC: u64 = 200;
    let specs = base_specs();
    let jobs: Vec<(usize, u64)> = (0..specs.len()).flat_map(|s| (0..PER_SPEC).map(move |i| (s, i))).collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(s, i)| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * s as u64 + i);
            let n = rng.gen_range(3..=10);
            let g = gnp(n, rng.gen_range(0.2..0.7), rng.gen());
            agree(&g, &instantiate(&specs[s], n, &mut rng)).err()
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!("{} configurations x {PER_SPEC} instances, {} mismatches{}", specs.len(), bad.len(), first_failure(&bad)),
    )
}

fn criterion_4() -> Outcome {
    let specs = base_specs();
    let mut infeasible = 0;
    let results: Vec<(bool, Result<(), String>)> = (0..240u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(50_000 + i);
            let n = rng.gen_range(3..=9);
            let g = gnp(n, rng.gen_range(0.2..0.7), rng.gen());
            let mut spec = instantiate(&specs[i as usize % specs.len()], n, &mut rng);
            if i % 3 == 0 {
                spec.mode = Mode::Min;
            }
            if i % 2 == 0 {
                spec.weights = Some((0..n).map(|_| rng.gen_range(-3..=5) as f64).collect());
            } else {
                let k = rng.gen_range(1..=3);
                spec.annotations.union_with(&random_subset(&mut rng, n, k));
            }
            let none = brute_force_problem(&g, &spec).is_err_and(|e| e == Error::Infeasible);
            (none, agree(&g, &spec))
        })
        .collect();
    let mut bad = Vec::new();
    for (none, r) in results {
        infeasible += none as usize;
        if let Err(e) = r {
            bad.push(e);
        }
    }
    outcome(
        bad.is_empty(),
        format!("120 weighted + 120 annotated instances ({infeasible} infeasible), {} mismatches{}", bad.len(), first_failure(&bad)),
    )
}

fn criterion_5() -> Outcome {
    let mis = problem_catalog().into_iter().find(|p| p.name == "max-independent-set").unwrap();
    let mut bad = Vec::new();
    for n in 3..=8 {
        let g = named(&format!("cycle:n={n}"));
        for v in 0..=n {
            let spec = ProblemSpec { exact_size: Some(v), ..mis.clone() };
            let feasible = match solve_problem(&g, &spec, &SolveOptions::default()) {
                Ok(s) => s.x.len() == v,
                Err(_) => false,
            };
            if feasible != (v <= n / 2) {
                bad.push(format!("C{n} v={v}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("C3..C8 with every v, {} mismatches{}", bad.len(), first_failure(&bad)))
}

fn criterion_6() -> Outcome {
    let mut graphs: Vec<Graph> = ["cycle:n=8", "path:n=8", "star:n=8", "complete:n=5", "grid:rows=2,cols=4"]
        .iter()
        .map(|k| named(k))
        .collect();
    for i in 0..10u64 {
        graphs.push(connected_gnp(7 + i as usize % 2, [0.3, 0.5][i as usize % 2], 900 + i));
    }
    let results: Vec<Result<(usize, usize), String>> = graphs
        .par_iter()
        .map(|g| {
            let ends: VertexSet = [0, g.n() - 1].into_iter().collect();
            let specs: Vec<PropertySpec> = problem_catalog()
                .into_iter()
                .map(|p| match p.property {
                    PropertySpec::Connected { .. } => PropertySpec::Connected { terminals: ends.clone() },
                    PropertySpec::Tree { .. } => PropertySpec::Tree { terminals: ends.clone() },
                    other => other,
                })
                .chain([PropertySpec::Colorable { q: 2 }, PropertySpec::MaxDegree { d: 1 }])
                .collect();
            let counts = check_automaton_integrity(g, &specs).map_err(|e| e.to_string())?;
            let checked = counts.iter().map(|c| c.checked).sum();
            match counts.iter().find(|c| c.mismatches > 0) {
                Some(c) => Err(format!("{} on {}", c.property, describe(g))),
                None => Ok((checked, 0)),
            }
        })
        .collect();
    let checked: usize = results.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.0).sum();
    let bad: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    outcome(
        bad.is_empty(),
        format!("{} graphs, 4 expressions each, {checked} verdicts, {} failures{}", graphs.len(), bad.len(), first_failure(&bad)),
    )
}

fn criterion_7() -> Outcome {
    let bad: Vec<String> = (0..320u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(70_000 + i);
            let n = rng.gen_range(2..=10);
            let g = connected_gnp(n, rng.gen_range(0.2..0.7), rng.gen());
            let k = rng.gen_range(1..=4.min(n));
            let ts = random_subset(&mut rng, n, k);
            match check_terminal_treewidth(&g, &ts) {
                Ok(true) => None,
                other => Some(format!("T={} {:?} on {}", ts.one_based(), other, describe(&g))),
            }
        })
        .collect();
    outcome(bad.is_empty(), format!("320 (G, T) pairs, {} failures{}", bad.len(), first_failure(&bad)))
}

fn criterion_8() -> Outcome {
    let bad: Vec<String> = (0..220u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(80_000 + i);
            let n = rng.gen_range(2..=7);
            let g = gnp(n, rng.gen_range(0.2..0.8), rng.gen());
            let k = rng.gen_range(1..=n);
            let f = random_subset(&mut rng, n, k);
            match check_triangulation_extension(&g, &f) {
                Ok(true) => None,
                other => Some(format!("F={} {:?} on {}", f.one_based(), other, describe(&g))),
            }
        })
        .collect();
    outcome(bad.is_empty(), format!("220 (G, F) pairs, {} failures{}", bad.len(), first_failure(&bad)))
}

fn pmc_count(g: &Graph) -> usize {
    g.connected_components(&VertexSet::new())
        .unwrap()
        .iter()
        .map(|c| Skeleton::build(&g.induced(c).0, &Budgets::default()).unwrap().pmcs.len())
        .sum()
}

/// Least-squares slope of `log y` against `log x`.
fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let cov: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

fn criterion_9() -> Outcome {
    let points: Vec<(f64, f64)> = [20, 40, 60]
        .iter()
        .map(|&n| (n as f64, pmc_count(&gen_graph(&interval(n), 1).unwrap()) as f64))
        .collect();
    let exponent = fit_exponent(&points);
    let start = Instant::now();
    let run = Command::new(env!("CARGO_BIN_EXE_pmcsolve"))
        .args(["solve", "--problem", "max-induced-forest", "--generate", "interval:n=60", "--seed", "1"])
        .output()
        .expect("run pmcsolve");
    let elapsed = start.elapsed();
    let json: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap_or_default();
    let ok = run.status.success() && json["feasible"] == true && elapsed < Duration::from_secs(60) && exponent <= 3.0;
    let counts: Vec<usize> = points.iter().map(|p| p.1 as usize).collect();
    outcome(
        ok,
        format!(
            "n=60 forest value {} in {:.2}s, PMC counts {:?} at n=20,40,60, fitted exponent {exponent:.2}",
            json["value"],
            elapsed.as_secs_f64(),
            counts
        ),
    )
}

fn criterion_10() -> Outcome {
    let run = Command::new(env!("CARGO_BIN_EXE_pmcsolve"))
        .args(["solve", "--problem", "max-induced-forest", "--generate", "gnp:n=40,p=0.5", "--seed", "1"])
        .args(["--budget-pmcs", "10000"])
        .output()
        .expect("run pmcsolve");
    let code = run.status.code();
    let ok = code == Some(3) && run.stdout.is_empty();
    outcome(
        ok,
        format!(
            "exit code {:?}, {} bytes on stdout, stderr: {}",
            code,
            run.stdout.len(),
            String::from_utf8_lossy(&run.stderr).trim()
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("separator/PMC exactness", criterion_1),
        ("PMC count bound", criterion_2),
        ("engine/oracle equivalence", criterion_3),
        ("weighted and annotated variants", criterion_4),
        ("exact-size variant", criterion_5),
        ("automaton integrity", criterion_6),
        ("terminal treewidth sweep", criterion_7),
        ("triangulation extension sweep", criterion_8),
        ("interval graph performance", criterion_9),
        ("budget abort", criterion_10),
    ];
    let limits = [300, 0, 1800, 0, 0, 0, 0, 0, 0, 0];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let secs = start.elapsed().as_secs_f64();
        if limits[i] > 0 && secs > limits[i] as f64 {
            result.pass = false;
            result.detail.push_str(&format!("; over the {}s limit", limits[i]));
        }
        failed += !result.pass as usize;
        println!(
            "criterion {:>2} {:<32} {} ({}; {:.1}s)",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            secs
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
