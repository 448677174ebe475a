//! Exhaustive reference implementations for small graphs.
//!
//! Nothing here calls the separator or PMC enumerators; the only shared
//! piece is [`minimal_triangulations_small`], which is itself exhaustive.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::automata::{
    expression_from_tree_decomposition, make_automaton, AnyAutomaton, Automaton, Expr, PropertySpec, TreeDecomposition,
};
use crate::engine::{Objective, Solution, Stats};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::problems::ProblemSpec;
use crate::triangulation::{
    exact_treewidth_small, maximal_cliques_chordal, minimal_triangulations_small, treewidth_at_most,
    MAX_TREEWIDTH_DECISION,
};
use crate::vset::VertexSet;

pub const MAX_SOLVE: usize = 14;
pub const MAX_SEPARATORS: usize = 10;
pub const MAX_PMCS: usize = 9;
pub const MAX_EXTENSION: usize = 8;
pub const MAX_TERMINAL_TW: usize = 10;
pub const MAX_TERMINAL_TW_T: usize = 4;

fn size_limit(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::SizeLimit { what, n, limit });
    }
    Ok(())
}

fn from_mask(mask: u32) -> VertexSet {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Optimum of the objective over all `(F, X)` with `U ⊆ F`,
/// `tw(G[F]) ≤ t` and the property holding, by listing every pair.
pub fn brute_force_solve<A: Automaton>(g: &Graph, t: usize, a: &A, obj: &Objective) -> Result<Solution> {
    let n = g.n();
    size_limit("brute-force solve", n, MAX_SOLVE)?;
    g.check_subset(&obj.annotations)?;
    let mut best: Option<(f64, VertexSet, VertexSet)> = None;
    for fm in 0u32..1 << n {
        let f = from_mask(fm);
        if !obj.annotations.is_subset(&f) {
            continue;
        }
        let mut width_ok = None;
        // X ranges over the submasks of F
        let mut xm = fm;
        loop {
            let x = from_mask(xm);
            let size_ok = obj.exact_size.is_none_or(|v| v == x.len());
            if size_ok {
                let value = obj.weight_of(&x);
                let improves = best.as_ref().is_none_or(|(bv, bf, bx)| obj.prefers((value, &f, &x), (*bv, bf, bx)));
                if improves && a.semantic_eval(g, &f, &x) {
                    let ok = *width_ok.get_or_insert_with(|| {
                        let (h, _) = g.induced(&f);
                        exact_treewidth_small(&h).is_ok_and(|w| w <= t)
                    });
                    if ok {
                        best = Some((value, f.clone(), x));
                    }
                }
            }
            if xm == 0 {
                break;
            }
            xm = (xm - 1) & fm;
        }
    }
    let (value, f, x) = best.ok_or(Error::Infeasible)?;
    Ok(Solution { value, f, x, stats: Stats::default(), tables: Vec::new() })
}

/// [`brute_force_solve`] under a problem's property, bound and objective.
pub fn brute_force_problem(g: &Graph, spec: &ProblemSpec) -> Result<Solution> {
    let a = make_automaton(&spec.property)?;
    crate::with_automaton!(&a, a => brute_force_solve(g, spec.t, a, &spec.objective()))
}

/// `S` has at least two full components in `G - S`.
fn separates_minimally(g: &Graph, s: &VertexSet) -> bool {
    let rest = &g.vertices() - s;
    let full = g
        .components_within(&rest)
        .into_iter()
        .filter(|c| {
            let mut nb = VertexSet::new();
            for v in c.iter() {
                nb.union_with(g.neighbors(v));
            }
            nb.difference_with(c);
            &nb == s
        })
        .count();
    full >= 2
}

/// Every minimal separator, by testing all vertex subsets.
pub fn brute_force_separators(g: &Graph) -> Result<Vec<VertexSet>> {
    size_limit("brute-force separators", g.n(), MAX_SEPARATORS)?;
    let mut out: Vec<VertexSet> =
        (0u32..1 << g.n()).map(from_mask).filter(|s| separates_minimally(g, s)).collect();
    out.sort();
    Ok(out)
}

/// Every potential maximal clique, as the maximal cliques of all minimal
/// triangulations.
pub fn brute_force_pmcs(g: &Graph) -> Result<Vec<VertexSet>> {
    size_limit("brute-force PMCs", g.n(), MAX_PMCS)?;
    let mut out = BTreeSet::new();
    for h in minimal_triangulations_small(g)? {
        out.extend(maximal_cliques_chordal(&h)?);
    }
    Ok(out.into_iter().collect())
}

fn edge_set(h: &Graph) -> BTreeSet<(usize, usize)> {
    h.edges().collect()
}

/// Every minimal triangulation of `G[F]` is the restriction to `F` of some
/// minimal triangulation of `G`.
pub fn check_triangulation_extension(g: &Graph, f: &VertexSet) -> Result<bool> {
    size_limit("triangulation extension check", g.n(), MAX_EXTENSION)?;
    g.check_subset(f)?;
    let (gf, _) = g.induced(f);
    let restricted: BTreeSet<BTreeSet<(usize, usize)>> = minimal_triangulations_small(g)?
        .iter()
        .map(|tg| edge_set(&tg.induced(f).0))
        .collect();
    Ok(minimal_triangulations_small(&gf)?.iter().all(|tf| restricted.contains(&edge_set(tf))))
}

/// Every inclusion-minimal connected `A ⊇ T` has `tw(G[A]) ≤ |T| - 1`.
pub fn check_terminal_treewidth(g: &Graph, terminals: &VertexSet) -> Result<bool> {
    size_limit("terminal treewidth check", g.n(), MAX_TERMINAL_TW)?;
    size_limit("terminal treewidth check terminals", terminals.len(), MAX_TERMINAL_TW_T)?;
    g.check_subset(terminals)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if terminals.is_empty() {
        return Ok(true);
    }
    let connected = |a: &VertexSet| g.components_within(a).len() == 1;
    for am in 0u32..1 << g.n() {
        let a = from_mask(am);
        if !terminals.is_subset(&a) || !connected(&a) {
            continue;
        }
        // a connected proper subset containing T can always be reached by
        // dropping one vertex at a time
        let minimal = (&a - terminals).iter().all(|v| {
            let mut b = a.clone();
            b.remove(v);
            !connected(&b)
        });
        if minimal && exact_treewidth_small(&g.induced(&a).0)? + 1 > terminals.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a claimed solution: `U ⊆ F`, `X ⊆ F`, the property holds, the
/// value is the weight of `X`, `|X|` matches an exact-size request, and
/// `tw(G[F]) ≤ t` whenever `|F|` is small enough to decide it.
pub fn witness_is_valid(g: &Graph, t: usize, a: &AnyAutomaton, obj: &Objective, sol: &Solution) -> bool {
    let (f, x) = (&sol.f, &sol.x);
    if !x.is_subset(f) || !obj.annotations.is_subset(f) || !a.semantic_eval(g, f, x) {
        return false;
    }
    if obj.exact_size.is_some_and(|v| v != x.len()) {
        return false;
    }
    let expected = obj.weight_of(x);
    if (expected - sol.value).abs() > 1e-9 * expected.abs().max(1.0) {
        return false;
    }
    if f.len() <= MAX_TREEWIDTH_DECISION {
        return treewidth_at_most(&g.induced(f).0, t).unwrap_or(false);
    }
    true
}

/// Several structurally different expressions for `g`: a single bag, the
/// clique trees of the first and last minimal triangulations (rooted at
/// opposite ends), and a clique tree padded with single-vertex leaves.
pub fn distinct_expressions(g: &Graph) -> Result<Vec<Expr>> {
    size_limit("expression sampling", g.n(), MAX_PMCS)?;
    if g.n() == 0 {
        return Err(Error::InvalidParams("expressions need at least one vertex".into()));
    }
    let single = TreeDecomposition { bags: vec![g.vertices()], edges: Vec::new() };
    let mut out = vec![expression_from_tree_decomposition(g, &single, 0)?];
    let triangulations = minimal_triangulations_small(g)?;
    let first = TreeDecomposition::from_chordal(&triangulations[0])?;
    let last = TreeDecomposition::from_chordal(&triangulations[triangulations.len() - 1])?;
    out.push(expression_from_tree_decomposition(g, &first, 0)?);
    out.push(expression_from_tree_decomposition(g, &last, last.bags.len() - 1)?);
    let mut padded = first.clone();
    for v in g.vertices().iter() {
        let home = padded.bags.iter().position(|b| b.contains(v)).expect("every vertex is in a bag");
        padded.bags.push(VertexSet::singleton(v));
        padded.edges.push((home, padded.bags.len() - 1));
    }
    out.push(expression_from_tree_decomposition(g, &padded, padded.bags.len() - 1)?);
    Ok(out)
}

/// Pairs checked and mismatches found for one property.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntegrityCount {
    pub property: String,
    pub checked: usize,
    pub mismatches: usize,
}

/// For every nonempty `F ⊆ V`, every `X ⊆ F` and every sampled expression
/// of `G[F]`, compares the automaton's verdict with `semantic_eval`.
/// Terminal sets are restricted to `F`.
pub fn check_automaton_integrity(g: &Graph, specs: &[PropertySpec]) -> Result<Vec<IntegrityCount>> {
    size_limit("automaton integrity check", g.n(), MAX_EXTENSION)?;
    let mut counts: Vec<IntegrityCount> =
        specs.iter().map(|s| IntegrityCount { property: s.to_string(), ..Default::default() }).collect();
    for fm in 1u32..1 << g.n() {
        let f = from_mask(fm);
        let (h, new_to_old) = g.induced(&f);
        let mut old_to_new = vec![usize::MAX; g.n()];
        for (i, &v) in new_to_old.iter().enumerate() {
            old_to_new[v] = i;
        }
        let exprs = distinct_expressions(&h)?;
        let all = h.vertices();
        for (spec, count) in specs.iter().zip(&mut counts) {
            let a = make_automaton(&spec.restricted(&old_to_new))?;
            for xm in 0u32..1 << h.n() {
                let x = from_mask(xm);
                let truth = a.semantic_eval(&h, &all, &x);
                for e in &exprs {
                    count.checked += 1;
                    if a.accepts_expression(&h, e, &x)? != truth {
                        count.mismatches += 1;
                    }
                }
            }
        }
    }
    Ok(counts)
}

/// One oracle comparison, for JSON-lines output. Vertices are 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub oracle_value: Option<f64>,
    pub engine_value: Option<f64>,
    pub agree: bool,
    pub f: Vec<usize>,
    pub x: Vec<usize>,
}

impl OracleReport {
    /// Compares engine and oracle outcomes; infeasible on both sides counts
    /// as agreement.
    pub fn compare(
        instance: String,
        g: &Graph,
        t: usize,
        a: &AnyAutomaton,
        obj: &Objective,
        engine: &Result<Solution>,
        oracle: &Result<Solution>,
    ) -> Self {
        let value = |r: &Result<Solution>| r.as_ref().ok().map(|s| s.value);
        let agree = match (engine, oracle) {
            (Ok(e), Ok(o)) => e.value == o.value && witness_is_valid(g, t, a, obj, e),
            (Err(Error::Infeasible), Err(Error::Infeasible)) => true,
            _ => false,
        };
        let ids = |s: &VertexSet| s.iter().map(|v| v + 1).collect();
        let (f, x) = engine.as_ref().map_or((Vec::new(), Vec::new()), |s| (ids(&s.f), ids(&s.x)));
        OracleReport { instance, oracle_value: value(oracle), engine_value: value(engine), agree, f, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Forest, IndependentSet};
    use crate::engine::Mode;
    use crate::generate::gen_graph;

    fn graph(kind: &str) -> Graph {
        gen_graph(&kind.parse().unwrap(), 0).unwrap()
    }

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn solve_examples() {
        let max = Objective::new(Mode::Max);
        assert_eq!(brute_force_solve(&graph("cycle:n=5"), 0, &IndependentSet, &max).unwrap().value, 2.0);
        assert_eq!(brute_force_solve(&graph("cycle:n=4"), 1, &Forest, &max).unwrap().value, 3.0);
        let spec = PropertySpec::Connected { terminals: set(&[0, 3]) };
        let a = make_automaton(&spec).unwrap();
        let obj = Objective { annotations: set(&[0, 3]), ..Objective::new(Mode::Min) };
        let sol = crate::with_automaton!(&a, a => brute_force_solve(&graph("cycle:n=6"), 1, a, &obj)).unwrap();
        assert_eq!(sol.value, 4.0);
    }

    #[test]
    fn separator_examples() {
        assert_eq!(brute_force_separators(&graph("path:n=3")).unwrap(), vec![set(&[1])]);
        assert_eq!(brute_force_separators(&graph("cycle:n=4")).unwrap(), vec![set(&[0, 2]), set(&[1, 3])]);
        assert!(brute_force_separators(&graph("complete:n=4")).unwrap().is_empty());
        assert!(matches!(brute_force_separators(&graph("path:n=11")), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn pmc_examples() {
        assert_eq!(brute_force_pmcs(&graph("path:n=3")).unwrap(), vec![set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(brute_force_pmcs(&graph("cycle:n=4")).unwrap().len(), 4);
        assert_eq!(brute_force_pmcs(&graph("complete:n=3")).unwrap(), vec![set(&[0, 1, 2])]);
    }

    #[test]
    fn extension_examples() {
        assert!(check_triangulation_extension(&graph("cycle:n=4"), &set(&[0, 1, 2])).unwrap());
        let chordal = graph("k-tree:n=7,k=2");
        assert!(check_triangulation_extension(&chordal, &chordal.vertices()).unwrap());
        let c5 = graph("cycle:n=5");
        for drop in 0..5 {
            let mut f = c5.vertices();
            f.remove(drop);
            assert!(check_triangulation_extension(&c5, &f).unwrap());
        }
    }

    #[test]
    fn integrity_on_a_small_graph() {
        let g = graph("cycle:n=4");
        let specs = [PropertySpec::Forest, PropertySpec::Connected { terminals: set(&[0, 2]) }];
        for c in check_automaton_integrity(&g, &specs).unwrap() {
            assert!(c.checked > 0);
            assert_eq!(c.mismatches, 0, "{}", c.property);
        }
        assert_eq!(distinct_expressions(&g).unwrap().len(), 4);
    }

    #[test]
    fn terminal_treewidth_examples() {
        let c6 = graph("cycle:n=6");
        assert!(check_terminal_treewidth(&c6, &set(&[2])).unwrap());
        assert!(check_terminal_treewidth(&c6, &set(&[0, 3])).unwrap());
        let grid = graph("grid:rows=3,cols=3");
        assert!(check_terminal_treewidth(&grid, &set(&[0, 2, 6])).unwrap());
    }
}
