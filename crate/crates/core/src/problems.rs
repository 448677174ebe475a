//! Named optimization problems and their dispatch to the engine.

use serde::Serialize;

use crate::automata::SmallGraph;
use crate::automata::{make_automaton, AnyAutomaton, PropertySpec};
use crate::engine::{self, Mode, Objective, Solution, SolveOptions, Stats, TableRecord};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::witness_is_valid;
use crate::triangulation::exact_treewidth_small;
use crate::vset::VertexSet;
use crate::with_automaton;

/// A property, a treewidth bound and an objective.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub name: String,
    pub t: usize,
    #[serde(serialize_with = "as_display")]
    pub property: PropertySpec,
    pub mode: Mode,
    pub weights: Option<Vec<f64>>,
    pub annotations: VertexSet,
    pub exact_size: Option<usize>,
    pub decomposable: bool,
}

fn as_display<S: serde::Serializer>(p: &PropertySpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Treewidth bound that a property guarantees for its solutions.
pub fn default_t(property: &PropertySpec) -> Result<usize> {
    Ok(match property {
        PropertySpec::IndependentSet => 0,
        PropertySpec::Forest | PropertySpec::Tree { .. } => 1,
        PropertySpec::True => 1,
        PropertySpec::Colorable { q } => q.saturating_sub(1),
        PropertySpec::MaxDegree { d } => *d,
        PropertySpec::Packing { family } => {
            let mut t = 0;
            for name in family {
                t = t.max(exact_treewidth_small(SmallGraph::parse(name)?.graph())?);
            }
            t
        }
        PropertySpec::Connected { terminals } => terminals.len().saturating_sub(1),
    })
}

impl ProblemSpec {
    /// A maximization problem over `property` with its default `t`.
    pub fn from_property(property: PropertySpec) -> Result<Self> {
        let t = default_t(&property)?;
        let decomposable = make_automaton(&property)?.decomposable();
        let annotations = terminals_of(&property).cloned().unwrap_or_default();
        Ok(ProblemSpec {
            name: property.to_string(),
            t,
            property,
            mode: Mode::Max,
            weights: None,
            annotations,
            exact_size: None,
            decomposable,
        })
    }

    fn named(name: &str, property: PropertySpec) -> Self {
        let mut spec = Self::from_property(property).expect("catalog entries are valid");
        spec.name = name.into();
        spec
    }

    pub fn objective(&self) -> Objective {
        Objective {
            mode: self.mode,
            weights: self.weights.clone(),
            annotations: self.annotations.clone(),
            exact_size: self.exact_size,
        }
    }

    /// Sets the terminal set of a connectivity property, annotates the
    /// terminals, and for `connected` lowers `t` to `|T| - 1`.
    pub fn with_terminals(mut self, terminals: VertexSet) -> Result<Self> {
        let renamed = self.name == self.property.to_string();
        match &mut self.property {
            PropertySpec::Connected { terminals: old } => {
                self.annotations.difference_with(old);
                *old = terminals.clone();
                self.t = terminals.len().saturating_sub(1);
            }
            PropertySpec::Tree { terminals: old } => {
                self.annotations.difference_with(old);
                *old = terminals.clone();
            }
            other => return Err(Error::InvalidParams(format!("property `{other}` takes no terminals"))),
        }
        self.annotations.union_with(&terminals);
        if renamed {
            self.name = self.property.to_string();
        }
        Ok(self)
    }
}

fn terminals_of(p: &PropertySpec) -> Option<&VertexSet> {
    match p {
        PropertySpec::Connected { terminals } | PropertySpec::Tree { terminals } => Some(terminals),
        _ => None,
    }
}

/// The built-in problems. Entries with terminals start with `T = ∅`; use
/// [`ProblemSpec::with_terminals`].
pub fn problem_catalog() -> Vec<ProblemSpec> {
    let packing = |h: &str| PropertySpec::Packing { family: vec![h.into()] };
    let mut treewidth = ProblemSpec::named("max-induced-treewidth", PropertySpec::True);
    treewidth.t = 2;
    let mut tree = ProblemSpec::named("k-in-a-tree", PropertySpec::Tree { terminals: VertexSet::new() });
    tree.mode = Mode::Min;
    let mut steiner =
        ProblemSpec::named("min-connected-subgraph", PropertySpec::Connected { terminals: VertexSet::new() });
    steiner.mode = Mode::Min;
    vec![
        ProblemSpec::named("max-independent-set", PropertySpec::IndependentSet),
        ProblemSpec::named("max-induced-forest", PropertySpec::Forest),
        treewidth,
        ProblemSpec::named("max-q-colorable-subgraph", PropertySpec::Colorable { q: 3 }),
        ProblemSpec::named("max-degree-d-subgraph", PropertySpec::MaxDegree { d: 2 }),
        ProblemSpec::named("induced-matching", packing("K2")),
        ProblemSpec::named("triangle-packing", packing("K3")),
        tree,
        steiner,
    ]
}

/// A catalog name or a property name such as `forest`, `colorable:q=2` or
/// `true:t=2` (a `t=` parameter overrides the default bound).
pub fn resolve_problem(name: &str) -> Result<ProblemSpec> {
    if let Some(spec) = problem_catalog().into_iter().find(|p| p.name == name) {
        return Ok(spec);
    }
    let mut spec = ProblemSpec::from_property(name.parse()?)?;
    let params = name.split_once(':').map_or("", |(_, rest)| rest);
    if let Some(t) = params.split(',').find_map(|p| p.trim().strip_prefix("t=")) {
        spec.t = t.parse().map_err(|_| Error::InvalidParams(format!("`t` must be a non-negative integer, got `{t}`")))?;
    }
    Ok(spec)
}

/// Warnings for inputs where `t` rests on an unchecked premise about the
/// optimum, so the answer may fall short of the true optimum.
pub fn check_class_caveats(g: &Graph, spec: &ProblemSpec) -> Vec<String> {
    let mut out = Vec::new();
    match &spec.property {
        PropertySpec::Colorable { q } if spec.t + 1 < *q || !g.is_chordal() => out.push(format!(
            "{q}-colorable subgraphs of a non-chordal graph may have treewidth above {}; the result is optimal only among those of treewidth at most {}",
            spec.t, spec.t
        )),
        PropertySpec::MaxDegree { d } if *d > 2 => out.push(format!(
            "subgraphs of maximum degree {d} have unbounded treewidth; the result is optimal only among those of treewidth at most {}",
            spec.t
        )),
        PropertySpec::Connected { terminals } if spec.mode == Mode::Max || spec.t + 1 < terminals.len() => {
            out.push(format!(
                "maximum connected subgraphs need not have treewidth at most {}; the result is restricted to those",
                spec.t
            ))
        }
        _ => {
            if let Ok(t) = default_t(&spec.property) {
                if spec.t < t && !matches!(spec.property, PropertySpec::True) {
                    out.push(format!("t = {} is below the natural bound {t} for {}", spec.t, spec.property));
                }
            }
        }
    }
    out
}

struct Part {
    graph: Graph,
    new_to_old: Vec<usize>,
    automaton: AnyAutomaton,
    objective: Objective,
}

fn part(g: &Graph, keep: &VertexSet, spec: &ProblemSpec) -> Result<Part> {
    let (graph, new_to_old) = g.induced(keep);
    let mut old_to_new = vec![usize::MAX; g.n()];
    for (i, &v) in new_to_old.iter().enumerate() {
        old_to_new[v] = i;
    }
    let automaton = make_automaton(&spec.property.restricted(&old_to_new))?;
    let objective = Objective {
        mode: spec.mode,
        weights: spec.weights.as_ref().map(|w| new_to_old.iter().map(|&v| w[v]).collect()),
        annotations: (&spec.annotations & keep).iter().map(|v| old_to_new[v]).collect(),
        exact_size: None,
    };
    Ok(Part { graph, new_to_old, automaton, objective })
}

fn lift(p: &Part, sol: Solution) -> Solution {
    let map = |s: &VertexSet| -> VertexSet { s.iter().map(|v| p.new_to_old[v]).collect() };
    let tables = sol
        .tables
        .iter()
        .map(|r| TableRecord {
            separator: map(&r.separator),
            component: map(&r.component),
            pmc: r.pmc.as_ref().map(map),
            w: map(&r.w),
            f: map(&r.f),
            x: map(&r.x),
            ..r.clone()
        })
        .collect();
    Solution { f: map(&sol.f), x: map(&sol.x), tables, ..sol }
}

fn solve_part(p: &Part, t: usize, opts: &SolveOptions) -> Result<Solution> {
    with_automaton!(&p.automaton, a => engine::solve(&p.graph, t, a, &p.objective, opts)).map(|s| lift(p, s))
}

fn solve_part_by_size(p: &Part, t: usize, cap: usize, opts: &SolveOptions) -> Result<Vec<Option<Solution>>> {
    let obj = Objective { exact_size: Some(cap.min(p.graph.n())), ..p.objective.clone() };
    let sizes = with_automaton!(&p.automaton, a => engine::solve_by_size(&p.graph, t, a, &obj, opts))?;
    Ok(sizes.into_iter().map(|s| s.map(|s| lift(p, s))).collect())
}

fn better(obj: &Objective, a: &Solution, b: &Solution) -> bool {
    obj.prefers((a.value, &a.f, &a.x), (b.value, &b.f, &b.x))
}

fn combine(a: &Solution, b: &Solution) -> Solution {
    let mut stats = a.stats.clone();
    stats.absorb(&b.stats);
    let tables = a.tables.iter().chain(&b.tables).cloned().collect();
    Solution { value: a.value + b.value, f: &a.f | &b.f, x: &a.x | &b.x, stats, tables }
}

fn empty_solution() -> Solution {
    Solution { value: 0.0, f: VertexSet::new(), x: VertexSet::new(), stats: Stats::default(), tables: Vec::new() }
}

/// Solves `spec` on `g`, splitting disconnected inputs into components,
/// and checks the witness before returning it.
pub fn solve_problem(g: &Graph, spec: &ProblemSpec, opts: &SolveOptions) -> Result<Solution> {
    let start = std::time::Instant::now();
    g.check_subset(&spec.annotations)?;
    if let Some(ts) = terminals_of(&spec.property) {
        g.check_subset(ts)?;
    }
    if let Some(w) = &spec.weights {
        if w.len() != g.n() {
            return Err(Error::InvalidParams(format!("{} weights for {} vertices", w.len(), g.n())));
        }
    }
    if spec.exact_size.is_some_and(|v| v > g.n()) {
        return Err(Error::Infeasible);
    }
    let automaton = make_automaton(&spec.property)?;
    let components = g.connected_components(&VertexSet::new())?;
    let parts = components.iter().map(|c| part(g, c, spec)).collect::<Result<Vec<_>>>()?;

    let mut sol = if automaton.decomposable() {
        solve_decomposable(&parts, spec, opts)?
    } else {
        solve_single_component(&parts, spec, opts)?
    };
    sol.stats.ms = start.elapsed().as_millis() as u64;

    if !witness_is_valid(g, spec.t, &automaton, &spec.objective(), &sol) {
        return Err(Error::Internal(format!("witness for {} failed verification", spec.name)));
    }
    Ok(sol)
}

/// Components are independent: the optimum is the sum of per-component
/// optima, or a knapsack over sizes when `|X|` is fixed.
fn solve_decomposable(parts: &[Part], spec: &ProblemSpec, opts: &SolveOptions) -> Result<Solution> {
    let Some(v) = spec.exact_size else {
        let mut acc = empty_solution();
        for p in parts {
            acc = combine(&acc, &solve_part(p, spec.t, opts)?);
        }
        return Ok(acc);
    };
    let obj = Objective::new(spec.mode);
    let mut table: Vec<Option<Solution>> = vec![None; v + 1];
    table[0] = Some(empty_solution());
    for p in parts {
        let sizes = solve_part_by_size(p, spec.t, v, opts)?;
        let mut next: Vec<Option<Solution>> = vec![None; v + 1];
        for (i, acc) in table.iter().enumerate() {
            let Some(acc) = acc else { continue };
            for (j, s) in sizes.iter().enumerate() {
                let Some(s) = s else { continue };
                if i + j > v {
                    break;
                }
                let merged = combine(acc, s);
                let slot = &mut next[i + j];
                if slot.as_ref().is_none_or(|old| better(&obj, &merged, old)) {
                    *slot = Some(merged);
                }
            }
        }
        table = next;
    }
    table.swap_remove(v).ok_or(Error::Infeasible)
}

/// `G[F]` must be connected, so `F` lives in one component: the one holding
/// the terminals and annotations, or the best one if there are none.
fn solve_single_component(parts: &[Part], spec: &ProblemSpec, opts: &SolveOptions) -> Result<Solution> {
    let mut anchored = spec.annotations.clone();
    if let Some(ts) = terminals_of(&spec.property) {
        anchored.union_with(ts);
    }
    let run = |p: &Part| -> Result<Solution> {
        match spec.exact_size {
            None => solve_part(p, spec.t, opts),
            Some(v) if v > p.graph.n() => Err(Error::Infeasible),
            Some(v) => {
                let mut sizes = solve_part_by_size(p, spec.t, v, opts)?;
                sizes.swap_remove(v).ok_or(Error::Infeasible)
            }
        }
    };
    if let Some(first) = anchored.first() {
        let home = parts.iter().find(|p| p.new_to_old.contains(&first)).ok_or(Error::Internal("no component".into()))?;
        if anchored.iter().any(|v| !home.new_to_old.contains(&v)) {
            return Err(Error::Infeasible);
        }
        return run(home);
    }
    let obj = Objective::new(spec.mode);
    let mut best: Option<Solution> = None;
    let mut stats = Stats::default();
    for p in parts {
        match run(p) {
            Ok(s) => {
                stats.absorb(&s.stats);
                if best.as_ref().is_none_or(|b| better(&obj, &s, b)) {
                    best = Some(s);
                }
            }
            Err(Error::Infeasible) => {}
            Err(e) => return Err(e),
        }
    }
    let mut best = best.ok_or(Error::Infeasible)?;
    best.stats = stats;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_graph;

    fn graph(kind: &str) -> Graph {
        gen_graph(&kind.parse().unwrap(), 0).unwrap()
    }

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    fn catalog(name: &str) -> ProblemSpec {
        problem_catalog().into_iter().find(|p| p.name == name).unwrap()
    }

    #[test]
    fn catalog_shape() {
        let cat = problem_catalog();
        assert!(cat.len() >= 8);
        assert_eq!(catalog("max-induced-forest").t, 1);
        assert_eq!(catalog("triangle-packing").t, 2);
        assert_eq!(catalog("induced-matching").t, 1);
        let steiner = catalog("min-connected-subgraph").with_terminals(set(&[0, 1, 2])).unwrap();
        assert_eq!(steiner.t, 2);
        assert_eq!(steiner.annotations, set(&[0, 1, 2]));
    }

    #[test]
    fn examples() {
        let opts = SolveOptions::default();
        assert_eq!(solve_problem(&graph("cycle:n=4"), &catalog("max-induced-forest"), &opts).unwrap().value, 3.0);
        let matching = solve_problem(&graph("path:n=6"), &catalog("induced-matching"), &opts).unwrap();
        assert_eq!((matching.value, matching.f), (2.0, set(&[0, 1, 3, 4])));
        let steiner = catalog("min-connected-subgraph").with_terminals(set(&[0, 3])).unwrap();
        assert_eq!(solve_problem(&graph("cycle:n=6"), &steiner, &opts).unwrap().value, 4.0);
    }

    #[test]
    fn disconnected_inputs() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)]).unwrap();
        let opts = SolveOptions::default();
        assert_eq!(solve_problem(&g, &catalog("max-independent-set"), &opts).unwrap().value, 4.0);
        let mut exact = catalog("max-independent-set");
        exact.exact_size = Some(4);
        assert_eq!(solve_problem(&g, &exact, &opts).unwrap().x.len(), 4);
        exact.exact_size = Some(5);
        assert_eq!(solve_problem(&g, &exact, &opts).unwrap_err(), Error::Infeasible);
        let apart = catalog("k-in-a-tree").with_terminals(set(&[0, 3])).unwrap();
        assert_eq!(solve_problem(&g, &apart, &opts).unwrap_err(), Error::Infeasible);
        let together = catalog("k-in-a-tree").with_terminals(set(&[0, 2])).unwrap();
        assert_eq!(solve_problem(&g, &together, &opts).unwrap().f, set(&[0, 1, 2]));
    }

    #[test]
    fn caveats() {
        let g = gen_graph(&"gnp:n=12,p=0.5".parse().unwrap(), 3).unwrap();
        assert!(!check_class_caveats(&g, &catalog("max-q-colorable-subgraph")).is_empty());
        assert!(check_class_caveats(&g, &catalog("max-induced-forest")).is_empty());
        assert!(check_class_caveats(&g, &catalog("triangle-packing")).is_empty());
    }

    #[test]
    fn property_names_resolve() {
        assert_eq!(resolve_problem("forest").unwrap().t, 1);
        assert_eq!(resolve_problem("colorable:q=3").unwrap().t, 2);
        assert_eq!(resolve_problem("max-independent-set").unwrap().t, 0);
        assert_eq!(resolve_problem("true:t=3").unwrap().t, 3);
        assert!(resolve_problem("nonsense").is_err());
    }
}
