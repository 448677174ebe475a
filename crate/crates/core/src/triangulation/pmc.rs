use std::collections::HashSet;

use rayon::prelude::*;

use super::separators::{full_components_within, separators_within};
use super::Budgets;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

/// True iff `omega` is a potential maximal clique of `G`.
///
/// Checks that no component of `G - Ω` sees all of `Ω`, and that every
/// non-adjacent pair of `Ω` is covered by the neighborhood of some component.
pub fn is_pmc(g: &Graph, omega: &VertexSet) -> bool {
    if g.check_subset(omega).is_err() {
        return false;
    }
    is_pmc_within(g, &g.vertices(), omega)
}

pub(crate) fn is_pmc_within(g: &Graph, active: &VertexSet, omega: &VertexSet) -> bool {
    if omega.is_empty() || !omega.is_subset(active) {
        return false;
    }
    let members = omega.to_vec();
    let mut reach: Vec<VertexSet> = members.iter().map(|&v| g.neighbors(v) & omega).collect();
    for comp in g.components_within(&(active - omega)) {
        let mut s = g.open_neighborhood(&comp);
        s.intersect_with(active);
        if &s == omega {
            return false;
        }
        for (i, &v) in members.iter().enumerate() {
            if s.contains(v) {
                reach[i].union_with(&s);
            }
        }
    }
    members.iter().zip(&mut reach).all(|(&v, r)| {
        r.insert(v);
        omega.is_subset(r)
    })
}

/// Lists every potential maximal clique of a connected graph, sorted.
///
/// Vertices are added one at a time in BFS order, so every prefix graph
/// `G_i` stays connected. The PMCs of `G_i` are found among: the PMCs of
/// `G_{i-1}` with or without the new vertex `a`, `S ∪ {a}` for `S ∈ Δ_{G_i}`,
/// and `S ∪ (T ∩ C)` for `S ∈ Δ_{G_i}` not containing `a`, `T ∈ Δ_{G_{i-1}}`,
/// and `C` a full component of `S` in `G_i`.
///
/// `separators` must be `Δ_G`. The PMC budget applies to every prefix
/// graph; prefix counts never exceed the final count.
pub fn enumerate_pmcs(g: &Graph, separators: &[VertexSet], budgets: &Budgets) -> Result<Vec<VertexSet>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let order = bfs_order(g);
    let mut active = VertexSet::singleton(order[0]);
    let mut pmcs = vec![active.clone()];
    let mut prev_seps: Vec<VertexSet> = Vec::new();
    for (i, &a) in order.iter().enumerate().skip(1) {
        active.insert(a);
        let seps = if i + 1 == order.len() {
            separators.to_vec()
        } else {
            separators_within(g, &active, budgets.separators)?
        };
        pmcs = one_more_vertex(g, &active, a, &pmcs, &prev_seps, &seps, budgets.pmcs)?;
        prev_seps = seps;
    }
    Ok(pmcs)
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut order = vec![0];
    let mut seen = VertexSet::singleton(0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for u in g.neighbors(v) {
            if seen.insert(u) {
                order.push(u);
            }
        }
    }
    order
}

fn one_more_vertex(
    g: &Graph,
    active: &VertexSet,
    a: usize,
    prev_pmcs: &[VertexSet],
    prev_seps: &[VertexSet],
    seps: &[VertexSet],
    budget: usize,
) -> Result<Vec<VertexSet>> {
    let mut candidates: HashSet<VertexSet> = HashSet::new();
    for omega in prev_pmcs {
        candidates.insert(omega.clone());
        let mut grown = omega.clone();
        grown.insert(a);
        candidates.insert(grown);
    }
    for s in seps {
        let mut grown = s.clone();
        grown.insert(a);
        candidates.insert(grown);
    }
    let mut candidates: Vec<VertexSet> = candidates.into_iter().collect();
    let extra: Vec<Vec<VertexSet>> = seps
        .par_iter()
        .filter(|s| !s.contains(a))
        .map(|s| {
            let mut out = Vec::new();
            for comp in full_components_within(g, active, s) {
                for t in prev_seps {
                    let inner = t & &comp;
                    if !inner.is_empty() {
                        out.push(s | &inner);
                    }
                }
            }
            out
        })
        .collect();
    candidates.extend(extra.into_iter().flatten());
    candidates.par_sort_unstable();
    candidates.dedup();

    let found: Vec<VertexSet> =
        candidates.into_par_iter().filter(|c| is_pmc_within(g, active, c)).collect();
    if found.len() > budget {
        return Err(Error::BudgetExceeded { what: "potential maximal cliques", limit: budget });
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_graph;
    use crate::triangulation::enumerate_minimal_separators;

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    fn graph(kind: &str) -> Graph {
        gen_graph(&kind.parse().unwrap(), 0).unwrap()
    }

    fn pmcs(g: &Graph) -> Vec<VertexSet> {
        let seps = enumerate_minimal_separators(g, 1 << 20).unwrap();
        enumerate_pmcs(g, &seps, &Budgets::default()).unwrap()
    }

    #[test]
    fn recognizes_pmcs() {
        let p3 = graph("path:n=3");
        assert!(is_pmc(&p3, &set(&[0, 1])));
        assert!(!is_pmc(&p3, &set(&[0, 2])));
        assert!(is_pmc(&graph("cycle:n=4"), &set(&[0, 1, 2])));
        assert!(!is_pmc(&graph("cycle:n=4"), &set(&[0, 2])));
        assert!(is_pmc(&graph("complete:n=3"), &set(&[0, 1, 2])));
    }

    #[test]
    fn small_listings() {
        assert_eq!(pmcs(&graph("path:n=3")), vec![set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(
            pmcs(&graph("cycle:n=4")),
            vec![set(&[0, 1, 2]), set(&[0, 1, 3]), set(&[0, 2, 3]), set(&[1, 2, 3])]
        );
        assert_eq!(pmcs(&graph("cycle:n=5")).len(), 10);
        assert_eq!(pmcs(&graph("complete:n=4")), vec![set(&[0, 1, 2, 3])]);
        assert_eq!(pmcs(&Graph::new(1)), vec![set(&[0])]);
    }

    #[test]
    fn budget_aborts() {
        let g = graph("cycle:n=7");
        let seps = enumerate_minimal_separators(&g, 1000).unwrap();
        let tight = Budgets { separators: 1000, pmcs: 3 };
        assert!(matches!(enumerate_pmcs(&g, &seps, &tight), Err(Error::BudgetExceeded { .. })));
    }
}
