use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

/// Components `C` of `G[active] - s` with `N(C) ∩ active = s`.
pub(crate) fn full_components_within(g: &Graph, active: &VertexSet, s: &VertexSet) -> Vec<VertexSet> {
    g.components_within(&(active - s))
        .into_iter()
        .filter(|c| {
            let mut nb = g.open_neighborhood(c);
            nb.intersect_with(active);
            &nb == s
        })
        .collect()
}

/// True iff `G - s` has at least two full components.
pub fn is_minimal_separator(g: &Graph, s: &VertexSet) -> bool {
    if s.is_empty() || g.check_subset(s).is_err() {
        return false;
    }
    full_components_within(g, &g.vertices(), s).len() >= 2
}

/// Lists every minimal separator of a connected graph, sorted.
///
/// Seeds with `N(C)` for the components `C` of `G - N[v]`, then closes under
/// `S -> N(C)` for the components `C` of `G - (S ∪ N(x))`, `x ∈ S`.
pub fn enumerate_minimal_separators(g: &Graph, budget: usize) -> Result<Vec<VertexSet>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    separators_within(g, &g.vertices(), budget)
}

/// Minimal separators of the connected graph `G[active]`.
pub(crate) fn separators_within(g: &Graph, active: &VertexSet, budget: usize) -> Result<Vec<VertexSet>> {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut queue: Vec<VertexSet> = Vec::new();

    let close_over = |excluded: &VertexSet, seen: &mut HashSet<VertexSet>, queue: &mut Vec<VertexSet>| -> Result<()> {
        for comp in g.components_within(&(active - excluded)) {
            let mut s = g.open_neighborhood(&comp);
            s.intersect_with(active);
            if !s.is_empty() && !seen.contains(&s) {
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { what: "minimal separators", limit: budget });
                }
                seen.insert(s.clone());
                queue.push(s);
            }
        }
        Ok(())
    };

    for v in active {
        let mut closed = g.neighbors(v) & active;
        closed.insert(v);
        close_over(&closed, &mut seen, &mut queue)?;
    }
    while let Some(s) = queue.pop() {
        for x in &s {
            let mut excluded = g.neighbors(x) & active;
            excluded.union_with(&s);
            close_over(&excluded, &mut seen, &mut queue)?;
        }
    }

    let mut out: Vec<VertexSet> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
