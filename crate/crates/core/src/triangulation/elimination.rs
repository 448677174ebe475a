//! Small-scale triangulation oracles based on elimination orderings.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

pub const MAX_TRIANGULATION_ORACLE: usize = 9;
pub const MAX_EXACT_TREEWIDTH: usize = 14;
pub const MAX_TREEWIDTH_DECISION: usize = 22;

/// Fill-in graph of eliminating the vertices in `order`.
pub fn elimination_game(g: &Graph, order: &[usize]) -> Result<Graph> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n || !order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
        return Err(Error::InvalidParams("elimination order must be a permutation of the vertices".into()));
    }
    let mut adj: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut remaining = g.vertices();
    for &v in order {
        remaining.remove(v);
        let later = &adj[v] & &remaining;
        for u in &later {
            adj[u].union_with(&later);
            adj[u].remove(u);
        }
    }
    let mut h = Graph::new(n);
    for (u, nb) in adj.iter().enumerate() {
        for w in nb.iter().filter(|&w| w > u) {
            h.add_edge(u, w)?;
        }
    }
    Ok(h)
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u)).collect()
}

/// Every minimal triangulation of `G`, as the edge-minimal outcomes of the
/// elimination game over all `n!` orders. Sorted by edge list.
pub fn minimal_triangulations_small(g: &Graph) -> Result<Vec<Graph>> {
    let n = g.n();
    if n > MAX_TRIANGULATION_ORACLE {
        return Err(Error::SizeLimit { what: "triangulation oracle", n, limit: MAX_TRIANGULATION_ORACLE });
    }
    let base = masks(g);
    let pair = |u: usize, w: usize| 1u128 << (u * n + w);
    let mut outcomes: HashSet<u128> = HashSet::new();

    // Heap's algorithm over all orders
    let mut order: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut run = |order: &[usize]| {
        let mut adj = base.clone();
        let mut remaining: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
        for &v in order {
            remaining &= !(1 << v);
            let later = adj[v] & remaining;
            let mut rest = later;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                adj[u] |= later & !(1 << u);
            }
        }
        let mut key = 0u128;
        for (u, &m) in adj.iter().enumerate() {
            let mut upper = m >> (u + 1);
            while upper != 0 {
                let w = u + 1 + upper.trailing_zeros() as usize;
                upper &= upper - 1;
                key |= pair(u, w);
            }
        }
        outcomes.insert(key);
    };
    run(&order);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            run(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let mut sorted: Vec<u128> = outcomes.into_iter().collect();
    sorted.sort_by_key(|k| (k.count_ones(), *k));
    let mut minimal: Vec<u128> = Vec::new();
    for k in sorted {
        if !minimal.iter().any(|&m| m & !k == 0) {
            minimal.push(k);
        }
    }
    let mut graphs = minimal
        .into_iter()
        .map(|k| {
            let mut h = Graph::new(n);
            for u in 0..n {
                for w in u + 1..n {
                    if k & pair(u, w) != 0 {
                        h.add_edge(u, w)?;
                    }
                }
            }
            Ok(h)
        })
        .collect::<Result<Vec<Graph>>>()?;
    graphs.sort_by_cached_key(|h| h.edges().collect::<Vec<_>>());
    Ok(graphs)
}

/// Maximal cliques of a chordal graph, sorted. Uses a perfect elimination
/// order from maximum cardinality search.
pub fn maximal_cliques_chordal(h: &Graph) -> Result<Vec<VertexSet>> {
    if !h.is_chordal() {
        return Err(Error::InvalidParams("graph is not chordal".into()));
    }
    let n = h.n();
    // maximum cardinality search; reversed visit order is a PEO
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !visited[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
        visited[v] = true;
        visit.push(v);
        for u in h.neighbors(v) {
            weight[u] += 1;
        }
    }
    let mut position = vec![0; n];
    for (i, &v) in visit.iter().enumerate() {
        position[v] = i;
    }
    // candidate clique per vertex: itself plus earlier-visited neighbors
    let candidates: Vec<VertexSet> = (0..n)
        .map(|v| {
            let mut c: VertexSet = h.neighbors(v).iter().filter(|&u| position[u] < position[v]).collect();
            c.insert(v);
            c
        })
        .collect();
    let mut cliques: Vec<VertexSet> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
        .cloned()
        .collect();
    cliques.sort();
    cliques.dedup();
    Ok(cliques)
}

/// `|Q(S, v)|`: vertices outside `S ∪ {v}` reachable from `v` through `S`.
fn q_size(adj: &[u32], s: u32, v: usize) -> u32 {
    let inside = s | 1 << v;
    let mut reached = 1u32 << v;
    let mut frontier = reached;
    let mut boundary = 0u32;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[u];
        boundary |= nb & !inside;
        let fresh = nb & s & !reached;
        reached |= fresh;
        frontier |= fresh;
    }
    boundary.count_ones()
}

/// Treewidth by the subset recurrence
/// `TW(S) = min_{v ∈ S} max(TW(S \ v), |Q(S \ v, v)|)`, with `TW(∅) = -1`.
pub fn exact_treewidth_small(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_EXACT_TREEWIDTH {
        return Err(Error::SizeLimit { what: "exact treewidth", n, limit: MAX_EXACT_TREEWIDTH });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = masks(g);
    let full = (1usize << n) - 1;
    // stored as width + 1 so the empty set is 0
    let mut tw = vec![u8::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let q = q_size(&adj, without as u32, v) as u8 + 1;
            best = best.min(tw[without].max(q));
        }
        tw[s] = best;
    }
    Ok(tw[full] as usize - 1)
}

/// Whether `tw(G) ≤ k`, by depth-first search over vertex sets eliminable
/// with every `|Q| ≤ k`.
pub fn treewidth_at_most(g: &Graph, k: usize) -> Result<bool> {
    let n = g.n();
    if n <= k + 1 {
        return Ok(true);
    }
    if n > MAX_TREEWIDTH_DECISION {
        return Err(Error::SizeLimit { what: "treewidth check", n, limit: MAX_TREEWIDTH_DECISION });
    }
    let adj = masks(g);
    let full: u32 = u32::MAX >> (32 - n);
    let mut visited = vec![0u64; (1usize << n).div_ceil(64)];
    let mut stack = vec![0u32];
    while let Some(s) = stack.pop() {
        if (full & !s).count_ones() as usize <= k + 1 {
            return Ok(true);
        }
        let mut rest = full & !s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = s | 1 << v;
            let (w, b) = (next as usize / 64, next as usize % 64);
            if visited[w] & (1 << b) != 0 {
                continue;
            }
            if q_size(&adj, s, v) as usize <= k {
                visited[w] |= 1 << b;
                stack.push(next);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_graph, GraphKind};

    fn graph(kind: &str) -> Graph {
        gen_graph(&kind.parse().unwrap(), 0).unwrap()
    }

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn elimination_adds_fill() {
        let c4 = graph("cycle:n=4");
        let h = elimination_game(&c4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(h.m(), 5);
        assert!(h.has_edge(1, 3));
        let k4 = graph("complete:n=4");
        assert_eq!(elimination_game(&k4, &[2, 0, 3, 1]).unwrap(), k4);
        let p4 = graph("path:n=4");
        assert_eq!(elimination_game(&p4, &[0, 1, 2, 3]).unwrap(), p4);
        assert!(elimination_game(&p4, &[0, 0, 2, 3]).is_err());
    }

    #[test]
    fn triangulation_counts() {
        assert_eq!(minimal_triangulations_small(&graph("cycle:n=4")).unwrap().len(), 2);
        assert_eq!(minimal_triangulations_small(&graph("cycle:n=5")).unwrap().len(), 5);
        let chordal = gen_graph(&GraphKind::KTree { n: 7, k: 2 }, 3).unwrap();
        assert_eq!(minimal_triangulations_small(&chordal).unwrap(), vec![chordal.clone()]);
        assert!(minimal_triangulations_small(&graph("path:n=10")).is_err());
        for h in minimal_triangulations_small(&graph("grid:rows=2,cols=4")).unwrap() {
            assert!(h.is_chordal());
        }
    }

    #[test]
    fn chordal_cliques() {
        let p3 = graph("path:n=3");
        assert_eq!(maximal_cliques_chordal(&p3).unwrap(), vec![set(&[0, 1]), set(&[1, 2])]);
        assert!(maximal_cliques_chordal(&graph("cycle:n=4")).is_err());
        let k = graph("complete:n=4");
        assert_eq!(maximal_cliques_chordal(&k).unwrap(), vec![set(&[0, 1, 2, 3])]);
    }

    #[test]
    fn treewidth_values() {
        assert_eq!(exact_treewidth_small(&graph("path:n=6")).unwrap(), 1);
        assert_eq!(exact_treewidth_small(&graph("complete:n=5")).unwrap(), 4);
        assert_eq!(exact_treewidth_small(&graph("cycle:n=6")).unwrap(), 2);
        assert_eq!(exact_treewidth_small(&graph("grid:rows=3,cols=3")).unwrap(), 3);
        assert_eq!(exact_treewidth_small(&Graph::new(3)).unwrap(), 0);
        assert!(exact_treewidth_small(&graph("path:n=15")).is_err());
    }

    #[test]
    fn decision_matches_exact() {
        for seed in 0..40 {
            let g = gen_graph(&GraphKind::Gnp { n: 10, p: 0.4 }, seed).unwrap();
            let tw = exact_treewidth_small(&g).unwrap();
            for k in 0..10 {
                assert_eq!(treewidth_at_most(&g, k).unwrap(), tw <= k, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn min_fill_over_orders_is_treewidth() {
        for seed in 0..10 {
            let g = gen_graph(&GraphKind::Gnp { n: 7, p: 0.4 }, seed).unwrap();
            let best = minimal_triangulations_small(&g)
                .unwrap()
                .iter()
                .map(|h| maximal_cliques_chordal(h).unwrap().iter().map(|c| c.len()).max().unwrap_or(1) - 1)
                .min()
                .unwrap();
            assert_eq!(best, exact_treewidth_small(&g).unwrap());
        }
    }
}
