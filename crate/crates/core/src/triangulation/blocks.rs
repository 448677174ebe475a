use std::collections::HashMap;

use serde::Serialize;

use super::separators::full_components_within;
use crate::graph::Graph;
use crate::vset::VertexSet;

/// A minimal separator `S` with one of its full components `C`, or the
/// root block `(∅, V)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FullBlock {
    pub separator: VertexSet,
    pub component: VertexSet,
}

impl FullBlock {
    pub fn vertices(&self) -> VertexSet {
        &self.separator | &self.component
    }

    pub fn is_root(&self) -> bool {
        self.separator.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GoodTriple {
    pub separator: VertexSet,
    pub component: VertexSet,
    pub pmc: VertexSet,
}

impl GoodTriple {
    /// Base case: `Ω = S ∪ C`.
    pub fn is_base(&self) -> bool {
        self.pmc.len() == self.separator.len() + self.component.len()
    }
}

/// All full blocks plus `(∅, V)`, ordered by `|S ∪ C|` and then by `S ∪ C`.
/// Every block precedes its strict supersets.
pub fn enumerate_full_blocks(g: &Graph, separators: &[VertexSet]) -> Vec<FullBlock> {
    let all = g.vertices();
    let mut blocks: Vec<FullBlock> = separators
        .iter()
        .flat_map(|s| {
            full_components_within(g, &all, s)
                .into_iter()
                .map(move |c| FullBlock { separator: s.clone(), component: c })
        })
        .collect();
    if g.n() > 0 {
        blocks.push(FullBlock { separator: VertexSet::new(), component: all });
    }
    sort_blocks(&mut blocks);
    blocks
}

fn sort_blocks(blocks: &mut [FullBlock]) {
    blocks.sort_by_cached_key(|b| {
        let v = b.vertices();
        (v.len(), v, b.separator.clone())
    });
}

/// Good triples grouped by block (in block order), PMCs ascending within a
/// block.
///
/// Each PMC `Ω` belongs to the root block and, for each component `D` of
/// `G - Ω`, to the block `(N(D), C)` where `C` is the component of
/// `G - N(D)` holding `Ω \ N(D)`. These are all its good triples.
pub fn enumerate_good_triples(g: &Graph, blocks: &[FullBlock], pmcs: &[VertexSet]) -> Vec<GoodTriple> {
    let index = block_index(blocks);
    triples_by_block(g, blocks, &index, pmcs)
        .into_iter()
        .enumerate()
        .flat_map(|(b, omegas)| {
            let block = &blocks[b];
            omegas.into_iter().map(move |o| GoodTriple {
                separator: block.separator.clone(),
                component: block.component.clone(),
                pmc: pmcs[o].clone(),
            })
        })
        .collect()
}

pub(crate) fn block_index(blocks: &[FullBlock]) -> HashMap<VertexSet, usize> {
    blocks.iter().enumerate().map(|(i, b)| (b.component.clone(), i)).collect()
}

/// PMC indices per block.
pub(crate) fn triples_by_block(
    g: &Graph,
    blocks: &[FullBlock],
    index: &HashMap<VertexSet, usize>,
    pmcs: &[VertexSet],
) -> Vec<Vec<usize>> {
    let all = g.vertices();
    let mut out = vec![Vec::new(); blocks.len()];
    let Some(&root) = index.get(&all) else {
        return out;
    };
    for (o, omega) in pmcs.iter().enumerate() {
        out[root].push(o);
        let mut hits = Vec::new();
        for d in g.components_within(&(&all - omega)) {
            let s = g.open_neighborhood(&d);
            let Some(v) = (omega - &s).first() else { continue };
            let c = g.component_of(v, &(&all - &s));
            if let Some(&b) = index.get(&c) {
                if blocks[b].separator == s && omega.is_subset(&(&s | &c)) {
                    hits.push(b);
                }
            }
        }
        hits.sort_unstable();
        hits.dedup();
        for b in hits {
            out[b].push(o);
        }
    }
    for list in &mut out {
        list.sort_by(|&a, &b| pmcs[a].cmp(&pmcs[b]));
    }
    out
}

/// Sub-blocks `(N(C_i), C_i)` for the components `C_i` of `G[C \ Ω]`, in
/// order of smallest member. Empty for a base triple.
pub fn component_blocks(g: &Graph, triple: &GoodTriple) -> Vec<FullBlock> {
    g.components_within(&(&triple.component - &triple.pmc))
        .into_iter()
        .map(|c| FullBlock { separator: g.open_neighborhood(&c), component: c })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_graph;
    use crate::triangulation::{enumerate_minimal_separators, enumerate_pmcs, Budgets};

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    fn graph(kind: &str) -> Graph {
        gen_graph(&kind.parse().unwrap(), 0).unwrap()
    }

    fn block(s: &[usize], c: &[usize]) -> FullBlock {
        FullBlock { separator: set(s), component: set(c) }
    }

    fn skeleton(g: &Graph) -> (Vec<FullBlock>, Vec<VertexSet>) {
        let seps = enumerate_minimal_separators(g, 1 << 20).unwrap();
        let pmcs = enumerate_pmcs(g, &seps, &Budgets::default()).unwrap();
        (enumerate_full_blocks(g, &seps), pmcs)
    }

    #[test]
    fn blocks_of_small_graphs() {
        let (blocks, _) = skeleton(&graph("path:n=3"));
        assert_eq!(blocks, vec![block(&[1], &[0]), block(&[1], &[2]), block(&[], &[0, 1, 2])]);
        let (blocks, _) = skeleton(&graph("cycle:n=4"));
        assert_eq!(blocks.len(), 5);
        let (blocks, _) = skeleton(&graph("complete:n=4"));
        assert_eq!(blocks, vec![block(&[], &[0, 1, 2, 3])]);
    }

    #[test]
    fn triples_of_small_graphs() {
        let g = graph("path:n=3");
        let (blocks, pmcs) = skeleton(&g);
        let triples = enumerate_good_triples(&g, &blocks, &pmcs);
        let expect = [
            (&[1][..], &[0][..], &[0, 1][..]),
            (&[1], &[2], &[1, 2]),
            (&[], &[0, 1, 2], &[0, 1]),
            (&[], &[0, 1, 2], &[1, 2]),
        ];
        let expect: Vec<GoodTriple> = expect
            .iter()
            .map(|(s, c, o)| GoodTriple { separator: set(s), component: set(c), pmc: set(o) })
            .collect();
        assert_eq!(triples, expect);

        let c4 = graph("cycle:n=4");
        let (blocks, pmcs) = skeleton(&c4);
        let triples = enumerate_good_triples(&c4, &blocks, &pmcs);
        assert_eq!(triples.len(), 8);
        assert_eq!(triples.iter().filter(|t| t.is_base()).count(), 4);
    }

    #[test]
    fn triples_match_naive_filter() {
        for kind in ["cycle:n=6", "grid:rows=3,cols=3", "gnp:n=9,p=0.4", "k-tree:n=9,k=2", "star:n=5"] {
            for seed in 0..5 {
                let g = gen_graph(&kind.parse().unwrap(), seed).unwrap();
                if !g.is_connected() {
                    continue;
                }
                let (blocks, pmcs) = skeleton(&g);
                let fast = enumerate_good_triples(&g, &blocks, &pmcs);
                let mut naive = Vec::new();
                for b in &blocks {
                    for o in &pmcs {
                        if b.separator.is_subset(o) && o.is_subset(&b.vertices()) {
                            naive.push(GoodTriple {
                                separator: b.separator.clone(),
                                component: b.component.clone(),
                                pmc: o.clone(),
                            });
                        }
                    }
                }
                assert_eq!(fast, naive, "{kind} seed {seed}");
                assert!(fast.len() <= g.n() * pmcs.len());
            }
        }
    }

    #[test]
    fn component_blocks_by_hand() {
        let p3 = graph("path:n=3");
        let root = GoodTriple { separator: set(&[]), component: set(&[0, 1, 2]), pmc: set(&[0, 1]) };
        assert_eq!(component_blocks(&p3, &root), vec![block(&[1], &[2])]);
        let base = GoodTriple { separator: set(&[1]), component: set(&[0]), pmc: set(&[0, 1]) };
        assert!(component_blocks(&p3, &base).is_empty());

        let star = graph("star:n=4");
        let t = GoodTriple { separator: set(&[]), component: set(&[0, 1, 2, 3]), pmc: set(&[0, 1]) };
        assert_eq!(component_blocks(&star, &t), vec![block(&[0], &[2]), block(&[0], &[3])]);
    }
}
