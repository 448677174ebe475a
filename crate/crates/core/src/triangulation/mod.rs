//! Minimal separators, potential maximal cliques, full blocks and good
//! triples.

mod blocks;
mod elimination;
mod pmc;
mod separators;

pub use blocks::{component_blocks, enumerate_full_blocks, enumerate_good_triples, FullBlock, GoodTriple};
pub use elimination::{
    elimination_game, exact_treewidth_small, maximal_cliques_chordal, minimal_triangulations_small,
    treewidth_at_most, MAX_EXACT_TREEWIDTH, MAX_TREEWIDTH_DECISION, MAX_TRIANGULATION_ORACLE,
};
pub use pmc::{enumerate_pmcs, is_pmc};
pub use separators::{enumerate_minimal_separators, is_minimal_separator};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub separators: usize,
    pub pmcs: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { separators: 1_000_000, pmcs: 10_000_000 }
    }
}

/// `n|Δ|² + n|Δ| + 1`.
pub fn pmc_count_bound(n: usize, separators: usize) -> u128 {
    let (n, s) = (n as u128, separators as u128);
    n * s * s + n * s + 1
}

/// One good triple as seen by the dynamic program.
#[derive(Clone, Debug)]
pub struct TripleRef {
    pub pmc: usize,
    /// Block indices of the components of `G[C \ Ω]`; empty for a base triple.
    pub children: Vec<usize>,
}

/// Everything the dynamic program iterates over, for one connected graph.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub separators: Vec<VertexSet>,
    pub pmcs: Vec<VertexSet>,
    /// Ordered so that every block precedes its strict supersets; the root
    /// block `(∅, V)` is last.
    pub blocks: Vec<FullBlock>,
    pub triples: Vec<Vec<TripleRef>>,
}

impl Skeleton {
    pub fn build(g: &Graph, budgets: &Budgets) -> Result<Self> {
        if g.n() == 0 || !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let separators = enumerate_minimal_separators(g, budgets.separators)?;
        let pmcs = enumerate_pmcs(g, &separators, budgets)?;
        let blocks = enumerate_full_blocks(g, &separators);
        let index = blocks::block_index(&blocks);
        let by_block = blocks::triples_by_block(g, &blocks, &index, &pmcs);
        let mut triples = Vec::with_capacity(blocks.len());
        for (b, omegas) in by_block.into_iter().enumerate() {
            let block = &blocks[b];
            let mut refs = Vec::with_capacity(omegas.len());
            for o in omegas {
                let triple = GoodTriple {
                    separator: block.separator.clone(),
                    component: block.component.clone(),
                    pmc: pmcs[o].clone(),
                };
                let children = component_blocks(g, &triple)
                    .into_iter()
                    .map(|child| {
                        index.get(&child.component).copied().ok_or_else(|| {
                            Error::Internal(format!("component block {:?} was not enumerated", child.component))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()?;
                refs.push(TripleRef { pmc: o, children });
            }
            triples.push(refs);
        }
        Ok(Skeleton { separators, pmcs, blocks, triples })
    }

    pub fn root(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn good_triple_count(&self) -> usize {
        self.triples.iter().map(Vec::len).sum()
    }

    /// Block indices grouped into layers of equal `|S ∪ C|`, in order.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (i, b) in self.blocks.iter().enumerate() {
            let size = b.separator.len() + b.component.len();
            if last != Some(size) {
                layers.push(Vec::new());
                last = Some(size);
            }
            layers.last_mut().unwrap().push(i);
        }
        layers
    }

    /// All good triples, grouped by block.
    pub fn good_triples(&self) -> Vec<GoodTriple> {
        self.triples
            .iter()
            .enumerate()
            .flat_map(|(b, refs)| {
                refs.iter().map(move |r| GoodTriple {
                    separator: self.blocks[b].separator.clone(),
                    component: self.blocks[b].component.clone(),
                    pmc: self.pmcs[r.pmc].clone(),
                })
            })
            .collect()
    }
}
