use std::collections::HashSet;

use itertools::Itertools;
use smallvec::SmallVec;

use super::partition::{bits, drop_bit, insert_bit, UnionFind};
use super::{Automaton, Boundary};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::triangulation::exact_treewidth_small;
use crate::vset::VertexSet;

/// Largest pattern graph a packing family may contain.
pub const MAX_PATTERN: usize = 8;

/// A small connected pattern graph given by name: `K<n>` (complete), `P<n>`
/// (path), `C<n>` (cycle) or `S<n>` (star), with `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGraph {
    name: String,
    graph: Graph,
}

impl SmallGraph {
    pub fn parse(name: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("unknown pattern graph `{name}`"));
        let (kind, size) = name.split_at(1.min(name.len()));
        let n: usize = size.parse().map_err(|_| bad())?;
        if n == 0 || n > MAX_PATTERN {
            return Err(Error::InvalidParams(format!("pattern graphs need 1 to {MAX_PATTERN} vertices")));
        }
        let mut edges = Vec::new();
        match kind {
            "K" => {
                for u in 0..n {
                    edges.extend((u + 1..n).map(|v| (u, v)));
                }
            }
            "P" => edges.extend((1..n).map(|v| (v - 1, v))),
            "C" if n >= 3 => edges.extend((0..n).map(|v| (v, (v + 1) % n))),
            "S" => edges.extend((1..n).map(|v| (0, v))),
            _ => return Err(bad()),
        }
        Ok(SmallGraph { name: name.to_string(), graph: Graph::from_edges(n, &edges)? })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

fn pair_bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1 << (j * (j - 1) / 2 + i)
}

fn encode(rows: &[u32], order: &[usize]) -> u64 {
    let mut code = 0;
    for j in 1..order.len() {
        for i in 0..j {
            if rows[order[i]] & (1 << order[j]) != 0 {
                code |= pair_bit(i, j);
            }
        }
    }
    code
}

fn decode(code: u64, n: usize) -> SmallVec<[u32; 16]> {
    let mut rows: SmallVec<[u32; 16]> = std::iter::repeat_n(0, n).collect();
    for j in 1..n {
        for i in 0..j {
            if code & pair_bit(i, j) != 0 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    rows
}

/// Smallest encoding over orders that keep the first `fixed` vertices in
/// place and sort the rest by an isomorphism-invariant key.
fn canonical_code(rows: &[u32], fixed: usize) -> u64 {
    let n = rows.len();
    let fixed_mask = (1u32 << fixed) - 1;
    let key = |v: usize| (rows[v] & fixed_mask, rows[v].count_ones());
    let mut rest: Vec<usize> = (fixed..n).collect();
    rest.sort_by_key(|&v| key(v));
    let groups: Vec<Vec<usize>> =
        rest.into_iter().chunk_by(|&v| key(v)).into_iter().map(|(_, g)| g.collect()).collect();
    let head: Vec<usize> = (0..fixed).collect();
    groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|parts| {
            let order: Vec<usize> = head.iter().copied().chain(parts.into_iter().flatten()).collect();
            encode(rows, &order)
        })
        .min()
        .unwrap_or_else(|| encode(rows, &head))
}

/// One open component: its terminals (rank mask), the number of
/// non-terminal vertices and how many of them are in `X`, and a canonical
/// adjacency code over terminals-then-inner vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackComp {
    terms: u32,
    inner: u8,
    inner_x: u8,
    code: u64,
}

impl PackComp {
    fn size(&self) -> usize {
        self.terms.count_ones() as usize + self.inner as usize
    }
}

/// Expanded component: local vertices carry a terminal rank or `None`.
struct Work {
    ranks: SmallVec<[Option<u8>; 16]>,
    rows: SmallVec<[u32; 16]>,
    inner_x: u8,
}

impl Work {
    fn expand(c: &PackComp) -> Work {
        let ranks = bits(c.terms).map(|r| Some(r as u8)).chain((0..c.inner).map(|_| None)).collect();
        Work { ranks, rows: decode(c.code, c.size()), inner_x: c.inner_x }
    }

    /// Disjoint union glued on equal terminal ranks.
    fn glue(parts: &[&PackComp]) -> Work {
        let mut out = Work { ranks: SmallVec::new(), rows: SmallVec::new(), inner_x: 0 };
        for c in parts {
            let w = Work::expand(c);
            let map: SmallVec<[usize; 16]> = w
                .ranks
                .iter()
                .map(|r| match r.and_then(|r| out.ranks.iter().position(|&x| x == Some(r))) {
                    Some(i) => i,
                    None => {
                        out.ranks.push(*r);
                        out.rows.push(0);
                        out.ranks.len() - 1
                    }
                })
                .collect();
            for (i, &row) in w.rows.iter().enumerate() {
                for j in bits(row) {
                    out.rows[map[i]] |= 1 << map[j];
                }
            }
            out.inner_x += w.inner_x;
        }
        out
    }

    fn local(&self, rank: usize) -> Option<usize> {
        self.ranks.iter().position(|&r| r == Some(rank as u8))
    }

    fn terms(&self) -> u32 {
        self.ranks.iter().flatten().fold(0, |m, &r| m | 1 << r)
    }

    /// Reorders to terminals by rank, then inner vertices, and canonicalizes.
    fn compress(&self) -> PackComp {
        let mut order: Vec<usize> = (0..self.ranks.len()).collect();
        order.sort_by_key(|&i| (self.ranks[i].is_none(), self.ranks[i]));
        let fixed = self.ranks.iter().flatten().count();
        let mut pos = vec![0; order.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut rows = vec![0u32; order.len()];
        for (i, &row) in self.rows.iter().enumerate() {
            for j in bits(row) {
                rows[pos[i]] |= 1 << pos[j];
            }
        }
        PackComp {
            terms: self.terms(),
            inner: (self.ranks.len() - fixed) as u8,
            inner_x: self.inner_x,
            code: canonical_code(&rows, fixed),
        }
    }
}

/// Every component of `G[F]` is isomorphic to a member of the family and
/// holds exactly one vertex of `X`.
#[derive(Clone, Debug)]
pub struct Packing {
    family: Vec<SmallGraph>,
    shapes: HashSet<(usize, u64)>,
    hmax: usize,
}

impl Packing {
    pub fn new(family: Vec<SmallGraph>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidParams("packing needs at least one pattern graph".into()));
        }
        for h in &family {
            if !h.graph.is_connected() {
                return Err(Error::InvalidParams(format!("pattern `{}` is not connected", h.name)));
            }
        }
        let shapes = family.iter().map(|h| Packing::shape(&h.graph, &h.graph.vertices())).collect();
        let hmax = family.iter().map(|h| h.graph.n()).max().unwrap_or(0);
        Ok(Packing { family, shapes, hmax })
    }

    pub fn from_names(names: &[String]) -> Result<Self> {
        Packing::new(names.iter().map(|n| SmallGraph::parse(n)).collect::<Result<_>>()?)
    }

    pub fn family(&self) -> &[SmallGraph] {
        &self.family
    }

    /// Largest treewidth among the pattern graphs.
    pub fn treewidth(&self) -> usize {
        self.family.iter().map(|h| exact_treewidth_small(&h.graph).unwrap_or(MAX_PATTERN)).max().unwrap_or(0)
    }

    fn shape(g: &Graph, s: &VertexSet) -> (usize, u64) {
        let ids = s.to_vec();
        let rows: Vec<u32> = ids.iter().map(|&v| s.rank_mask(g.neighbors(v))).collect();
        (ids.len(), canonical_code(&rows, 0))
    }

    fn closes_well(&self, w: &Work) -> bool {
        w.inner_x == 1 && self.shapes.contains(&(w.ranks.len(), canonical_code(&w.rows, 0)))
    }

    /// Rejects when pieces already linked through terminal edges are too
    /// large or hold two vertices of `X`.
    fn within_limits(&self, s: &[PackComp], members: u32, bnd: &Boundary) -> bool {
        let mut owner = [usize::MAX; 32];
        for (i, c) in s.iter().enumerate() {
            for r in bits(c.terms) {
                owner[r] = i;
            }
        }
        let mut uf = UnionFind::new(s.len());
        for (r, &adj) in bnd.adj.iter().enumerate() {
            for u in bits(adj) {
                uf.union(owner[r], owner[u]);
            }
        }
        let mut size = [0usize; 32];
        let mut xs = [0usize; 32];
        for (i, c) in s.iter().enumerate() {
            let root = uf.find(i);
            size[root] += c.size();
            xs[root] += c.inner_x as usize + (c.terms & members).count_ones() as usize;
            if size[root] > self.hmax || xs[root] > 1 {
                return false;
            }
        }
        true
    }

    fn finish(&self, mut s: PackState, members: u32, bnd: &Boundary) -> Option<PackState> {
        s.sort_unstable();
        self.within_limits(&s, members, bnd).then_some(s)
    }
}

pub type PackState = SmallVec<[PackComp; 4]>;

impl Automaton for Packing {
    type State = PackState;

    fn name(&self) -> String {
        format!("packing:H={}", self.family.iter().map(|h| h.name.as_str()).join("+"))
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<PackState> {
        let s = (0..bnd.len()).map(|r| PackComp { terms: 1 << r, inner: 0, inner_x: 0, code: 0 }).collect();
        self.finish(s, members, bnd)
    }

    fn forget_one(&self, s: &PackState, members: u32, bnd: &Boundary, r: usize) -> Option<PackState> {
        let touched = bnd.adj[r] | 1 << r;
        let (group, rest): (Vec<&PackComp>, Vec<&PackComp>) = s.iter().partition(|c| c.terms & touched != 0);
        let mut w = Work::glue(&group);
        let lr = w.local(r)?;
        for u in bits(bnd.adj[r]) {
            let lu = w.local(u)?;
            w.rows[lr] |= 1 << lu;
            w.rows[lu] |= 1 << lr;
        }
        w.ranks[lr] = None;
        w.inner_x += ((members >> r) & 1) as u8;
        if w.ranks.len() > self.hmax {
            return None;
        }
        let mut out: PackState = rest
            .into_iter()
            .map(|c| PackComp { terms: drop_bit(c.terms, r), ..c.clone() })
            .collect();
        if w.ranks.iter().all(Option::is_none) {
            if !self.closes_well(&w) {
                return None;
            }
        } else {
            let c = w.compress();
            out.push(PackComp { terms: drop_bit(c.terms, r), ..c });
        }
        self.finish(out, drop_bit(members, r), &bnd.without(r))
    }

    fn lift_one(&self, s: &PackState, r: usize) -> Option<PackState> {
        let mut out: PackState =
            s.iter().map(|c| PackComp { terms: insert_bit(c.terms, r, false), ..c.clone() }).collect();
        out.push(PackComp { terms: 1 << r, inner: 0, inner_x: 0, code: 0 });
        out.sort_unstable();
        Some(out)
    }

    fn join(&self, a: &PackState, b: &PackState, members: u32, bnd: &Boundary) -> Option<PackState> {
        let all: Vec<&PackComp> = a.iter().chain(b.iter()).collect();
        let mut uf = UnionFind::new(all.len());
        let mut owner = [usize::MAX; 32];
        for (i, c) in all.iter().enumerate() {
            for r in bits(c.terms) {
                if owner[r] == usize::MAX {
                    owner[r] = i;
                } else {
                    uf.union(owner[r], i);
                }
            }
        }
        let mut out = PackState::new();
        let roots: Vec<usize> = (0..all.len()).map(|i| uf.find(i)).collect();
        let order: Vec<usize> = (0..all.len()).sorted_by_key(|&i| roots[i]).collect();
        for (_, members_of) in &order.into_iter().chunk_by(|&i| roots[i]) {
            let parts: Vec<&PackComp> = members_of.map(|i| all[i]).collect();
            if parts.len() == 1 {
                out.push(parts[0].clone());
                continue;
            }
            let w = Work::glue(&parts);
            if w.ranks.len() > self.hmax {
                return None;
            }
            out.push(w.compress());
        }
        self.finish(out, members, bnd)
    }

    fn accepting_empty(&self, s: &PackState) -> bool {
        s.is_empty()
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x.is_subset(f)
            && g.components_within(f).iter().all(|c| {
                c.len() <= self.hmax && x.intersection_len(c) == 1 && self.shapes.contains(&Packing::shape(g, c))
            })
    }
}
