use smallvec::SmallVec;

use super::partition::{bits, block_count, normalize, singletons, with_inserted, without, Labels, UnionFind};
use super::{Automaton, Boundary};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

fn all_members(bnd: &Boundary, members: u32) -> bool {
    members == bnd.full_mask()
}

/// Every pair `(G, X)` satisfies it; only the treewidth bound matters.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrueProperty;

impl Automaton for TrueProperty {
    type State = ();

    fn name(&self) -> String {
        "true".into()
    }

    fn base(&self, _: &Boundary, _: u32) -> Option<()> {
        Some(())
    }

    fn forget_one(&self, _: &(), _: u32, _: &Boundary, _: usize) -> Option<()> {
        Some(())
    }

    fn lift_one(&self, _: &(), _: usize) -> Option<()> {
        Some(())
    }

    fn join(&self, _: &(), _: &(), _: u32, _: &Boundary) -> Option<()> {
        Some(())
    }

    fn accepting_empty(&self, _: &()) -> bool {
        true
    }

    fn semantic_eval(&self, _: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x.is_subset(f)
    }
}

/// `X` is independent.
#[derive(Clone, Copy, Debug, Default)]
pub struct IndependentSet;

impl Automaton for IndependentSet {
    type State = ();

    fn name(&self) -> String {
        "independent-set".into()
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<()> {
        bits(members).all(|r| bnd.adj[r] & members == 0).then_some(())
    }

    // every terminal pair is covered by some base graph
    fn forget_one(&self, _: &(), _: u32, _: &Boundary, _: usize) -> Option<()> {
        Some(())
    }

    fn lift_one(&self, _: &(), _: usize) -> Option<()> {
        Some(())
    }

    fn join(&self, _: &(), _: &(), _: u32, _: &Boundary) -> Option<()> {
        Some(())
    }

    fn accepting_empty(&self, _: &()) -> bool {
        true
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x.is_subset(f) && g.edges_within(x) == 0
    }
}

/// `G[F]` is acyclic and `X = F`. The state is the partition of the
/// terminals into connected pieces.
#[derive(Clone, Copy, Debug, Default)]
pub struct Forest;

impl Forest {
    pub(crate) fn merge(a: &Labels, b: &Labels) -> Option<Labels> {
        let mut uf = UnionFind::from_labels(a);
        let mut last = [usize::MAX; 64];
        for (r, &l) in b.iter().enumerate() {
            let prev = std::mem::replace(&mut last[l as usize], r);
            if prev != usize::MAX && !uf.union(prev, r) {
                return None;
            }
        }
        Some(uf.labels(a.len()))
    }
}

impl Automaton for Forest {
    type State = Labels;

    fn name(&self) -> String {
        "forest".into()
    }

    fn requires_x_equals_f(&self) -> bool {
        true
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<Labels> {
        all_members(bnd, members).then(|| singletons(bnd.len()))
    }

    fn forget_one(&self, s: &Labels, _: u32, bnd: &Boundary, r: usize) -> Option<Labels> {
        let mut uf = UnionFind::from_labels(s);
        for u in bits(bnd.adj[r]) {
            if !uf.union(r, u) {
                return None;
            }
        }
        Some(without(&uf.labels(s.len()), r))
    }

    fn lift_one(&self, s: &Labels, r: usize) -> Option<Labels> {
        let mut out = s.clone();
        out.insert(r, block_count(s) as u8);
        normalize(&mut out);
        Some(out)
    }

    fn join(&self, a: &Labels, b: &Labels, _: u32, _: &Boundary) -> Option<Labels> {
        Forest::merge(a, b)
    }

    fn accepting_empty(&self, _: &Labels) -> bool {
        true
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x == f && g.edges_within(f) + g.components_within(f).len() == f.len()
    }
}

/// `G[F]` is `q`-colorable and `X = F`. The state is the set of terminal
/// partitions into at most `q` color classes that extend to a proper
/// coloring; the empty set is the reject class.
#[derive(Clone, Copy, Debug)]
pub struct Colorable {
    q: usize,
}

const COLOR_BITS: usize = 4;
const MAX_COLORED_TERMINALS: usize = 16;

impl Colorable {
    pub fn new(q: usize) -> Result<Self> {
        if q == 0 || q > 1 << COLOR_BITS {
            return Err(Error::InvalidParams(format!("colorable needs 1 <= q <= {}", 1 << COLOR_BITS)));
        }
        Ok(Colorable { q })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    fn encode(labels: &[u8]) -> u64 {
        labels.iter().enumerate().fold(0, |acc, (i, &l)| acc | (l as u64) << (COLOR_BITS * i))
    }

    fn decode(code: u64, n: usize) -> Labels {
        (0..n).map(|i| ((code >> (COLOR_BITS * i)) & 0xf) as u8).collect()
    }

    fn partitions(&self, n: usize) -> Vec<u64> {
        fn extend(q: usize, n: usize, cur: &mut Labels, out: &mut Vec<u64>) {
            if cur.len() == n {
                out.push(Colorable::encode(cur));
                return;
            }
            let blocks = block_count(cur);
            for l in 0..(blocks + 1).min(q) {
                cur.push(l as u8);
                extend(q, n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        extend(self.q, n, &mut Labels::new(), &mut out);
        out.sort_unstable();
        out
    }

    fn finish(n: usize, mut v: Vec<u64>) -> Option<Colorings> {
        v.sort_unstable();
        v.dedup();
        (!v.is_empty()).then(|| Colorings { n: n as u8, codes: v.into_iter().collect() })
    }

    fn colorable(g: &Graph, f: &VertexSet, q: usize) -> bool {
        fn go(g: &Graph, order: &[usize], color: &mut [usize], i: usize, q: usize, used: usize) -> bool {
            if i == order.len() {
                return true;
            }
            let v = order[i];
            // colors are symmetric: only try one fresh color
            for c in 0..(used + 1).min(q) {
                if order[..i].iter().all(|&u| color[u] != c || !g.has_edge(u, v)) {
                    color[v] = c;
                    if go(g, order, color, i + 1, q, used.max(c + 1)) {
                        return true;
                    }
                }
            }
            false
        }
        let order = f.to_vec();
        let mut color = vec![usize::MAX; g.n()];
        go(g, &order, &mut color, 0, q, 0)
    }
}

/// Terminal colorings (as partitions) over `n` ranks, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colorings {
    n: u8,
    codes: SmallVec<[u64; 4]>,
}

impl Automaton for Colorable {
    type State = Colorings;

    fn name(&self) -> String {
        format!("colorable:q={}", self.q)
    }

    fn requires_x_equals_f(&self) -> bool {
        true
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<Colorings> {
        if !all_members(bnd, members) || bnd.len() > MAX_COLORED_TERMINALS {
            return None;
        }
        // terminal edges are not committed yet, so every partition is open
        Colorable::finish(bnd.len(), self.partitions(bnd.len()))
    }

    fn forget_one(&self, s: &Colorings, _: u32, bnd: &Boundary, r: usize) -> Option<Colorings> {
        let n = s.n as usize;
        let kept = s
            .codes
            .iter()
            .map(|&code| Colorable::decode(code, n))
            .filter(|labels| bits(bnd.adj[r]).all(|u| labels[u] != labels[r]))
            .map(|labels| Colorable::encode(&without(&labels, r)))
            .collect();
        Colorable::finish(n - 1, kept)
    }

    fn lift_one(&self, s: &Colorings, r: usize) -> Option<Colorings> {
        let n = s.n as usize;
        if n + 1 > MAX_COLORED_TERMINALS {
            return None;
        }
        let mut out = Vec::new();
        for &code in &s.codes {
            let labels = Colorable::decode(code, n);
            for l in 0..(block_count(&labels) + 1).min(self.q) {
                out.push(Colorable::encode(&with_inserted(&labels, r, l as u8)));
            }
        }
        Colorable::finish(n + 1, out)
    }

    fn join(&self, a: &Colorings, b: &Colorings, _: u32, _: &Boundary) -> Option<Colorings> {
        let both: Vec<u64> = a.codes.iter().filter(|c| b.codes.binary_search(c).is_ok()).copied().collect();
        Colorable::finish(a.n as usize, both)
    }

    fn accepting_empty(&self, s: &Colorings) -> bool {
        !s.codes.is_empty()
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x == f && Colorable::colorable(g, f, self.q)
    }
}

/// `G[F]` has maximum degree at most `d` and `X = F`. The state counts, per
/// terminal, its committed (non-terminal) neighbors.
#[derive(Clone, Copy, Debug)]
pub struct MaxDegree {
    d: usize,
}

impl MaxDegree {
    pub fn new(d: usize) -> Self {
        MaxDegree { d }
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

impl Automaton for MaxDegree {
    type State = Labels;

    fn name(&self) -> String {
        format!("max-degree:d={}", self.d)
    }

    fn requires_x_equals_f(&self) -> bool {
        true
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<Labels> {
        (all_members(bnd, members) && bnd.adj.iter().all(|m| m.count_ones() as usize <= self.d))
            .then(|| std::iter::repeat_n(0, bnd.len()).collect())
    }

    fn forget_one(&self, s: &Labels, _: u32, bnd: &Boundary, r: usize) -> Option<Labels> {
        let mut out = s.clone();
        for u in bits(bnd.adj[r]) {
            out[u] += 1;
        }
        out.remove(r);
        Some(out)
    }

    fn lift_one(&self, s: &Labels, r: usize) -> Option<Labels> {
        let mut out = s.clone();
        out.insert(r, 0);
        Some(out)
    }

    fn join(&self, a: &Labels, b: &Labels, _: u32, bnd: &Boundary) -> Option<Labels> {
        let mut out = Labels::new();
        for ((&x, &y), m) in a.iter().zip(b).zip(&bnd.adj) {
            let total = x as usize + y as usize;
            if total + m.count_ones() as usize > self.d {
                return None;
            }
            out.push(total as u8);
        }
        Some(out)
    }

    fn accepting_empty(&self, _: &Labels) -> bool {
        true
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x == f && f.iter().all(|v| g.neighbors(v).intersection_len(f) <= self.d)
    }
}
