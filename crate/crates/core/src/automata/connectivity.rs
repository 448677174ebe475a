use super::basic::Forest;
use super::partition::{bits, block_count, normalize, singletons, without, Labels, UnionFind};
use super::{Automaton, Boundary};
use crate::graph::Graph;
use crate::vset::VertexSet;

/// `G[F]` is connected (the empty graph counts), `T ⊆ F`, and `X = F`.
#[derive(Clone, Debug)]
pub struct Connectivity {
    terminals: VertexSet,
}

/// Terminal partition into connected pieces, whether a component without
/// terminals has been closed off, and how many marked vertices have been
/// forgotten.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnState {
    part: Labels,
    closed: bool,
    seen: u8,
}

impl Connectivity {
    pub fn new(terminals: VertexSet) -> Self {
        Connectivity { terminals }
    }

    pub fn terminals(&self) -> &VertexSet {
        &self.terminals
    }
}

impl Automaton for Connectivity {
    type State = ConnState;

    fn name(&self) -> String {
        let ids: Vec<String> = self.terminals.iter().map(|v| (v + 1).to_string()).collect();
        format!("connected:T={}", ids.join(","))
    }

    fn requires_x_equals_f(&self) -> bool {
        true
    }

    fn marked(&self) -> Option<&VertexSet> {
        Some(&self.terminals)
    }

    fn decomposable(&self) -> bool {
        false
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<ConnState> {
        (members == bnd.full_mask()).then(|| ConnState { part: singletons(bnd.len()), closed: false, seen: 0 })
    }

    fn forget_one(&self, s: &ConnState, _: u32, bnd: &Boundary, r: usize) -> Option<ConnState> {
        let n = s.part.len();
        let mut uf = UnionFind::from_labels(&s.part);
        for u in bits(bnd.adj[r]) {
            uf.union(r, u);
        }
        let labels = uf.labels(n);
        let alone = labels.iter().enumerate().all(|(u, &l)| u == r || l != labels[r]);
        let mut closed = s.closed;
        if alone {
            // the piece of r can never reach another vertex again
            if n > 1 || closed {
                return None;
            }
            closed = true;
        }
        let seen = s.seen + ((bnd.marked >> r) & 1) as u8;
        Some(ConnState { part: without(&labels, r), closed, seen })
    }

    fn lift_one(&self, s: &ConnState, r: usize) -> Option<ConnState> {
        if s.closed {
            return None;
        }
        let mut part = s.part.clone();
        part.insert(r, block_count(&s.part) as u8);
        normalize(&mut part);
        Some(ConnState { part, closed: false, seen: s.seen })
    }

    fn join(&self, a: &ConnState, b: &ConnState, _: u32, _: &Boundary) -> Option<ConnState> {
        if a.closed && b.closed {
            return None;
        }
        let mut uf = UnionFind::from_labels(&a.part);
        let mut last = [usize::MAX; 64];
        for (r, &l) in b.part.iter().enumerate() {
            let prev = std::mem::replace(&mut last[l as usize], r);
            if prev != usize::MAX {
                uf.union(prev, r);
            }
        }
        Some(ConnState { part: uf.labels(a.part.len()), closed: a.closed || b.closed, seen: a.seen + b.seen })
    }

    fn accepting_empty(&self, s: &ConnState) -> bool {
        s.seen as usize == self.terminals.len()
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        x == f && self.terminals.is_subset(f) && g.components_within(f).len() <= 1
    }
}

/// `G[F]` is a tree (or empty) containing `T`, and `X = F`.
#[derive(Clone, Debug)]
pub struct Tree {
    conn: Connectivity,
}

impl Tree {
    pub fn new(terminals: VertexSet) -> Self {
        Tree { conn: Connectivity::new(terminals) }
    }

    pub fn terminals(&self) -> &VertexSet {
        self.conn.terminals()
    }
}

impl Automaton for Tree {
    type State = (ConnState, Labels);

    fn name(&self) -> String {
        let ids: Vec<String> = self.terminals().iter().map(|v| (v + 1).to_string()).collect();
        format!("tree:T={}", ids.join(","))
    }

    fn requires_x_equals_f(&self) -> bool {
        true
    }

    fn marked(&self) -> Option<&VertexSet> {
        self.conn.marked()
    }

    fn decomposable(&self) -> bool {
        false
    }

    fn base(&self, bnd: &Boundary, members: u32) -> Option<Self::State> {
        Some((self.conn.base(bnd, members)?, Forest.base(bnd, members)?))
    }

    fn forget_one(&self, s: &Self::State, members: u32, bnd: &Boundary, r: usize) -> Option<Self::State> {
        Some((self.conn.forget_one(&s.0, members, bnd, r)?, Forest.forget_one(&s.1, members, bnd, r)?))
    }

    fn lift_one(&self, s: &Self::State, r: usize) -> Option<Self::State> {
        Some((self.conn.lift_one(&s.0, r)?, Forest.lift_one(&s.1, r)?))
    }

    fn join(&self, a: &Self::State, b: &Self::State, members: u32, bnd: &Boundary) -> Option<Self::State> {
        Some((self.conn.join(&a.0, &b.0, members, bnd)?, Forest.join(&a.1, &b.1, members, bnd)?))
    }

    fn accepting_empty(&self, s: &Self::State) -> bool {
        self.conn.accepting_empty(&s.0)
    }

    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        self.conn.semantic_eval(g, f, x) && Forest.semantic_eval(g, f, x)
    }
}
