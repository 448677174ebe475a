//! Terminal graphs, composition operations, and expressions built from
//! tree decompositions.

use std::collections::BTreeSet;

use super::{apply_forget, apply_introduce, apply_join, base_class, Automaton, Boundary, HClass};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::triangulation::maximal_cliques_chordal;
use crate::vset::VertexSet;

/// A graph with an ordered terminal set; terminals are ordered by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalGraph {
    pub vertices: VertexSet,
    pub terminals: VertexSet,
    pub edges: BTreeSet<(usize, usize)>,
}

impl TerminalGraph {
    /// `G[bag]` with every vertex a terminal.
    pub fn base(g: &Graph, bag: &VertexSet) -> Self {
        let edges = bag
            .iter()
            .flat_map(|u| g.neighbors(u).iter().filter(move |&v| v > u && bag.contains(v)).map(move |v| (u, v)))
            .collect();
        TerminalGraph { vertices: bag.clone(), terminals: bag.clone(), edges }
    }

    pub fn is_base(&self) -> bool {
        self.vertices == self.terminals
    }
}

/// A composition operation on terminal graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompositionOp {
    /// Keeps the terminals in `to ⊆ from`.
    Forget { from: VertexSet, to: VertexSet },
    /// Glues a graph with terminals `child ⊆ target` to a base graph on
    /// `target`.
    Introduce { child: VertexSet, target: VertexSet },
    /// Glues two graphs on the same terminal set.
    Join { terminals: VertexSet },
}

impl CompositionOp {
    pub fn arity(&self) -> usize {
        match self {
            CompositionOp::Forget { .. } => 1,
            _ => 2,
        }
    }

    pub fn result_terminals(&self) -> &VertexSet {
        match self {
            CompositionOp::Forget { to, .. } => to,
            CompositionOp::Introduce { target, .. } => target,
            CompositionOp::Join { terminals } => terminals,
        }
    }

    /// Row `j` describes result terminal `j`; entry `i` is the 1-based rank
    /// of the matching terminal of operand `i`, or 0.
    pub fn matrix(&self) -> Vec<Vec<usize>> {
        let rank_in = |set: &VertexSet, v: usize| if set.contains(v) { set.rank_mask(&VertexSet::singleton(v)).trailing_zeros() as usize + 1 } else { 0 };
        match self {
            CompositionOp::Forget { from, to } => to.iter().map(|v| vec![rank_in(from, v)]).collect(),
            CompositionOp::Introduce { child, target } => {
                target.iter().enumerate().map(|(j, v)| vec![rank_in(child, v), j + 1]).collect()
            }
            CompositionOp::Join { terminals } => (1..=terminals.len()).map(|j| vec![j, j]).collect(),
        }
    }

    /// A column may not repeat a non-zero value.
    pub fn validate_matrix(matrix: &[Vec<usize>]) -> Result<()> {
        let cols = matrix.first().map_or(0, Vec::len);
        for c in 0..cols {
            let mut seen = BTreeSet::new();
            for row in matrix {
                let v = *row.get(c).ok_or_else(|| Error::InvalidComposition("ragged matrix".into()))?;
                if v != 0 && !seen.insert(v) {
                    return Err(Error::InvalidComposition(format!("column {c} repeats terminal {v}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Base(TerminalGraph),
    Apply { op: CompositionOp, args: Vec<Expr> },
}

impl Expr {
    pub fn terminals(&self) -> &VertexSet {
        match self {
            Expr::Base(b) => &b.terminals,
            Expr::Apply { op, .. } => op.result_terminals(),
        }
    }

    /// Number of base graphs.
    pub fn leaves(&self) -> usize {
        match self {
            Expr::Base(_) => 1,
            Expr::Apply { args, .. } => args.iter().map(Expr::leaves).sum(),
        }
    }
}

/// Evaluates an expression to the terminal graph it denotes, checking that
/// every operation is valid for its operands.
pub fn evaluate(expr: &Expr) -> Result<TerminalGraph> {
    match expr {
        Expr::Base(b) => {
            if !b.is_base() {
                return Err(Error::InvalidComposition("base graphs must have every vertex a terminal".into()));
            }
            Ok(b.clone())
        }
        Expr::Apply { op, args } => {
            if args.len() != op.arity() {
                return Err(Error::InvalidComposition(format!("expected {} operands", op.arity())));
            }
            CompositionOp::validate_matrix(&op.matrix())?;
            let parts = args.iter().map(evaluate).collect::<Result<Vec<_>>>()?;
            match op {
                CompositionOp::Forget { from, to } => {
                    if &parts[0].terminals != from || !to.is_subset(from) {
                        return Err(Error::InvalidComposition("forget does not match its operand".into()));
                    }
                    Ok(TerminalGraph { terminals: to.clone(), ..parts[0].clone() })
                }
                CompositionOp::Introduce { child, target } => {
                    if &parts[0].terminals != child || &parts[1].terminals != target || !parts[1].is_base() {
                        return Err(Error::InvalidComposition("introduce does not match its operands".into()));
                    }
                    glue(&parts[0], &parts[1], target)
                }
                CompositionOp::Join { terminals } => {
                    if &parts[0].terminals != terminals || &parts[1].terminals != terminals {
                        return Err(Error::InvalidComposition("join operands need the same terminals".into()));
                    }
                    glue(&parts[0], &parts[1], terminals)
                }
            }
        }
    }
}

fn glue(a: &TerminalGraph, b: &TerminalGraph, terminals: &VertexSet) -> Result<TerminalGraph> {
    let shared = &a.vertices & &b.vertices;
    if !shared.is_subset(&(&a.terminals & &b.terminals)) {
        return Err(Error::InvalidComposition("glued graphs share a non-terminal vertex".into()));
    }
    Ok(TerminalGraph {
        vertices: &a.vertices | &b.vertices,
        terminals: terminals.clone(),
        edges: a.edges.union(&b.edges).copied().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the three decomposition conditions for the vertices `vertices`
    /// of `g` and that the bags form a tree.
    pub fn validate(&self, g: &Graph, vertices: &VertexSet) -> Result<()> {
        let k = self.bags.len();
        if k == 0 {
            return if vertices.is_empty() {
                Ok(())
            } else {
                Err(Error::InvalidDecomposition("no bags".into()))
            };
        }
        if self.edges.len() + 1 != k {
            return Err(Error::InvalidDecomposition("bags do not form a tree".into()));
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.edges {
            if a >= k || b >= k || a == b {
                return Err(Error::InvalidDecomposition(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if reach(&adj, 0, |_| true).len() != k {
            return Err(Error::InvalidDecomposition("bags do not form a tree".into()));
        }
        let mut covered = VertexSet::new();
        for bag in &self.bags {
            if !bag.is_subset(vertices) {
                return Err(Error::InvalidDecomposition(format!("bag {bag:?} leaves the vertex set")));
            }
            covered.union_with(bag);
        }
        if &covered != vertices {
            return Err(Error::InvalidDecomposition(format!(
                "vertices {:?} are in no bag",
                (vertices - &covered).to_vec()
            )));
        }
        for u in vertices {
            for v in g.neighbors(u).iter().filter(|&v| v > u && vertices.contains(v)) {
                if !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                    return Err(Error::InvalidDecomposition(format!("edge ({u}, {v}) is in no bag")));
                }
            }
            let holding: Vec<usize> = (0..k).filter(|&i| self.bags[i].contains(u)).collect();
            if reach(&adj, holding[0], |i| self.bags[i].contains(u)).len() != holding.len() {
                return Err(Error::InvalidDecomposition(format!("bags holding {u} are not connected")));
            }
        }
        Ok(())
    }

    /// Clique tree of a chordal graph: maximal cliques joined by a maximum
    /// weight spanning tree on intersection sizes.
    pub fn from_chordal(h: &Graph) -> Result<Self> {
        let bags = maximal_cliques_chordal(h)?;
        let k = bags.len();
        let mut in_tree = vec![false; k];
        let mut edges = Vec::new();
        if k > 0 {
            in_tree[0] = true;
        }
        for _ in 1..k {
            let (mut best, mut pick) = (None, (0, 0));
            for a in (0..k).filter(|&a| in_tree[a]) {
                for b in (0..k).filter(|&b| !in_tree[b]) {
                    let w = bags[a].intersection_len(&bags[b]);
                    if best.is_none_or(|bw| w > bw) {
                        best = Some(w);
                        pick = (a, b);
                    }
                }
            }
            in_tree[pick.1] = true;
            edges.push(pick);
        }
        Ok(TreeDecomposition { bags, edges })
    }

    /// Relabels bag contents through `map` (new id -> old id).
    pub fn relabel(&self, map: &[usize]) -> Self {
        TreeDecomposition {
            bags: self.bags.iter().map(|b| b.iter().map(|v| map[v]).collect()).collect(),
            edges: self.edges.clone(),
        }
    }
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(a) = stack.pop() {
        out.push(a);
        for &b in &adj[a] {
            if !seen[b] && allowed(b) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    out
}

/// Expression for `G[⋃ bags]` whose terminal set is the bag `root`.
///
/// Each bag becomes a base graph; each child subtree is forgotten down to
/// its intersection with the parent bag, introduced into the parent, and
/// the children are joined.
pub fn expression_from_tree_decomposition(g: &Graph, td: &TreeDecomposition, root: usize) -> Result<Expr> {
    let vertices = td.bags.iter().fold(VertexSet::new(), |acc, b| &acc | b);
    td.validate(g, &vertices)?;
    if root >= td.bags.len() {
        return Err(Error::InvalidDecomposition(format!("root bag {root} does not exist")));
    }
    let mut adj = vec![Vec::new(); td.bags.len()];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    Ok(build(g, td, &adj, root, usize::MAX))
}

fn build(g: &Graph, td: &TreeDecomposition, adj: &[Vec<usize>], node: usize, parent: usize) -> Expr {
    let bag = &td.bags[node];
    let mut acc: Option<Expr> = None;
    for &child in adj[node].iter().filter(|&&c| c != parent) {
        let sub = build(g, td, adj, child, node);
        let from = td.bags[child].clone();
        let to = &from & bag;
        let forgotten = Expr::Apply { op: CompositionOp::Forget { from, to: to.clone() }, args: vec![sub] };
        let introduced = Expr::Apply {
            op: CompositionOp::Introduce { child: to, target: bag.clone() },
            args: vec![forgotten, Expr::Base(TerminalGraph::base(g, bag))],
        };
        acc = Some(match acc {
            None => introduced,
            Some(prev) => Expr::Apply { op: CompositionOp::Join { terminals: bag.clone() }, args: vec![prev, introduced] },
        });
    }
    acc.unwrap_or_else(|| Expr::Base(TerminalGraph::base(g, bag)))
}

/// Folds the automaton over the expression with solution set `X`.
pub fn run_expression<A: Automaton>(a: &A, g: &Graph, expr: &Expr, x: &VertexSet) -> Result<HClass<A::State>> {
    let marked = a.marked();
    match expr {
        Expr::Base(b) => {
            let bnd = Boundary::new(g, &b.terminals, marked);
            Ok(base_class(a, &bnd, b.terminals.rank_mask(x)))
        }
        Expr::Apply { op, args } => match op {
            CompositionOp::Forget { from, to } => {
                let c = run_expression(a, g, &args[0], x)?;
                Ok(apply_forget(a, &c, &Boundary::new(g, from, marked), from.rank_mask(to)))
            }
            CompositionOp::Introduce { child, target } => {
                let c = run_expression(a, g, &args[0], x)?;
                let b = run_expression(a, g, &args[1], x)?;
                apply_introduce(a, &c, target.rank_mask(child), &b, &Boundary::new(g, target, marked))
            }
            CompositionOp::Join { terminals } => {
                let c1 = run_expression(a, g, &args[0], x)?;
                let c2 = run_expression(a, g, &args[1], x)?;
                apply_join(a, &c1, &c2, &Boundary::new(g, terminals, marked))
            }
        },
    }
}
