//! Regular properties as finite-state machines over terminal-graph
//! compositions.
//!
//! A class summarizes a pair `(G', X)` relative to an ordered terminal set
//! `W ⊆ V(G')`, where every terminal belongs to the solution `F`. States
//! never record edges between two terminals: those edges are determined by
//! the host graph and are committed when one endpoint is forgotten. A
//! [`Boundary`] carries the host adjacency among the current terminals.
//!
//! Terminal-membership (`X ∩ W` as a rank mask) is part of every class and
//! handled by the generic helpers here; automata only see it as input.

mod basic;
mod connectivity;
mod expression;
mod packing;
pub(crate) mod partition;

use std::fmt;
use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use smallvec::SmallVec;

pub use basic::{Colorable, Forest, IndependentSet, MaxDegree, TrueProperty};
pub use connectivity::{Connectivity, Tree};
pub use expression::{
    evaluate, expression_from_tree_decomposition, run_expression, CompositionOp, Expr, TerminalGraph,
    TreeDecomposition,
};
pub use packing::{Packing, SmallGraph};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;
use partition::{bits, drop_bit, spread};

/// Most terminals any class may have.
pub const MAX_TERMINALS: usize = 31;

/// Host adjacency among the ordered terminal set `W`, by rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Boundary {
    pub adj: SmallVec<[u32; 8]>,
    /// Ranks of terminals in the automaton's marked set, if it has one.
    pub marked: u32,
}

impl Boundary {
    pub fn new(g: &Graph, w: &VertexSet, marked: Option<&VertexSet>) -> Self {
        let adj = w.iter().map(|v| w.rank_mask(g.neighbors(v))).collect();
        let marked = marked.map_or(0, |m| w.rank_mask(m));
        Boundary { adj, marked }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.len()) - 1) as u32
    }

    pub fn without(&self, r: usize) -> Boundary {
        let adj = self.adj.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &m)| drop_bit(m, r)).collect();
        Boundary { adj, marked: drop_bit(self.marked, r) }
    }

    /// Restriction to the ranks set in `keep`.
    pub fn restrict(&self, keep: u32) -> Boundary {
        let mut out = self.clone();
        for r in (0..self.len()).rev() {
            if keep & (1 << r) == 0 {
                out = out.without(r);
            }
        }
        out
    }
}

/// A regular vertex-subset property.
///
/// Update functions return `None` for the absorbing reject class.
pub trait Automaton: Send + Sync {
    type State: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> String;

    /// Whether the property forces `X = F`.
    fn requires_x_equals_f(&self) -> bool {
        false
    }

    /// Vertices whose membership the automaton tracks.
    fn marked(&self) -> Option<&VertexSet> {
        None
    }

    /// Whether a pair is accepted iff its restriction to every connected
    /// component of `G[F]` is.
    fn decomposable(&self) -> bool {
        true
    }

    /// Class of the base graph `G[W]` with `X ∩ W` given by `members`.
    fn base(&self, bnd: &Boundary, members: u32) -> Option<Self::State>;

    /// Turns terminal `r` into an ordinary vertex. `bnd` still includes `r`.
    fn forget_one(&self, s: &Self::State, members: u32, bnd: &Boundary, r: usize) -> Option<Self::State>;

    /// Adds a fresh isolated terminal at rank `r`.
    fn lift_one(&self, s: &Self::State, r: usize) -> Option<Self::State>;

    /// Glues two pairs along the same terminal set.
    fn join(&self, a: &Self::State, b: &Self::State, members: u32, bnd: &Boundary) -> Option<Self::State>;

    /// Acceptance for a class with no terminals.
    fn accepting_empty(&self, s: &Self::State) -> bool;

    /// Direct evaluation of the property on `(G[F], X)`.
    fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool;
}

/// A homomorphism class: reject, or a state with its terminal membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HClass<S> {
    Reject,
    Live { members: u32, state: S },
}

impl<S> HClass<S> {
    fn from_option(members: u32, state: Option<S>) -> Self {
        match state {
            Some(state) => HClass::Live { members, state },
            None => HClass::Reject,
        }
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, HClass::Reject)
    }

    /// `X ∩ W`, as a subset of the ordered terminal set `w`.
    pub fn term(&self, w: &VertexSet) -> Option<VertexSet> {
        match self {
            HClass::Reject => None,
            HClass::Live { members, .. } => Some(w.select_ranks(*members)),
        }
    }
}

pub fn base_class<A: Automaton>(a: &A, bnd: &Boundary, members: u32) -> HClass<A::State> {
    HClass::from_option(members, a.base(bnd, members))
}

/// Forgets every rank of `bnd` not set in `keep`.
pub fn apply_forget<A: Automaton>(a: &A, c: &HClass<A::State>, bnd: &Boundary, keep: u32) -> HClass<A::State> {
    let HClass::Live { members, state } = c else {
        return HClass::Reject;
    };
    let (mut members, mut state, mut bnd) = (*members, state.clone(), bnd.clone());
    for r in (0..bnd.len()).rev() {
        if keep & (1 << r) != 0 {
            continue;
        }
        match a.forget_one(&state, members, &bnd, r) {
            Some(s) => state = s,
            None => return HClass::Reject,
        }
        members = drop_bit(members, r);
        bnd = bnd.without(r);
    }
    HClass::Live { members, state }
}

/// Lifts `child` (terminals at the ranks `embed` of `W`) to `W` and glues it
/// with the base class over `W`.
pub fn apply_introduce<A: Automaton>(
    a: &A,
    child: &HClass<A::State>,
    embed: u32,
    base: &HClass<A::State>,
    bnd: &Boundary,
) -> Result<HClass<A::State>> {
    let (HClass::Live { members: cm, state: cs }, HClass::Live { members: bm, state: bs }) = (child, base) else {
        return Ok(HClass::Reject);
    };
    if spread(*cm, embed) != bm & embed {
        return Err(Error::InvalidComposition("terminal membership differs on shared terminals".into()));
    }
    Ok(HClass::from_option(*bm, introduce_state(a, cs, embed, bs, *bm, bnd)))
}

pub(crate) fn introduce_state<A: Automaton>(
    a: &A,
    child: &A::State,
    embed: u32,
    base: &A::State,
    members: u32,
    bnd: &Boundary,
) -> Option<A::State> {
    let mut state = child.clone();
    for r in bits(bnd.full_mask() & !embed) {
        state = a.lift_one(&state, r)?;
    }
    a.join(&state, base, members, bnd)
}

pub fn apply_join<A: Automaton>(
    a: &A,
    c1: &HClass<A::State>,
    c2: &HClass<A::State>,
    bnd: &Boundary,
) -> Result<HClass<A::State>> {
    let (HClass::Live { members: m1, state: s1 }, HClass::Live { members: m2, state: s2 }) = (c1, c2) else {
        return Ok(HClass::Reject);
    };
    if m1 != m2 {
        return Err(Error::InvalidComposition("terminal membership differs between join operands".into()));
    }
    Ok(HClass::from_option(*m1, a.join(s1, s2, *m1, bnd)))
}

/// Whether every pair in the class satisfies the property.
pub fn is_accepting<A: Automaton>(a: &A, c: &HClass<A::State>, bnd: &Boundary) -> bool {
    match apply_forget(a, c, bnd, 0) {
        HClass::Live { state, .. } => a.accepting_empty(&state),
        HClass::Reject => false,
    }
}

/// Property names as used by the command line and the problem catalog.
///
/// Terminal lists are 1-based: `connected:T=1,4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertySpec {
    True,
    IndependentSet,
    Forest,
    Colorable { q: usize },
    MaxDegree { d: usize },
    Packing { family: Vec<String> },
    Connected { terminals: VertexSet },
    Tree { terminals: VertexSet },
}

impl fmt::Display for PropertySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertySpec::True => write!(f, "true"),
            PropertySpec::IndependentSet => write!(f, "independent-set"),
            PropertySpec::Forest => write!(f, "forest"),
            PropertySpec::Colorable { q } => write!(f, "colorable:q={q}"),
            PropertySpec::MaxDegree { d } => write!(f, "max-degree:d={d}"),
            PropertySpec::Packing { family } => write!(f, "packing:H={}", family.join("+")),
            PropertySpec::Connected { terminals } => write!(f, "connected:T={}", one_based_list(terminals)),
            PropertySpec::Tree { terminals } => write!(f, "tree:T={}", one_based_list(terminals)),
        }
    }
}

impl PropertySpec {
    /// The same property on an induced subgraph, given the vertex map into
    /// it (`usize::MAX` for dropped vertices). Dropped terminals vanish.
    pub fn restricted(&self, old_to_new: &[usize]) -> PropertySpec {
        let map = |s: &VertexSet| s.iter().map(|v| old_to_new[v]).filter(|&v| v != usize::MAX).collect();
        match self {
            PropertySpec::Connected { terminals } => PropertySpec::Connected { terminals: map(terminals) },
            PropertySpec::Tree { terminals } => PropertySpec::Tree { terminals: map(terminals) },
            other => other.clone(),
        }
    }
}

fn one_based_list(s: &VertexSet) -> String {
    s.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Parses a 1-based, comma-separated vertex list.
pub fn parse_one_based_list(text: &str) -> Result<VertexSet> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::InvalidParams(format!("`{s}` is not a 1-based vertex id"))),
        })
        .collect()
}

impl FromStr for PropertySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        // values may contain commas (vertex lists), so a piece without `=`
        // continues the previous value
        let mut params: Vec<(String, String)> = Vec::new();
        for piece in rest.split(',').filter(|p| !p.is_empty()) {
            match piece.split_once('=') {
                Some((k, v)) => params.push((k.trim().to_string(), v.trim().to_string())),
                None => match params.last_mut() {
                    Some((_, v)) => {
                        v.push(',');
                        v.push_str(piece.trim());
                    }
                    None => return Err(Error::InvalidParams(format!("expected key=value in `{s}`"))),
                },
            }
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let need = |key: &str| get(key).ok_or_else(|| Error::InvalidParams(format!("`{kind}` needs `{key}=`")));
        let int = |key: &str| -> Result<usize> {
            need(key)?.parse().map_err(|_| Error::InvalidParams(format!("`{key}` must be a non-negative integer")))
        };
        Ok(match kind {
            "true" => PropertySpec::True,
            "independent-set" => PropertySpec::IndependentSet,
            "forest" => PropertySpec::Forest,
            "colorable" => PropertySpec::Colorable { q: int("q")? },
            "max-degree" => PropertySpec::MaxDegree { d: int("d")? },
            "packing" => PropertySpec::Packing {
                family: need("H")?.split('+').map(|h| h.trim().to_string()).collect(),
            },
            "connected" => PropertySpec::Connected { terminals: parse_one_based_list(get("T").unwrap_or(""))? },
            "tree" => PropertySpec::Tree { terminals: parse_one_based_list(get("T").unwrap_or(""))? },
            other => return Err(Error::UnsupportedProperty(other.to_string())),
        })
    }
}

/// One of the built-in automata.
#[derive(Clone, Debug)]
pub enum AnyAutomaton {
    True(TrueProperty),
    IndependentSet(IndependentSet),
    Forest(Forest),
    Colorable(Colorable),
    MaxDegree(MaxDegree),
    Packing(Packing),
    Connected(Connectivity),
    Tree(Tree),
}

pub fn make_automaton(spec: &PropertySpec) -> Result<AnyAutomaton> {
    Ok(match spec {
        PropertySpec::True => AnyAutomaton::True(TrueProperty),
        PropertySpec::IndependentSet => AnyAutomaton::IndependentSet(IndependentSet),
        PropertySpec::Forest => AnyAutomaton::Forest(Forest),
        PropertySpec::Colorable { q } => AnyAutomaton::Colorable(Colorable::new(*q)?),
        PropertySpec::MaxDegree { d } => AnyAutomaton::MaxDegree(MaxDegree::new(*d)),
        PropertySpec::Packing { family } => AnyAutomaton::Packing(Packing::from_names(family)?),
        PropertySpec::Connected { terminals } => AnyAutomaton::Connected(Connectivity::new(terminals.clone())),
        PropertySpec::Tree { terminals } => AnyAutomaton::Tree(Tree::new(terminals.clone())),
    })
}

/// Runs `$body` with `$a` bound to the concrete automaton inside `$any`.
#[macro_export]
macro_rules! with_automaton {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            $crate::automata::AnyAutomaton::True($a) => $body,
            $crate::automata::AnyAutomaton::IndependentSet($a) => $body,
            $crate::automata::AnyAutomaton::Forest($a) => $body,
            $crate::automata::AnyAutomaton::Colorable($a) => $body,
            $crate::automata::AnyAutomaton::MaxDegree($a) => $body,
            $crate::automata::AnyAutomaton::Packing($a) => $body,
            $crate::automata::AnyAutomaton::Connected($a) => $body,
            $crate::automata::AnyAutomaton::Tree($a) => $body,
        }
    };
}

impl AnyAutomaton {
    pub fn name(&self) -> String {
        with_automaton!(self, a => a.name())
    }

    pub fn decomposable(&self) -> bool {
        with_automaton!(self, a => a.decomposable())
    }

    pub fn requires_x_equals_f(&self) -> bool {
        with_automaton!(self, a => a.requires_x_equals_f())
    }

    pub fn marked(&self) -> Option<&VertexSet> {
        with_automaton!(self, a => a.marked())
    }

    pub fn semantic_eval(&self, g: &Graph, f: &VertexSet, x: &VertexSet) -> bool {
        with_automaton!(self, a => a.semantic_eval(g, f, x))
    }

    /// Whether `run_expression` on `expr` with `X = x` reaches an accepting
    /// class.
    pub fn accepts_expression(&self, g: &Graph, expr: &Expr, x: &VertexSet) -> Result<bool> {
        with_automaton!(self, a => {
            let class = run_expression(a, g, expr, x)?;
            let bnd = Boundary::new(g, expr.terminals(), a.marked());
            Ok(is_accepting(a, &class, &bnd))
        })
    }
}
