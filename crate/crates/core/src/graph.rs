//! Simple undirected graphs over dense vertex ids `0..n`, plus the text
//! formats used at the boundary (PACE `.gr` and plain edge lists, both
//! 1-indexed).

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    PaceGr,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pace-gr" | "pace" | "gr" => Ok(GraphFormat::PaceGr),
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            other => Err(Error::InvalidParams(format!("unknown graph format `{other}`"))),
        }
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![VertexSet::new(); n], m: 0 }
    }

    /// Builds a graph from 0-indexed edges; duplicates collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`. Returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        if fresh {
            self.m += 1;
        }
        Ok(fresh)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn check_subset(&self, s: &VertexSet) -> Result<()> {
        match s.last() {
            Some(v) if v >= self.n() => Err(Error::VertexOutOfRange { vertex: v, n: self.n() }),
            _ => Ok(()),
        }
    }

    /// `N(S)`: vertices outside `S` adjacent to some member of `S`.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_subset(s)?;
        Ok(self.open_neighborhood(s))
    }

    pub(crate) fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(s);
        out
    }

    /// Connected components of `G - excluded`, ordered by smallest member.
    pub fn connected_components(&self, excluded: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_subset(excluded)?;
        Ok(self.components_within(&(&self.vertices() - excluded)))
    }

    /// Connected components of `G[active]`, ordered by smallest member.
    pub(crate) fn components_within(&self, active: &VertexSet) -> Vec<VertexSet> {
        let mut rest = active.clone();
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let comp = self.component_of(start, &rest);
            rest.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Component of `start` in `G[active]`; `start` must be in `active`.
    pub(crate) fn component_of(&self, start: usize, active: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp.clone();
        while !frontier.is_empty() {
            let mut next = VertexSet::new();
            for v in &frontier {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(active);
            next.difference_with(&comp);
            comp.union_with(&next);
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0, &self.vertices()).len() == self.n()
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| {
            let mut rest = s - &self.adj[v];
            rest.remove(v);
            rest.is_empty()
        })
    }

    /// Induced subgraph on `keep`, relabelled to `0..|keep|` in increasing
    /// id order. The returned vector maps new ids back to old ones.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = keep.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(old.len());
        for (i, &v) in old.iter().enumerate() {
            for u in self.adj[v].iter().filter(|&u| keep.contains(u) && u > v) {
                g.add_edge(i, index[u]).expect("induced edge endpoints are in range");
            }
        }
        (g, old)
    }

    /// Number of edges of `G[s]`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2
    }

    /// Maximum cardinality search followed by a perfect-elimination check.
    pub fn is_chordal(&self) -> bool {
        let n = self.n();
        let mut weight = vec![0usize; n];
        let mut numbered = VertexSet::new();
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&v| !numbered.contains(v)).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
            numbered.insert(v);
            order.push(v);
            for u in self.adj[v].iter() {
                if !numbered.contains(u) {
                    weight[u] += 1;
                }
            }
        }
        // `order` reversed is a perfect elimination ordering iff chordal.
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        order.iter().all(|&v| {
            let earlier: Vec<usize> = self.adj[v].iter().filter(|&u| position[u] < position[v]).collect();
            match earlier.iter().max_by_key(|&&u| position[u]) {
                None => true,
                Some(&parent) => earlier.iter().all(|&u| u == parent || self.adj[parent].contains(u)),
            }
        })
    }
}

/// Parses a graph. PACE `.gr`: header `p tw <n> <m>`, 1-indexed edge
/// lines, `c` comments. Edge list: one 1-indexed `u v` pair per line with
/// `n` the largest id; `#` and `c` lines are comments.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::PaceGr => parse_pace(text),
        GraphFormat::EdgeList => parse_edge_list(text),
    }
}

/// Picks the PACE parser when the first content line is a `p` header.
pub fn detect_format(text: &str) -> GraphFormat {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("p ") => GraphFormat::PaceGr,
        _ => GraphFormat::EdgeList,
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next_id = || -> Result<usize> {
        let tok = parts.next().ok_or_else(|| parse_err(line_no, "expected two vertex ids"))?;
        tok.parse::<usize>().map_err(|_| parse_err(line_no, format!("invalid vertex id `{tok}`")))
    };
    let (u, v) = (next_id()?, next_id()?);
    if parts.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens after edge"));
    }
    Ok((u, v))
}

fn add_one_based(g: &mut Graph, line_no: usize, u: usize, v: usize) -> Result<()> {
    let n = g.n();
    for x in [u, v] {
        if x == 0 || x > n {
            return Err(parse_err(line_no, format!("vertex id {x} out of range 1..={n}")));
        }
    }
    if u == v {
        return Err(parse_err(line_no, format!("self-loop on vertex {u}")));
    }
    g.add_edge(u - 1, v - 1)?;
    Ok(())
}

fn parse_pace(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if graph.is_some() {
                return Err(parse_err(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "tw" {
                return Err(parse_err(line_no, "malformed header, expected `p tw <n> <m>`"));
            }
            let n = parts[2].parse::<usize>().map_err(|_| parse_err(line_no, "malformed vertex count"))?;
            parts[3].parse::<usize>().map_err(|_| parse_err(line_no, "malformed edge count"))?;
            graph = Some(Graph::new(n));
            continue;
        }
        let g = graph.as_mut().ok_or_else(|| parse_err(line_no, "edge before `p tw` header"))?;
        let (u, v) = parse_pair(line_no, line)?;
        add_one_based(g, line_no, u, v)?;
    }
    graph.ok_or_else(|| parse_err(0, "missing `p tw` header"))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let (u, v) = parse_pair(i + 1, line)?;
        if u == 0 || v == 0 {
            return Err(parse_err(i + 1, "vertex ids are 1-indexed"));
        }
        n = n.max(u).max(v);
        pairs.push((i + 1, u, v));
    }
    let mut g = Graph::new(n);
    for (line_no, u, v) in pairs {
        add_one_based(&mut g, line_no, u, v)?;
    }
    Ok(g)
}

/// PACE `.gr` rendering (1-indexed).
pub fn to_pace(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}
