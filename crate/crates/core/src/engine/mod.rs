//! The block-by-block dynamic program over good triples.
//!
//! For every full block `(S, C)` (smallest first) and every good triple
//! `(S, C, Ω)` on it, the engine fills
//!
//! * `β(S, C, Ω, W, c)` for `W ⊆ Ω`, `|W| ≤ t + 1`: the best partial solution
//!   `(F, X)` inside `S ∪ C` with `F ∩ Ω = W` whose class over `W` is `c`.
//!   A base triple (`Ω = S ∪ C`) takes `F = W`; otherwise the components
//!   `C_i` of `C \ Ω` contribute their block tables through introduce and
//!   join steps.
//! * `α(S, C, W ∩ S, c')` by forgetting `W \ S`, streamed as each `β` entry
//!   is produced.
//!
//! The answer is the best `α(∅, V, ∅, c)` over accepting classes `c`.
//! Entries carry their witness `(F, X)`; ties are broken towards the
//! smaller `F` and then the smaller `X` in [`VertexSet::tie_break_cmp`]
//! order, which makes the result independent of the schedule.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::partition::{drop_bit, spread};
use crate::automata::{introduce_state, Automaton, Boundary, MAX_TERMINALS};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::triangulation::{Budgets, Skeleton};
use crate::vset::VertexSet;

type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Max,
    Min,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Mode::Max),
            "min" => Ok(Mode::Min),
            other => Err(Error::InvalidParams(format!("mode must be `max` or `min`, got `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Max => "max",
            Mode::Min => "min",
        })
    }
}

/// What to optimize: the weight of `X` (its size when unweighted), with
/// the vertices of `annotations` forced into `F`, and optionally `|X|`
/// fixed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Objective {
    pub mode: Mode,
    pub weights: Option<Vec<f64>>,
    pub annotations: VertexSet,
    pub exact_size: Option<usize>,
}

impl Objective {
    pub fn new(mode: Mode) -> Self {
        Objective { mode, ..Default::default() }
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[v])
    }

    pub fn weight_of(&self, s: &VertexSet) -> f64 {
        match &self.weights {
            None => s.len() as f64,
            Some(w) => s.iter().map(|v| w[v]).sum(),
        }
    }

    /// Strict preference of `(value, F, X)` over another.
    pub fn prefers(&self, a: (f64, &VertexSet, &VertexSet), b: (f64, &VertexSet, &VertexSet)) -> bool {
        let by_value = match self.mode {
            Mode::Max => a.0.partial_cmp(&b.0),
            Mode::Min => b.0.partial_cmp(&a.0),
        }
        .unwrap_or(Ordering::Equal);
        match by_value {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a.1.tie_break_cmp(b.1).then_with(|| a.2.tie_break_cmp(b.2)) == Ordering::Less,
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        g.check_subset(&self.annotations)?;
        if let Some(w) = &self.weights {
            if w.len() != g.n() {
                return Err(Error::InvalidParams(format!("{} weights for {} vertices", w.len(), g.n())));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParams("weights must be finite".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SolveOptions {
    pub budgets: Budgets,
    /// Keep every `α` and `β` entry for inspection.
    pub record_tables: bool,
}


#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub separators: usize,
    pub pmcs: usize,
    pub blocks: usize,
    pub good_triples: usize,
    pub dp_keys: usize,
    pub ms: u64,
}

impl Stats {
    pub fn absorb(&mut self, other: &Stats) {
        self.separators += other.separators;
        self.pmcs += other.pmcs;
        self.blocks += other.blocks;
        self.good_triples += other.good_triples;
        self.dp_keys += other.dp_keys;
        self.ms += other.ms;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Alpha,
    Beta,
}

/// One stored table entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRecord {
    pub kind: TableKind,
    pub separator: VertexSet,
    pub component: VertexSet,
    pub pmc: Option<VertexSet>,
    pub w: VertexSet,
    /// `X ∩ W` as a rank mask over `W`.
    pub members: u32,
    pub class_hash: u64,
    pub size: usize,
    pub value: f64,
    pub f: VertexSet,
    pub x: VertexSet,
}

/// `alpha|beta S|C|Ω|W|class-hash value`, sets 1-based and comma-separated.
impl fmt::Display for TableRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TableKind::Alpha => "alpha",
            TableKind::Beta => "beta",
        };
        let ids = |s: &VertexSet| s.iter().map(|v| (v + 1).to_string()).join(",");
        let pmc = self.pmc.as_ref().map_or(String::new(), ids);
        write!(
            f,
            "{kind} {}|{}|{}|{}|{:016x} {}",
            ids(&self.separator),
            ids(&self.component),
            pmc,
            ids(&self.w),
            self.class_hash,
            self.value
        )
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub value: f64,
    pub f: VertexSet,
    pub x: VertexSet,
    pub stats: Stats,
    pub tables: Vec<TableRecord>,
}

#[derive(Clone, Debug)]
struct Entry {
    value: f64,
    f: VertexSet,
    x: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key<S> {
    members: u32,
    state: S,
    size: u32,
}

type Table<S> = DetMap<Key<S>, Entry>;
type EntriesByMembers<'a, S> = DetMap<u32, Vec<(&'a Key<S>, &'a Entry)>>;

fn upsert<S: Eq + Hash>(obj: &Objective, table: &mut Table<S>, key: Key<S>, entry: Entry) {
    match table.get_mut(&key) {
        Some(old) => {
            if obj.prefers((entry.value, &entry.f, &entry.x), (old.value, &old.f, &old.x)) {
                *old = entry;
            }
        }
        None => {
            table.insert(key, entry);
        }
    }
}

fn class_hash<S: Hash>(members: u32, state: &S) -> u64 {
    let mut h = DefaultHasher::new();
    members.hash(&mut h);
    state.hash(&mut h);
    h.finish()
}

/// Subsets of `set` with at most `k` members, by size and then
/// lexicographically.
fn small_subsets(set: &VertexSet, k: usize) -> impl Iterator<Item = VertexSet> + '_ {
    let items = set.to_vec();
    (0..=k.min(items.len())).flat_map(move |size| {
        items.clone().into_iter().combinations(size).map(|c| c.into_iter().collect::<VertexSet>())
    })
}

struct Ctx<'a, A: Automaton> {
    g: &'a Graph,
    t: usize,
    a: &'a A,
    obj: &'a Objective,
    skel: &'a Skeleton,
    record: bool,
}

/// Output of one good triple: `α` updates keyed by `W ∩ S`.
struct TripleOut<S> {
    alpha: DetMap<VertexSet, Table<S>>,
    records: Vec<TableRecord>,
    keys: usize,
}

struct BaseClass<S> {
    members: u32,
    state: S,
    x: VertexSet,
    weight: f64,
}

impl<A: Automaton> Ctx<'_, A> {
    fn base_classes(&self, w: &VertexSet, bnd: &Boundary) -> Vec<BaseClass<A::State>> {
        let full = bnd.full_mask();
        let masks: Vec<u32> = if self.a.requires_x_equals_f() { vec![full] } else { (0..=full).collect() };
        masks
            .into_iter()
            .filter_map(|members| {
                let state = self.a.base(bnd, members)?;
                let x = w.select_ranks(members);
                let weight = self.obj.weight_of(&x);
                Some(BaseClass { members, state, x, weight })
            })
            .collect()
    }

    fn too_big(&self, size: u32) -> bool {
        self.obj.exact_size.is_some_and(|v| size as usize > v)
    }

    fn run_triple(&self, alpha: &[DetMap<VertexSet, Table<A::State>>], b: usize, r: usize) -> TripleOut<A::State> {
        let block = &self.skel.blocks[b];
        let triple = &self.skel.triples[b][r];
        let omega = &self.skel.pmcs[triple.pmc];
        let required = &self.obj.annotations & omega;
        let keep_mask_of = |w: &VertexSet| w.rank_mask(&block.separator);
        let mut out = TripleOut { alpha: DetMap::default(), records: Vec::new(), keys: 0 };

        for w in small_subsets(omega, self.t + 1) {
            if !required.is_subset(&w) {
                continue;
            }
            let bnd = Boundary::new(self.g, &w, self.a.marked());
            let bases = self.base_classes(&w, &bnd);
            let beta = if triple.children.is_empty() {
                let mut beta: Table<A::State> = DetMap::default();
                for bc in &bases {
                    let size = bc.members.count_ones();
                    if self.too_big(size) {
                        continue;
                    }
                    let key = Key { members: bc.members, state: bc.state.clone(), size };
                    upsert(self.obj, &mut beta, key, Entry { value: bc.weight, f: w.clone(), x: bc.x.clone() });
                }
                beta
            } else {
                let mut gamma: Option<Table<A::State>> = None;
                for &child in &triple.children {
                    let delta = self.delta(alpha, child, &w, &bnd, &bases);
                    gamma = Some(match gamma {
                        None => delta,
                        Some(prev) => self.join_tables(&prev, &delta, &w, &bnd),
                    });
                    if gamma.as_ref().is_some_and(|t| t.is_empty()) {
                        break;
                    }
                }
                gamma.unwrap_or_default()
            };

            let keep = keep_mask_of(&w);
            let ws = &w & &block.separator;
            for (key, entry) in beta {
                out.keys += 1;
                if self.record {
                    out.records.push(TableRecord {
                        kind: TableKind::Beta,
                        separator: block.separator.clone(),
                        component: block.component.clone(),
                        pmc: Some(omega.clone()),
                        w: w.clone(),
                        members: key.members,
                        class_hash: class_hash(key.members, &key.state),
                        size: key.size as usize,
                        value: entry.value,
                        f: entry.f.clone(),
                        x: entry.x.clone(),
                    });
                }
                let Some((members, state)) = self.forget(&key.state, key.members, &bnd, keep) else {
                    continue;
                };
                out.keys += 1;
                let table = out.alpha.entry(ws.clone()).or_default();
                upsert(self.obj, table, Key { members, state, size: key.size }, entry);
            }
        }
        out
    }

    fn forget(&self, s: &A::State, members: u32, bnd: &Boundary, keep: u32) -> Option<(u32, A::State)> {
        let (mut members, mut state, mut bnd) = (members, s.clone(), bnd.clone());
        for r in (0..bnd.len()).rev() {
            if keep & (1 << r) == 0 {
                state = self.a.forget_one(&state, members, &bnd, r)?;
                members = drop_bit(members, r);
                bnd = bnd.without(r);
            }
        }
        Some((members, state))
    }

    /// `δ_i` over `W`: child block entries lifted into `W` and glued with
    /// the base graph `G[W]`.
    fn delta(
        &self,
        alpha: &[DetMap<VertexSet, Table<A::State>>],
        child: usize,
        w: &VertexSet,
        bnd: &Boundary,
        bases: &[BaseClass<A::State>],
    ) -> Table<A::State> {
        let mut delta: Table<A::State> = DetMap::default();
        let wi = w & &self.skel.blocks[child].separator;
        let Some(ctab) = alpha[child].get(&wi) else {
            return delta;
        };
        let embed = w.rank_mask(&wi);
        for (ckey, centry) in ctab {
            let spread_members = spread(ckey.members, embed);
            for bc in bases.iter().filter(|bc| bc.members & embed == spread_members) {
                let fresh = bc.members & !embed;
                let size = ckey.size + fresh.count_ones();
                if self.too_big(size) {
                    continue;
                }
                let Some(state) = introduce_state(self.a, &ckey.state, embed, &bc.state, bc.members, bnd) else {
                    continue;
                };
                let added = self.obj.weight_of(&w.select_ranks(fresh));
                let entry = Entry { value: centry.value + added, f: &centry.f | w, x: &centry.x | &bc.x };
                upsert(self.obj, &mut delta, Key { members: bc.members, state, size }, entry);
            }
        }
        delta
    }

    /// `γ_i` from `γ_{i-1}` and `δ_i`, subtracting the doubly counted `X ∩ W`.
    fn join_tables(
        &self,
        prev: &Table<A::State>,
        delta: &Table<A::State>,
        w: &VertexSet,
        bnd: &Boundary,
    ) -> Table<A::State> {
        let mut by_members: EntriesByMembers<A::State> = DetMap::default();
        for (k, e) in delta {
            by_members.entry(k.members).or_default().push((k, e));
        }
        let mut out: Table<A::State> = DetMap::default();
        for (k1, e1) in prev {
            let Some(partners) = by_members.get(&k1.members) else { continue };
            let shared = w.select_ranks(k1.members);
            let shared_weight = self.obj.weight_of(&shared);
            let shared_size = k1.members.count_ones();
            for (k2, e2) in partners {
                let size = k1.size + k2.size - shared_size;
                if self.too_big(size) {
                    continue;
                }
                let Some(state) = self.a.join(&k1.state, &k2.state, k1.members, bnd) else { continue };
                let entry = Entry { value: e1.value + e2.value - shared_weight, f: &e1.f | &e2.f, x: &e1.x | &e2.x };
                upsert(self.obj, &mut out, Key { members: k1.members, state, size }, entry);
            }
        }
        out
    }
}

/// Solves on a connected graph.
pub fn solve<A: Automaton>(g: &Graph, t: usize, a: &A, obj: &Objective, opts: &SolveOptions) -> Result<Solution> {
    let start = Instant::now();
    obj.check(g)?;
    if t + 1 > MAX_TERMINALS {
        return Err(Error::InvalidParams(format!("t must be at most {}", MAX_TERMINALS - 1)));
    }
    if g.n() == 0 {
        return solve_empty(a, obj);
    }
    let skel = Skeleton::build(g, &opts.budgets)?;
    let mut sol = solve_with_skeleton(g, &skel, t, a, obj, opts)?;
    sol.stats.ms = start.elapsed().as_millis() as u64;
    Ok(sol)
}

fn solve_empty<A: Automaton>(a: &A, obj: &Objective) -> Result<Solution> {
    let empty = Boundary::default();
    let accepted = a.base(&empty, 0).is_some_and(|s| a.accepting_empty(&s));
    if !accepted || obj.exact_size.is_some_and(|v| v != 0) {
        return Err(Error::Infeasible);
    }
    Ok(Solution { value: 0.0, f: VertexSet::new(), x: VertexSet::new(), stats: Stats::default(), tables: Vec::new() })
}

/// `solve` with `|X|` fixed to `v`.
pub fn solve_exact_size<A: Automaton>(
    g: &Graph,
    t: usize,
    a: &A,
    v: usize,
    annotations: &VertexSet,
    opts: &SolveOptions,
) -> Result<Solution> {
    let obj = Objective { exact_size: Some(v), annotations: annotations.clone(), ..Objective::default() };
    solve(g, t, a, &obj, opts)
}

/// Runs the dynamic program over a prebuilt skeleton of `g`.
pub fn solve_with_skeleton<A: Automaton>(
    g: &Graph,
    skel: &Skeleton,
    t: usize,
    a: &A,
    obj: &Objective,
    opts: &SolveOptions,
) -> Result<Solution> {
    let run = run_tables(g, skel, t, a, obj, opts);
    let mut best: Option<&Entry> = None;
    for (k, e) in &run.root {
        if obj.exact_size.is_some_and(|v| v != k.size as usize) {
            continue;
        }
        if best.is_none_or(|b| obj.prefers((e.value, &e.f, &e.x), (b.value, &b.f, &b.x))) {
            best = Some(e);
        }
    }
    let best = best.ok_or(Error::Infeasible)?;
    Ok(Solution { value: best.value, f: best.f.clone(), x: best.x.clone(), stats: run.stats, tables: run.records })
}

/// Best solution for every `|X| = 0..=v`, where `v` is `obj.exact_size`
/// (or `n` when unset). `None` marks an infeasible size.
pub fn solve_by_size<A: Automaton>(
    g: &Graph,
    t: usize,
    a: &A,
    obj: &Objective,
    opts: &SolveOptions,
) -> Result<Vec<Option<Solution>>> {
    let start = Instant::now();
    obj.check(g)?;
    let cap = obj.exact_size.unwrap_or(g.n());
    if g.n() == 0 {
        let empty = Objective { exact_size: None, ..obj.clone() };
        let mut out = vec![None; cap + 1];
        out[0] = solve_empty(a, &empty).ok();
        return Ok(out);
    }
    if t + 1 > MAX_TERMINALS {
        return Err(Error::InvalidParams(format!("t must be at most {}", MAX_TERMINALS - 1)));
    }
    let skel = Skeleton::build(g, &opts.budgets)?;
    let obj = Objective { exact_size: Some(cap), ..obj.clone() };
    let mut run = run_tables(g, &skel, t, a, &obj, opts);
    run.stats.ms = start.elapsed().as_millis() as u64;
    let mut best: Vec<Option<&Entry>> = vec![None; cap + 1];
    for (k, e) in &run.root {
        let slot = &mut best[k.size as usize];
        if slot.is_none_or(|b| obj.prefers((e.value, &e.f, &e.x), (b.value, &b.f, &b.x))) {
            *slot = Some(e);
        }
    }
    Ok(best
        .into_iter()
        .map(|e| {
            e.map(|e| Solution {
                value: e.value,
                f: e.f.clone(),
                x: e.x.clone(),
                stats: run.stats.clone(),
                tables: Vec::new(),
            })
        })
        .collect())
}

struct Run<S> {
    /// Accepting entries of `α(∅, V, ∅, ·)`.
    root: Vec<(Key<S>, Entry)>,
    stats: Stats,
    records: Vec<TableRecord>,
}

fn run_tables<A: Automaton>(
    g: &Graph,
    skel: &Skeleton,
    t: usize,
    a: &A,
    obj: &Objective,
    opts: &SolveOptions,
) -> Run<A::State> {
    let ctx = Ctx { g, t, a, obj, skel, record: opts.record_tables };
    let mut alpha: Vec<DetMap<VertexSet, Table<A::State>>> = vec![DetMap::default(); skel.blocks.len()];
    let mut records = Vec::new();
    let mut keys = 0;

    for layer in skel.layers() {
        let jobs: Vec<(usize, usize)> =
            layer.iter().flat_map(|&b| (0..skel.triples[b].len()).map(move |r| (b, r))).collect();
        let outs: Vec<TripleOut<A::State>> = jobs.par_iter().map(|&(b, r)| ctx.run_triple(&alpha, b, r)).collect();
        // merge in job order so the result does not depend on scheduling
        for (&(b, _), out) in jobs.iter().zip(outs) {
            keys += out.keys;
            records.extend(out.records);
            for (ws, table) in out.alpha {
                let target = alpha[b].entry(ws).or_default();
                for (k, e) in table {
                    upsert(obj, target, k, e);
                }
            }
        }
    }

    if opts.record_tables {
        for (b, tables) in alpha.iter().enumerate() {
            let block = &skel.blocks[b];
            let mut block_records: Vec<TableRecord> = tables
                .iter()
                .flat_map(|(w, table)| {
                    table.iter().map(move |(k, e)| TableRecord {
                        kind: TableKind::Alpha,
                        separator: block.separator.clone(),
                        component: block.component.clone(),
                        pmc: None,
                        w: w.clone(),
                        members: k.members,
                        class_hash: class_hash(k.members, &k.state),
                        size: k.size as usize,
                        value: e.value,
                        f: e.f.clone(),
                        x: e.x.clone(),
                    })
                })
                .collect();
            block_records.sort_by(|x, y| (&x.w, x.class_hash, x.size).cmp(&(&y.w, y.class_hash, y.size)));
            records.extend(block_records);
        }
    }

    let root_table = alpha.swap_remove(skel.root()).remove(&VertexSet::new()).unwrap_or_default();
    let root = root_table.into_iter().filter(|(k, _)| a.accepting_empty(&k.state)).collect();
    let stats = Stats {
        separators: skel.separators.len(),
        pmcs: skel.pmcs.len(),
        blocks: skel.blocks.len(),
        good_triples: skel.good_triple_count(),
        dp_keys: keys,
        ms: 0,
    };
    Run { root, stats, records }
}
