//! Exhaustive search over the states reachable by inversions.
//!
//! A state is the set of underlying edges whose arc is reversed relative to the
//! base graph, packed into a `u64` (edge `e` = bit `e`). Moves are the distinct
//! nonzero restrictions of admissible vertex sets to those edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{InvError, Result};
use crate::f2::{binom, k_subsets, pair_index};
use crate::graph::{acyclic_masks, OrientedGraph, SizeMode, Tournament, Vertex};

pub const DEFAULT_CAP_BITS: usize = 22;
/// Hard ceiling for explicit caps; the census label table holds 4 bytes per state.
pub const MAX_CAP_BITS: usize = 28;
pub const DEFAULT_ENUM_LIMIT: usize = 20_000_000;

/// An inversion number: finite, or infinite when no family decycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum InvValue {
    Finite(usize),
    Unreachable,
}

impl InvValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            InvValue::Finite(k) => Some(k),
            InvValue::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, InvValue::Finite(_))
    }
}

impl fmt::Display for InvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvValue::Finite(k) => write!(f, "{k}"),
            InvValue::Unreachable => write!(f, "inf"),
        }
    }
}

/// The arc-flip state space of one base graph under one size mode.
#[derive(Clone, Debug)]
pub struct StateSpace {
    base: OrientedGraph,
    edges: Vec<(Vertex, Vertex)>,
    moves: Vec<u64>,
}

fn capacity(msg: String) -> InvError {
    InvError::Capacity(msg)
}

impl StateSpace {
    pub fn new(d: &OrientedGraph, mode: SizeMode, cap_bits: usize) -> Result<Self> {
        Self::with_edges(d, d.edges(), mode, cap_bits)
    }

    /// Coordinates follow `edges`, which must list every edge of `d` once.
    pub fn with_edges(
        d: &OrientedGraph,
        edges: Vec<(Vertex, Vertex)>,
        mode: SizeMode,
        cap_bits: usize,
    ) -> Result<Self> {
        let m = edges.len();
        let cap = cap_bits.min(MAX_CAP_BITS);
        if m > cap {
            return Err(capacity(format!(
                "{m} arc coordinates exceed the state cap of {cap} bits"
            )));
        }
        if d.order() > 64 {
            return Err(capacity(format!(
                "exhaustive search limited to 64 vertices, got {}",
                d.order()
            )));
        }
        let moves = enumerate_moves(d, &edges, mode)?;
        Ok(StateSpace {
            base: d.clone(),
            edges,
            moves,
        })
    }

    pub fn bits(&self) -> usize {
        self.edges.len()
    }

    pub fn moves(&self) -> &[u64] {
        &self.moves
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// The base graph with the edges of `state` reversed.
    pub fn graph(&self, state: u64) -> OrientedGraph {
        let mut g = self.base.clone();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if state >> e & 1 == 1 {
                g.flip_pair(a, b);
            }
        }
        g
    }

    fn acyclic_checker(&self) -> impl Fn(u64) -> bool + '_ {
        let n = self.base.order();
        let fwd: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| if self.base.has_arc(a, b) { (a, b) } else { (b, a) })
            .collect();
        move |state| {
            let mut out = [0u64; 64];
            for (e, &(a, b)) in fwd.iter().enumerate() {
                if state >> e & 1 == 1 {
                    out[b] |= 1 << a;
                } else {
                    out[a] |= 1 << b;
                }
            }
            acyclic_masks(&out[..n])
        }
    }

    /// BFS distance from state 0 to the nearest state satisfying `goal`.
    fn distance(&self, goal: impl Fn(u64) -> bool) -> InvValue {
        let m = self.bits();
        let mut seen = vec![0u64; (1usize << m).div_ceil(64)];
        let mark = |seen: &mut Vec<u64>, s: u64| -> bool {
            let (w, b) = (s as usize / 64, s % 64);
            let fresh = seen[w] >> b & 1 == 0;
            seen[w] |= 1 << b;
            fresh
        };
        let mut frontier = vec![0u64];
        mark(&mut seen, 0);
        let mut depth = 0;
        while !frontier.is_empty() {
            if frontier.iter().any(|&s| goal(s)) {
                return InvValue::Finite(depth);
            }
            let mut next = Vec::new();
            for &s in &frontier {
                for &mv in &self.moves {
                    let t = s ^ mv;
                    if mark(&mut seen, t) {
                        next.push(t);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        InvValue::Unreachable
    }

    /// Fewest moves to an acyclic state.
    pub fn min_to_acyclic(&self) -> InvValue {
        let acyclic = self.acyclic_checker();
        self.distance(acyclic)
    }

    pub fn min_to_state(&self, target: u64) -> InvValue {
        self.distance(|s| s == target)
    }

    /// Reachability class label of every state, classes numbered in order of
    /// their smallest state.
    pub fn classes(&self) -> (Vec<u32>, usize) {
        let total = 1usize << self.bits();
        let mut label = vec![u32::MAX; total];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for s in 0..total {
            if label[s] != u32::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s as u64);
            while let Some(u) = stack.pop() {
                for &mv in &self.moves {
                    let t = (u ^ mv) as usize;
                    if label[t] == u32::MAX {
                        label[t] = count;
                        stack.push(t as u64);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }
}

fn enumerate_moves(d: &OrientedGraph, edges: &[(Vertex, Vertex)], mode: SizeMode) -> Result<Vec<u64>> {
    let n = d.order();
    let mut index = vec![vec![None; n]; n];
    let mut touched = vec![false; n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        index[a][b] = Some(e);
        index[b][a] = Some(e);
        touched[a] = true;
        touched[b] = true;
    }
    let active: Vec<Vertex> = (0..n).filter(|&v| touched[v]).collect();
    let idle = n - active.len();
    let p = mode.p();
    // Only the trace on non-isolated vertices matters; isolated ones pad.
    let (lo, hi) = match mode {
        SizeMode::Exact(_) if p > n => return Ok(Vec::new()),
        SizeMode::Exact(_) => (p.saturating_sub(idle), p.min(active.len())),
        SizeMode::AtMost(_) => (2, p.min(active.len())),
    };
    let work: usize = (lo..=hi).map(|k| binom(active.len(), k)).sum();
    if work > DEFAULT_ENUM_LIMIT {
        return Err(capacity(format!(
            "{work} candidate sets exceed the enumeration limit {DEFAULT_ENUM_LIMIT}"
        )));
    }
    let mut moves = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for k in lo..=hi {
        for sub in k_subsets(active.len(), k) {
            let mut mv = 0u64;
            for (x, &i) in sub.iter().enumerate() {
                for &j in &sub[x + 1..] {
                    if let Some(e) = index[active[i]][active[j]] {
                        mv ^= 1 << e;
                    }
                }
            }
            if mv != 0 && seen.insert(mv) {
                moves.push(mv);
            }
        }
    }
    moves.sort_unstable();
    Ok(moves)
}

pub fn exact_inv(d: &OrientedGraph, mode: SizeMode) -> Result<InvValue> {
    exact_inv_with_cap(d, mode, DEFAULT_CAP_BITS)
}

/// inv^{=p} or inv^{≤p} by breadth-first search.
pub fn exact_inv_with_cap(d: &OrientedGraph, mode: SizeMode, cap_bits: usize) -> Result<InvValue> {
    Ok(StateSpace::new(d, mode, cap_bits)?.min_to_acyclic())
}

pub fn reachable(t1: &Tournament, t2: &Tournament, p: usize) -> Result<bool> {
    reachable_with_cap(t1, t2, p, DEFAULT_CAP_BITS)
}

pub fn reachable_with_cap(t1: &Tournament, t2: &Tournament, p: usize, cap_bits: usize) -> Result<bool> {
    if t1.order() != t2.order() {
        return Err(InvError::Input("tournaments of different order".into()));
    }
    let space = StateSpace::new(t1, SizeMode::Exact(p), cap_bits)?;
    let target = space
        .edges()
        .iter()
        .enumerate()
        .filter(|&(_, &(a, b))| t1.has_arc(a, b) != t2.has_arc(a, b))
        .fold(0u64, |m, (e, _)| m | 1 << e);
    Ok(space.min_to_state(target).is_finite())
}

/// Partition of all labelled tournaments of order `n` into `(=p)`-reachability
/// classes. State bits follow the colexicographic pair order, so a state is
/// exactly the backward-arc vector of its tournament.
#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub n: usize,
    pub p: usize,
    pub classes: usize,
    /// Class size -> number of classes of that size.
    pub histogram: BTreeMap<usize, usize>,
    #[serde(skip)]
    pub labels: Vec<u32>,
}

pub fn orbit_census(n: usize, p: usize) -> Result<Census> {
    orbit_census_with_cap(n, p, DEFAULT_CAP_BITS)
}

pub fn orbit_census_with_cap(n: usize, p: usize, cap_bits: usize) -> Result<Census> {
    let tt = OrientedGraph::from_arcs(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?;
    let mut edges = tt.edges();
    edges.sort_by_key(|&(i, j)| pair_index(i, j));
    let space = StateSpace::with_edges(&tt, edges, SizeMode::Exact(p), cap_bits)?;
    let (labels, classes) = space.classes();
    let mut sizes = vec![0usize; classes];
    for &l in &labels {
        sizes[l as usize] += 1;
    }
    let mut histogram = BTreeMap::new();
    for s in sizes {
        *histogram.entry(s).or_insert(0) += 1;
    }
    Ok(Census {
        n,
        p,
        classes,
        histogram,
        labels,
    })
}

/// Whether the census classes are exactly the fibres of `signature`, a map
/// from colex-packed backward-arc vectors to comparable keys.
pub fn census_matches<K: std::hash::Hash + Eq>(census: &Census, signature: impl Fn(u64) -> K) -> bool {
    let mut by_class: HashMap<u32, K> = HashMap::new();
    let mut by_key: HashMap<K, u32> = HashMap::new();
    for (s, &l) in census.labels.iter().enumerate() {
        let key = signature(s as u64);
        match by_class.get(&l) {
            Some(k) if *k != key => return false,
            Some(_) => continue,
            None => {}
        }
        if by_key.insert(key, l).is_some() {
            return false;
        }
        by_class.insert(l, signature(s as u64));
    }
    true
}

pub fn single_inversion_decycles(d: &OrientedGraph, mode: SizeMode) -> Result<Option<Vec<Vertex>>> {
    single_inversion_decycles_with_limit(d, mode, DEFAULT_ENUM_LIMIT)
}

/// The first admissible set, by size then lexicographically, whose inversion
/// makes `d` acyclic.
pub fn single_inversion_decycles_with_limit(
    d: &OrientedGraph,
    mode: SizeMode,
    limit: usize,
) -> Result<Option<Vec<Vertex>>> {
    let n = d.order();
    let sizes: Vec<usize> = match mode {
        SizeMode::Exact(p) => vec![p],
        SizeMode::AtMost(p) => (0..=p.min(n)).collect(),
    };
    let work: usize = sizes.iter().map(|&k| binom(n, k)).sum();
    if work > limit {
        return Err(capacity(format!(
            "{work} candidate sets exceed the enumeration limit {limit}"
        )));
    }
    if d.is_tournament() {
        return Ok(scan_tournament(d, &sizes));
    }
    for &k in &sizes {
        for x in k_subsets(n, k) {
            let mut g = d.clone();
            crate::graph::invert_in_place(&mut g, &x);
            if crate::graph::is_acyclic(&g) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// A tournament is acyclic iff its out-degrees are pairwise distinct, and an
/// inversion only changes the out-degrees inside the inverted set.
fn scan_tournament(t: &OrientedGraph, sizes: &[usize]) -> Option<Vec<Vertex>> {
    let n = t.order();
    if n == 0 {
        return sizes.contains(&0).then(Vec::new);
    }
    let base: Vec<usize> = (0..n).map(|v| t.out_degree(v)).collect();
    let mut count = vec![0usize; n.max(1)];
    for &s in &base {
        count[s] += 1;
    }
    let mut missing = count.iter().filter(|&&c| c == 0).count();
    for &k in sizes {
        if k > n {
            continue;
        }
        for x in k_subsets(n, k) {
            let new: Vec<usize> = x
                .iter()
                .map(|&v| {
                    let inside_out = x.iter().filter(|&&w| t.has_arc(v, w)).count();
                    base[v] - inside_out + (k - 1 - inside_out)
                })
                .collect();
            let shift = |count: &mut Vec<usize>, missing: &mut usize, from: usize, to: usize| {
                count[from] -= 1;
                if count[from] == 0 {
                    *missing += 1;
                }
                if count[to] == 0 {
                    *missing -= 1;
                }
                count[to] += 1;
            };
            for (i, &v) in x.iter().enumerate() {
                shift(&mut count, &mut missing, base[v], new[i]);
            }
            let hit = missing == 0;
            for (i, &v) in x.iter().enumerate() {
                shift(&mut count, &mut missing, new[i], base[v]);
            }
            if hit {
                return Some(x);
            }
        }
    }
    None
}
