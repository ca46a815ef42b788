//! Oriented graphs, tournaments and inversion families.
//!
//! Arcs live in a dense adjacency bit matrix (one row of `u64` words per
//! vertex), which gives O(1) arc flips for any order. Vertices are `0..n`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{input, InvError, Result};

pub type Vertex = usize;

/// Wire form of an oriented graph: `{"n": .., "arcs": [[u, v], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub arcs: Vec<(Vertex, Vertex)>,
}

/// A digraph without loops and without digons.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct OrientedGraph {
    n: usize,
    words: usize,
    out: Vec<u64>,
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrientedGraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl TryFrom<GraphJson> for OrientedGraph {
    type Error = InvError;
    fn try_from(j: GraphJson) -> Result<Self> {
        OrientedGraph::from_arcs(j.n, j.arcs)
    }
}

impl From<OrientedGraph> for GraphJson {
    fn from(g: OrientedGraph) -> Self {
        GraphJson {
            n: g.n,
            arcs: g.arcs().collect(),
        }
    }
}

impl OrientedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        OrientedGraph {
            n,
            words,
            out: vec![0; n * words],
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = OrientedGraph::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, u: Vertex) -> &[u64] {
        &self.out[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    #[inline]
    fn set_bit(&mut self, u: Vertex, v: Vertex, on: bool) {
        let w = &mut self.out[u * self.words + v / 64];
        if on {
            *w |= 1 << (v % 64);
        } else {
            *w &= !(1 << (v % 64));
        }
    }

    /// Adds `u -> v`. Rejects loops, out-of-range endpoints and digons.
    /// Adding an arc that is already present is a no-op.
    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n || v >= self.n {
            return input(format!("arc ({u},{v}) out of range for n={}", self.n));
        }
        if u == v {
            return input(format!("self-loop at {u}"));
        }
        if self.has_arc(v, u) {
            return input(format!("arc ({u},{v}) would create a digon"));
        }
        self.set_bit(u, v, true);
        Ok(())
    }

    pub fn remove_arc(&mut self, u: Vertex, v: Vertex) {
        self.set_bit(u, v, false);
    }

    /// Reverses the arc between `u` and `v` if one exists.
    #[inline]
    pub fn flip_pair(&mut self, u: Vertex, v: Vertex) {
        if self.has_arc(u, v) {
            self.set_bit(u, v, false);
            self.set_bit(v, u, true);
        } else if self.has_arc(v, u) {
            self.set_bit(v, u, false);
            self.set_bit(u, v, true);
        }
    }

    pub fn out_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&u| self.has_arc(u, v))
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_neighbors(v).count()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Arcs in lexicographic `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).map(move |v| (u, v)))
    }

    /// Edges of the underlying graph as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self.arcs().map(|(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e
    }

    /// Pairs of distinct vertices that carry no arc, `(i, j)` with `i < j`.
    pub fn non_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_tournament(&self) -> bool {
        self.arc_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Every arc reversed.
    pub fn reversed(&self) -> OrientedGraph {
        let mut g = OrientedGraph::empty(self.n);
        for (u, v) in self.arcs() {
            g.set_bit(v, u, true);
        }
        g
    }

    /// Subgraph induced by `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[Vertex]) -> OrientedGraph {
        let mut g = OrientedGraph::empty(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate() {
                if self.has_arc(u, v) {
                    g.set_bit(a, b, true);
                }
            }
        }
        g
    }

    /// `self - z`, with vertices above `z` shifted down by one.
    pub fn remove_vertex(&self, z: Vertex) -> OrientedGraph {
        let keep: Vec<_> = (0..self.n).filter(|&v| v != z).collect();
        self.induced(&keep)
    }

    pub(crate) fn check_set(&self, set: &[Vertex]) -> Result<()> {
        let mut seen = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return input(format!("vertex {v} out of range for n={}", self.n));
            }
            if seen[v] {
                return input(format!("vertex {v} repeated in set"));
            }
            seen[v] = true;
        }
        Ok(())
    }
}

/// An oriented graph whose underlying graph is complete.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "OrientedGraph", into = "OrientedGraph")]
pub struct Tournament(OrientedGraph);

impl Tournament {
    pub fn into_graph(self) -> OrientedGraph {
        self.0
    }

    pub fn as_graph(&self) -> &OrientedGraph {
        &self.0
    }

    pub(crate) fn from_graph_unchecked(g: OrientedGraph) -> Self {
        debug_assert!(g.is_tournament());
        Tournament(g)
    }
}

impl Deref for Tournament {
    type Target = OrientedGraph;
    fn deref(&self) -> &OrientedGraph {
        &self.0
    }
}

impl TryFrom<OrientedGraph> for Tournament {
    type Error = InvError;
    fn try_from(g: OrientedGraph) -> Result<Self> {
        if g.is_tournament() {
            Ok(Tournament(g))
        } else {
            input(format!(
                "not a tournament: {} arcs on {} vertices",
                g.arc_count(),
                g.order()
            ))
        }
    }
}

impl From<Tournament> for OrientedGraph {
    fn from(t: Tournament) -> Self {
        t.0
    }
}

/// Size constraint on the members of an inversion family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SizeMode {
    Exact(usize),
    AtMost(usize),
}

impl SizeMode {
    pub fn p(self) -> usize {
        match self {
            SizeMode::Exact(p) | SizeMode::AtMost(p) => p,
        }
    }

    pub fn admits(self, size: usize) -> bool {
        match self {
            SizeMode::Exact(p) => size == p,
            SizeMode::AtMost(p) => size <= p,
        }
    }
}

/// Wire form of a family: `{"mode": "eq"|"leq", "p": .., "sets": [[..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub mode: String,
    pub p: usize,
    pub sets: Vec<Vec<Vertex>>,
}

/// An ordered list of vertex sets together with its size mode. Sets are kept
/// sorted; repeats are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct InversionFamily {
    pub mode: SizeMode,
    pub sets: Vec<Vec<Vertex>>,
}

impl TryFrom<FamilyJson> for InversionFamily {
    type Error = InvError;
    fn try_from(j: FamilyJson) -> Result<Self> {
        let mode = match j.mode.as_str() {
            "eq" => SizeMode::Exact(j.p),
            "leq" => SizeMode::AtMost(j.p),
            other => return input(format!("family mode must be \"eq\" or \"leq\", got {other:?}")),
        };
        Ok(InversionFamily::with_sets(mode, j.sets))
    }
}

impl From<InversionFamily> for FamilyJson {
    fn from(f: InversionFamily) -> Self {
        let (mode, p) = match f.mode {
            SizeMode::Exact(p) => ("eq", p),
            SizeMode::AtMost(p) => ("leq", p),
        };
        FamilyJson {
            mode: mode.into(),
            p,
            sets: f.sets,
        }
    }
}

impl InversionFamily {
    pub fn new(mode: SizeMode) -> Self {
        InversionFamily {
            mode,
            sets: Vec::new(),
        }
    }

    pub fn with_sets(mode: SizeMode, sets: Vec<Vec<Vertex>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        InversionFamily { mode, sets }
    }

    pub fn push(&mut self, mut set: Vec<Vertex>) {
        set.sort_unstable();
        self.sets.push(set);
    }

    pub fn extend(&mut self, other: InversionFamily) {
        self.sets.extend(other.sets);
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Checks range, distinctness within each set and the size mode.
    pub fn validate(&self, n: usize) -> Result<()> {
        for (i, s) in self.sets.iter().enumerate() {
            if !self.mode.admits(s.len()) {
                return Err(InvError::Mode(format!(
                    "set #{i} has size {} violating {:?}",
                    s.len(),
                    self.mode
                )));
            }
            let mut seen = vec![false; n];
            for &v in s {
                if v >= n {
                    return input(format!("set #{i}: vertex {v} out of range for n={n}"));
                }
                if seen[v] {
                    return input(format!("set #{i}: vertex {v} repeated"));
                }
                seen[v] = true;
            }
        }
        Ok(())
    }
}

/// Reverses every arc with both ends in `set`.
pub fn invert(d: &OrientedGraph, set: &[Vertex]) -> Result<OrientedGraph> {
    d.check_set(set)?;
    let mut g = d.clone();
    invert_in_place(&mut g, set);
    Ok(g)
}

pub(crate) fn invert_in_place(g: &mut OrientedGraph, set: &[Vertex]) {
    for (a, &u) in set.iter().enumerate() {
        for &v in &set[a + 1..] {
            g.flip_pair(u, v);
        }
    }
}

/// Inverts every member of `family`. An arc ends up reversed iff an odd
/// number of members contain both of its ends, so member order is irrelevant.
pub fn apply_family(d: &OrientedGraph, family: &InversionFamily) -> Result<OrientedGraph> {
    family.validate(d.order())?;
    let mut g = d.clone();
    for s in &family.sets {
        invert_in_place(&mut g, s);
    }
    Ok(g)
}

/// Reverses every arc with exactly one end in `set`.
pub fn push(d: &OrientedGraph, set: &[Vertex]) -> Result<OrientedGraph> {
    d.check_set(set)?;
    let mut inside = vec![false; d.order()];
    for &v in set {
        inside[v] = true;
    }
    let mut g = OrientedGraph::empty(d.order());
    for (u, v) in d.arcs() {
        if inside[u] != inside[v] {
            g.set_bit(v, u, true);
        } else {
            g.set_bit(u, v, true);
        }
    }
    Ok(g)
}

/// Either an acyclic ordering or a directed cycle, listed from its smallest
/// vertex along the arcs.
pub fn topological_order(d: &OrientedGraph) -> std::result::Result<Vec<Vertex>, Vec<Vertex>> {
    let n = d.order();
    let mut indeg = vec![0usize; n];
    for (_, v) in d.arcs() {
        indeg[v] += 1;
    }
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for v in d.out_neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover vertex has an in-neighbour among the leftovers, so walking
    // backwards must revisit a vertex.
    let left: Vec<bool> = (0..n).map(|v| indeg[v] > 0).collect();
    let start = (0..n).find(|&v| left[v]).expect("leftover vertex");
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while pos[cur] == usize::MAX {
        pos[cur] = walk.len();
        walk.push(cur);
        cur = d
            .in_neighbors(cur)
            .find(|&u| left[u])
            .expect("leftover vertex has a leftover in-neighbour");
    }
    let mut cycle: Vec<Vertex> = walk[pos[cur]..].to_vec();
    cycle.reverse();
    let m = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    cycle.rotate_left(m);
    Err(cycle)
}

pub fn is_acyclic(d: &OrientedGraph) -> bool {
    topological_order(d).is_ok()
}

/// Number of vertices with even out-degree.
pub fn out_even_count(d: &OrientedGraph) -> usize {
    (0..d.order()).filter(|&v| d.out_degree(v).is_multiple_of(2)).count()
}

/// Positions of each vertex in `ordering`; `ordering` must be a permutation.
pub(crate) fn positions(ordering: &[Vertex]) -> Vec<usize> {
    let mut pos = vec![0; ordering.len()];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Arcs that go from a later to an earlier vertex of `ordering`.
pub fn backward_arcs(d: &OrientedGraph, ordering: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let pos = positions(ordering);
    d.arcs().filter(|&(u, v)| pos[u] > pos[v]).collect()
}

pub fn is_permutation(ordering: &[Vertex], n: usize) -> bool {
    if ordering.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    ordering.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// Out-neighbourhoods as single words; only for `n <= 64`.
pub(crate) fn out_masks(d: &OrientedGraph) -> Vec<u64> {
    debug_assert!(d.order() <= 64);
    (0..d.order()).map(|u| d.out[u * d.words]).collect()
}

/// Acyclicity of the digraph given by `out` masks, by repeatedly deleting sinks.
pub(crate) fn acyclic_masks(out: &[u64]) -> bool {
    let n = out.len();
    let mut left: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        if left == 0 {
            return true;
        }
        let mut removed = false;
        let mut rest = left;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if out[v] & left == 0 {
                left &= !(1u64 << v);
                removed = true;
            }
        }
        if !removed {
            return false;
        }
    }
}
