//! Explicit decycling families of `(=p)`-inversions for even `p`.
//!
//! Every family is assembled from gadgets whose net effect on the space of
//! vertex pairs is exactly a prescribed set of pairs; applied to a graph, a
//! gadget therefore reverses exactly the prescribed pairs that carry arcs.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{input, InvError, Result};
use crate::f2::minimize_family;
use crate::fas::{fas_best_effort, fas_exact_with_limit, fas_heuristic, FasResult, DEFAULT_EXACT_LIMIT};
use crate::graph::{
    apply_family, backward_arcs, invert_in_place, is_acyclic, is_permutation, topological_order,
    InversionFamily, OrientedGraph, SizeMode, Vertex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GadgetKind {
    Cycle4,
    AdjacentPair,
    NonadjacentPair,
    EvenCycleWide,
    EvenCycleNarrow,
    BicliquePeel,
}

/// One gadget: its anchors, the helper set used at the top level, the pairs it
/// reverses and the `p`-sets it emits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetPlan {
    pub kind: GadgetKind,
    pub anchors: Vec<Vertex>,
    pub helper: Vec<Vertex>,
    pub targets: Vec<(Vertex, Vertex)>,
    pub sets: Vec<Vec<Vertex>>,
}

fn pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

fn distinct_in_range(n: usize, vs: &[Vertex]) -> Result<()> {
    OrientedGraph::empty(n).check_set(vs)
}

/// The `size` lowest-index vertices outside `forbidden`.
fn helper_set(n: usize, forbidden: &[Vertex], size: usize) -> Result<Vec<Vertex>> {
    let h: Vec<Vertex> = (0..n).filter(|v| !forbidden.contains(v)).take(size).collect();
    if h.len() < size {
        return Err(InvError::UnsupportedRange(format!(
            "need {size} helper vertices outside {forbidden:?}, n={n} is too small"
        )));
    }
    Ok(h)
}

fn with_helper(helper: &[Vertex], extra: &[Vertex]) -> Vec<Vertex> {
    let mut s: Vec<Vertex> = helper.iter().chain(extra).copied().collect();
    s.sort_unstable();
    s
}

fn check_p(p: usize) -> Result<()> {
    if p < 2 {
        return Err(InvError::UnsupportedRange(format!("p={p} below 2")));
    }
    Ok(())
}

fn check_even(p: usize) -> Result<()> {
    check_p(p)?;
    if p % 2 == 1 {
        return Err(InvError::Mode(format!(
            "p={p} is odd; the pair gadgets and decycling pipelines need even p"
        )));
    }
    Ok(())
}

/// Reverses the pairs `x0x1, x1x2, x2x3, x3x0` with four `p`-sets.
pub fn gadget_cycle4(n: usize, x: [Vertex; 4], p: usize) -> Result<GadgetPlan> {
    check_p(p)?;
    distinct_in_range(n, &x)?;
    let helper = helper_set(n, &x, p - 2)?;
    let sets = (0..4)
        .map(|i| with_helper(&helper, &[x[i], x[(i + 1) % 4]]))
        .collect();
    Ok(GadgetPlan {
        kind: GadgetKind::Cycle4,
        anchors: x.to_vec(),
        targets: (0..4).map(|i| pair(x[i], x[(i + 1) % 4])).collect(),
        helper,
        sets,
    })
}

/// Reverses `uv1` and `uv2` with `2p - 2` sets.
pub fn gadget_adjacent_pair(n: usize, u: Vertex, v1: Vertex, v2: Vertex, p: usize) -> Result<GadgetPlan> {
    check_even(p)?;
    distinct_in_range(n, &[u, v1, v2])?;
    let helper = helper_set(n, &[u, v1, v2], p - 2)?;
    let mut sets = vec![with_helper(&helper, &[u, v1]), with_helper(&helper, &[u, v2])];
    // The first two sets also reverse K_{2,p-2} between {v1,v2} and the helper;
    // undo it one 4-cycle per consecutive helper pair.
    for h in helper.chunks(2) {
        sets.extend(gadget_cycle4(n, [v1, h[0], v2, h[1]], p)?.sets);
    }
    debug_assert_eq!(sets.len(), 2 * p - 2);
    Ok(GadgetPlan {
        kind: GadgetKind::AdjacentPair,
        anchors: vec![u, v1, v2],
        targets: vec![pair(u, v1), pair(u, v2)],
        helper,
        sets,
    })
}

/// Reverses `u1v1` and `u2v2` (four distinct vertices) with `4p - 4` sets,
/// routing through the pair `u1u2`, which is reversed twice.
pub fn gadget_nonadjacent_pair(
    n: usize,
    u1: Vertex,
    v1: Vertex,
    u2: Vertex,
    v2: Vertex,
    p: usize,
) -> Result<GadgetPlan> {
    check_even(p)?;
    distinct_in_range(n, &[u1, v1, u2, v2])?;
    let first = gadget_adjacent_pair(n, u1, v1, u2, p)?;
    let second = gadget_adjacent_pair(n, u2, u1, v2, p)?;
    let mut sets = first.sets;
    sets.extend(second.sets);
    Ok(GadgetPlan {
        kind: GadgetKind::NonadjacentPair,
        anchors: vec![u1, v1, u2, v2],
        targets: vec![pair(u1, v1), pair(u2, v2)],
        helper: first.helper,
        sets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CycleVariant {
    /// `2ℓ` sets sharing one helper set outside the cycle; needs `n >= p + 2ℓ - 2`.
    Narrow,
    /// `4ℓ` sets, one 4-cycle gadget per chord pair; needs `n >= p + 2`.
    Wide,
}

/// Reverses the pairs of the closed walk `c0 c1 ... c_{2ℓ-1} c0`.
pub fn gadget_even_cycle(n: usize, cycle: &[Vertex], p: usize, variant: CycleVariant) -> Result<GadgetPlan> {
    check_p(p)?;
    let len = cycle.len();
    if len < 4 || len % 2 == 1 {
        return input(format!("even cycle gadget needs an even length >= 4, got {len}"));
    }
    distinct_in_range(n, cycle)?;
    let l = len / 2;
    let targets = (0..len).map(|i| pair(cycle[i], cycle[(i + 1) % len])).collect();
    match variant {
        CycleVariant::Narrow => {
            if n < p + len - 2 {
                return Err(InvError::Mode(format!(
                    "narrow cycle gadget needs n >= p + 2l - 2 = {}, got n={n}",
                    p + len - 2
                )));
            }
            let helper = helper_set(n, cycle, p - 2)?;
            let sets = (0..len)
                .map(|i| with_helper(&helper, &[cycle[i], cycle[(i + 1) % len]]))
                .collect();
            Ok(GadgetPlan {
                kind: GadgetKind::EvenCycleNarrow,
                anchors: cycle.to_vec(),
                helper,
                targets,
                sets,
            })
        }
        CycleVariant::Wide => {
            let mut sets = Vec::with_capacity(4 * l);
            let mut helper = Vec::new();
            for i in 0..l {
                let c = |j: usize| cycle[j % len];
                let g = gadget_cycle4(n, [c(i), c(i + 1), c(i + l + 1), c(i + l)], p)?;
                if i == 0 {
                    helper = g.helper.clone();
                }
                sets.extend(g.sets);
            }
            Ok(GadgetPlan {
                kind: GadgetKind::EvenCycleWide,
                anchors: cycle.to_vec(),
                helper,
                targets,
                sets,
            })
        }
    }
}

/// How [`reverse_arc_set`] groups the arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArcStrategy {
    /// Adjacent pairs, then the leftover matching in pairs.
    Pairwise,
    /// Arc-disjoint even cycles first, then as `Pairwise`.
    CycleFirst,
}

/// Gadgets reversing exactly the arcs of `d` listed in `arcs`.
pub fn reverse_arc_set_plans(
    d: &OrientedGraph,
    arcs: &[(Vertex, Vertex)],
    p: usize,
    strategy: ArcStrategy,
) -> Result<Vec<GadgetPlan>> {
    check_even(p)?;
    let n = d.order();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(arcs.len());
    for &(a, b) in arcs {
        if a >= n || b >= n || !d.adjacent(a, b) {
            return input(format!("({a},{b}) is not an arc of the graph"));
        }
        edges.push(pair(a, b));
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return input("arc listed twice");
    }
    if edges.len() % 2 == 1 {
        return input(format!("an odd number ({}) of arcs cannot be reversed pairwise", edges.len()));
    }
    if edges.is_empty() {
        return Ok(Vec::new());
    }
    if n < p + 2 {
        return Err(InvError::UnsupportedRange(format!("n={n} below p+2={}", p + 2)));
    }
    let mut plans = Vec::new();
    if strategy == ArcStrategy::CycleFirst {
        let (cycles, rest) = extract_even_cycles(n, &edges);
        for c in cycles {
            let variant = if n >= p + c.len() - 2 {
                CycleVariant::Narrow
            } else {
                CycleVariant::Wide
            };
            plans.push(gadget_even_cycle(n, &c, p, variant)?);
        }
        edges = rest;
    }
    let (pairs, matching) = adjacent_pairs(&edges);
    for (u, v1, v2) in pairs {
        plans.push(gadget_adjacent_pair(n, u, v1, v2, p)?);
    }
    for m in matching.chunks(2) {
        let ((u1, v1), (u2, v2)) = (m[0], m[1]);
        plans.push(gadget_nonadjacent_pair(n, u1, v1, u2, v2, p)?);
    }
    Ok(plans)
}

pub fn reverse_arc_set(
    d: &OrientedGraph,
    arcs: &[(Vertex, Vertex)],
    p: usize,
    strategy: ArcStrategy,
) -> Result<InversionFamily> {
    let plans = reverse_arc_set_plans(d, arcs, p, strategy)?;
    Ok(flatten(&plans, p))
}

fn flatten(plans: &[GadgetPlan], p: usize) -> InversionFamily {
    InversionFamily {
        mode: SizeMode::Exact(p),
        sets: plans.iter().flat_map(|g| g.sets.iter().cloned()).collect(),
    }
}

/// Greedy maximal set of disjoint adjacent pairs as `(shared, end1, end2)`;
/// the edges left over form a matching.
fn adjacent_pairs(edges: &[(Vertex, Vertex)]) -> (Vec<(Vertex, Vertex, Vertex)>, Vec<(Vertex, Vertex)>) {
    let mut used = vec![false; edges.len()];
    let mut pairs = Vec::new();
    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        let (a, b) = edges[i];
        let partner = (i + 1..edges.len()).find(|&j| {
            let (c, d) = edges[j];
            !used[j] && (a == c || a == d || b == c || b == d)
        });
        if let Some(j) = partner {
            used[i] = true;
            used[j] = true;
            let (c, d) = edges[j];
            let shared = if a == c || a == d { a } else { b };
            let e1 = if shared == a { b } else { a };
            let e2 = if shared == c { d } else { c };
            pairs.push((shared, e1, e2));
        }
    }
    let rest = edges
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(&e, _)| e)
        .collect();
    (pairs, rest)
}

/// Removes even cycles until every block of the remaining graph is a bridge or
/// an odd cycle. Such a graph has at most `⌊3(n-1)/2⌋` edges.
pub fn extract_even_cycles(n: usize, edges: &[(Vertex, Vertex)]) -> (Vec<Vec<Vertex>>, Vec<(Vertex, Vertex)>) {
    let mut remaining: BTreeSet<(Vertex, Vertex)> = edges.iter().map(|&(a, b)| pair(a, b)).collect();
    let mut cycles = Vec::new();
    loop {
        let current: Vec<_> = remaining.iter().copied().collect();
        let found = blocks(n, &current).into_iter().find_map(|b| even_cycle_in_block(&b));
        match found {
            None => return (cycles, current),
            Some(c) => {
                for i in 0..c.len() {
                    remaining.remove(&pair(c[i], c[(i + 1) % c.len()]));
                }
                cycles.push(c);
            }
        }
    }
}

/// Biconnected components as edge lists (Tarjan, edge stack).
fn blocks(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<(Vertex, Vertex)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    struct St<'a> {
        adj: &'a [Vec<(Vertex, usize)>],
        edges: &'a [(Vertex, Vertex)],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<usize>,
        out: Vec<Vec<(Vertex, Vertex)>>,
    }
    fn dfs(st: &mut St, u: Vertex, parent_edge: usize) {
        st.time += 1;
        st.disc[u] = st.time;
        st.low[u] = st.time;
        for k in 0..st.adj[u].len() {
            let (w, e) = st.adj[u][k];
            if e == parent_edge {
                continue;
            }
            if st.disc[w] == 0 {
                st.stack.push(e);
                dfs(st, w, e);
                st.low[u] = st.low[u].min(st.low[w]);
                if st.low[w] >= st.disc[u] {
                    let mut block = Vec::new();
                    while let Some(f) = st.stack.pop() {
                        block.push(st.edges[f]);
                        if f == e {
                            break;
                        }
                    }
                    block.sort_unstable();
                    st.out.push(block);
                }
            } else if st.disc[w] < st.disc[u] {
                st.stack.push(e);
                st.low[u] = st.low[u].min(st.disc[w]);
            }
        }
    }
    let mut st = St {
        adj: &adj,
        edges,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if st.disc[v] == 0 && !adj[v].is_empty() {
            dfs(&mut st, v, usize::MAX);
        }
    }
    let mut out = st.out;
    out.sort();
    out
}

/// An even cycle inside a 2-connected block, if the block has one: the block
/// itself when it is an even cycle, otherwise two same-parity paths of a theta.
fn even_cycle_in_block(block: &[(Vertex, Vertex)]) -> Option<Vec<Vertex>> {
    if block.len() < 3 {
        return None;
    }
    let verts: BTreeSet<Vertex> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    let idx = |v: Vertex| verts.iter().position(|&w| w == v).unwrap();
    let vlist: Vec<Vertex> = verts.iter().copied().collect();
    let k = vlist.len();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in block {
        adj[idx(a)].push(idx(b));
        adj[idx(b)].push(idx(a));
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    // A cycle through the first edge: that edge plus a shortest detour.
    let (a, b) = (idx(block[0].0), idx(block[0].1));
    let cyc = bfs_path(&adj, b, |v| v == a, |u, v| !((u == a && v == b) || (u == b && v == a)))?;
    if block.len() == k {
        // the block is a cycle
        return k.is_multiple_of(2).then(|| cyc.iter().map(|&i| vlist[i]).collect());
    }
    if cyc.len() % 2 == 0 {
        return Some(cyc.iter().map(|&i| vlist[i]).collect());
    }
    let len = cyc.len();
    let mut on_c = vec![usize::MAX; k];
    for (i, &v) in cyc.iter().enumerate() {
        on_c[v] = i;
    }
    let in_c_edge = |u: usize, v: usize| {
        on_c[u] != usize::MAX
            && on_c[v] != usize::MAX
            && ((on_c[u] + 1) % len == on_c[v] || (on_c[v] + 1) % len == on_c[u])
    };
    // An ear: a path leaving the cycle at x and returning at some b != x.
    let mut ear = None;
    'outer: for &x in &cyc {
        for &y in &adj[x] {
            if in_c_edge(x, y) {
                continue;
            }
            if on_c[y] != usize::MAX {
                ear = Some(vec![x, y]);
                break 'outer;
            }
            let p = bfs_path(
                &adj,
                y,
                |v| on_c[v] != usize::MAX && v != x,
                |u, v| u != x && v != x && on_c[u] == usize::MAX,
            );
            if let Some(mut path) = p {
                path.insert(0, x);
                ear = Some(path);
                break 'outer;
            }
        }
    }
    let ear = ear.expect("a 2-connected block with more edges than vertices has an ear");
    let (i, j) = (on_c[ear[0]], on_c[*ear.last().unwrap()]);
    let l1 = (j + len - i) % len;
    let l3 = ear.len() - 1;
    let mut out: Vec<usize> = if l1 % 2 == l3 % 2 {
        (0..=l1).map(|s| cyc[(i + s) % len]).collect()
    } else {
        (0..=len - l1).map(|s| cyc[(i + len - s) % len]).collect()
    };
    out.extend(ear[1..ear.len() - 1].iter().rev());
    debug_assert_eq!(out.len() % 2, 0);
    Some(out.into_iter().map(|i| vlist[i]).collect())
}

/// Shortest path from `from` to the first vertex satisfying `goal`, moving only
/// along steps allowed by `step`.
fn bfs_path(
    adj: &[Vec<usize>],
    from: usize,
    goal: impl Fn(usize) -> bool,
    step: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut c = u;
            while c != from {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[u] {
            if prev[w] == usize::MAX && step(u, w) {
                prev[w] = u;
                q.push_back(w);
            }
        }
    }
    None
}

/// Summary of a decycling pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decycling {
    pub family: InversionFamily,
    /// Size of the feedback arc set the construction started from.
    pub fas_size: usize,
    pub fas_exact: bool,
    /// Upper bound on the family size guaranteed by the construction.
    pub bound: usize,
    /// Tighter value from the cycle-first counting argument, reported only.
    pub proof_bound: Option<f64>,
}

impl Decycling {
    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    Fas,
    TwoFas,
    Dense,
    OptDense,
}

impl std::str::FromStr for Strategy {
    type Err = InvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fas" => Ok(Strategy::Fas),
            "2fas" => Ok(Strategy::TwoFas),
            "dense" => Ok(Strategy::Dense),
            "opt-dense" => Ok(Strategy::OptDense),
            _ => input(format!("unknown strategy {s:?}")),
        }
    }
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Fas => "fas",
            Strategy::TwoFas => "2fas",
            Strategy::Dense => "dense",
            Strategy::OptDense => "opt-dense",
        }
    }
}

pub fn decycle(d: &OrientedGraph, p: usize, strategy: Strategy) -> Result<Decycling> {
    match strategy {
        Strategy::Fas => decycle_via_fas(d, p),
        Strategy::TwoFas => decycle_two_fas(d, p),
        Strategy::Dense => decycle_dense(d, p),
        Strategy::OptDense => decycle_opt_dense(d, p),
    }
}

fn pipeline_preconditions(d: &OrientedGraph, p: usize) -> Result<()> {
    check_even(p)?;
    if d.order() < p + 2 {
        return Err(InvError::UnsupportedRange(format!(
            "n={} below p+2={}",
            d.order(),
            p + 2
        )));
    }
    Ok(())
}

/// An arc of the acyclic graph `d` whose reversal keeps it acyclic: the
/// lexicographically smallest arc `ab` with no other directed path from `a` to `b`.
fn safe_flip(d: &OrientedGraph) -> Option<(Vertex, Vertex)> {
    d.arcs().find(|&(a, b)| {
        // search a -> ... -> b avoiding the direct arc
        let n = d.order();
        let mut seen = vec![false; n];
        let mut stack: Vec<Vertex> = d.out_neighbors(a).filter(|&w| w != b).collect();
        for &w in &stack {
            seen[w] = true;
        }
        while let Some(u) = stack.pop() {
            if u == b {
                return false;
            }
            for w in d.out_neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        true
    })
}

/// Arcs in which `d` disagrees with an acyclic graph at even distance: the
/// feedback arc set, plus one more safe reversal when its size is odd.
fn even_disagreement(d: &OrientedGraph, fas: &FasResult) -> Vec<(Vertex, Vertex)> {
    let mut target = d.clone();
    for &(a, b) in &fas.arcs {
        target.flip_pair(a, b);
    }
    if fas.size % 2 == 1 {
        let (a, b) = safe_flip(&target).expect("a nonempty acyclic graph has a safe arc");
        target.flip_pair(a, b);
    }
    debug_assert!(is_acyclic(&target));
    d.arcs().filter(|&(a, b)| target.has_arc(b, a)).collect()
}

fn via_fas_with(d: &OrientedGraph, p: usize, strategy: ArcStrategy) -> Result<Decycling> {
    pipeline_preconditions(d, p)?;
    let fas = fas_best_effort(d);
    let n = d.order();
    let (bound, proof_bound) = match strategy {
        ArcStrategy::Pairwise => ((2 * p - 2) * (fas.size + 1), None),
        ArcStrategy::CycleFirst => (
            2 * fas.size + 2 * p * n,
            Some(2.0 * fas.size as f64 + (2 * p) as f64 * n as f64 - 5.0 * n as f64 - 1.5 * p as f64 + 6.5),
        ),
    };
    let mut family = InversionFamily::new(SizeMode::Exact(p));
    if fas.size > 0 {
        let arcs = even_disagreement(d, &fas);
        family = reverse_arc_set(d, &arcs, p, strategy)?;
        family = minimize_family(d, &family)?;
    }
    Ok(Decycling {
        family,
        fas_size: fas.size,
        fas_exact: fas.exact,
        bound,
        proof_bound,
    })
}

/// At most `(2p-2)(fas+1)` sets: reverse a minimum feedback arc set (plus one
/// arc for parity) two arcs at a time.
pub fn decycle_via_fas(d: &OrientedGraph, p: usize) -> Result<Decycling> {
    via_fas_with(d, p, ArcStrategy::Pairwise)
}

/// At most `2 fas + 2pn` sets: as [`decycle_via_fas`], but arc-disjoint even
/// cycles of the feedback arc set are reversed first at cost 2 per arc or less.
pub fn decycle_two_fas(d: &OrientedGraph, p: usize) -> Result<Decycling> {
    via_fas_with(d, p, ArcStrategy::CycleFirst)
}

/// Output of [`greedy_reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyReduction {
    pub family: InversionFamily,
    pub reduced: OrientedGraph,
    /// Ordering of the reduced graph whose backward arcs certify its FAS bound.
    pub certificate: Vec<Vertex>,
    pub certified_backward: usize,
}

/// Four times the certified FAS bound, `4(p-2)n - 3p² + 7p`, kept integral.
pub fn greedy_fas_bound_times4(n: usize, p: usize) -> i64 {
    4 * (p as i64 - 2) * n as i64 - 3 * (p * p) as i64 + 7 * p as i64
}

/// Walks `ordering`; at each of the first `n - p` vertices, inverts it with
/// consecutive groups of `p - 1` tails of its backward in-arcs.
pub fn greedy_reduce(d: &OrientedGraph, p: usize, ordering: &[Vertex]) -> Result<GreedyReduction> {
    let n = d.order();
    if p < 2 {
        return Err(InvError::UnsupportedRange(format!("p={p} below 2")));
    }
    if n < p {
        return Err(InvError::UnsupportedRange(format!("n={n} below p={p}")));
    }
    if !is_permutation(ordering, n) {
        return input("ordering is not a permutation of the vertices");
    }
    let mut pos = vec![0; n];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = i;
    }
    let mut g = d.clone();
    let mut family = InversionFamily::new(SizeMode::Exact(p));
    for k in 0..n - p {
        let v = ordering[k];
        let tails: Vec<Vertex> = ordering[k + 1..]
            .iter()
            .copied()
            .filter(|&u| g.has_arc(u, v))
            .collect();
        for chunk in tails.chunks_exact(p - 1) {
            let mut set = chunk.to_vec();
            set.push(v);
            invert_in_place(&mut g, &set);
            family.push(set);
        }
    }
    let tail: Vec<Vertex> = ordering[n - p..].to_vec();
    let sub = g.induced(&tail);
    let tail_fas = fas_exact_with_limit(&sub, DEFAULT_EXACT_LIMIT).unwrap_or_else(|_| fas_heuristic(&sub));
    let mut certificate: Vec<Vertex> = ordering[..n - p].to_vec();
    certificate.extend(tail_fas.ordering.iter().map(|&i| tail[i]));
    let certified_backward = backward_arcs(&g, &certificate).len();
    Ok(GreedyReduction {
        family,
        reduced: g,
        certificate,
        certified_backward,
    })
}

/// Greedy reduction along a feedback-arc-set ordering, then [`decycle_via_fas`]
/// on what is left.
pub fn decycle_dense(d: &OrientedGraph, p: usize) -> Result<Decycling> {
    pipeline_preconditions(d, p)?;
    let fas = fas_best_effort(d);
    if fas.size == 0 {
        return Ok(empty_decycling(p, &fas, 0));
    }
    let red = greedy_reduce(d, p, &fas.ordering)?;
    let rest = decycle_via_fas(&red.reduced, p)?;
    let mut family = red.family;
    let first = family.len();
    family.extend(rest.family);
    let family = minimize_family(d, &family)?;
    Ok(Decycling {
        family,
        fas_size: fas.size,
        fas_exact: fas.exact,
        bound: first + rest.bound,
        proof_bound: None,
    })
}

fn empty_decycling(p: usize, fas: &FasResult, bound: usize) -> Decycling {
    Decycling {
        family: InversionFamily::new(SizeMode::Exact(p)),
        fas_size: fas.size,
        fas_exact: fas.exact,
        bound,
        proof_bound: None,
    }
}

/// Search limits for [`biclique_peel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelCaps {
    /// Maximum number of partial vertex sets explored per search.
    pub max_nodes: usize,
    /// Maximum number of peels.
    pub max_peels: usize,
}

impl Default for PeelCaps {
    fn default() -> Self {
        PeelCaps {
            max_nodes: 2_000_000,
            max_peels: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Peeling {
    pub plans: Vec<GadgetPlan>,
    pub residual: Vec<(Vertex, Vertex)>,
    /// Whether a search stopped at `max_nodes` rather than exhausting.
    pub capped: bool,
}

impl Peeling {
    pub fn family(&self, p: usize) -> InversionFamily {
        flatten(&self.plans, p)
    }
}

/// Repeatedly finds a complete bipartite `K_{s,t}` (`s = 2⌊p/2⌋`,
/// `t = 2⌈p/2⌉`) among `edges` and removes it with four `p`-sets
/// `B_i ∪ C_j`, where `B = B_1 ∪ B_2` and `C = C_1 ∪ C_2` are halved.
pub fn biclique_peel(n: usize, edges: &[(Vertex, Vertex)], p: usize, caps: PeelCaps) -> Result<Peeling> {
    check_p(p)?;
    let (s, t) = (2 * (p / 2), 2 * p.div_ceil(2));
    let mut remaining: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return input(format!("edge ({a},{b}) invalid for n={n}"));
        }
        remaining.insert(pair(a, b));
    }
    let mut plans = Vec::new();
    let mut capped = false;
    while plans.len() < caps.max_peels {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in &remaining {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let (found, hit) = find_biclique(&adj, s, t, caps.max_nodes);
        capped |= hit;
        let Some((bs, cs)) = found else { break };
        for &b in &bs {
            for &c in &cs {
                remaining.remove(&pair(b, c));
            }
        }
        let (b1, b2) = bs.split_at(s / 2);
        let (c1, c2) = cs.split_at(t / 2);
        let sets = vec![
            with_helper(b1, c1),
            with_helper(b1, c2),
            with_helper(b2, c1),
            with_helper(b2, c2),
        ];
        let mut targets: Vec<_> = bs.iter().flat_map(|&b| cs.iter().map(move |&c| pair(b, c))).collect();
        targets.sort_unstable();
        let mut anchors = bs.clone();
        anchors.extend(&cs);
        plans.push(GadgetPlan {
            kind: GadgetKind::BicliquePeel,
            anchors,
            helper: Vec::new(),
            targets,
            sets,
        });
    }
    Ok(Peeling {
        plans,
        residual: remaining.into_iter().collect(),
        capped,
    })
}

/// Chooses `s` vertices with at least `t` common neighbours, smallest first.
fn find_biclique(
    adj: &[BTreeSet<Vertex>],
    s: usize,
    t: usize,
    max_nodes: usize,
) -> (Option<(Vec<Vertex>, Vec<Vertex>)>, bool) {
    let cand: Vec<Vertex> = (0..adj.len()).filter(|&v| adj[v].len() >= t).collect();
    let mut nodes = 0usize;
    fn rec(
        adj: &[BTreeSet<Vertex>],
        cand: &[Vertex],
        start: usize,
        chosen: &mut Vec<Vertex>,
        common: Option<&BTreeSet<Vertex>>,
        s: usize,
        t: usize,
        nodes: &mut usize,
        max_nodes: usize,
    ) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        if chosen.len() == s {
            let cs: Vec<Vertex> = common.unwrap().iter().copied().take(t).collect();
            return Some((chosen.clone(), cs));
        }
        for i in start..cand.len() {
            if cand.len() - i < s - chosen.len() || *nodes >= max_nodes {
                return None;
            }
            *nodes += 1;
            let v = cand[i];
            let next: BTreeSet<Vertex> = match common {
                None => adj[v].clone(),
                Some(c) => c.intersection(&adj[v]).copied().collect(),
            };
            if next.len() < t {
                continue;
            }
            chosen.push(v);
            let r = rec(adj, cand, i + 1, chosen, Some(&next), s, t, nodes, max_nodes);
            chosen.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
    let found = rec(adj, &cand, 0, &mut Vec::new(), None, s, t, &mut nodes, max_nodes);
    (found, nodes >= max_nodes)
}

/// Peels complete bipartite pieces off a minimum feedback arc set, then
/// finishes the remainder with [`decycle_via_fas`].
pub fn decycle_opt_dense(d: &OrientedGraph, p: usize) -> Result<Decycling> {
    pipeline_preconditions(d, p)?;
    let fas = fas_best_effort(d);
    if fas.size == 0 {
        return Ok(empty_decycling(p, &fas, 0));
    }
    let peel = biclique_peel(d.order(), &fas.arcs, p, PeelCaps::default())?;
    let first = peel.family(p);
    let d1 = apply_family(d, &first)?;
    let rest = decycle_via_fas(&d1, p)?;
    let mut family = first;
    let peeled = family.len();
    family.extend(rest.family);
    let family = minimize_family(d, &family)?;
    Ok(Decycling {
        family,
        fas_size: fas.size,
        fas_exact: fas.exact,
        bound: peeled + rest.bound,
        proof_bound: None,
    })
}

/// Checks a family against a graph without modifying either.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub sizes_ok: bool,
    pub acyclic: bool,
    /// Arcs of the input that end up reversed.
    pub net_flips: Vec<(Vertex, Vertex)>,
    pub count: usize,
    /// A directed cycle left in the result, if any.
    pub cycle: Option<Vec<Vertex>>,
}

pub fn verify_family(d: &OrientedGraph, family: &InversionFamily, mode: SizeMode) -> Result<VerifyReport> {
    let n = d.order();
    let sizes_ok = family.sets.iter().all(|s| mode.admits(s.len()));
    let loose = InversionFamily {
        mode: SizeMode::AtMost(n.max(family.sets.iter().map(Vec::len).max().unwrap_or(0))),
        sets: family.sets.clone(),
    };
    let out = apply_family(d, &loose)?;
    let cycle = topological_order(&out).err();
    Ok(VerifyReport {
        sizes_ok,
        acyclic: cycle.is_none(),
        net_flips: d.arcs().filter(|&(a, b)| out.has_arc(b, a)).collect(),
        count: family.len(),
        cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::invert;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tt(n: usize) -> OrientedGraph {
        OrientedGraph::from_arcs(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn flipped_pairs(d: &OrientedGraph, sets: &[Vec<Vertex>]) -> Vec<(Vertex, Vertex)> {
        let mut g = d.clone();
        for s in sets {
            g = invert(&g, s).unwrap();
        }
        let mut out: Vec<_> = d.arcs().filter(|&(a, b)| g.has_arc(b, a)).map(|(a, b)| pair(a, b)).collect();
        out.sort_unstable();
        out
    }

    fn sorted(mut v: Vec<(Vertex, Vertex)>) -> Vec<(Vertex, Vertex)> {
        v.sort_unstable();
        v
    }

    #[test]
    fn cycle4_on_transitive() {
        let d = tt(6);
        let g = gadget_cycle4(6, [0, 1, 2, 3], 4).unwrap();
        assert_eq!(g.sets.len(), 4);
        assert!(g.sets.iter().all(|s| s.len() == 4));
        assert_eq!(flipped_pairs(&d, &g.sets), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(g.helper, vec![4, 5]);
    }

    #[test]
    fn cycle4_on_sparse_graph_changes_nothing() {
        let d = OrientedGraph::from_arcs(6, [(4, 5)]).unwrap();
        let g = gadget_cycle4(6, [0, 1, 2, 3], 3).unwrap();
        assert!(flipped_pairs(&d, &g.sets).is_empty());
    }

    #[test]
    fn pair_gadgets() {
        let d = tt(6);
        let g = gadget_adjacent_pair(6, 0, 1, 2, 4).unwrap();
        assert_eq!(g.sets.len(), 6);
        assert_eq!(flipped_pairs(&d, &g.sets), vec![(0, 1), (0, 2)]);
        let g2 = gadget_adjacent_pair(4, 0, 1, 2, 2).unwrap();
        assert_eq!(g2.sets, vec![vec![0, 1], vec![0, 2]]);
        let g3 = gadget_nonadjacent_pair(8, 0, 1, 2, 3, 4).unwrap();
        assert_eq!(g3.sets.len(), 12);
        assert_eq!(flipped_pairs(&tt(8), &g3.sets), vec![(0, 1), (2, 3)]);
        assert_eq!(gadget_nonadjacent_pair(6, 0, 1, 2, 3, 2).unwrap().sets.len(), 4);
        assert!(matches!(gadget_adjacent_pair(6, 0, 1, 2, 3), Err(InvError::Mode(_))));
    }

    #[test]
    fn even_cycle_variants() {
        let c = [0, 1, 2, 3, 4, 5];
        let narrow = gadget_even_cycle(10, &c, 4, CycleVariant::Narrow).unwrap();
        assert_eq!(narrow.sets.len(), 6);
        assert_eq!(
            flipped_pairs(&tt(10), &narrow.sets),
            sorted(vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
        );
        let wide = gadget_even_cycle(6, &c, 4, CycleVariant::Wide).unwrap();
        assert_eq!(wide.sets.len(), 12);
        assert_eq!(
            flipped_pairs(&tt(6), &wide.sets),
            sorted(vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
        );
        assert!(matches!(
            gadget_even_cycle(6, &c, 4, CycleVariant::Narrow),
            Err(InvError::Mode(_))
        ));
        assert_eq!(
            gadget_even_cycle(6, &[0, 1, 2, 3], 4, CycleVariant::Narrow).unwrap().sets.len(),
            4
        );
    }

    #[test]
    fn gadgets_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let p = 2 * rng.gen_range(1..=3);
            let n = rng.gen_range(p + 2..=p + 8);
            let mut d = OrientedGraph::empty(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.6) {
                        let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                        d.add_arc(a, b).unwrap();
                    }
                }
            }
            let mut vs: Vec<Vertex> = (0..n).collect();
            for i in 0..n {
                let j = rng.gen_range(i..n);
                vs.swap(i, j);
            }
            let present = |t: &[(Vertex, Vertex)]| {
                sorted(t.iter().copied().filter(|&(a, b)| d.adjacent(a, b)).collect())
            };
            let g = gadget_cycle4(n, [vs[0], vs[1], vs[2], vs[3]], p).unwrap();
            assert_eq!(flipped_pairs(&d, &g.sets), present(&g.targets));
            let g = gadget_adjacent_pair(n, vs[0], vs[1], vs[2], p).unwrap();
            assert_eq!(g.sets.len(), 2 * p - 2);
            assert_eq!(flipped_pairs(&d, &g.sets), present(&g.targets));
            let g = gadget_nonadjacent_pair(n, vs[0], vs[1], vs[2], vs[3], p).unwrap();
            assert_eq!(g.sets.len(), 4 * p - 4);
            assert_eq!(flipped_pairs(&d, &g.sets), present(&g.targets));
            let l = rng.gen_range(2..=n / 2);
            let g = gadget_even_cycle(n, &vs[..2 * l], p, CycleVariant::Wide).unwrap();
            assert_eq!(g.sets.len(), 4 * l);
            assert_eq!(flipped_pairs(&d, &g.sets), present(&g.targets));
        }
    }

    #[test]
    fn even_cycle_extraction_leaves_no_even_cycle_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.gen_range(3..=12);
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let (cycles, rest) = extract_even_cycles(n, &edges);
            let mut used: Vec<(Vertex, Vertex)> = rest.clone();
            for c in &cycles {
                assert_eq!(c.len() % 2, 0);
                assert!(c.len() >= 4);
                for i in 0..c.len() {
                    used.push(pair(c[i], c[(i + 1) % c.len()]));
                }
            }
            assert_eq!(sorted(used), edges);
            assert!(rest.len() <= 3 * (n - 1) / 2);
            for b in blocks(n, &rest) {
                let vs: BTreeSet<_> = b.iter().flat_map(|&(a, c)| [a, c]).collect();
                assert!(b.len() == 1 || (b.len() == vs.len() && b.len() % 2 == 1));
            }
        }
    }

    #[test]
    fn reverse_arc_set_examples() {
        let d = tt(8);
        assert!(reverse_arc_set(&d, &[], 4, ArcStrategy::Pairwise).unwrap().is_empty());
        let square = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let fam = reverse_arc_set(&d, &square, 4, ArcStrategy::CycleFirst).unwrap();
        assert_eq!(fam.len(), 4);
        let fam6 = reverse_arc_set(&tt(6), &square, 4, ArcStrategy::CycleFirst).unwrap();
        assert_eq!(fam6.len(), 4);
        assert_eq!(flipped_pairs(&tt(6), &fam6.sets), sorted(square.to_vec()));
        let two = reverse_arc_set(&d, &[(0, 1), (1, 5)], 4, ArcStrategy::Pairwise).unwrap();
        assert_eq!(two.len(), 6);
        assert!(reverse_arc_set(&d, &[(0, 1)], 4, ArcStrategy::Pairwise).is_err());
    }

    #[test]
    fn pipelines_on_small_examples() {
        for s in [Strategy::Fas, Strategy::TwoFas, Strategy::Dense, Strategy::OptDense] {
            assert!(decycle(&tt(7), 4, s).unwrap().is_empty());
        }
        let mut t8 = tt(8);
        t8.flip_pair(0, 7);
        let out = decycle_via_fas(&t8, 4).unwrap();
        assert_eq!(out.fas_size, 1);
        assert!(out.len() <= 12);
        assert!(is_acyclic(&apply_family(&t8, &out.family).unwrap()));
        assert!(matches!(decycle_via_fas(&t8, 3), Err(InvError::Mode(_))));
        assert!(matches!(decycle_via_fas(&tt(5), 4), Err(InvError::UnsupportedRange(_))));
    }

    #[test]
    fn safe_flip_keeps_acyclic() {
        let d = tt(5);
        assert_eq!(safe_flip(&d), Some((0, 1)));
        let chain = OrientedGraph::from_arcs(3, [(0, 2), (2, 1), (0, 1)]).unwrap();
        assert_eq!(safe_flip(&chain), Some((0, 2)));
    }

    #[test]
    fn greedy_reduce_examples() {
        let d = tt(9);
        let r = greedy_reduce(&d, 4, &(0..9).collect::<Vec<_>>()).unwrap();
        assert!(r.family.is_empty());
        assert_eq!(r.reduced, d);
        // every backward arc enters vertex 0 from 3(p-1) = 9 later vertices
        let p = 4;
        let n = 12;
        let mut g = tt(n);
        for v in 1..=9 {
            g.flip_pair(0, v);
        }
        let r = greedy_reduce(&g, p, &(0..n).collect::<Vec<_>>()).unwrap();
        assert_eq!(r.family.len(), 3);
        assert!(is_acyclic(&r.reduced));
    }

    #[test]
    fn biclique_examples() {
        let empty = biclique_peel(8, &[], 4, PeelCaps::default()).unwrap();
        assert!(empty.plans.is_empty() && empty.residual.is_empty());
        let k44: Vec<_> = (0..4).flat_map(|b| (4..8).map(move |c| (b, c))).collect();
        let peel = biclique_peel(8, &k44, 4, PeelCaps::default()).unwrap();
        assert_eq!(peel.family(4).len(), 4);
        assert!(peel.residual.is_empty());
        assert_eq!(flipped_pairs(&tt(8), &peel.family(4).sets), sorted(k44.clone()));
        let path = [(0, 1), (1, 2), (2, 3)];
        let none = biclique_peel(8, &path, 4, PeelCaps::default()).unwrap();
        assert!(none.plans.is_empty());
        assert_eq!(none.residual, path.to_vec());
    }

    #[test]
    fn opt_dense_beats_fas_on_planted_biclique() {
        // every c -> b -> y -> c; the 16 arcs from C to B are the cheapest cut
        let mut d = OrientedGraph::empty(13);
        for b in 0..4 {
            for c in 4..8 {
                d.add_arc(c, b).unwrap();
            }
            for y in 8..13 {
                d.add_arc(b, y).unwrap();
            }
        }
        for y in 8..13 {
            for c in 4..8 {
                d.add_arc(y, c).unwrap();
            }
        }
        let opt = decycle_opt_dense(&d, 4).unwrap();
        let plain = decycle_via_fas(&d, 4).unwrap();
        assert!(is_acyclic(&apply_family(&d, &opt.family).unwrap()));
        assert_eq!(opt.len(), 4);
        assert!(opt.len() < plain.len());
    }

    #[test]
    fn verify_reports() {
        let d = tt(5);
        let r = verify_family(&d, &InversionFamily::new(SizeMode::Exact(4)), SizeMode::Exact(4)).unwrap();
        assert!(r.sizes_ok && r.acyclic && r.net_flips.is_empty() && r.count == 0);
        let bad = InversionFamily::with_sets(SizeMode::AtMost(2), vec![vec![0, 2]]);
        let r = verify_family(&d, &bad, SizeMode::Exact(4)).unwrap();
        assert!(!r.sizes_ok);
        assert!(!r.acyclic);
        assert_eq!(r.net_flips, vec![(0, 2)]);
    }
}
