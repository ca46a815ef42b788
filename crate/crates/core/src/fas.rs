//! Feedback arc sets.

use crate::error::{InvError, Result};
use crate::graph::{backward_arcs, OrientedGraph, Vertex};

pub const DEFAULT_EXACT_LIMIT: usize = 20;

/// A feedback arc set given as the backward arcs of a vertex ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FasResult {
    pub size: usize,
    pub arcs: Vec<(Vertex, Vertex)>,
    pub ordering: Vec<Vertex>,
    pub exact: bool,
}

impl FasResult {
    fn from_ordering(d: &OrientedGraph, ordering: Vec<Vertex>, exact: bool) -> Self {
        let arcs = backward_arcs(d, &ordering);
        FasResult {
            size: arcs.len(),
            arcs,
            ordering,
            exact,
        }
    }
}

pub fn fas_exact(d: &OrientedGraph) -> Result<FasResult> {
    fas_exact_with_limit(d, DEFAULT_EXACT_LIMIT)
}

/// Minimum feedback arc set by dynamic programming over vertex subsets:
/// `best[S]` is the fewest backward arcs among orderings that place `S` first.
pub fn fas_exact_with_limit(d: &OrientedGraph, limit: usize) -> Result<FasResult> {
    let n = d.order();
    if n > limit || n > 30 {
        return Err(InvError::Capacity(format!(
            "exact FAS limited to {} vertices, got {n}; use fas_heuristic",
            limit.min(30)
        )));
    }
    let out: Vec<u32> = (0..n)
        .map(|u| d.out_neighbors(u).fold(0u32, |m, v| m | 1 << v))
        .collect();
    let full = (1usize << n) - 1;
    let mut best = vec![u16::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let mut rest = s;
        let mut b = u16::MAX;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            // v goes last among S: its arcs into the earlier part are backward
            let cost = best[prev] + (out[v] & prev as u32).count_ones() as u16;
            b = b.min(cost);
        }
        best[s] = b;
    }
    let mut ordering = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let mut rest = s;
        loop {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            if best[prev] + (out[v] & prev as u32).count_ones() as u16 == best[s] {
                ordering.push(v);
                s = prev;
                break;
            }
        }
    }
    ordering.reverse();
    let res = FasResult::from_ordering(d, ordering, true);
    debug_assert_eq!(res.size, best[full] as usize);
    Ok(res)
}

/// Exact below the default limit, heuristic above it.
pub fn fas_best_effort(d: &OrientedGraph) -> FasResult {
    fas_exact(d).unwrap_or_else(|_| fas_heuristic(d))
}

/// Ordering local search: start from vertices sorted by out-degree minus
/// in-degree, then move single vertices to their cheapest position until no
/// move lowers the backward-arc count. No approximation ratio is claimed.
pub fn fas_heuristic(d: &OrientedGraph) -> FasResult {
    let n = d.order();
    let mut ordering: Vec<Vertex> = (0..n).collect();
    let score = |v: Vertex| d.out_degree(v) as i64 - d.in_degree(v) as i64;
    let scores: Vec<i64> = (0..n).map(score).collect();
    ordering.sort_by_key(|&v| (-scores[v], v));
    local_search(d, &mut ordering);
    FasResult::from_ordering(d, ordering, false)
}

/// Runs single-vertex moves to a fixpoint. Returns the number of moves made.
pub fn local_search(d: &OrientedGraph, ordering: &mut Vec<Vertex>) -> usize {
    let n = ordering.len();
    let mut moves = 0;
    loop {
        let mut improved = false;
        for idx in 0..n {
            let v = ordering[idx];
            let cur = ordering.iter().position(|&w| w == v).unwrap();
            let rest: Vec<Vertex> = ordering.iter().copied().filter(|&w| w != v).collect();
            // cost of putting v before rest[i]; start with every in-arc backward
            let mut cost: i64 = rest.iter().filter(|&&w| d.has_arc(w, v)).count() as i64;
            let mut best = (cost, 0usize);
            let mut at_cur = if cur == 0 { cost } else { i64::MAX };
            for (i, &w) in rest.iter().enumerate() {
                cost += d.has_arc(v, w) as i64 - d.has_arc(w, v) as i64;
                if cost < best.0 {
                    best = (cost, i + 1);
                }
                if i + 1 == cur {
                    at_cur = cost;
                }
            }
            if best.0 < at_cur {
                let mut next = rest;
                next.insert(best.1, v);
                *ordering = next;
                improved = true;
                moves += 1;
            }
        }
        if !improved {
            return moves;
        }
    }
}

/// Whether `ordering` is a fixpoint of [`local_search`].
pub fn is_local_optimum(d: &OrientedGraph, ordering: &[Vertex]) -> bool {
    let mut o = ordering.to_vec();
    local_search(d, &mut o) == 0
}

/// Size of a greedy packing of arc-disjoint directed triangles, a lower bound
/// on the minimum feedback arc set size.
pub fn triangle_packing_lower_bound(d: &OrientedGraph) -> usize {
    let n = d.order();
    let mut used = OrientedGraph::empty(n);
    let mut count = 0;
    for a in 0..n {
        for b in d.out_neighbors(a).collect::<Vec<_>>() {
            if used.has_arc(a, b) {
                continue;
            }
            let found = d
                .out_neighbors(b)
                .find(|&c| d.has_arc(c, a) && !used.has_arc(b, c) && !used.has_arc(c, a));
            if let Some(c) = found {
                for (x, y) in [(a, b), (b, c), (c, a)] {
                    used.add_arc(x, y).expect("arcs of d are digon-free");
                }
                count += 1;
            }
        }
    }
    count
}
