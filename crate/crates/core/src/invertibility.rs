//! Deciding whether an oriented graph can be made acyclic by inversions of
//! size exactly `p`.

use std::collections::VecDeque;

use crate::error::{input, InvError, Result};
use crate::f2::{check_range, encode_tournament, signatures_equal};
use crate::graph::{
    acyclic_masks, is_acyclic, out_even_count, out_masks, OrientedGraph, Tournament, Vertex,
};

pub const DEFAULT_PUSH_LIMIT: usize = 22;

/// An undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl SimpleGraph {
    /// Edges are normalised to `(min, max)` and sorted; loops, repeats and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut es: Vec<(Vertex, Vertex)> = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return input(format!("edge ({a},{b}) out of range for n={n}"));
            }
            if a == b {
                return input(format!("loop at {a}"));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return input("repeated edge");
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &es {
            adj[a].push(b);
            adj[b].push(a);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(SimpleGraph { n, edges: es, adj })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    /// Underlying graph of `d`.
    pub fn underlying(d: &OrientedGraph) -> Self {
        SimpleGraph::new(d.order(), d.edges()).expect("underlying graph of an oriented graph")
    }

    /// Pairs not adjacent in `d`.
    pub fn complement_of(d: &OrientedGraph) -> Self {
        SimpleGraph::new(d.order(), d.non_edges()).expect("non-edges are simple")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// `V1` holds the vertices of even out-degree, `V2` the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityBipartition {
    pub v1: Vec<Vertex>,
    pub v2: Vec<Vertex>,
}

impl ParityBipartition {
    pub fn of(d: &OrientedGraph) -> Self {
        let (v1, v2) = (0..d.order()).partition(|&v| d.out_degree(v).is_multiple_of(2));
        ParityBipartition { v1, v2 }
    }

    /// Membership table for `V1`; errors unless `V1`, `V2` partition `0..n`.
    pub fn in_v1(&self, n: usize) -> Result<Vec<bool>> {
        let mut side = vec![None; n];
        for (vs, flag) in [(&self.v1, true), (&self.v2, false)] {
            for &v in vs {
                if v >= n {
                    return input(format!("vertex {v} out of range for n={n}"));
                }
                if side[v].is_some() {
                    return input(format!("vertex {v} listed twice"));
                }
                side[v] = Some(flag);
            }
        }
        side.into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or_else(|| InvError::Input(format!("vertex {v} missing"))))
            .collect()
    }
}

/// Per-component range of achievable `γ` values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentBounds {
    pub vertices: Vec<Vertex>,
    pub edge_count: usize,
    pub lower: usize,
    pub upper: usize,
}

/// Even-out-degree vertices of `V1` plus odd-out-degree vertices of `V2`.
pub fn gamma(g: &OrientedGraph, part: &ParityBipartition) -> Result<usize> {
    let in_v1 = part.in_v1(g.order())?;
    Ok((0..g.order())
        .filter(|&v| g.out_degree(v).is_multiple_of(2) == in_v1[v])
        .count())
}

pub fn component_bounds(g: &SimpleGraph, part: &ParityBipartition) -> Result<Vec<ComponentBounds>> {
    let in_v1 = part.in_v1(g.order())?;
    Ok(g.components()
        .into_iter()
        .map(|comp| {
            let v1 = comp.iter().filter(|&&v| in_v1[v]).count();
            let e = comp.iter().map(|&v| g.neighbors(v).len()).sum::<usize>() / 2;
            let k = comp.len();
            ComponentBounds {
                lower: (v1 + e) % 2,
                upper: if (v1 + e + k) % 2 == 0 { k } else { k - 1 },
                vertices: comp,
                edge_count: e,
            }
        })
        .collect())
}

/// Whether some orientation of `g` has `γ = s`.
pub fn orientation_feasible(g: &SimpleGraph, part: &ParityBipartition, s: usize) -> Result<bool> {
    let bounds = component_bounds(g, part)?;
    let lo: usize = bounds.iter().map(|b| b.lower).sum();
    let hi: usize = bounds.iter().map(|b| b.upper).sum();
    Ok(lo <= s && s <= hi && (s - lo).is_multiple_of(2))
}

/// An orientation of `g` with `γ = s`.
pub fn construct_orientation(
    g: &SimpleGraph,
    part: &ParityBipartition,
    s: usize,
) -> Result<OrientedGraph> {
    if !orientation_feasible(g, part, s)? {
        return input(format!("no orientation reaches gamma = {s}"));
    }
    let n = g.order();
    let in_v1 = part.in_v1(n)?;
    let bounds = component_bounds(g, part)?;
    let mut spare = s - bounds.iter().map(|b| b.lower).sum::<usize>();

    let mut d = OrientedGraph::empty(n);
    for &(a, b) in g.edges() {
        d.add_arc(a, b)?;
    }
    for b in &bounds {
        let extra = spare.min(b.upper - b.lower);
        spare -= extra;
        let target = b.lower + extra;
        let mut in_x = vec![false; n];
        for &v in &b.vertices[..target] {
            in_x[v] = true;
        }
        loop {
            let bad: Vec<Vertex> = b
                .vertices
                .iter()
                .copied()
                .filter(|&v| (d.out_degree(v).is_multiple_of(2) == in_v1[v]) != in_x[v])
                .take(2)
                .collect();
            match bad[..] {
                [] => break,
                [x, y] => {
                    let path = shortest_path(g, x, y);
                    for w in path.windows(2) {
                        d.flip_pair(w[0], w[1]);
                    }
                }
                _ => unreachable!("non-good vertices come in pairs within a component"),
            }
        }
    }
    debug_assert_eq!(gamma(&d, part).ok(), Some(s));
    Ok(d)
}

fn shortest_path(g: &SimpleGraph, from: Vertex, to: Vertex) -> Vec<Vertex> {
    let mut prev = vec![usize::MAX; g.order()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in g.neighbors(u) {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Whether a family of `p`-sets maps `t1` to `t2`.
pub fn tournaments_equivalent(t1: &Tournament, t2: &Tournament, p: usize) -> Result<bool> {
    if t1.order() != t2.order() {
        return input("tournaments of different order");
    }
    signatures_equal(&encode_tournament(t1), &encode_tournament(t2), p)
}

pub fn tournament_invertible(t: &Tournament, p: usize) -> Result<bool> {
    let n = t.order();
    check_range(p, n)?;
    Ok(p.is_multiple_of(2) || out_even_count(t) == n.div_ceil(2))
}

/// Decides `(=p)`-invertibility of any oriented graph. The `n = p + 1` case
/// is NP-complete and falls back to [`pushable_bruteforce`].
pub fn oriented_graph_invertible(d: &OrientedGraph, p: usize) -> Result<bool> {
    let n = d.order();
    if p < 2 || p >= n {
        return Ok(is_acyclic(d));
    }
    if n == p + 1 {
        return pushable_bruteforce(d).map(|x| x.is_some());
    }
    if p.is_multiple_of(2) {
        return Ok(true);
    }
    let g = SimpleGraph::complement_of(d);
    orientation_feasible(&g, &ParityBipartition::of(d), n.div_ceil(2))
}

/// A tournament containing every arc of `d` that is `(=p)`-invertible.
pub fn extend_to_invertible_tournament(d: &OrientedGraph, p: usize) -> Result<Option<Tournament>> {
    let n = d.order();
    check_range(p, n)?;
    let extra = if p.is_multiple_of(2) {
        let g = SimpleGraph::complement_of(d);
        OrientedGraph::from_arcs(n, g.edges().iter().copied())?
    } else {
        let g = SimpleGraph::complement_of(d);
        let part = ParityBipartition::of(d);
        let s = n.div_ceil(2);
        if !orientation_feasible(&g, &part, s)? {
            return Ok(None);
        }
        construct_orientation(&g, &part, s)?
    };
    let mut t = d.clone();
    for (a, b) in extra.arcs() {
        t.add_arc(a, b)?;
    }
    let t = Tournament::try_from(t)?;
    debug_assert!(tournament_invertible(&t, p).unwrap());
    Ok(Some(t))
}

pub fn pushable_bruteforce(d: &OrientedGraph) -> Result<Option<Vec<Vertex>>> {
    pushable_bruteforce_with_limit(d, DEFAULT_PUSH_LIMIT)
}

/// A set `X` whose push makes `d` acyclic. `X` and its complement push to the
/// same graph, so only sets avoiding the last vertex are scanned.
pub fn pushable_bruteforce_with_limit(d: &OrientedGraph, limit: usize) -> Result<Option<Vec<Vertex>>> {
    let n = d.order();
    if n > limit || n > 63 {
        return Err(InvError::Capacity(format!(
            "pushing scan limited to {} vertices, got {n}",
            limit.min(63)
        )));
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let out = out_masks(d);
    let inn: Vec<u64> = (0..n)
        .map(|v| (0..n).filter(|&u| out[u] >> v & 1 == 1).fold(0, |m, u| m | 1 << u))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut pushed = vec![0u64; n];
    for x in 0..1u64 << (n - 1) {
        for v in 0..n {
            let same = if x >> v & 1 == 1 { x } else { full & !x };
            pushed[v] = (out[v] & same) | (inn[v] & !same & full);
        }
        if acyclic_masks(&pushed) {
            return Ok(Some((0..n).filter(|&v| x >> v & 1 == 1).collect()));
        }
    }
    Ok(None)
}
