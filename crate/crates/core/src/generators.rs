//! Canonical tournaments, random instances, and the hardness constructions:
//! multicoloured clique to single inversion, special hypergraph
//! 3-edge-colouring to tournament inversion, and the hypergraph lift.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, InvError, Result};
use crate::graph::{apply_family, InversionFamily, OrientedGraph, SizeMode, Tournament, Vertex};

/// `TT_n`: arcs `i -> j` for every `i < j`.
pub fn transitive_tournament(n: usize) -> Tournament {
    let mut g = OrientedGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            g.add_arc(i, j).expect("fresh pair");
        }
    }
    Tournament::from_graph_unchecked(g)
}

/// `T_n`: `TT_n` with the arc between the first and last vertex reversed.
pub fn reversed_arc_tournament(n: usize) -> Result<Tournament> {
    if n < 2 {
        return input(format!("T_n needs n >= 2, got {n}"));
    }
    let mut g = transitive_tournament(n).into_graph();
    g.flip_pair(0, n - 1);
    Ok(Tournament::from_graph_unchecked(g))
}

/// Rotational tournament on `2k+1` vertices with `i -> i+j` for `j in 1..=k`.
pub fn diregular_tournament(k: usize) -> Result<Tournament> {
    if k == 0 {
        return input("diregular tournament needs k >= 1");
    }
    let n = 2 * k + 1;
    let mut g = OrientedGraph::empty(n);
    for i in 0..n {
        for j in 1..=k {
            g.add_arc(i, (i + j) % n)?;
        }
    }
    Ok(Tournament::from_graph_unchecked(g))
}

pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = OrientedGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            g.add_arc(a, b).expect("fresh pair");
        }
    }
    Tournament::from_graph_unchecked(g)
}

/// Each unordered pair carries an arc with probability `density`, oriented
/// uniformly at random.
pub fn random_oriented_graph(n: usize, density: f64, seed: u64) -> Result<OrientedGraph> {
    if !(0.0..=1.0).contains(&density) {
        return input(format!("density must lie in [0, 1], got {density}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = OrientedGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                g.add_arc(a, b)?;
            }
        }
    }
    Ok(g)
}

/// Vertex count plus a multiset of hyperedges. Hyperedges are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphJson", into = "HypergraphJson")]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphJson {
    pub n: usize,
    pub edges: Vec<Vec<Vertex>>,
}

impl TryFrom<HypergraphJson> for Hypergraph {
    type Error = InvError;
    fn try_from(j: HypergraphJson) -> Result<Self> {
        Hypergraph::new(j.n, j.edges)
    }
}

impl From<Hypergraph> for HypergraphJson {
    fn from(h: Hypergraph) -> Self {
        HypergraphJson { n: h.n, edges: h.edges }
    }
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return input(format!("hyperedge #{i}: vertex {v} out of range for n={n}"));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return input(format!("hyperedge #{i} repeats a vertex"));
            }
            out.push(e);
        }
        Ok(Hypergraph { n, edges: out })
    }

    /// A simple graph read as a 2-uniform hypergraph.
    pub fn from_graph_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        Hypergraph::new(n, edges.iter().map(|&(a, b)| vec![a, b]).collect())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count()
    }

    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }
}

/// `K_{3,3}` with sides `{0,1,2}` and `{3,4,5}`, as a 2-uniform hypergraph.
pub fn k33() -> Hypergraph {
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| vec![a, b])).collect();
    Hypergraph::new(6, edges).expect("valid")
}

/// First failed condition of p-specialness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialViolation {
    /// S1
    NotUniform { edge: usize, size: usize },
    /// S2
    NotCubic { vertex: Vertex, degree: usize },
    /// S3
    SharedPair { edges: (usize, usize), common: Vec<Vertex> },
    /// S4
    OpenTriangle { triple: [Vertex; 3] },
}

impl fmt::Display for SpecialViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialViolation::NotUniform { edge, size } => {
                write!(f, "S1: hyperedge #{edge} has size {size}")
            }
            SpecialViolation::NotCubic { vertex, degree } => {
                write!(f, "S2: vertex {vertex} lies in {degree} hyperedges")
            }
            SpecialViolation::SharedPair { edges, common } => {
                write!(f, "S3: hyperedges #{} and #{} share {:?}", edges.0, edges.1, common)
            }
            SpecialViolation::OpenTriangle { triple } => {
                write!(f, "S4: pairs of {triple:?} are covered but the triple is not")
            }
        }
    }
}

/// Checks uniformity, 3-regularity, pairwise intersections and triangle
/// closure in that order, stopping at the first violation.
pub fn validate_special(h: &Hypergraph, p: usize) -> std::result::Result<(), SpecialViolation> {
    for (i, e) in h.edges.iter().enumerate() {
        if e.len() != p {
            return Err(SpecialViolation::NotUniform { edge: i, size: e.len() });
        }
    }
    let inc = h.incidence();
    for (v, es) in inc.iter().enumerate() {
        if es.len() != 3 {
            return Err(SpecialViolation::NotCubic { vertex: v, degree: es.len() });
        }
    }
    for (a, ea) in h.edges.iter().enumerate() {
        for (b, eb) in h.edges.iter().enumerate().skip(a + 1) {
            let common: Vec<Vertex> = ea.iter().copied().filter(|v| eb.binary_search(v).is_ok()).collect();
            if common.len() > 1 {
                return Err(SpecialViolation::SharedPair { edges: (a, b), common });
            }
        }
    }
    let n = h.n;
    let mut covered = vec![vec![false; n]; n];
    for e in &h.edges {
        for &a in e {
            for &b in e {
                covered[a][b] = a != b;
            }
        }
    }
    for v in 0..n {
        for w in v + 1..n {
            if !covered[v][w] {
                continue;
            }
            for x in w + 1..n {
                if covered[v][x] && covered[w][x] {
                    let closed = inc[v].iter().any(|&i| {
                        let e = &h.edges[i];
                        e.binary_search(&w).is_ok() && e.binary_search(&x).is_ok()
                    });
                    if !closed {
                        return Err(SpecialViolation::OpenTriangle { triple: [v, w, x] });
                    }
                }
            }
        }
    }
    Ok(())
}

/// True when hyperedges sharing a vertex get different colours.
pub fn is_proper_colouring(h: &Hypergraph, colours: &[usize]) -> bool {
    if colours.len() != h.edges.len() {
        return false;
    }
    h.incidence().iter().all(|es| {
        let mut seen = BTreeSet::new();
        es.iter().all(|&i| seen.insert(colours[i]))
    })
}

/// A proper 3-edge-colouring with colours `0..3`, found by backtracking over
/// the hyperedges in order.
pub fn three_edge_colouring(h: &Hypergraph) -> Option<Vec<usize>> {
    let inc = h.incidence();
    let m = h.edges.len();
    let mut colours = vec![usize::MAX; m];
    fn go(i: usize, h: &Hypergraph, inc: &[Vec<usize>], colours: &mut Vec<usize>) -> bool {
        if i == colours.len() {
            return true;
        }
        for c in 0..3 {
            let clash = h.edges[i]
                .iter()
                .any(|&v| inc[v].iter().any(|&j| j < i && colours[j] == c));
            if !clash {
                colours[i] = c;
                if go(i + 1, h, inc, colours) {
                    return true;
                }
            }
        }
        colours[i] = usize::MAX;
        false
    }
    go(0, h, &inc, &mut colours).then_some(colours)
}

/// Output of [`hypergraph_lift`].
#[derive(Clone, Debug, Serialize)]
pub struct Lift {
    pub hypergraph: Hypergraph,
    pub p: usize,
    pub names: Vec<String>,
}

/// Lifts a (p−1)-special hypergraph to a p-special one with `p²(n + m)`
/// vertices.
///
/// Vertex `v_{i,j}` sits at `(i·p + j)·n + v` and `x^e_{i,j}` at
/// `p²n + (i·p + j)·m + e`. Hyperedges come as all `e_{i,j}` (index
/// `(i·p + j)·m + e`), then the rows `f_{e,i}`, then the columns `f'_{e,j}`.
pub fn hypergraph_lift(h: &Hypergraph) -> Result<Lift> {
    let q = match h.edges.first() {
        Some(e) => e.len(),
        None => return input("cannot lift a hypergraph without hyperedges"),
    };
    let p = q + 1;
    if p < 3 {
        return input(format!("lift needs hyperedges of size >= 2, got {q}"));
    }
    if let Err(v) = validate_special(h, q) {
        return input(format!("input is not {q}-special: {v}"));
    }
    let (n, m) = (h.n, h.edges.len());
    let vx = |i: usize, j: usize, v: usize| (i * p + j) * n + v;
    let xx = |i: usize, j: usize, e: usize| p * p * n + (i * p + j) * m + e;
    let mut edges = Vec::with_capacity(p * p * m + 2 * p * m);
    for i in 0..p {
        for j in 0..p {
            for (e, he) in h.edges.iter().enumerate() {
                let mut s: Vec<Vertex> = he.iter().map(|&v| vx(i, j, v)).collect();
                s.push(xx(i, j, e));
                edges.push(s);
            }
        }
    }
    for e in 0..m {
        for i in 0..p {
            edges.push((0..p).map(|j| xx(i, j, e)).collect());
        }
    }
    for e in 0..m {
        for j in 0..p {
            edges.push((0..p).map(|i| xx(i, j, e)).collect());
        }
    }
    let total = p * p * (n + m);
    let mut names = vec![String::new(); total];
    for i in 0..p {
        for j in 0..p {
            for v in 0..n {
                names[vx(i, j, v)] = format!("v{v}_{i},{j}");
            }
            for e in 0..m {
                names[xx(i, j, e)] = format!("x{e}_{i},{j}");
            }
        }
    }
    Ok(Lift {
        hypergraph: Hypergraph::new(total, edges)?,
        p,
        names,
    })
}

/// Moves a 3-edge-colouring of `h` onto its lift: `e_{i,j}` keeps the colour
/// of `e`, rows and columns of `e` take the two remaining colours.
pub fn lift_colouring(h: &Hypergraph, colours: &[usize]) -> Result<Vec<usize>> {
    let m = h.edges.len();
    if colours.len() != m || colours.iter().any(|&c| c > 2) {
        return input("colouring must give one colour in 0..3 per hyperedge");
    }
    let p = h.edges.first().map_or(0, |e| e.len()) + 1;
    let mut out = Vec::with_capacity(p * p * m + 2 * p * m);
    for _ in 0..p * p {
        out.extend_from_slice(colours);
    }
    let others = |c: usize| ((c + 1) % 3, (c + 2) % 3);
    for &c in colours {
        out.extend(std::iter::repeat_n(others(c).0, p));
    }
    for &c in colours {
        out.extend(std::iter::repeat_n(others(c).1, p));
    }
    Ok(out)
}

/// An undirected graph with a partition of its vertices into colour classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MccInstance {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub parts: Vec<Vec<Vertex>>,
}

impl MccInstance {
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        for (i, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return input(format!("part {i} is empty"));
            }
            for &v in part {
                if v >= self.n {
                    return input(format!("part {i}: vertex {v} out of range"));
                }
                if seen[v] {
                    return input(format!("vertex {v} appears in two parts"));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return input(format!("vertex {v} is in no part"));
        }
        for &(a, b) in &self.edges {
            if a >= self.n || b >= self.n || a == b {
                return input(format!("bad edge ({a},{b})"));
            }
        }
        Ok(())
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    /// Index choices `r_i`, lexicographically first, picking a clique with
    /// one vertex per part.
    pub fn bruteforce(&self) -> Result<Option<Vec<usize>>> {
        self.validate()?;
        let adj = self.adjacency();
        let k = self.parts.len();
        let mut choice = vec![0usize; k];
        fn go(i: usize, inst: &MccInstance, adj: &[Vec<bool>], choice: &mut Vec<usize>) -> bool {
            if i == choice.len() {
                return true;
            }
            for r in 0..inst.parts[i].len() {
                let v = inst.parts[i][r];
                if (0..i).all(|h| adj[inst.parts[h][choice[h]]][v]) {
                    choice[i] = r;
                    if go(i + 1, inst, adj, choice) {
                        return true;
                    }
                }
            }
            false
        }
        Ok(go(0, self, &adj, &mut choice).then_some(choice))
    }
}

/// Output of [`mcc_reduction`].
#[derive(Clone, Debug, Serialize)]
pub struct MccReduction {
    pub graph: OrientedGraph,
    pub p: usize,
    pub names: Vec<String>,
    /// `w_i^j` for part `i`, index `j`.
    pub w: Vec<Vec<Vertex>>,
    /// `x_i^j` for part `i`, index `j`.
    pub x: Vec<Vec<Vertex>>,
    /// Gadget vertices with their non-adjacent pair `((i1, j1), (i2, j2))`.
    pub z: Vec<(Vertex, (usize, usize), (usize, usize))>,
}

impl MccReduction {
    /// The `2k`-set `{w_i^{r_i}, x_i^{r_i}}` for a choice of one index per part.
    pub fn choice_set(&self, choice: &[usize]) -> Result<Vec<Vertex>> {
        if choice.len() != self.w.len() || choice.iter().zip(&self.w).any(|(&r, w)| r >= w.len()) {
            return input("choice must give one valid index per part");
        }
        let mut s: Vec<Vertex> = choice
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| [self.w[i][r], self.x[i][r]])
            .collect();
        s.sort_unstable();
        Ok(s)
    }
}

/// Builds `(D, 2k)`: a directed cycle `w^1 x^1 w^2 … x^q w^1` per part, laid
/// out part by part with `w^j` at even and `x^j` at odd offsets, followed by
/// one vertex `z_f` per cross-part non-adjacent pair `f` in lexicographic
/// `(i1, j1, i2, j2)` order with arcs `w→z_f`, `z_f→w'` and `w→w'`.
pub fn mcc_reduction(inst: &MccInstance) -> Result<MccReduction> {
    inst.validate()?;
    if let Some((i, part)) = inst.parts.iter().enumerate().find(|(_, p)| p.len() < 2) {
        return input(format!(
            "part {i} has {} vertex; every part needs at least 2",
            part.len()
        ));
    }
    let adj = inst.adjacency();
    let mut w = Vec::new();
    let mut x = Vec::new();
    let mut base = 0;
    for part in &inst.parts {
        let q = part.len();
        w.push((0..q).map(|j| base + 2 * j).collect::<Vec<_>>());
        x.push((0..q).map(|j| base + 2 * j + 1).collect::<Vec<_>>());
        base += 2 * q;
    }
    let mut pairs = Vec::new();
    let k = inst.parts.len();
    for i1 in 0..k {
        for j1 in 0..inst.parts[i1].len() {
            for i2 in i1 + 1..k {
                for j2 in 0..inst.parts[i2].len() {
                    if !adj[inst.parts[i1][j1]][inst.parts[i2][j2]] {
                        pairs.push(((i1, j1), (i2, j2)));
                    }
                }
            }
        }
    }
    let total = base + pairs.len();
    let mut g = OrientedGraph::empty(total);
    let mut names = vec![String::new(); total];
    for (i, part) in inst.parts.iter().enumerate() {
        let q = part.len();
        for j in 0..q {
            g.add_arc(w[i][j], x[i][j])?;
            g.add_arc(x[i][j], w[i][(j + 1) % q])?;
            names[w[i][j]] = format!("w{i}_{j}");
            names[x[i][j]] = format!("x{i}_{j}");
        }
    }
    let mut z = Vec::with_capacity(pairs.len());
    for (f, &((i1, j1), (i2, j2))) in pairs.iter().enumerate() {
        let zf = base + f;
        g.add_arc(w[i1][j1], zf)?;
        g.add_arc(zf, w[i2][j2])?;
        g.add_arc(w[i1][j1], w[i2][j2])?;
        names[zf] = format!("z{i1}_{j1}/{i2}_{j2}");
        z.push((zf, (i1, j1), (i2, j2)));
    }
    Ok(MccReduction {
        graph: g,
        p: 2 * k,
        names,
        w,
        x,
        z,
    })
}

/// Output of [`shec_reduction`].
#[derive(Clone, Debug, Serialize)]
pub struct ShecReduction {
    pub tournament: Tournament,
    pub p: usize,
    pub k: usize,
    pub names: Vec<String>,
    /// First vertex of each blocker block `W_i`; every block has `pk+1` vertices.
    pub w_starts: Vec<Vertex>,
    pub z: [Vertex; 3],
}

impl ShecReduction {
    /// The family `e ∪ {z_φ(e)}` for a 3-edge-colouring `φ` of the source.
    pub fn colouring_family(&self, h: &Hypergraph, colours: &[usize]) -> Result<InversionFamily> {
        if colours.len() != h.edges.len() || colours.iter().any(|&c| c > 2) {
            return input("colouring must give one colour in 0..3 per hyperedge");
        }
        let sets = h
            .edges
            .iter()
            .zip(colours)
            .map(|(e, &c)| {
                let mut s = e.clone();
                s.push(self.z[c]);
                s
            })
            .collect();
        Ok(InversionFamily::with_sets(SizeMode::Exact(self.p), sets))
    }
}

/// Builds the tournament whose `k = |E(H)|` inversions of size `p` exist iff
/// the (p−1)-special hypergraph `H` is 3-edge-colourable.
///
/// Layout: `V(H)`, then blocks `W_0..W_{n−1}` of `pk+1` vertices, then
/// `z_0, z_1, z_2`.
pub fn shec_reduction(h: &Hypergraph, p: usize) -> Result<ShecReduction> {
    if p < 2 {
        return input(format!("p must be at least 2, got {p}"));
    }
    if let Err(v) = validate_special(h, p - 1) {
        return input(format!("hypergraph is not {}-special: {v}", p - 1));
    }
    let n = h.n;
    let k = h.edges.len();
    let block = p * k + 1;
    let w_start = |i: usize| n + i * block;
    let z0 = n + n * block;
    let total = z0 + 3;
    let mut co = vec![vec![false; n]; n];
    for e in &h.edges {
        for &a in e {
            for &b in e {
                co[a][b] = a != b;
            }
        }
    }
    let mut g = OrientedGraph::empty(total);
    for i in 0..n {
        for j in i + 1..n {
            if co[i][j] {
                g.add_arc(j, i)?;
            } else {
                g.add_arc(i, j)?;
            }
        }
    }
    for i in 0..n {
        let wi = w_start(i)..w_start(i) + block;
        for a in wi.clone() {
            for b in a + 1..wi.end {
                g.add_arc(a, b)?;
            }
            for l in 0..n {
                if l < i {
                    g.add_arc(l, a)?;
                } else {
                    g.add_arc(a, l)?;
                }
            }
            for b in wi.end..z0 {
                g.add_arc(a, b)?;
            }
            for z in z0..total {
                g.add_arc(z, a)?;
            }
        }
    }
    for v in 0..n {
        for z in z0..total {
            g.add_arc(v, z)?;
        }
    }
    g.add_arc(z0, z0 + 1)?;
    g.add_arc(z0, z0 + 2)?;
    g.add_arc(z0 + 1, z0 + 2)?;
    let mut names = Vec::with_capacity(total);
    names.extend((0..n).map(|v| format!("v{v}")));
    for i in 0..n {
        names.extend((0..block).map(|t| format!("w{i}_{t}")));
    }
    names.extend((0..3).map(|c| format!("z{c}")));
    Ok(ShecReduction {
        tournament: Tournament::from_graph_unchecked(g),
        p,
        k,
        names,
        w_starts: (0..n).map(w_start).collect(),
        z: [z0, z0 + 1, z0 + 2],
    })
}

/// Result of [`triangle_cycle_witness_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// Index of a family member containing both ends of the arc.
    Covered(usize),
    /// A bundle cycle that is still a directed cycle after the inversions.
    Residual(Vec<Vertex>),
}

impl Witness {
    pub fn covered(&self) -> bool {
        matches!(self, Witness::Covered(_))
    }
}

/// Given at least `pk+1` directed cycles through the arc `uv` that pairwise
/// meet exactly in `{u, v}`, and a `(≤p)`-family of `k` sets, either some set
/// contains both `u` and `v`, or one of the cycles survives the inversions.
pub fn triangle_cycle_witness_check(
    d: &OrientedGraph,
    u: Vertex,
    v: Vertex,
    cycles: &[Vec<Vertex>],
    family: &InversionFamily,
    p: usize,
) -> Result<Witness> {
    let n = d.order();
    if u >= n || v >= n || !d.has_arc(u, v) {
        return input(format!("({u},{v}) is not an arc"));
    }
    if cycles.is_empty() {
        return input("empty cycle bundle");
    }
    family.validate(n)?;
    if family.sets.iter().any(|s| s.len() > p) {
        return Err(InvError::Mode(format!("family has a set larger than {p}")));
    }
    let k = family.len();
    if cycles.len() < p * k + 1 {
        return input(format!(
            "bundle has {} cycles, need at least pk+1 = {}",
            cycles.len(),
            p * k + 1
        ));
    }
    let mut owner = vec![usize::MAX; n];
    for (ci, c) in cycles.iter().enumerate() {
        let len = c.len();
        if len < 3 || !c.iter().all(|&x| x < n) {
            return input(format!("cycle #{ci} is not a cycle of length >= 3 in range"));
        }
        if !(0..len).any(|t| c[t] == u && c[(t + 1) % len] == v) {
            return input(format!("cycle #{ci} does not use the arc ({u},{v})"));
        }
        if !(0..len).all(|t| d.has_arc(c[t], c[(t + 1) % len])) {
            return input(format!("cycle #{ci} is not a directed cycle of the graph"));
        }
        for &x in c {
            if x == u || x == v {
                continue;
            }
            if owner[x] != usize::MAX {
                return input(format!("vertex {x} lies on two bundle cycles or repeats"));
            }
            owner[x] = ci;
        }
        if c.iter().filter(|&&x| x == u || x == v).count() != 2 {
            return input(format!("cycle #{ci} repeats u or v"));
        }
    }
    if let Some(i) = family
        .sets
        .iter()
        .position(|s| s.binary_search(&u).is_ok() && s.binary_search(&v).is_ok())
    {
        return Ok(Witness::Covered(i));
    }
    let after = apply_family(d, family)?;
    let touched: BTreeSet<Vertex> = family.sets.iter().flatten().copied().collect();
    for c in cycles {
        let free = c.iter().all(|&x| x == u || x == v || !touched.contains(&x));
        let len = c.len();
        if free && (0..len).all(|t| after.has_arc(c[t], c[(t + 1) % len])) {
            return Ok(Witness::Residual(c.clone()));
        }
    }
    Err(InvError::Input(
        "no surviving cycle found; bundle precondition must be violated".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_acyclic, out_even_count};
    use crate::oracle::single_inversion_decycles;

    #[test]
    fn canonical_tournaments() {
        let t3 = transitive_tournament(3);
        assert_eq!(t3.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let t4 = reversed_arc_tournament(4).unwrap();
        assert!(t4.has_arc(3, 0));
        assert_eq!(crate::graph::backward_arcs(&t4, &[0, 1, 2, 3]), vec![(3, 0)]);
        for n in (4..=12).step_by(2) {
            assert_eq!(out_even_count(&reversed_arc_tournament(n).unwrap()), n / 2);
        }
        assert!(reversed_arc_tournament(1).is_err());
    }

    #[test]
    fn diregular() {
        let c3 = diregular_tournament(1).unwrap();
        assert_eq!(c3.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        let t = diregular_tournament(3).unwrap();
        assert!((0..7).all(|v| t.out_degree(v) == 3));
        assert_eq!(out_even_count(&t), 0);
    }

    #[test]
    fn random_generators() {
        assert_eq!(random_tournament(9, 4), random_tournament(9, 4));
        assert!(random_tournament(9, 4).is_tournament());
        assert!(random_oriented_graph(8, 1.0, 2).unwrap().is_tournament());
        assert_eq!(random_oriented_graph(8, 0.0, 2).unwrap().arc_count(), 0);
        assert!(random_oriented_graph(8, 1.5, 2).is_err());
    }

    #[test]
    fn special_validation() {
        assert_eq!(validate_special(&k33(), 2), Ok(()));
        let k4 = Hypergraph::from_graph_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(
            validate_special(&k4, 2),
            Err(SpecialViolation::OpenTriangle { triple: [0, 1, 2] })
        ));
        let four = Hypergraph::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(matches!(validate_special(&four, 3), Err(SpecialViolation::NotUniform { .. })));
    }

    #[test]
    fn k33_colouring_and_lift() {
        let h = k33();
        let phi = three_edge_colouring(&h).unwrap();
        assert!(is_proper_colouring(&h, &phi));
        let lift = hypergraph_lift(&h).unwrap();
        assert_eq!(lift.hypergraph.order(), 135);
        assert_eq!(validate_special(&lift.hypergraph, 3), Ok(()));
        let phi2 = lift_colouring(&h, &phi).unwrap();
        assert!(is_proper_colouring(&lift.hypergraph, &phi2));
    }

    #[test]
    fn shec_k33() {
        let h = k33();
        let r = shec_reduction(&h, 3).unwrap();
        assert_eq!(r.tournament.order(), 177);
        assert_eq!(r.k, 9);
        let fam = r.colouring_family(&h, &three_edge_colouring(&h).unwrap()).unwrap();
        assert_eq!(fam.len(), 9);
        assert!(fam.sets.iter().all(|s| s.len() == 3));
        assert!(is_acyclic(&apply_family(&r.tournament, &fam).unwrap()));
        // an improper colouring leaves a cycle
        let bad = r.colouring_family(&h, &[0; 9]).unwrap();
        assert!(!is_acyclic(&apply_family(&r.tournament, &bad).unwrap()));
    }

    #[test]
    fn mcc_small() {
        let inst = MccInstance {
            n: 4,
            edges: vec![(0, 2), (0, 3), (1, 2), (1, 3)],
            parts: vec![vec![0, 1], vec![2, 3]],
        };
        let r = mcc_reduction(&inst).unwrap();
        assert_eq!(r.p, 4);
        assert_eq!(r.graph.order(), 8);
        assert!(single_inversion_decycles(&r.graph, SizeMode::AtMost(4)).unwrap().is_some());
        let x = r.choice_set(&inst.bruteforce().unwrap().unwrap()).unwrap();
        assert!(is_acyclic(&crate::graph::invert(&r.graph, &x).unwrap()));
        let single = MccInstance {
            n: 3,
            edges: vec![],
            parts: vec![vec![0], vec![1, 2]],
        };
        assert!(mcc_reduction(&single).is_err());
    }

    #[test]
    fn witness_bundle() {
        // arc 0->1 closed by three triangles through 2, 3, 4
        let mut d = OrientedGraph::from_arcs(5, [(0, 1)]).unwrap();
        for c in 2..5 {
            d.add_arc(1, c).unwrap();
            d.add_arc(c, 0).unwrap();
        }
        let cycles: Vec<Vec<Vertex>> = (2..5).map(|c| vec![0, 1, c]).collect();
        let fam = InversionFamily::with_sets(SizeMode::AtMost(2), vec![vec![1, 2]]);
        match triangle_cycle_witness_check(&d, 0, 1, &cycles, &fam, 2).unwrap() {
            Witness::Residual(c) => assert_eq!(c, vec![0, 1, 3]),
            w => panic!("{w:?}"),
        }
        let fam = InversionFamily::with_sets(SizeMode::AtMost(2), vec![vec![0, 1]]);
        assert_eq!(
            triangle_cycle_witness_check(&d, 0, 1, &cycles, &fam, 2).unwrap(),
            Witness::Covered(0)
        );
        assert!(triangle_cycle_witness_check(&d, 0, 1, &[], &fam, 2).is_err());
    }
}
