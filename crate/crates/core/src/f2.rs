//! Linear algebra over F₂ on the space indexed by unordered vertex pairs.
//!
//! Coordinates are colexicographic: the pair `{i, j}` with `i < j` sits at
//! `j(j-1)/2 + i`. Vertices are 0-based; where the classical statements index
//! vertices `1..=n`, vertex `i` here corresponds to `i + 1` there, so the
//! per-vertex part of a signature covers vertices `0..n-1` and drops `n-1`.

use std::fmt;

use crate::error::{input, InvError, Result};
use crate::graph::{InversionFamily, OrientedGraph, SizeMode, Tournament, Vertex};

/// Dense bit vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitRow({s})")
    }
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Low 64 bits; only meaningful for rows of length at most 64.
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

#[inline]
pub fn pair_index(i: Vertex, j: Vertex) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    b * (b - 1) / 2 + a
}

/// Inverse of [`pair_index`].
pub fn pair_at(index: usize) -> (Vertex, Vertex) {
    let mut j = 1;
    while j * (j + 1) / 2 <= index {
        j += 1;
    }
    (index - j * (j - 1) / 2, j)
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(usize::MAX as u128) as usize
}

/// A vector of F₂^{C(n,2)}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairVector {
    n: usize,
    bits: BitRow,
}

impl PairVector {
    pub fn zero(n: usize) -> Self {
        PairVector {
            n,
            bits: BitRow::zeros(binom(n, 2)),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &BitRow {
        &self.bits
    }

    pub fn get(&self, i: Vertex, j: Vertex) -> bool {
        self.bits.get(pair_index(i, j))
    }

    pub fn set(&mut self, i: Vertex, j: Vertex, on: bool) {
        self.bits.set(pair_index(i, j), on);
    }

    pub fn toggle(&mut self, i: Vertex, j: Vertex) {
        self.bits.toggle(pair_index(i, j));
    }

    pub fn xor(&self, other: &PairVector) -> PairVector {
        assert_eq!(self.n, other.n, "pair vectors of different order");
        let mut out = self.clone();
        out.bits.xor_assign(&other.bits);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    /// Hex digits, most significant bit of the first digit = coordinate 0;
    /// the tail is zero-padded to a whole digit.
    pub fn to_hex(&self) -> String {
        let len = self.bits.len();
        (0..len.div_ceil(4))
            .map(|d| {
                let mut v = 0u32;
                for b in 0..4 {
                    let i = 4 * d + b;
                    if i < len && self.bits.get(i) {
                        v |= 8 >> b;
                    }
                }
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<PairVector> {
        let mut out = PairVector::zero(n);
        let len = out.bits.len();
        if hex.len() != len.div_ceil(4) {
            return input(format!(
                "hex pair vector for n={n} needs {} digits, got {}",
                len.div_ceil(4),
                hex.len()
            ));
        }
        for (d, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| InvError::Input(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if v & (8 >> b) != 0 {
                    let i = 4 * d + b;
                    if i >= len {
                        return input("nonzero padding bits in hex pair vector");
                    }
                    out.bits.set(i, true);
                }
            }
        }
        Ok(out)
    }
}

/// Bit `{i,j}` (`i < j`) is set iff the tournament has the backward arc `j -> i`.
pub fn encode_tournament(t: &Tournament) -> PairVector {
    encode_backward(t.as_graph())
}

/// Backward arcs of any oriented graph with respect to the natural order.
pub fn encode_backward(d: &OrientedGraph) -> PairVector {
    let mut u = PairVector::zero(d.order());
    for (a, b) in d.arcs() {
        if a > b {
            u.set(a, b, true);
        }
    }
    u
}

/// Bit `{i,j}` is set iff both `i` and `j` lie in `set`.
pub fn encode_set(set: &[Vertex], n: usize) -> Result<PairVector> {
    OrientedGraph::empty(n).check_set(set)?;
    let mut u = PairVector::zero(n);
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            u.set(i, j, true);
        }
    }
    Ok(u)
}

/// Out-degree parities, bit `v` = `d⁺(v) mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutParityProfile {
    pub bits: Vec<bool>,
}

impl OutParityProfile {
    pub fn of(d: &OrientedGraph) -> Self {
        OutParityProfile {
            bits: (0..d.order()).map(|v| d.out_degree(v) % 2 == 1).collect(),
        }
    }

    pub fn odd_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// The residue of `p` modulo 4 selects the invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Residue {
    Mod0,
    Mod1,
    Mod2,
    Mod3,
}

impl Residue {
    pub fn of(p: usize) -> Residue {
        match p % 4 {
            0 => Residue::Mod0,
            1 => Residue::Mod1,
            2 => Residue::Mod2,
            _ => Residue::Mod3,
        }
    }

    /// Number of signature bits for order `n`.
    pub fn width(self, n: usize) -> usize {
        match self {
            Residue::Mod2 => 0,
            Residue::Mod0 => 1,
            Residue::Mod3 => n - 1,
            Residue::Mod1 => n,
        }
    }
}

/// Image of a pair vector under the invariant map for `p mod 4`:
/// empty (2), total parity (0), per-vertex incident parities for vertices
/// `0..n-1` (3), or those followed by the total parity (1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiSignature {
    pub residue: Residue,
    pub bits: Vec<bool>,
}

impl PiSignature {
    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }
}

pub(crate) fn check_range(p: usize, n: usize) -> Result<()> {
    if p < 2 {
        return Err(InvError::UnsupportedRange(format!("p={p} below 2")));
    }
    if n < p + 2 {
        return Err(InvError::UnsupportedRange(format!(
            "n={n} below p+2={} for the algebraic characterization",
            p + 2
        )));
    }
    Ok(())
}

pub fn pi_signature(u: &PairVector, p: usize) -> Result<PiSignature> {
    let n = u.order();
    check_range(p, n)?;
    let residue = Residue::of(p);
    let per_vertex = |bits: &mut Vec<bool>| {
        for i in 0..n - 1 {
            let parity = (0..n).filter(|&j| j != i && u.get(i, j)).count() % 2 == 1;
            bits.push(parity);
        }
    };
    let total = u.count_ones() % 2 == 1;
    let mut bits = Vec::with_capacity(residue.width(n));
    match residue {
        Residue::Mod2 => {}
        Residue::Mod0 => bits.push(total),
        Residue::Mod3 => per_vertex(&mut bits),
        Residue::Mod1 => {
            per_vertex(&mut bits);
            bits.push(total);
        }
    }
    Ok(PiSignature { residue, bits })
}

pub fn signatures_equal(u1: &PairVector, u2: &PairVector, p: usize) -> Result<bool> {
    if u1.order() != u2.order() {
        return input("pair vectors of different order");
    }
    Ok(pi_signature(u1, p)? == pi_signature(u2, p)?)
}

/// Whether `u` lies in the span of all `encode_set(X)` with `|X| = p`.
pub fn span_member(u: &PairVector, p: usize) -> Result<bool> {
    Ok(pi_signature(u, p)?.is_zero())
}

/// Incremental Gaussian elimination that remembers, for every basis row, which
/// inserted generators it is the sum of.
#[derive(Clone, Debug)]
pub struct Eliminator {
    dim: usize,
    generators: usize,
    rows: Vec<(usize, BitRow, Vec<usize>)>,
}

impl Eliminator {
    pub fn new(dim: usize) -> Self {
        Eliminator {
            dim,
            generators: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn combo_xor(a: &mut Vec<usize>, b: &[usize]) {
        // both sorted; symmetric difference
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        *a = out;
    }

    /// Reduces `v` against the basis; returns the residual and the generators
    /// whose sum was subtracted.
    pub fn reduce(&self, v: &BitRow) -> (BitRow, Vec<usize>) {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = v.clone();
        let mut combo = Vec::new();
        for (pivot, row, c) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
                Self::combo_xor(&mut combo, c);
            }
        }
        (r, combo)
    }

    /// Inserts the next generator; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &BitRow) -> bool {
        let id = self.generators;
        self.generators += 1;
        let (r, mut combo) = self.reduce(v);
        match r.first_one() {
            Some(pivot) => {
                Self::combo_xor(&mut combo, &[id]);
                self.rows.push((pivot, r, combo));
                true
            }
            None => false,
        }
    }

    /// Generators summing to `v`, if `v` is in the span.
    pub fn express(&self, v: &BitRow) -> Option<Vec<usize>> {
        let (r, combo) = self.reduce(v);
        r.is_zero().then_some(combo)
    }
}

pub const DEFAULT_GENERATOR_LIMIT: usize = 100_000;

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<Vertex>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// A family of `p`-sets whose encodings sum to `u`, found by elimination over
/// all `C(n, p)` generators; `None` iff `u` is outside their span.
pub fn span_witness_bruteforce(u: &PairVector, p: usize) -> Result<Option<InversionFamily>> {
    span_witness_with_limit(u, p, DEFAULT_GENERATOR_LIMIT)
}

pub fn span_witness_with_limit(
    u: &PairVector,
    p: usize,
    limit: usize,
) -> Result<Option<InversionFamily>> {
    let n = u.order();
    let count = binom(n, p);
    if count > limit {
        return Err(InvError::Capacity(format!(
            "C({n},{p}) = {count} generators exceeds limit {limit}"
        )));
    }
    let sets: Vec<Vec<Vertex>> = k_subsets(n, p).collect();
    let mut elim = Eliminator::new(binom(n, 2));
    for s in &sets {
        elim.insert(encode_set(s, n)?.bits());
    }
    Ok(elim.express(u.bits()).map(|ids| {
        InversionFamily::with_sets(
            SizeMode::Exact(p),
            ids.into_iter().map(|i| sets[i].clone()).collect(),
        )
    }))
}

/// Restriction of `encode_set(set)` to the edges of the underlying graph,
/// coordinates in the order of `edges`.
pub(crate) fn restricted(set: &[Vertex], edge_index: &[Vec<Option<usize>>], m: usize) -> BitRow {
    let mut r = BitRow::zeros(m);
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            if let Some(e) = edge_index[i][j] {
                r.toggle(e);
            }
        }
    }
    r
}

pub(crate) fn edge_index_table(d: &OrientedGraph) -> (Vec<(Vertex, Vertex)>, Vec<Vec<Option<usize>>>) {
    let edges = d.edges();
    let n = d.order();
    let mut idx = vec![vec![None; n]; n];
    for (e, &(i, j)) in edges.iter().enumerate() {
        idx[i][j] = Some(e);
        idx[j][i] = Some(e);
    }
    (edges, idx)
}

/// A sub-family of `family` with the same net effect on `d` and at most
/// `min(|family|, |E(UG(d))|)` members: only the edges of `d` are coordinates,
/// and the net flip vector is re-expressed over an independent subset.
pub fn minimize_family(d: &OrientedGraph, family: &InversionFamily) -> Result<InversionFamily> {
    family.validate(d.order())?;
    let (edges, idx) = edge_index_table(d);
    let m = edges.len();
    let vectors: Vec<BitRow> = family.sets.iter().map(|s| restricted(s, &idx, m)).collect();
    let mut target = BitRow::zeros(m);
    let mut elim = Eliminator::new(m);
    for v in &vectors {
        target.xor_assign(v);
        elim.insert(v);
    }
    // insert() numbers generators in order, so ids index into `family.sets`
    let ids = elim
        .express(&target)
        .expect("the net flip vector is a sum of the generators");
    Ok(InversionFamily {
        mode: family.mode,
        sets: ids.into_iter().map(|i| family.sets[i].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_family, invert};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tournament(n: usize, rng: &mut ChaCha8Rng) -> Tournament {
        let mut g = OrientedGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_arc(i, j).unwrap()
                } else {
                    g.add_arc(j, i).unwrap()
                }
            }
        }
        Tournament::try_from(g).unwrap()
    }

    fn random_set(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        (0..n).filter(|_| rng.gen_bool(0.5)).collect()
    }

    #[test]
    fn pair_index_is_colex_and_invertible() {
        assert_eq!(pair_index(0, 1), 0);
        assert_eq!(pair_index(0, 2), 1);
        assert_eq!(pair_index(1, 2), 2);
        assert_eq!(pair_index(3, 0), 3);
        for k in 0..200 {
            let (i, j) = pair_at(k);
            assert!(i < j);
            assert_eq!(pair_index(i, j), k);
        }
    }

    #[test]
    fn encode_set_examples() {
        assert!(encode_set(&[], 5).unwrap().is_zero());
        assert!(encode_set(&[3], 5).unwrap().is_zero());
        let u = encode_set(&[0, 1], 3).unwrap();
        assert_eq!(u.bits().ones().collect::<Vec<_>>(), vec![pair_index(0, 1)]);
        assert_eq!(encode_set(&[1, 3, 4, 6], 8).unwrap().count_ones(), 6);
        assert!(encode_set(&[0, 9], 5).is_err());
    }

    #[test]
    fn inversion_adds_set_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..=12);
            let t = random_tournament(n, &mut rng);
            let x = random_set(n, &mut rng);
            let inv = Tournament::try_from(invert(&t, &x).unwrap()).unwrap();
            assert_eq!(
                encode_tournament(&inv),
                encode_tournament(&t).xor(&encode_set(&x, n).unwrap())
            );
        }
    }

    #[test]
    fn transitive_encodes_to_zero() {
        let g = OrientedGraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(encode_backward(&g).is_zero());
        let g2 = OrientedGraph::from_arcs(3, [(1, 0), (0, 2), (1, 2)]).unwrap();
        assert_eq!(encode_backward(&g2).bits().ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn signatures_vanish_on_p_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in 2..=9 {
            for _ in 0..30 {
                let n = rng.gen_range(p + 2..=p + 6);
                let mut all: Vec<usize> = (0..n).collect();
                for i in 0..p {
                    let j = rng.gen_range(i..n);
                    all.swap(i, j);
                }
                let x = &all[..p];
                let sig = pi_signature(&encode_set(x, n).unwrap(), p).unwrap();
                assert!(sig.is_zero(), "p={p} n={n} x={x:?}");
                assert_eq!(sig.bits.len(), Residue::of(p).width(n));
            }
        }
    }

    #[test]
    fn signature_range_errors() {
        let u = PairVector::zero(4);
        assert!(matches!(pi_signature(&u, 3), Err(InvError::UnsupportedRange(_))));
        assert!(matches!(pi_signature(&u, 1), Err(InvError::UnsupportedRange(_))));
        assert!(pi_signature(&u, 2).unwrap().bits.is_empty());
    }

    #[test]
    fn odd_p_per_vertex_bits_follow_out_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.gen_range(5..=12);
            let t = random_tournament(n, &mut rng);
            for p in [3usize, 5] {
                if n < p + 2 {
                    continue;
                }
                let sig = pi_signature(&encode_tournament(&t), p).unwrap();
                for i in 0..n - 1 {
                    let expect = (n + (i + 1) + t.out_degree(i)) % 2 == 1;
                    assert_eq!(sig.bits[i], expect);
                }
            }
        }
    }

    #[test]
    fn span_member_examples() {
        let mut u = PairVector::zero(5);
        assert!(span_member(&u, 3).unwrap());
        u.set(0, 1, true);
        assert!(!span_member(&u, 3).unwrap());
        assert!(span_witness_bruteforce(&u, 3).unwrap().is_none());

        let mut w = PairVector::zero(6);
        w.set(0, 1, true);
        w.set(2, 3, true);
        assert!(span_member(&w, 4).unwrap());
        let fam = span_witness_bruteforce(&w, 4).unwrap().unwrap();
        let mut sum = PairVector::zero(6);
        for s in &fam.sets {
            assert_eq!(s.len(), 4);
            sum = sum.xor(&encode_set(s, 6).unwrap());
        }
        assert_eq!(sum, w);
    }

    #[test]
    fn witness_of_zero_and_generator() {
        let z = PairVector::zero(7);
        assert!(span_witness_bruteforce(&z, 3).unwrap().unwrap().is_empty());
        let g = encode_set(&[1, 4, 6], 7).unwrap();
        let fam = span_witness_bruteforce(&g, 3).unwrap().unwrap();
        let mut sum = PairVector::zero(7);
        for s in &fam.sets {
            sum = sum.xor(&encode_set(s, 7).unwrap());
        }
        assert_eq!(sum, g);
        assert!(matches!(
            span_witness_with_limit(&g, 3, 10),
            Err(InvError::Capacity(_))
        ));
    }

    #[test]
    fn hex_roundtrip_and_layout() {
        let mut u = PairVector::zero(4);
        u.set(0, 1, true);
        u.set(2, 3, true);
        // coordinates 0 and 5 of 6 -> 1000 01(00)
        assert_eq!(u.to_hex(), "84");
        assert_eq!(PairVector::from_hex(4, "84").unwrap(), u);
        assert!(PairVector::from_hex(4, "85").is_err());
        assert!(PairVector::from_hex(4, "8").is_err());
    }

    #[test]
    fn minimize_cancels_duplicates() {
        let d = OrientedGraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let fam = InversionFamily::with_sets(
            SizeMode::Exact(3),
            vec![vec![0, 1, 2], vec![0, 1, 2], vec![2, 3, 4]],
        );
        let min = minimize_family(&d, &fam).unwrap();
        assert_eq!(min.sets, vec![vec![2, 3, 4]]);
    }

    #[test]
    fn minimize_keeps_independent_family() {
        let d = OrientedGraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]).unwrap();
        let fam = InversionFamily::with_sets(SizeMode::AtMost(2), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(minimize_family(&d, &fam).unwrap(), fam);
    }

    #[test]
    fn minimize_large_random_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let mut d = OrientedGraph::empty(8);
            for i in 0..8 {
                for j in i + 1..8 {
                    match rng.gen_range(0..3) {
                        0 => d.add_arc(i, j).unwrap(),
                        1 => d.add_arc(j, i).unwrap(),
                        _ => {}
                    }
                }
            }
            let sets = (0..40).map(|_| random_set(8, &mut rng)).collect();
            let fam = InversionFamily::with_sets(SizeMode::AtMost(8), sets);
            let min = minimize_family(&d, &fam).unwrap();
            assert!(min.len() <= 28 && min.len() <= d.arc_count());
            assert_eq!(apply_family(&d, &min).unwrap(), apply_family(&d, &fam).unwrap());
        }
    }

    #[test]
    fn k_subsets_enumerates_lexicographically() {
        let all: Vec<_> = k_subsets(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(k_subsets(3, 0).count(), 1);
        assert_eq!(k_subsets(2, 3).count(), 0);
        assert_eq!(k_subsets(10, 4).count(), 210);
    }
}
