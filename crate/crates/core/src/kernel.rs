//! Kernelization of tournament inversion instances `(T, p, k)`.
//!
//! Each step either replaces `T` by a fixed small no-instance or deletes one
//! vertex from a long run of the acyclic ordering of `T` minus a feedback arc
//! set that avoids every endpoint of that set. Both answers (`=p` and `≤p`)
//! are preserved.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{input, InvError, Result};
use crate::f2::binom;
use crate::fas::{fas_exact_with_limit, fas_heuristic, triangle_packing_lower_bound, DEFAULT_EXACT_LIMIT};
use crate::graph::{is_acyclic, topological_order, OrientedGraph, SizeMode, Tournament, Vertex};
use crate::oracle::{exact_inv, single_inversion_decycles};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FasMode {
    /// Exact below the exact-solver limit, heuristic above.
    Auto,
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelConfig {
    pub eps: Ratio<u64>,
    pub p: usize,
    pub k: usize,
    pub fas_mode: FasMode,
}

impl KernelConfig {
    pub fn new(p: usize, k: usize) -> Self {
        KernelConfig {
            eps: Ratio::new(1, 2),
            p,
            k,
            fas_mode: FasMode::Auto,
        }
    }

    pub fn with_eps(mut self, eps: Ratio<u64>) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_fas_mode(mut self, mode: FasMode) -> Self {
        self.fas_mode = mode;
        self
    }

    fn check(&self) -> Result<()> {
        if *self.eps.numer() == 0 {
            return input("eps must be positive");
        }
        Ok(())
    }

    /// Size below which the full loop stops: `(2(1+ε/2)k·C(p,2)+1)(pk+2)`.
    pub fn threshold(&self) -> Result<Ratio<u128>> {
        lemma_threshold(self.eps / 2, self.p, self.k)
    }

    /// `(1+ε)k²p³`.
    pub fn size_bound(&self) -> Result<Ratio<u128>> {
        let (a, b) = (*self.eps.numer() as u128, *self.eps.denom() as u128);
        let kp = (self.k as u128)
            .checked_mul(self.k as u128)
            .and_then(|x| x.checked_mul((self.p as u128).checked_pow(3)?))
            .and_then(|x| x.checked_mul(a + b))
            .ok_or_else(overflow)?;
        Ok(Ratio::new(kp, b))
    }

    /// Whether `kp ≥ 30/ε`, the range in which the size bound is guaranteed.
    pub fn in_regime(&self) -> bool {
        let (a, b) = (*self.eps.numer() as u128, *self.eps.denom() as u128);
        (self.k as u128) * (self.p as u128) * a >= 30 * b
    }
}

fn overflow() -> InvError {
    InvError::Input("kernel parameters overflow 128-bit arithmetic".into())
}

/// Accepts `a/b`, an integer, or a decimal such as `0.25`.
pub fn parse_eps(s: &str) -> Result<Ratio<u64>> {
    let s = s.trim();
    let bad = || InvError::Input(format!("cannot parse eps {s:?}"));
    let r = if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let w: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let f: u64 = frac.parse().map_err(|_| bad())?;
        let num = w.checked_mul(den).and_then(|x| x.checked_add(f)).ok_or_else(bad)?;
        Ratio::new(num, den)
    } else {
        s.parse::<Ratio<u64>>().map_err(|_| bad())?
    };
    if *r.numer() == 0 {
        return input("eps must be positive");
    }
    Ok(r)
}

/// `(2(1+ε)k·C(p,2)+1)(pk+2)`, exactly.
pub fn lemma_threshold(eps: Ratio<u64>, p: usize, k: usize) -> Result<Ratio<u128>> {
    let (a, b) = (*eps.numer() as u128, *eps.denom() as u128);
    let c = binom(p, 2) as u128;
    let pk2 = (p as u128)
        .checked_mul(k as u128)
        .and_then(|x| x.checked_add(2))
        .ok_or_else(overflow)?;
    // (2(b+a)kC + b)(pk+2) / b
    let num = (2 * (a + b))
        .checked_mul(k as u128)
        .and_then(|x| x.checked_mul(c))
        .and_then(|x| x.checked_add(b))
        .and_then(|x| x.checked_mul(pk2))
        .ok_or_else(overflow)?;
    Ok(Ratio::new(num, b))
}

/// `pk+1` disjoint directed triangles on `3(pk+1)` vertices, every other pair
/// oriented from the lower index to the higher one.
pub fn canonical_no_instance(p: usize, k: usize) -> Tournament {
    let t = p * k + 1;
    let mut g = OrientedGraph::empty(3 * t);
    for i in 0..3 * t {
        for j in i + 1..3 * t {
            if i / 3 == j / 3 && i % 3 == 0 && j % 3 == 2 {
                g.add_arc(j, i).expect("fresh pair");
            } else {
                g.add_arc(i, j).expect("fresh pair");
            }
        }
    }
    Tournament::try_from(g).expect("complete")
}

/// What one reduction step did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StepOutcome {
    /// The instance is below the step's size precondition.
    BelowThreshold,
    /// The feedback arc set proves a no-instance; carries the canonical one.
    NoInstance(Tournament),
    Deleted {
        tournament: Tournament,
        vertex: Vertex,
        /// Positions `[start, end)` of the chosen run in the acyclic ordering.
        interval: (usize, usize),
    },
    /// The heuristic feedback arc set was too large to place an interval and
    /// too weak to certify a no-instance.
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub order: usize,
    pub fas_size: usize,
    pub fas_exact: bool,
    pub outcome: StepOutcome,
}

fn compute_fas(t: &OrientedGraph, mode: FasMode) -> Result<(Vec<Vertex>, Vec<(Vertex, Vertex)>, bool)> {
    let r = match mode {
        FasMode::Exact => fas_exact_with_limit(t, DEFAULT_EXACT_LIMIT)?,
        FasMode::Heuristic => fas_heuristic(t),
        FasMode::Auto if t.order() <= DEFAULT_EXACT_LIMIT => fas_exact_with_limit(t, DEFAULT_EXACT_LIMIT)?,
        FasMode::Auto => fas_heuristic(t),
    };
    Ok((r.ordering, r.arcs, r.exact))
}

/// Drops arcs of `fas` one at a time while the rest still breaks every cycle.
pub fn make_arc_minimal(d: &OrientedGraph, fas: &[(Vertex, Vertex)]) -> Vec<(Vertex, Vertex)> {
    let mut rest = d.clone();
    for &(a, b) in fas {
        rest.remove_arc(a, b);
    }
    let mut kept = Vec::new();
    for &(a, b) in fas {
        rest.add_arc(a, b).expect("arc was removed above");
        if is_acyclic(&rest) {
            continue;
        }
        rest.remove_arc(a, b);
        kept.push((a, b));
    }
    kept
}

/// One application of the vertex-deletion rule at the kernel loop's level
/// `ε/2`: precondition `n ≥` [`KernelConfig::threshold`], no-instance test
/// `|F| > (1+ε/2)k·C(p,2)`.
pub fn delvertex_step(t: &Tournament, cfg: &KernelConfig) -> Result<Step> {
    cfg.check()?;
    let eps = cfg.eps / 2;
    let n = t.order();
    let below = Step {
        order: n,
        fas_size: 0,
        fas_exact: false,
        outcome: StepOutcome::BelowThreshold,
    };
    if cfg.p < 2 || Ratio::from_integer(n as u128) < lemma_threshold(eps, cfg.p, cfg.k)? {
        return Ok(below);
    }
    let (_, fas, exact) = compute_fas(t, cfg.fas_mode)?;
    let budget = cfg.k as u128 * binom(cfg.p, 2) as u128;
    let (a, b) = (*eps.numer() as u128, *eps.denom() as u128);
    // |F| > (1+ε/2)·k·C(p,2)
    let too_big = fas.len() as u128 * b > (a + b) * budget;
    if too_big && (exact || triangle_packing_lower_bound(t) as u128 > budget) {
        return Ok(Step {
            order: n,
            fas_size: fas.len(),
            fas_exact: exact,
            outcome: StepOutcome::NoInstance(canonical_no_instance(cfg.p, cfg.k)),
        });
    }
    let fas = make_arc_minimal(t, &fas);
    let mut rest = t.as_graph().clone();
    for &(a, b) in &fas {
        rest.remove_arc(a, b);
    }
    let sigma = topological_order(&rest).expect("feedback arc set leaves an acyclic graph");
    let mut in_s = vec![false; n];
    for &(a, b) in &fas {
        in_s[a] = true;
        in_s[b] = true;
    }
    let need = cfg.p * cfg.k + 2;
    let mut start = 0;
    let mut found = None;
    for pos in 0..=n {
        if pos == n || in_s[sigma[pos]] {
            if pos - start >= need {
                found = Some((start, pos));
                break;
            }
            start = pos + 1;
        }
    }
    let outcome = match found {
        Some((s, e)) => {
            let z = sigma[s];
            let g = t.remove_vertex(z);
            StepOutcome::Deleted {
                tournament: Tournament::try_from(g)?,
                vertex: z,
                interval: (s, e),
            }
        }
        None => StepOutcome::Stuck,
    };
    Ok(Step {
        order: n,
        fas_size: fas.len(),
        fas_exact: exact,
        outcome,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KernelStatus {
    /// At or below the threshold from the start.
    AlreadySmall,
    Reduced,
    NoInstance,
    /// A step could neither delete a vertex nor certify a no-instance.
    Stuck,
    /// `p ≤ 1` or `k = 0`: answered directly.
    Trivial,
}

/// Answers for both size modes when they were computed by brute force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Solved {
    pub exact: bool,
    pub at_most: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Kernel {
    pub tournament: Tournament,
    /// Original labels of the surviving vertices; `None` when the output is a
    /// canonical instance rather than an induced subtournament.
    pub kept: Option<Vec<Vertex>>,
    pub status: KernelStatus,
    pub steps: Vec<Step>,
    /// Original label of each deleted vertex, in deletion order.
    pub deleted: Vec<Vertex>,
    pub threshold: String,
    pub size_bound: String,
    pub in_regime: bool,
    pub within_bound: bool,
    pub heuristic_fas: bool,
    /// Set when `kp < 30/ε` (or trivially) and brute force was affordable.
    pub solved: Option<Solved>,
}

fn ratio_string(r: &Ratio<u128>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn brute_force(t: &Tournament, p: usize, k: usize) -> Option<Solved> {
    if k == 1 {
        let e = single_inversion_decycles(t, SizeMode::Exact(p)).ok()?;
        let l = single_inversion_decycles(t, SizeMode::AtMost(p)).ok()?;
        return Some(Solved {
            exact: e.is_some() || is_acyclic(t),
            at_most: l.is_some(),
        });
    }
    let within = |m| exact_inv(t, m).ok().map(|v| v.finite().is_some_and(|x| x <= k));
    Some(Solved {
        exact: within(SizeMode::Exact(p))?,
        at_most: within(SizeMode::AtMost(p))?,
    })
}

/// Repeats [`delvertex_step`] while the tournament is above
/// [`KernelConfig::threshold`].
pub fn kernelize(t: &Tournament, cfg: &KernelConfig) -> Result<Kernel> {
    cfg.check()?;
    let threshold = cfg.threshold()?;
    let bound = cfg.size_bound()?;
    let mut out = Kernel {
        tournament: t.clone(),
        kept: Some((0..t.order()).collect()),
        status: KernelStatus::AlreadySmall,
        steps: Vec::new(),
        deleted: Vec::new(),
        threshold: ratio_string(&threshold),
        size_bound: ratio_string(&bound),
        in_regime: cfg.in_regime(),
        within_bound: false,
        heuristic_fas: false,
        solved: None,
    };
    if cfg.p <= 1 || cfg.k == 0 {
        // no inversion can change anything
        let yes = is_acyclic(t);
        out.tournament = if yes {
            crate::generators::transitive_tournament(1)
        } else {
            crate::generators::diregular_tournament(1)?
        };
        out.kept = None;
        out.status = KernelStatus::Trivial;
        out.solved = Some(Solved { exact: yes, at_most: yes });
        out.within_bound = true;
        return Ok(out);
    }
    let mut labels: Vec<Vertex> = (0..t.order()).collect();
    while Ratio::from_integer(out.tournament.order() as u128) > threshold {
        let step = delvertex_step(&out.tournament, cfg)?;
        out.heuristic_fas |= !step.fas_exact && step.outcome != StepOutcome::BelowThreshold;
        match &step.outcome {
            StepOutcome::Deleted { tournament, vertex, .. } => {
                out.deleted.push(labels.remove(*vertex));
                out.tournament = tournament.clone();
                out.status = KernelStatus::Reduced;
                out.steps.push(step);
            }
            StepOutcome::NoInstance(no) => {
                out.tournament = no.clone();
                out.kept = None;
                out.status = KernelStatus::NoInstance;
                out.steps.push(step);
                break;
            }
            StepOutcome::Stuck | StepOutcome::BelowThreshold => {
                out.status = KernelStatus::Stuck;
                out.steps.push(step);
                break;
            }
        }
    }
    if out.kept.is_some() {
        out.kept = Some(labels);
    }
    out.within_bound = Ratio::from_integer(out.tournament.order() as u128) <= bound;
    if !out.in_regime {
        out.solved = brute_force(&out.tournament, cfg.p, cfg.k);
    }
    Ok(out)
}
