//! The `invlab` command line. [`run`] takes explicit streams so it can be
//! driven from tests.

use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use invlab_core::decycler::{decycle, verify_family, Strategy};
use invlab_core::f2::pi_signature;
use invlab_core::generators::{
    diregular_tournament, hypergraph_lift, mcc_reduction, random_oriented_graph, random_tournament,
    reversed_arc_tournament, shec_reduction, transitive_tournament, Hypergraph, MccInstance,
};
use invlab_core::invertibility::{oriented_graph_invertible, tournament_invertible, tournaments_equivalent};
use invlab_core::io::{dot_trace, from_json, to_json};
use invlab_core::kernel::{kernelize, parse_eps, FasMode, KernelConfig};
use invlab_core::oracle::{census_matches, exact_inv_with_cap, orbit_census_with_cap, DEFAULT_CAP_BITS};
use invlab_core::{InvError, InversionFamily, OrientedGraph, SizeMode, Tournament};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_RANGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// The one environment override: default state-space cap for `exact`,
/// `census` and the bench oracle column.
pub const CAP_ENV: &str = "INVLAB_CAP_BITS";

#[derive(Parser, Debug)]
#[command(name = "invlab", version, about = "Inversions of prescribed size in oriented graphs")]
struct Cli {
    /// Write a run manifest (command, config, input/output SHA-256) here.
    #[arg(long, global = true)]
    manifest: Option<String>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Is the graph (=p)-invertible? Exit 0 yes, 1 no.
    DecideInvertible {
        #[arg(long)]
        p: usize,
        input: Option<String>,
    },
    /// Are two tournaments (=p)-equivalent? Exit 0 yes, 1 no.
    DecideEquivalent {
        #[arg(long)]
        p: usize,
        first: String,
        second: String,
    },
    /// Build a decycling family of p-sets.
    Decycle {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value = "fas")]
        strategy: String,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        input: Option<String>,
    },
    /// Exact inversion number by exhaustive search.
    Exact {
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Eq)]
        mode: ModeArg,
        #[arg(long)]
        cap: Option<usize>,
        input: Option<String>,
    },
    /// Shrink a tournament instance (T, p, k).
    Kernelize {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, value_enum, default_value_t = FasArg::Auto)]
        fas: FasArg,
        input: Option<String>,
    },
    /// Emit a generated instance as JSON.
    Generate(GenerateArgs),
    /// Check a family against a graph. Exit 0 if it decycles with admissible sizes.
    Verify {
        #[arg(long)]
        family: String,
        input: Option<String>,
    },
    /// Run a benchmark spec and print a CSV table.
    Bench {
        #[arg(long)]
        spec: String,
        /// Record wall time per row; otherwise the column is 0.
        #[arg(long)]
        timing: bool,
    },
    /// Reachability classes of all labelled tournaments of order n.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Write the vertex name map (and reduction parameters) here.
    #[arg(long, global = true)]
    names: Option<String>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Tt {
        n: usize,
    },
    Tn {
        n: usize,
    },
    Diregular {
        k: usize,
    },
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability that a pair carries an arc; 1 gives a tournament.
        #[arg(long, default_value_t = 1.0)]
        density: f64,
    },
    /// Multicoloured clique instance JSON to an oriented graph with p = 2k.
    Mcc {
        input: Option<String>,
    },
    /// (p-1)-special hypergraph JSON to a tournament with k = |E(H)|.
    Shec {
        #[arg(long)]
        p: usize,
        input: Option<String>,
    },
    /// (p-1)-special hypergraph JSON to a p-special one.
    Lift {
        input: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    DotTrace,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Eq,
    Leq,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FasArg {
    Auto,
    Exact,
    Heuristic,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: Option<String>,
    inputs: Vec<u8>,
    out: Vec<u8>,
}

impl Io<'_> {
    fn read(&mut self, path: Option<&str>) -> Result<String, InvError> {
        let text = match path {
            None | Some("-") => {
                if let Some(t) = &self.stdin_used {
                    t.clone()
                } else {
                    let mut s = String::new();
                    self.stdin
                        .read_to_string(&mut s)
                        .map_err(|e| InvError::Input(format!("reading stdin: {e}")))?;
                    self.stdin_used = Some(s.clone());
                    s
                }
            }
            Some(p) => fs::read_to_string(p).map_err(|e| InvError::Input(format!("reading {p}: {e}")))?,
        };
        self.inputs.extend_from_slice(text.as_bytes());
        Ok(text)
    }

    fn graph(&mut self, path: Option<&str>) -> Result<OrientedGraph, InvError> {
        from_json(&self.read(path)?)
    }

    fn tournament(&mut self, path: Option<&str>) -> Result<Tournament, InvError> {
        from_json(&self.read(path)?)
    }

    fn emit(&mut self, v: &impl Serialize) {
        self.out.extend_from_slice(to_json(v).as_bytes());
        self.out.push(b'\n');
    }

    fn emit_text(&mut self, s: &str) {
        self.out.extend_from_slice(s.as_bytes());
    }
}

fn error_code(e: &InvError) -> i32 {
    match e {
        InvError::Input(_) => EXIT_INPUT,
        InvError::UnsupportedRange(_) | InvError::Mode(_) => EXIT_RANGE,
        InvError::Capacity(_) => EXIT_CAPACITY,
    }
}

fn cap_bits(flag: Option<usize>) -> Result<usize, InvError> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InvError::Input(format!("{CAP_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP_BITS),
    }
}

fn write_file(path: &str, text: &str) -> Result<(), InvError> {
    fs::write(path, text).map_err(|e| InvError::Input(format!("writing {path}: {e}")))
}

/// Runs one command line (including the program name) and returns the exit
/// code. Output is written only once the command has finished.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let start = Instant::now();
    let mut io = Io {
        stdin,
        stdin_used: None,
        inputs: Vec::new(),
        out: Vec::new(),
    };
    let mut diag = Vec::new();
    let code = match dispatch(&cli.verb, &mut io, &mut diag) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "invlab: {e}");
            error_code(&e)
        }
    };
    let _ = stdout.write_all(&io.out);
    let _ = stderr.write_all(&diag);
    if let Some(path) = &cli.manifest {
        let manifest = json!({
            "command": args.get(1..).unwrap_or_default(),
            "config": format!("{:?}", cli.verb),
            "seed": seed_of(&cli.verb),
            "cap_bits_env": std::env::var(CAP_ENV).ok(),
            "input_sha256": hex::encode(Sha256::digest(&io.inputs)),
            "output_sha256": hex::encode(Sha256::digest(&io.out)),
            "exit_code": code,
            "wall_ms": start.elapsed().as_millis() as u64,
        });
        if let Err(e) = write_file(path, &format!("{manifest:#}\n")) {
            let _ = writeln!(stderr, "invlab: {e}");
            return EXIT_INPUT;
        }
    }
    code
}

fn seed_of(verb: &Verb) -> Option<u64> {
    match verb {
        Verb::Generate(GenerateArgs {
            kind: GenKind::Random { seed, .. },
            ..
        }) => Some(*seed),
        _ => None,
    }
}

fn dispatch(verb: &Verb, io: &mut Io, diag: &mut Vec<u8>) -> Result<i32, InvError> {
    match verb {
        Verb::DecideInvertible { p, input } => {
            let d = io.graph(input.as_deref())?;
            let (answer, method) = if d.is_tournament() {
                let t = Tournament::try_from(d)?;
                (tournament_invertible(&t, *p)?, "tournament")
            } else {
                (oriented_graph_invertible(&d, *p)?, "oriented")
            };
            io.emit(&json!({ "p": p, "invertible": answer, "method": method }));
            Ok(if answer { EXIT_TRUE } else { EXIT_FALSE })
        }
        Verb::DecideEquivalent { p, first, second } => {
            let a = io.tournament(Some(first))?;
            let b = io.tournament(Some(second))?;
            let answer = tournaments_equivalent(&a, &b, *p)?;
            io.emit(&json!({ "p": p, "equivalent": answer }));
            Ok(if answer { EXIT_TRUE } else { EXIT_FALSE })
        }
        Verb::Decycle { p, strategy, emit, input } => {
            let d = io.graph(input.as_deref())?;
            let strategy: Strategy = strategy.parse()?;
            let r = decycle(&d, *p, strategy)?;
            match emit {
                Emit::Json => io.emit(&json!({
                    "strategy": strategy.name(),
                    "count": r.len(),
                    "bound": r.bound,
                    "proof_bound": r.proof_bound,
                    "fas_size": r.fas_size,
                    "fas_exact": r.fas_exact,
                    "family": r.family,
                })),
                Emit::DotTrace => io.emit_text(&dot_trace(&d, &r.family)?),
            }
            Ok(EXIT_TRUE)
        }
        Verb::Exact { p, mode, cap, input } => {
            let d = io.graph(input.as_deref())?;
            let mode = match mode {
                ModeArg::Eq => SizeMode::Exact(*p),
                ModeArg::Leq => SizeMode::AtMost(*p),
            };
            let v = exact_inv_with_cap(&d, mode, cap_bits(*cap)?)?;
            io.emit(&json!({ "mode": mode, "value": v }));
            Ok(EXIT_TRUE)
        }
        Verb::Kernelize { p, k, eps, fas, input } => {
            let t = io.tournament(input.as_deref())?;
            let mode = match fas {
                FasArg::Auto => FasMode::Auto,
                FasArg::Exact => FasMode::Exact,
                FasArg::Heuristic => FasMode::Heuristic,
            };
            let cfg = KernelConfig::new(*p, *k).with_eps(parse_eps(eps)?).with_fas_mode(mode);
            let kernel = kernelize(&t, &cfg)?;
            io.emit(&kernel);
            Ok(EXIT_TRUE)
        }
        Verb::Generate(args) => generate(args, io),
        Verb::Verify { family, input } => {
            let d = io.graph(input.as_deref())?;
            let fam: InversionFamily = from_json(&io.read(Some(family))?)?;
            fam.validate(d.order()).or_else(|e| match e {
                InvError::Mode(_) => Ok(()),
                other => Err(other),
            })?;
            let rep = verify_family(&d, &fam, fam.mode)?;
            io.emit(&rep);
            Ok(if rep.sizes_ok && rep.acyclic { EXIT_TRUE } else { EXIT_FALSE })
        }
        Verb::Bench { spec, timing } => {
            let spec: BenchSpec = from_json(&io.read(Some(spec))?)?;
            let cap = cap_bits(None)?;
            let rows = bench_rows(&spec, cap, *timing)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut failed = 0;
            for (i, row) in rows.iter().enumerate() {
                w.serialize(&row.csv).map_err(|e| InvError::Input(e.to_string()))?;
                if let Some(why) = &row.failure {
                    failed += 1;
                    let _ = writeln!(diag, "FAIL row {i} ({}): {why}", row.csv.instance);
                }
            }
            if rows.is_empty() {
                w.write_record(BenchCsv::HEADER).map_err(|e| InvError::Input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| InvError::Input(e.to_string()))?;
            io.out.extend_from_slice(&bytes);
            Ok(if failed == 0 { EXIT_TRUE } else { EXIT_FALSE })
        }
        Verb::Census { n, p, cap } => {
            let c = orbit_census_with_cap(*n, *p, cap_bits(*cap)?)?;
            let matches = if *n >= p + 2 && *p >= 2 {
                Some(census_matches(&c, |s| {
                    let mut u = invlab_core::f2::PairVector::zero(*n);
                    for e in 0..n * (n - 1) / 2 {
                        if s >> e & 1 == 1 {
                            let (i, j) = invlab_core::f2::pair_at(e);
                            u.set(i, j, true);
                        }
                    }
                    pi_signature(&u, *p).expect("range checked").bits
                }))
            } else {
                None
            };
            io.emit(&json!({
                "n": c.n,
                "p": c.p,
                "classes": c.classes,
                "histogram": c.histogram,
                "matches_signature": matches,
            }));
            Ok(EXIT_TRUE)
        }
    }
}

fn generate(args: &GenerateArgs, io: &mut Io) -> Result<i32, InvError> {
    let (graph, sidecar): (Value, Value) = match &args.kind {
        GenKind::Tt { n } => (json!(transitive_tournament(*n)), json!({})),
        GenKind::Tn { n } => (json!(reversed_arc_tournament(*n)?), json!({})),
        GenKind::Diregular { k } => (json!(diregular_tournament(*k)?), json!({})),
        GenKind::Random { n, seed, density } => {
            (json!(random_oriented_graph(*n, *density, *seed)?), json!({ "seed": seed }))
        }
        GenKind::Mcc { input } => {
            let inst: MccInstance = from_json(&io.read(input.as_deref())?)?;
            let r = mcc_reduction(&inst)?;
            (json!(r.graph), json!({ "p": r.p, "names": r.names }))
        }
        GenKind::Shec { p, input } => {
            let h: Hypergraph = from_json(&io.read(input.as_deref())?)?;
            let r = shec_reduction(&h, *p)?;
            (
                json!(r.tournament),
                json!({ "p": r.p, "k": r.k, "z": r.z, "w_starts": r.w_starts, "names": r.names }),
            )
        }
        GenKind::Lift { input } => {
            let h: Hypergraph = from_json(&io.read(input.as_deref())?)?;
            let l = hypergraph_lift(&h)?;
            (json!(l.hypergraph), json!({ "p": l.p, "names": l.names }))
        }
    };
    io.emit(&graph);
    if let Some(path) = &args.names {
        write_file(path, &format!("{}\n", sidecar))?;
    }
    Ok(EXIT_TRUE)
}

/// Benchmark spec: rows expand to every (size, p, seed, strategy) combination.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default)]
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchRow {
    /// `tt`, `tn`, `diregular` (size is k), `random` (tournament) or
    /// `random-graph` (uses `density`).
    pub generator: String,
    pub sizes: Vec<usize>,
    pub p: Vec<usize>,
    pub strategies: Vec<String>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_density")]
    pub density: f64,
    /// Compute the exact (=p)-inversion number when within the cap.
    #[serde(default)]
    pub oracle: bool,
    /// Drop the last set of every produced family, to exercise failure rows.
    #[serde(default)]
    pub inject_fault: bool,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_density() -> f64 {
    0.5
}

#[derive(Debug, Serialize)]
struct BenchCsv {
    instance: String,
    n: usize,
    p: usize,
    mode: &'static str,
    strategy: String,
    count: String,
    bound: String,
    #[serde(rename = "bound-ok")]
    bound_ok: bool,
    #[serde(rename = "acyclic-ok")]
    acyclic_ok: bool,
    oracle: String,
    #[serde(rename = "runtime-ms")]
    runtime_ms: u64,
}

impl BenchCsv {
    const HEADER: [&'static str; 11] = [
        "instance", "n", "p", "mode", "strategy", "count", "bound", "bound-ok", "acyclic-ok", "oracle", "runtime-ms",
    ];
}

struct BenchResult {
    csv: BenchCsv,
    failure: Option<String>,
}

fn bench_instance(gen: &str, size: usize, seed: u64, density: f64) -> Result<(String, OrientedGraph), InvError> {
    Ok(match gen {
        "tt" => (format!("tt-{size}"), transitive_tournament(size).into_graph()),
        "tn" => (format!("tn-{size}"), reversed_arc_tournament(size)?.into_graph()),
        "diregular" => (format!("diregular-{size}"), diregular_tournament(size)?.into_graph()),
        "random" => (format!("random-{size}-s{seed}"), random_tournament(size, seed).into_graph()),
        "random-graph" => (
            format!("random-graph-{size}-d{density}-s{seed}"),
            random_oriented_graph(size, density, seed)?,
        ),
        other => return Err(InvError::Input(format!("unknown bench generator {other:?}"))),
    })
}

fn bench_rows(spec: &BenchSpec, cap: usize, timing: bool) -> Result<Vec<BenchResult>, InvError> {
    let mut out = Vec::new();
    for row in &spec.rows {
        let strategies: Vec<Strategy> = row.strategies.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        for &size in &row.sizes {
            for &seed in &row.seeds {
                let (name, d) = bench_instance(&row.generator, size, seed, row.density)?;
                for &p in &row.p {
                    let oracle = if row.oracle {
                        match exact_inv_with_cap(&d, SizeMode::Exact(p), cap) {
                            Ok(v) => Some(v),
                            Err(InvError::Capacity(_)) => None,
                            Err(e) => return Err(e),
                        }
                    } else {
                        None
                    };
                    let oracle_text = match (row.oracle, oracle) {
                        (false, _) => "-".to_string(),
                        (true, None) => "capacity".to_string(),
                        (true, Some(v)) => v.to_string(),
                    };
                    for &strategy in &strategies {
                        let start = Instant::now();
                        let res = decycle(&d, p, strategy);
                        let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
                        let mut csv = BenchCsv {
                            instance: name.clone(),
                            n: d.order(),
                            p,
                            mode: "eq",
                            strategy: strategy.name().into(),
                            count: "-".into(),
                            bound: "-".into(),
                            bound_ok: false,
                            acyclic_ok: false,
                            oracle: oracle_text.clone(),
                            runtime_ms: ms,
                        };
                        let failure = match res {
                            Err(InvError::Capacity(_)) => {
                                csv.count = "capacity".into();
                                None
                            }
                            Err(InvError::UnsupportedRange(_) | InvError::Mode(_)) => {
                                csv.count = "unsupported".into();
                                None
                            }
                            Err(e) => return Err(e),
                            Ok(mut r) => {
                                if row.inject_fault {
                                    r.family.sets.pop();
                                }
                                let rep = verify_family(&d, &r.family, SizeMode::Exact(p))?;
                                csv.count = r.len().to_string();
                                csv.bound = r.bound.to_string();
                                csv.bound_ok = r.len() <= r.bound;
                                csv.acyclic_ok = rep.acyclic && rep.sizes_ok;
                                let below_oracle = oracle.and_then(|v| v.finite()).is_some_and(|v| r.len() < v);
                                let mut why = Vec::new();
                                if !csv.bound_ok {
                                    why.push(format!("count {} exceeds bound {}", r.len(), r.bound));
                                }
                                if !csv.acyclic_ok {
                                    why.push(format!("result not acyclic, residual cycle {:?}", rep.cycle));
                                }
                                if below_oracle && csv.acyclic_ok {
                                    why.push("count below the exact optimum".into());
                                }
                                (!why.is_empty()).then(|| why.join("; "))
                            }
                        };
                        out.push(BenchResult { csv, failure });
                    }
                }
            }
        }
    }
    Ok(out)
}
