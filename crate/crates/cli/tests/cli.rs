use std::path::PathBuf;

use invlab_cli::{run, EXIT_CAPACITY, EXIT_FALSE, EXIT_INPUT, EXIT_RANGE, EXIT_TRUE, EXIT_USAGE};
use invlab_core::generators::{random_tournament, transitive_tournament};
use invlab_core::io::{from_json, to_json};
use invlab_core::oracle::exact_inv;
use invlab_core::{apply_family, is_acyclic, InversionFamily, OrientedGraph, SizeMode};
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invlab(args: &[&str], stdin: &str) -> Out {
    let mut argv = vec!["invlab".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn transitive_tournament_is_invertible() {
    let r = invlab(&["decide-invertible", "--p", "3"], &to_json(&transitive_tournament(9)));
    assert_eq!(r.code, EXIT_TRUE, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["invertible"], true);
}

#[test]
fn invertibility_agrees_with_search() {
    for seed in 0..12 {
        let t = random_tournament(6, seed);
        let expected = exact_inv(&t, SizeMode::Exact(2)).unwrap().finite().is_some();
        let r = invlab(&["decide-invertible", "--p", "2"], &to_json(&t));
        assert_eq!(r.code, if expected { EXIT_TRUE } else { EXIT_FALSE }, "seed {seed}");
    }
}

#[test]
fn decycle_output_verifies() {
    let t = random_tournament(9, 5);
    let r = invlab(&["decycle", "--p", "4", "--strategy", "dense"], &to_json(&t));
    assert_eq!(r.code, EXIT_TRUE, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let fam: InversionFamily = serde_json::from_value(v["family"].clone()).unwrap();
    assert!(fam.sets.iter().all(|s| s.len() == 4));
    assert!(is_acyclic(&apply_family(&t, &fam).unwrap()));
    assert!(v["count"].as_u64().unwrap() <= v["bound"].as_u64().unwrap());

    let g = temp("g.json", &to_json(&t));
    let f = temp("f.json", &to_json(&fam));
    let ok = invlab(&["verify", "--family", f.to_str().unwrap(), g.to_str().unwrap()], "");
    assert_eq!(ok.code, EXIT_TRUE, "{}", ok.stdout);

    let mut short = fam.clone();
    short.sets.clear();
    let f = temp("short.json", &to_json(&short));
    let bad = invlab(&["verify", "--family", f.to_str().unwrap(), g.to_str().unwrap()], "");
    assert_eq!(bad.code, EXIT_FALSE);
}

#[test]
fn dot_trace_has_one_block_per_step() {
    let t = random_tournament(8, 2);
    let json = invlab(&["decycle", "--p", "2"], &to_json(&t));
    let count = serde_json::from_str::<Value>(&json.stdout).unwrap()["count"].as_u64().unwrap();
    let dot = invlab(&["decycle", "--p", "2", "--emit", "dot-trace"], &to_json(&t));
    let steps = invlab_core::io::parse_dot_trace(&dot.stdout).unwrap();
    assert_eq!(steps.len() as u64, count + 1);
    assert!(is_acyclic(steps.last().unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(invlab(&["exact", "--p", "3"], "{").code, EXIT_INPUT);
    assert_eq!(invlab(&["exact", "--p", "3"], r#"{"n":2,"arcs":[[0,1],[1,0]]}"#).code, EXIT_INPUT);
    let big = to_json(&random_tournament(8, 0));
    let r = invlab(&["exact", "--p", "3", "--cap", "5"], &big);
    assert_eq!(r.code, EXIT_CAPACITY);
    assert!(r.stderr.contains("capacity"));
    assert_eq!(invlab(&["decycle", "--p", "3"], &big).code, EXIT_RANGE);
    assert_eq!(invlab(&["frobnicate"], "").code, EXIT_USAGE);
    assert_eq!(invlab(&["exact"], "").code, EXIT_USAGE);
    assert_eq!(invlab(&["--help"], "").code, 0);
}

#[test]
fn exact_matches_library() {
    let t = random_tournament(6, 9);
    let r = invlab(&["exact", "--p", "3", "--mode", "leq"], &to_json(&t));
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let want = exact_inv(&t, SizeMode::AtMost(3)).unwrap();
    assert_eq!(v["value"], serde_json::to_value(want).unwrap());
}

#[test]
fn generators_are_deterministic() {
    let a = invlab(&["generate", "random", "12", "--seed", "7"], "");
    let b = invlab(&["generate", "random", "12", "--seed", "7"], "");
    let c = invlab(&["generate", "random", "12", "--seed", "8"], "");
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let g: OrientedGraph = from_json(&a.stdout).unwrap();
    assert!(g.is_tournament());
}

#[test]
fn shec_writes_names_sidecar() {
    let k33 = to_json(&invlab_core::generators::k33());
    let names = std::env::temp_dir().join(format!("invlab-names-{}.json", std::process::id()));
    let r = invlab(&["generate", "shec", "--p", "3", "--names", names.to_str().unwrap()], &k33);
    assert_eq!(r.code, EXIT_TRUE, "{}", r.stderr);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(&names).unwrap()).unwrap();
    assert_eq!(side["k"], 9);
    let t: OrientedGraph = from_json(&r.stdout).unwrap();
    assert_eq!(side["names"].as_array().unwrap().len(), t.order());
}

#[test]
fn bench_tables() {
    let empty = temp("empty.json", "{}");
    let r = invlab(&["bench", "--spec", empty.to_str().unwrap()], "");
    assert_eq!(r.code, EXIT_TRUE);
    assert_eq!(r.stdout.lines().count(), 1);
    assert!(r.stdout.starts_with("instance,n,p,mode,strategy,count,bound,bound-ok,acyclic-ok,oracle,runtime-ms"));

    let spec = temp(
        "spec.json",
        r#"{"rows":[{"generator":"random","sizes":[6],"p":[2,4],"strategies":["fas","dense"],"seeds":[1,2],"oracle":true}]}"#,
    );
    let a = invlab(&["bench", "--spec", spec.to_str().unwrap()], "");
    let b = invlab(&["bench", "--spec", spec.to_str().unwrap()], "");
    assert_eq!(a.code, EXIT_TRUE, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.lines().count(), 1 + 2 * 2 * 2);
    let mut rd = csv::Reader::from_reader(a.stdout.as_bytes());
    for rec in rd.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[7], "true");
        assert_eq!(&rec[8], "true");
        let count: usize = rec[5].parse().unwrap();
        let oracle: usize = rec[9].parse().unwrap();
        assert!(count >= oracle);
    }

    let fault = temp(
        "fault.json",
        r#"{"rows":[{"generator":"tn","sizes":[8],"p":[4],"strategies":["fas"],"inject_fault":true}]}"#,
    );
    let f = invlab(&["bench", "--spec", fault.to_str().unwrap()], "");
    assert_eq!(f.code, EXIT_FALSE);
    assert!(f.stderr.contains("FAIL"));
}

#[test]
fn manifest_hashes_output() {
    use sha2::{Digest, Sha256};
    let path = std::env::temp_dir().join(format!("invlab-manifest-{}.json", std::process::id()));
    let r = invlab(&["--manifest", path.to_str().unwrap(), "generate", "tt", "5"], "");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["output_sha256"], hex::encode(Sha256::digest(r.stdout.as_bytes())));
    assert_eq!(m["exit_code"], 0);
}
