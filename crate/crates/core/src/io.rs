//! JSON and DOT formats.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;

use crate::error::{input, InvError, Result};
use crate::graph::{invert, InversionFamily, OrientedGraph};

/// Parses JSON, reporting any failure as an input error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| InvError::Input(format!("bad JSON: {e}")))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

/// `digraph` with every vertex declared, so isolated vertices survive a
/// round trip. Names, when given, become labels.
pub fn to_dot(d: &OrientedGraph, names: Option<&[String]>) -> String {
    to_dot_named(d, "G", names)
}

fn to_dot_named(d: &OrientedGraph, title: &str, names: Option<&[String]>) -> String {
    let mut s = format!("digraph {title} {{\n");
    for v in 0..d.order() {
        match names.and_then(|n| n.get(v)) {
            Some(name) => writeln!(s, "  {v} [label=\"{}\"];", name.replace('"', "\\\"")).unwrap(),
            None => writeln!(s, "  {v};").unwrap(),
        }
    }
    for (u, v) in d.arcs() {
        writeln!(s, "  {u} -> {v};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Reads the subset of DOT written by [`to_dot`]: numeric vertex ids, one
/// statement per line, optional attribute lists (ignored).
pub fn parse_dot(text: &str) -> Result<OrientedGraph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("//"));
    match lines.next() {
        Some(h) if h.starts_with("digraph") && h.ends_with('{') => {}
        _ => return input("DOT must start with `digraph <name> {`"),
    }
    let mut n = 0usize;
    let mut arcs = Vec::new();
    let mut closed = false;
    for line in lines {
        if closed {
            return input("content after closing brace");
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_suffix(';').unwrap_or(line);
        let stmt = match stmt.find('[') {
            Some(i) => stmt[..i].trim(),
            None => stmt,
        };
        let id = |t: &str| -> Result<usize> {
            t.trim()
                .parse()
                .map_err(|_| InvError::Input(format!("bad vertex id {t:?} in DOT")))
        };
        if let Some((a, b)) = stmt.split_once("->") {
            let (u, v) = (id(a)?, id(b)?);
            n = n.max(u + 1).max(v + 1);
            arcs.push((u, v));
        } else {
            n = n.max(id(stmt)? + 1);
        }
    }
    if !closed {
        return input("DOT is missing the closing brace");
    }
    OrientedGraph::from_arcs(n, arcs)
}

/// The graph followed by the state after each inversion of `family`, as
/// consecutive `digraph` blocks.
pub fn dot_trace(d: &OrientedGraph, family: &InversionFamily) -> Result<String> {
    family.validate(d.order())?;
    let mut s = to_dot_named(d, "step0", None);
    let mut g = d.clone();
    for (i, set) in family.sets.iter().enumerate() {
        g = invert(&g, set)?;
        s.push_str(&format!("// invert {set:?}\n"));
        s.push_str(&to_dot_named(&g, &format!("step{}", i + 1), None));
    }
    Ok(s)
}

/// Splits a stream of `digraph` blocks as written by [`dot_trace`].
pub fn parse_dot_trace(text: &str) -> Result<Vec<OrientedGraph>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with("//") {
            continue;
        }
        cur.push_str(line);
        cur.push('\n');
        if t == "}" {
            out.push(parse_dot(&cur)?);
            cur.clear();
        }
    }
    if !cur.trim().is_empty() {
        return input("trailing content in DOT trace");
    }
    Ok(out)
}
