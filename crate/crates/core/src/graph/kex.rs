//! The KEX text format.
//!
//! ```text
//! kex 1
//! agents <m>
//! vertices <n>
//! owners <a_1> ... <a_n>
//! edges <k>
//! <u> <v>        (k lines, u < v, lexicographic)
//! ```
//!
//! Lines starting with `#` are comments. Blank lines are skipped.

use std::fmt::Write as _;

use super::{Edge, Instance};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse::<usize>().map_err(|_| {
        parse_err(
            line,
            format!("{what}: expected a non-negative integer, found `{token}`"),
        )
    })
}

/// Parses the single-token header line `keyword <value>`.
fn header_value(line: usize, text: &str, keyword: &str) -> Result<usize> {
    let mut tokens = text.split_whitespace();
    match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(k), Some(v), None) if k == keyword => parse_number(line, v, keyword),
        _ => Err(parse_err(line, format!("expected `{keyword} <count>`, found `{text}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let mut last_line = 0;
    let mut next = |what: &str| -> Result<(usize, &str)> {
        match lines.next() {
            Some(item) => {
                last_line = item.0;
                Ok(item)
            }
            None => Err(parse_err(
                last_line + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    };

    let (ln, magic) = next("header")?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["kex", "1"] {
        return Err(parse_err(ln, format!("expected `kex 1`, found `{magic}`")));
    }
    let (ln, text) = next("agents line")?;
    let agents = header_value(ln, text, "agents")?;
    if agents == 0 {
        return Err(parse_err(ln, "at least one agent is required"));
    }
    let (ln, text) = next("vertices line")?;
    let n = header_value(ln, text, "vertices")?;

    let (ln, text) = next("owners line")?;
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("owners") {
        return Err(parse_err(ln, format!("expected `owners ...`, found `{text}`")));
    }
    let owners = tokens
        .map(|t| parse_number(ln, t, "owner"))
        .collect::<Result<Vec<_>>>()?;
    if owners.len() != n {
        return Err(parse_err(ln, format!("expected {n} owners, found {}", owners.len())));
    }
    if let Some((v, &a)) = owners.iter().enumerate().find(|(_, &a)| a == 0 || a > agents) {
        return Err(parse_err(
            ln,
            format!("owner {a} of vertex {} out of range 1..={agents}", v + 1),
        ));
    }
    let mut sizes = vec![0usize; agents];
    for &a in &owners {
        sizes[a - 1] += 1;
    }
    if let Some(a) = sizes.iter().position(|&s| s == 0) {
        return Err(parse_err(ln, format!("agent {} owns no vertices", a + 1)));
    }

    let (ln, text) = next("edges line")?;
    let k = header_value(ln, text, "edges")?;
    let mut edges = Vec::with_capacity(k);
    let mut seen = std::collections::HashSet::with_capacity(k);
    for i in 0..k {
        let (ln, text) = next(&format!("edge {} of {k}", i + 1)).map_err(|e| match e {
            Error::Parse { line, .. } => parse_err(line, format!("edge count mismatch: header says {k}, found {i}")),
            other => other,
        })?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(ln, format!("expected `<u> <v>`, found `{text}`")));
        }
        let u = parse_number(ln, parts[0], "edge endpoint")?;
        let v = parse_number(ln, parts[1], "edge endpoint")?;
        if u == v {
            return Err(parse_err(ln, format!("self-loop at vertex {u}")));
        }
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(parse_err(ln, format!("endpoint {x} out of range 1..={n}")));
            }
        }
        let e = Edge::new(u, v);
        if !seen.insert(e) {
            return Err(parse_err(ln, format!("duplicate edge {u} {v}")));
        }
        edges.push(e);
    }
    if let Some((ln, text)) = lines.next() {
        return Err(parse_err(
            ln,
            format!("edge count mismatch: header says {k}, found extra line `{text}`"),
        ));
    }
    Instance::new(agents, owners, edges).map_err(|e| parse_err(0, e.to_string()))
}

/// Canonical KEX text: no comments, edges sorted, LF line endings.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kex 1");
    let _ = writeln!(out, "agents {}", inst.agent_count());
    let _ = writeln!(out, "vertices {}", inst.vertex_count());
    out.push_str("owners");
    for a in inst.owners() {
        let _ = write!(out, " {a}");
    }
    out.push('\n');
    let _ = writeln!(out, "edges {}", inst.edges().len());
    for e in inst.edges() {
        let _ = writeln!(out, "{} {}", e.u(), e.v());
    }
    out
}
