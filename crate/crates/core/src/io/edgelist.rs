use std::collections::BTreeMap;
use std::path::Path;

use crate::complex::NodeId;
use crate::diffusion::Multiplex;
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_field<T: std::str::FromStr>(tok: &str, what: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, message: format!("invalid {what} '{tok}'") })
}

/// Parses `layer u v [weight]` lines. Node ids are 1-based; `#` starts a
/// comment; repeated edges collapse.
pub fn read_multiplex_str(text: &str) -> Result<Multiplex> {
    let mut m = Multiplex::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !(3..=4).contains(&toks.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected 'layer node node [weight]', found {} fields", toks.len()),
            });
        }
        let layer: u32 = parse_field(toks[0], "layer id", line)?;
        let u: NodeId = parse_field(toks[1], "node id", line)?;
        let v: NodeId = parse_field(toks[2], "node id", line)?;
        if u == 0 || v == 0 {
            return Err(Error::Parse { line, message: "node ids are 1-based".into() });
        }
        let w: f64 = match toks.get(3) {
            Some(t) => parse_field(t, "weight", line)?,
            None => 1.0,
        };
        if u == v {
            return Err(Error::SelfLoop { line, node: u });
        }
        m.add_edge(layer, u, v, w).map_err(|e| match e {
            Error::InvalidWeight { value } => Error::Parse { line, message: format!("weight {value} is not positive") },
            other => other,
        })?;
    }
    Ok(m)
}

pub fn parse_multiplex(path: &Path) -> Result<Multiplex> {
    read_multiplex_str(&std::fs::read_to_string(path)?)
}

/// Parses `node_id label` lines; the label is the rest of the line.
pub fn read_labels_str(text: &str) -> Result<BTreeMap<NodeId, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let (id, label) = body
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse { line, message: "expected 'node_id label'".into() })?;
        out.insert(parse_field(id, "node id", line)?, label.trim().to_string());
    }
    Ok(out)
}

pub fn parse_labels(path: &Path) -> Result<BTreeMap<NodeId, String>> {
    read_labels_str(&std::fs::read_to_string(path)?)
}
