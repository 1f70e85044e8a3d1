//! Poset files (JSON and edge lists), DOT export, and the corpus cache.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::enumerate::{enum_canonical_rows, OrderRows};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::structures::Hit;

/// Directory holding cached exhaustive corpora, when set.
pub const CACHE_DIR_ENV: &str = "DCOMPLETE_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    EdgeList,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "edgelist" | "edges" => Ok(Format::EdgeList),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetFile {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

fn to_file(p: &Poset) -> PosetFile {
    PosetFile {
        elements: p.names().to_vec(),
        covers: p
            .covers()
            .into_iter()
            .map(|(x, y)| (p.name(x).to_string(), p.name(y).to_string()))
            .collect(),
    }
}

pub fn to_json(p: &Poset) -> Value {
    serde_json::to_value(to_file(p)).expect("poset serializes")
}

/// Compact canonical JSON: elements in index order, covers sorted.
pub fn to_json_string(p: &Poset) -> String {
    serde_json::to_string(&to_file(p)).expect("poset serializes")
}

pub fn to_json_pretty(p: &Poset) -> String {
    serde_json::to_string_pretty(&to_file(p)).expect("poset serializes")
}

pub fn from_json_str(s: &str, auto_reduce: bool) -> Result<Poset> {
    let file: PosetFile = serde_json::from_str(s).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    Poset::build(&file.elements, &file.covers, auto_reduce)
}

/// One `a b` pair per line means `a -> b`; a single token declares an
/// isolated element. Blank lines and `#` comments are skipped.
pub fn from_edgelist_str(s: &str, auto_reduce: bool) -> Result<Poset> {
    let mut elements: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut covers = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() > 2 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected `a b` or `a`, found {} tokens", tokens.len()),
            });
        }
        for t in &tokens {
            if seen.insert(t.to_string()) {
                elements.push(t.to_string());
            }
        }
        if let [a, b] = tokens[..] {
            covers.push((a.to_string(), b.to_string()));
        }
    }
    covers.sort();
    covers.dedup();
    Poset::build(&elements, &covers, auto_reduce)
}

pub fn parse_poset(s: &str, format: Format, auto_reduce: bool) -> Result<Poset> {
    match format {
        Format::Json => from_json_str(s, auto_reduce),
        Format::EdgeList => from_edgelist_str(s, auto_reduce),
    }
}

/// Guesses the format from the extension, then from the first character.
pub fn detect_format(path: &Path, contents: &str) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("txt" | "edges" | "edgelist") => Format::EdgeList,
        _ if contents.trim_start().starts_with('{') => Format::Json,
        _ => Format::EdgeList,
    }
}

pub fn parse_poset_file(path: &Path, format: Option<Format>, auto_reduce: bool) -> Result<Poset> {
    let contents = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| detect_format(path, &contents));
    parse_poset(&contents, format, auto_reduce)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

const PALETTE: [&str; 6] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
];

/// Hasse diagram in DOT, drawn bottom to top. Elements and covers inside
/// the i-th highlighted structure get the i-th palette colour; the first
/// structure containing an item wins.
pub fn export_dot(p: &Poset, highlights: &[Hit]) -> String {
    let mut out = String::from("digraph poset {\n");
    if p.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  rankdir=BT;\n  node [shape=circle];\n");
    let members: Vec<Vec<usize>> = highlights.iter().map(|h| h.elements()).collect();
    let owner = |x: usize| members.iter().position(|m| m.binary_search(&x).is_ok());
    for x in 0..p.len() {
        match owner(x) {
            Some(i) => {
                let c = PALETTE[i % PALETTE.len()];
                writeln!(
                    out,
                    "  {} [style=filled, fillcolor=\"{c}\", fontcolor=white];",
                    quote(p.name(x))
                )
                .unwrap();
            }
            None => writeln!(out, "  {};", quote(p.name(x))).unwrap(),
        }
    }
    for (x, y) in p.covers() {
        let shared = members
            .iter()
            .position(|m| m.binary_search(&x).is_ok() && m.binary_search(&y).is_ok());
        match shared {
            Some(i) => {
                let c = PALETTE[i % PALETTE.len()];
                writeln!(
                    out,
                    "  {} -> {} [color=\"{c}\", penwidth=2];",
                    quote(p.name(x)),
                    quote(p.name(y))
                )
                .unwrap();
            }
            None => writeln!(out, "  {} -> {};", quote(p.name(x)), quote(p.name(y))).unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn rows_to_line(rows: &OrderRows) -> String {
    rows.iter()
        .map(|r| format!("{r:x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn line_to_rows(line: &str) -> Option<OrderRows> {
    line.split_whitespace()
        .map(|t| u16::from_str_radix(t, 16).ok())
        .collect()
}

/// Canonical order rows of every `n`-element poset, read from the cache
/// directory when present and written there after a fresh enumeration.
/// A cache file that does not parse is ignored and rewritten.
pub fn cached_canonical_rows(n: usize) -> Vec<OrderRows> {
    let Some(dir) = cache_dir() else {
        return enum_canonical_rows(n);
    };
    let path = dir.join(format!("posets-{n}.txt"));
    if let Ok(text) = fs::read_to_string(&path) {
        let rows: Option<Vec<OrderRows>> = text
            .lines()
            .map(|l| line_to_rows(l).filter(|r| r.len() == n))
            .collect();
        if let Some(rows) = rows.filter(|r| !r.is_empty()) {
            return rows;
        }
    }
    let rows = enum_canonical_rows(n);
    let body: String = rows.iter().map(|r| rows_to_line(r) + "\n").collect();
    let _ = fs::create_dir_all(&dir).and_then(|_| fs::write(&path, body));
    rows
}
