//! Line-based text formats for instances and packings.
//!
//! ```text
//! strip W=10 n=2
//! item 0 w=4 h=3
//! item 1 w=10 h=1
//! ```
//!
//! ```text
//! packing instance=3f2a9c0d1b2e4f56 height=4
//! place 0 x=0 y=0
//! place 1 x=0 y=3
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use stripack::geom::{packing_height, validate, Instance, Item, ItemId, Packing, Placement, Violation};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn field(line: usize, tok: Option<&&str>, key: &str) -> Result<i64, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {key}=")))?;
    let v = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=<int>, got `{tok}`")))?;
    v.parse().map_err(|_| err(line, format!("{key}: `{v}` is not an integer")))
}

fn id(line: usize, tok: Option<&&str>) -> Result<u32, ParseError> {
    let tok = tok.ok_or_else(|| err(line, "missing item id"))?;
    tok.parse().map_err(|_| err(line, format!("`{tok}` is not an item id")))
}

fn no_more(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    match toks.get(n) {
        Some(t) => Err(err(line, format!("unexpected `{t}`"))),
        None => Ok(()),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut it = lines(text);
    let (hl, head) = it.next().ok_or_else(|| err(1, "empty file, expected `strip W=<int> n=<int>`"))?;
    if head[0] != "strip" {
        return Err(err(hl, format!("expected `strip`, got `{}`", head[0])));
    }
    let width = field(hl, head.get(1), "W")?;
    let n = field(hl, head.get(2), "n")?;
    no_more(hl, &head, 3)?;
    if width < 1 {
        return Err(err(hl, format!("strip width must be positive, got {width}")));
    }
    if n < 0 {
        return Err(err(hl, format!("item count must not be negative, got {n}")));
    }
    let mut items: Vec<Item> = Vec::new();
    let mut last = hl;
    for (l, toks) in it {
        last = l;
        if toks[0] != "item" {
            return Err(err(l, format!("expected `item`, got `{}`", toks[0])));
        }
        let i = id(l, toks.get(1))?;
        let w = field(l, toks.get(2), "w")?;
        let h = field(l, toks.get(3), "h")?;
        no_more(l, &toks, 4)?;
        if w < 1 || h < 1 {
            return Err(err(l, format!("item {i} has a non-positive side")));
        }
        if w > width {
            return Err(err(l, format!("item {i} of width {w} is wider than the strip ({width})")));
        }
        if items.iter().any(|x| x.id.0 == i) {
            return Err(err(l, format!("duplicate item id {i}")));
        }
        if items.len() as i64 == n {
            return Err(err(l, format!("more than n={n} items")));
        }
        items.push(Item::new(i, w, h));
    }
    if (items.len() as i64) < n {
        return Err(err(last, format!("expected {n} items, found {}", items.len())));
    }
    Instance::new(width, items).map_err(|e| err(hl, e.to_string()))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut s = format!("strip W={} n={}\n", instance.width(), instance.len());
    for it in instance.items() {
        let _ = writeln!(s, "item {} w={} h={}", it.id, it.w, it.h);
    }
    s
}

/// First 16 hex digits of the SHA-256 of the canonical instance text.
pub fn instance_hash(instance: &Instance) -> String {
    let d = Sha256::digest(write_instance(instance).as_bytes());
    d.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingFile {
    pub instance: String,
    pub height: i64,
    pub packing: Packing,
}

pub fn parse_packing(text: &str) -> Result<PackingFile, ParseError> {
    let mut it = lines(text);
    let (hl, head) = it.next().ok_or_else(|| err(1, "empty file, expected `packing instance=<hash> height=<int>`"))?;
    if head[0] != "packing" {
        return Err(err(hl, format!("expected `packing`, got `{}`", head[0])));
    }
    let hash = head
        .get(1)
        .and_then(|t| t.strip_prefix("instance="))
        .ok_or_else(|| err(hl, "expected instance=<hash>"))?
        .to_string();
    let height = field(hl, head.get(2), "height")?;
    no_more(hl, &head, 3)?;
    let mut placements = Vec::new();
    for (l, toks) in it {
        if toks[0] != "place" {
            return Err(err(l, format!("expected `place`, got `{}`", toks[0])));
        }
        let i = id(l, toks.get(1))?;
        let x = field(l, toks.get(2), "x")?;
        let y = field(l, toks.get(3), "y")?;
        no_more(l, &toks, 4)?;
        placements.push(Placement { id: ItemId(i), x, y });
    }
    Ok(PackingFile { instance: hash, height, packing: Packing::new(placements) })
}

/// Placements sorted by id.
pub fn write_packing(instance: &Instance, packing: &Packing) -> String {
    let mut ps = packing.placements.clone();
    ps.sort_by_key(|p| p.id);
    let mut s = format!("packing instance={} height={}\n", instance_hash(instance), packing_height(instance, packing));
    for p in ps {
        let _ = writeln!(s, "place {} x={} y={}", p.id, p.x, p.y);
    }
    s
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error("packing was made for instance {found}, this instance is {expected}")]
    Hash { expected: String, found: String },
    #[error("header says height {stated}, placements give {actual}")]
    Height { stated: i64, actual: i64 },
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Checks a parsed packing file against its instance.
pub fn check_packing(instance: &Instance, file: &PackingFile) -> Result<(), LoadError> {
    let expected = instance_hash(instance);
    if file.instance != expected {
        return Err(LoadError::Hash { expected, found: file.instance.clone() });
    }
    let report = validate(instance, &file.packing);
    if !report.is_ok() {
        return Err(LoadError::Invalid(report.violations));
    }
    let actual = packing_height(instance, &file.packing);
    if actual != file.height {
        return Err(LoadError::Height { stated: file.height, actual });
    }
    Ok(())
}

/// Item dimensions by id, for renderers and reports.
pub fn dims(instance: &Instance) -> BTreeMap<ItemId, (i64, i64)> {
    instance.items().iter().map(|i| (i.id, (i.w, i.h))).collect()
}
