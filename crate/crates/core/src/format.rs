//! Plain-text file formats.
//!
//! Every file starts with the line `#format 1`. Blank lines and further `#`
//! comment lines are ignored on input.
//!
//! * `.blocks`: a header `v=<points> b=<blocks>`, then one block per line as
//!   ascending 0-based point indices separated by spaces, lines sorted
//!   numerically.
//! * `.para`: a header `q=<q> classes=<q+1>`, then for each class a line
//!   `class <i>:` followed by its blocks, one per line as point lists.
//! * `.unital`: a header `q=<q>`, a line `S <points>` with the subgroup and one
//!   line `D <points>` per long-block set.

use std::fmt::Write as _;

use crate::design::Design;
use crate::grp::{Geometry, Subgroup};
use crate::para::Parallelism;
use crate::{BlockId, Error, Point, Result};

pub const HEADER: &str = "#format 1";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based numbers, after checking
/// the version header.
fn content_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.find(|(_, l)| !l.is_empty()) {
        Some((_, HEADER)) => {}
        Some((n, l)) => return Err(parse_err(n, format!("expected `{HEADER}`, found `{l}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    Ok(lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('#')).collect())
}

fn parse_points(line: usize, s: &str) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| parse_err(line, format!("bad point `{t}`"))))
        .collect()
}

/// Parses `key=value` pairs of a header line.
fn header_values(line: usize, s: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(parse_err(line, format!("expected header with {}", keys.join(", "))));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(f, k)| {
            f.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err(line, format!("expected `{k}=<number>`, found `{f}`")))
        })
        .collect()
}

fn push_points(out: &mut String, pts: &[u32]) {
    for (i, x) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x}").unwrap();
    }
    out.push('\n');
}

pub fn write_blocks(d: &Design) -> String {
    let mut blocks: Vec<Vec<u32>> = d
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort();
    let mut out = format!("{HEADER}\nv={} b={}\n", d.v, blocks.len());
    for b in &blocks {
        push_points(&mut out, b);
    }
    out
}

/// Reads a `.blocks` file. Blocks keep their file order.
pub fn read_blocks(text: &str) -> Result<Design> {
    let lines = content_lines(text)?;
    let (&(hl, h), rest) = lines.split_first().ok_or_else(|| parse_err(1, "missing header"))?;
    let hv = header_values(hl, h, &["v", "b"])?;
    let (v, b) = (hv[0], hv[1]);
    let mut blocks = Vec::with_capacity(b);
    for &(n, l) in rest {
        let pts = parse_points(n, l)?;
        if let Some(&x) = pts.iter().find(|&&x| x as usize >= v) {
            return Err(parse_err(n, format!("point {x} out of range for v={v}")));
        }
        blocks.push(pts);
    }
    if blocks.len() != b {
        return Err(parse_err(hl, format!("header announces {b} blocks, found {}", blocks.len())));
    }
    Ok(Design { v, blocks: blocks.into_iter().map(|mut b| { b.sort_unstable(); b }).collect() })
}

pub fn write_para(geo: &Geometry, p: &Parallelism) -> String {
    let mut out = format!("{HEADER}\nq={} classes={}\n", geo.q(), p.class_count());
    for (i, c) in p.classes().iter().enumerate() {
        writeln!(out, "class {i}:").unwrap();
        for &b in c {
            push_points(&mut out, &geo.sb.block(b).points);
        }
    }
    out
}

/// Raw content of a `.para` file: the order and the classes as block ids.
/// The classes are not checked against the parallelism laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaFile {
    pub q: u32,
    pub classes: Vec<Vec<BlockId>>,
}

/// Reads the order from a `.para` file header.
pub fn para_order(text: &str) -> Result<u32> {
    let lines = content_lines(text)?;
    let &(hl, h) = lines.first().ok_or_else(|| parse_err(1, "missing header"))?;
    Ok(header_values(hl, h, &["q", "classes"])?[0] as u32)
}

/// Reads a `.para` file over the geometry of matching order.
pub fn read_para(geo: &Geometry, text: &str) -> Result<ParaFile> {
    let lines = content_lines(text)?;
    let (&(hl, h), rest) = lines.split_first().ok_or_else(|| parse_err(1, "missing header"))?;
    let hv = header_values(hl, h, &["q", "classes"])?;
    if hv[0] as u32 != geo.q() {
        return Err(parse_err(hl, format!("file is for q={}, geometry has q={}", hv[0], geo.q())));
    }
    let mut classes: Vec<Vec<BlockId>> = Vec::new();
    for &(n, l) in rest {
        if let Some(idx) = l.strip_prefix("class ").and_then(|r| r.strip_suffix(':')) {
            if idx.trim().parse::<usize>().ok() != Some(classes.len()) {
                return Err(parse_err(n, format!("expected `class {}:`", classes.len())));
            }
            classes.push(Vec::new());
            continue;
        }
        let cur = classes.last_mut().ok_or_else(|| parse_err(n, "block before first class line"))?;
        let mut pts = parse_points(n, l)?;
        pts.sort_unstable();
        if pts.iter().any(|&x| x as usize >= geo.n()) {
            return Err(parse_err(n, "point out of range"));
        }
        let b = geo.sb.find(&geo.g, &pts).ok_or_else(|| parse_err(n, format!("`{l}` is not a short block")))?;
        cur.push(b);
    }
    if classes.len() != hv[1] {
        return Err(parse_err(hl, format!("header announces {} classes, found {}", hv[1], classes.len())));
    }
    Ok(ParaFile { q: hv[0] as u32, classes })
}

pub fn write_unital(q: u32, s: &Subgroup, d_sets: &[Vec<Point>]) -> String {
    let mut out = format!("{HEADER}\nq={q}\nS ");
    push_points(&mut out, &s.members);
    for d in d_sets {
        out.push_str("D ");
        push_points(&mut out, d);
    }
    out
}

/// Raw content of a `.unital` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitalFile {
    pub q: u32,
    pub s: Vec<Point>,
    pub d_sets: Vec<Vec<Point>>,
}

pub fn read_unital(text: &str) -> Result<UnitalFile> {
    let lines = content_lines(text)?;
    let (&(hl, h), rest) = lines.split_first().ok_or_else(|| parse_err(1, "missing header"))?;
    let q = header_values(hl, h, &["q"])?[0] as u32;
    let mut s = None;
    let mut d_sets = Vec::new();
    for &(n, l) in rest {
        if let Some(r) = l.strip_prefix("S ") {
            if s.replace(parse_points(n, r)?).is_some() {
                return Err(parse_err(n, "second `S` line"));
            }
        } else if let Some(r) = l.strip_prefix("D ") {
            d_sets.push(parse_points(n, r)?);
        } else {
            return Err(parse_err(n, format!("unexpected line `{l}`")));
        }
    }
    let s = s.ok_or_else(|| parse_err(hl, "missing `S` line"))?;
    Ok(UnitalFile { q, s, d_sets })
}
