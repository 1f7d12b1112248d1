//! Line-oriented text format for rooted maps and quadrangulations.
//!
//! ```text
//! HEMAP 1 <half-edge count> <root> [QUAD <colour of the origin of half-edge 0>]
//! <i> <alpha(i)> <sigma(i)>      one line per half-edge, i = 0, 1, ...
//! ```
//! Colour 0 is black, 1 white. Several records may follow each other.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::map::HalfEdgeMap;
use super::quad::Quadrangulation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hemap {
    Map(HalfEdgeMap),
    Quad(Quadrangulation),
}

impl Hemap {
    pub fn map(&self) -> &HalfEdgeMap {
        match self {
            Hemap::Map(m) => m,
            Hemap::Quad(q) => q.map(),
        }
    }
}

fn write_body<W: Write>(m: &HalfEdgeMap, out: &mut W) -> Result<()> {
    for h in 0..m.half_edge_count() as u32 {
        writeln!(out, "{h} {} {}", m.alpha(h), m.sigma(h))?;
    }
    Ok(())
}

pub fn write_map<W: Write>(m: &HalfEdgeMap, out: &mut W) -> Result<()> {
    writeln!(out, "HEMAP 1 {} {}", m.half_edge_count(), m.root())?;
    write_body(m, out)
}

pub fn write_quad<W: Write>(q: &Quadrangulation, out: &mut W) -> Result<()> {
    let c = if q.is_black(0) { 0 } else { 1 };
    writeln!(out, "HEMAP 1 {} {} QUAD {c}", q.map().half_edge_count(), q.map().root())?;
    write_body(q.map(), out)
}

pub fn write<W: Write>(obj: &Hemap, out: &mut W) -> Result<()> {
    match obj {
        Hemap::Map(m) => write_map(m, out),
        Hemap::Quad(q) => write_quad(q, out),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn nums(text: &str, line: usize) -> Result<Vec<u32>> {
    text.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| parse_err(line, format!("not a number: {t:?}"))))
        .collect()
}

/// Reads every record in the stream.
pub fn read_all<R: BufRead>(input: R) -> Result<Vec<Hemap>> {
    let mut lines = input.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let header = header?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() < 4 || parts[0] != "HEMAP" {
            return Err(parse_err(ln, "expected `HEMAP 1 <count> <root>`"));
        }
        if parts[1] != "1" {
            return Err(parse_err(ln, format!("unsupported version {}", parts[1])));
        }
        let counts = nums(&parts[2..4].join(" "), ln)?;
        let (len, root) = (counts[0] as usize, counts[1]);
        let quad = match parts.get(4..) {
            Some([]) | None => None,
            Some(["QUAD", c]) => match *c {
                "0" => Some(true),
                "1" => Some(false),
                _ => return Err(parse_err(ln, "colour must be 0 or 1")),
            },
            _ => return Err(parse_err(ln, "trailing header fields")),
        };
        let mut alpha = vec![0u32; len];
        let mut sigma = vec![0u32; len];
        let mut seen = vec![false; len];
        for _ in 0..len {
            let (ln, text) = lines.next().ok_or_else(|| parse_err(ln, "record ends early"))?;
            let v = nums(&text?, ln)?;
            if v.len() != 3 || v[0] as usize >= len {
                return Err(parse_err(ln, "expected `<i> <alpha> <sigma>`"));
            }
            if std::mem::replace(&mut seen[v[0] as usize], true) {
                return Err(parse_err(ln, format!("half-edge {} listed twice", v[0])));
            }
            alpha[v[0] as usize] = v[1];
            sigma[v[0] as usize] = v[2];
        }
        let m = if len == 0 { HalfEdgeMap::vertex_map() } else { HalfEdgeMap::new(alpha, sigma, root)? };
        match quad {
            None => out.push(Hemap::Map(m)),
            Some(first_black) => {
                let q = Quadrangulation::from_map(m)?;
                if q.is_black(0) != first_black {
                    return Err(parse_err(ln, "declared colour contradicts the rooting"));
                }
                out.push(Hemap::Quad(q));
            }
        }
    }
    Ok(out)
}

/// Reads exactly one record.
pub fn read<R: BufRead>(input: R) -> Result<Hemap> {
    let mut all = read_all(input)?;
    if all.len() != 1 {
        return Err(parse_err(0, format!("expected one record, found {}", all.len())));
    }
    Ok(all.pop().unwrap())
}
