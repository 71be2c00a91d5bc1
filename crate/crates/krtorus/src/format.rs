//! The `torus-field v1` text format.
//!
//! ```text
//! torus-field v1
//! # comment
//! <V> <T>
//! fx [x y z]        V lines
//! i j k             T lines, 0-based, counter-clockwise
//! ```
//!
//! Scalars are read exactly (`0.25`, `1/3`, `-2e-3`), so a file written with
//! 12 decimals reproduces the same levels on every platform.

use std::fmt::Write as _;

use krtorus_core::{Level, SurfaceError, SurfaceField};

pub const HEADER: &str = "torus-field v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: expected header `{HEADER}`")]
    Header { line: usize },
    #[error("line {line}: expected `<V> <T>`")]
    Counts { line: usize },
    #[error("line {line}: bad vertex record: {reason}")]
    Vertex { line: usize, reason: String },
    #[error("line {line}: bad triangle record: {reason}")]
    Triangle { line: usize, reason: String },
    #[error("expected {expected} {what} records, found {got}")]
    Truncated { what: &'static str, expected: usize, got: usize },
    #[error("line {line}: unexpected trailing data")]
    Trailing { line: usize },
    #[error("coordinates must be given for every vertex or for none")]
    MixedCoords,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_field(text: &str) -> Result<SurfaceField, FormatError> {
    let mut lines = records(text);
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["torus-field", "v1"] => {}
        Some((line, _)) => return Err(FormatError::Header { line }),
        None => return Err(FormatError::Header { line: 1 }),
    }
    let (line, counts) = lines.next().ok_or(FormatError::Counts { line: 2 })?;
    let counts: Vec<usize> = counts.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| FormatError::Counts { line })?;
    let [nv, nt] = counts[..] else {
        return Err(FormatError::Counts { line });
    };

    let mut values = Vec::with_capacity(nv);
    let mut coords = Vec::with_capacity(nv);
    for got in 0..nv {
        let (line, rec) = lines.next().ok_or(FormatError::Truncated { what: "vertex", expected: nv, got })?;
        let vertex = |reason: String| FormatError::Vertex { line, reason };
        let fields: Vec<&str> = rec.split_whitespace().collect();
        let value: Level = fields[0].parse().map_err(|e: krtorus_core::ParseLevelError| vertex(format!("scalar `{}`", e.0)))?;
        values.push(value);
        match fields.len() {
            1 => coords.push(None),
            4 => {
                let mut c = [0.0; 3];
                for (slot, s) in c.iter_mut().zip(&fields[1..]) {
                    *slot = s.parse().map_err(|_| vertex(format!("coordinate `{s}`")))?;
                }
                coords.push(Some(c));
            }
            k => return Err(vertex(format!("{k} fields, expected 1 or 4"))),
        }
    }

    let mut triangles = Vec::with_capacity(nt);
    for got in 0..nt {
        let (line, rec) = lines.next().ok_or(FormatError::Truncated { what: "triangle", expected: nt, got })?;
        let idx: Vec<usize> = rec
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::Triangle { line, reason: "indices must be non-negative integers".into() })?;
        let [a, b, c] = idx[..] else {
            return Err(FormatError::Triangle { line, reason: format!("{} indices, expected 3", idx.len()) });
        };
        triangles.push([a, b, c]);
    }
    if let Some((line, _)) = lines.next() {
        return Err(FormatError::Trailing { line });
    }

    let field = SurfaceField::new(values, triangles)?;
    if coords.iter().all(Option::is_none) {
        return Ok(field);
    }
    let coords: Option<Vec<[f64; 3]>> = coords.into_iter().collect();
    Ok(field.with_coords(coords.ok_or(FormatError::MixedCoords)?)?)
}

pub fn write_field(s: &SurfaceField) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "{} {}", s.vertex_count(), s.triangle_count()).unwrap();
    for (v, value) in s.values().iter().enumerate() {
        match s.coords() {
            Some(c) => writeln!(out, "{value} {} {} {}", c[v][0], c[v][1], c[v][2]).unwrap(),
            None => writeln!(out, "{value}").unwrap(),
        }
    }
    for [a, b, c] in s.triangles() {
        writeln!(out, "{a} {b} {c}").unwrap();
    }
    out
}
