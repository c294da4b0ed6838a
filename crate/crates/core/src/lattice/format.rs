//! Plain-text point files.
//!
//! ```text
//! dim=2
//! 0,1
//! 1,0
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Integer files
//! describe lattice point sets; the same layout with real coordinates is used
//! for explicit samples of subsets of the unit cube.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{LatticePoint, LatticePointSet};
use crate::error::{Error, Result};

fn parse_rows<T: FromStr>(text: &str) -> Result<(usize, Vec<Vec<T>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `dim=<n>` header".into(),
    })?;
    let dim = header
        .strip_prefix("dim=")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected `dim=<n>` with n >= 1, found `{header}`"),
        })?;

    let mut rows = Vec::new();
    for (line, l) in lines {
        let row = l
            .split(',')
            .map(|tok| {
                tok.trim().parse::<T>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad coordinate `{}`", tok.trim()),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if row.len() != dim {
            return Err(Error::Parse {
                line,
                msg: format!("expected {dim} coordinates, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    Ok((dim, rows))
}

/// Parses an integer point file. Duplicate points are rejected.
pub fn parse_point_set(text: &str) -> Result<LatticePointSet> {
    let (dim, rows) = parse_rows::<i64>(text)?;
    let points = rows.into_iter().map(LatticePoint).collect();
    LatticePointSet::new(dim, points)
}

/// Parses a real-valued point file.
pub fn parse_real_points(text: &str) -> Result<(usize, Vec<Vec<f64>>)> {
    let (dim, rows) = parse_rows::<f64>(text)?;
    if let Some((i, _)) = rows
        .iter()
        .enumerate()
        .find(|(_, r)| r.iter().any(|v| !v.is_finite()))
    {
        return Err(Error::Parse {
            line: i + 2,
            msg: "non-finite coordinate".into(),
        });
    }
    Ok((dim, rows))
}

pub fn write_real_points(dim: usize, points: &[Vec<f64>]) -> String {
    let mut out = format!("dim={dim}\n");
    for p in points {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

impl LatticePointSet {
    /// Canonical text form: header then points in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim={}\n", self.dim);
        for p in &self.points {
            for (i, c) in p.coords().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{c}");
            }
            out.push('\n');
        }
        out
    }
}
