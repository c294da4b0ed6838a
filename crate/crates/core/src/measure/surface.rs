//! Antichains in `[0,1]^n` given as graphs `{(x, f(x)) : x in B}` of
//! order-reversing functions over a base region `B` of `[0,1]^(n-1)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::staircase::staircase_value;
use crate::error::{Error, Result};

/// Axis-aligned box in the base cube, closed on both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BaseBox {
    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a).max(0.0)).product()
    }
}

/// Graph of `x -> offset + gradient . x` over a union of boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearGraph {
    pub gradient: Vec<f64>,
    pub offset: f64,
    pub boxes: Vec<BaseBox>,
}

impl LinearGraph {
    pub fn new(gradient: Vec<f64>, offset: f64, boxes: Vec<BaseBox>) -> Result<Self> {
        let d = gradient.len();
        if d == 0 {
            return Err(Error::InvalidSurface("linear graph needs n >= 2".into()));
        }
        if boxes.is_empty() {
            return Err(Error::InvalidSurface("linear graph needs at least one box".into()));
        }
        if gradient.iter().chain([&offset]).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSurface("non-finite coefficient".into()));
        }
        for b in &boxes {
            if b.lo.len() != d || b.hi.len() != d {
                return Err(Error::InvalidSurface(format!(
                    "box dimension differs from gradient length {d}"
                )));
            }
            let ok = b
                .lo
                .iter()
                .zip(&b.hi)
                .all(|(&a, &c)| (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&c) && a <= c);
            if !ok {
                return Err(Error::InvalidSurface(format!("box {b:?} not inside the unit cube")));
            }
            let (lo, hi) = linear_range(&gradient, offset, &b.lo, &b.hi);
            if lo < -1e-12 || hi > 1.0 + 1e-12 {
                return Err(Error::InvalidSurface(format!(
                    "values [{lo}, {hi}] over box leave [0,1]"
                )));
            }
        }
        Ok(Self {
            gradient,
            offset,
            boxes,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.offset + self.gradient.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }

    /// Lebesgue measure of the union of the boxes.
    pub fn base_measure(&self) -> f64 {
        union_volume(&self.boxes)
    }
}

fn linear_range(gradient: &[f64], offset: f64, lo: &[f64], hi: &[f64]) -> (f64, f64) {
    let mut min = offset;
    let mut max = offset;
    for ((&c, &a), &b) in gradient.iter().zip(lo).zip(hi) {
        if c >= 0.0 {
            min += c * a;
            max += c * b;
        } else {
            min += c * b;
            max += c * a;
        }
    }
    (min, max)
}

/// Exact volume of a union of boxes by coordinate compression.
fn union_volume(boxes: &[BaseBox]) -> f64 {
    let d = boxes[0].lo.len();
    let edges: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut e: Vec<f64> = boxes.iter().flat_map(|b| [b.lo[k], b.hi[k]]).collect();
            e.sort_by(f64::total_cmp);
            e.dedup();
            e
        })
        .collect();
    let cells: Vec<usize> = edges.iter().map(|e| e.len().saturating_sub(1)).collect();
    if cells.contains(&0) {
        return 0.0;
    }
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    loop {
        let mid: Vec<f64> = (0..d)
            .map(|k| 0.5 * (edges[k][idx[k]] + edges[k][idx[k] + 1]))
            .collect();
        let covered = boxes
            .iter()
            .any(|b| (0..d).all(|k| b.lo[k] <= mid[k] && mid[k] <= b.hi[k]));
        if covered {
            total += (0..d)
                .map(|k| edges[k][idx[k] + 1] - edges[k][idx[k]])
                .product::<f64>();
        }
        let mut k = d;
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cells[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Samples of an order-reversing function on the regular grid with `nodes`
/// points per axis over `[0,1]^(n-1)`, stored row-major (last axis fastest)
/// and interpolated multilinearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedMonotone {
    base_dim: usize,
    nodes: usize,
    values: Vec<f64>,
}

impl TabulatedMonotone {
    pub fn new(base_dim: usize, nodes: usize, values: Vec<f64>) -> Result<Self> {
        if base_dim == 0 {
            return Err(Error::InvalidSurface("tabulated surface needs n >= 2".into()));
        }
        if nodes < 2 {
            return Err(Error::InvalidSurface("need at least 2 nodes per axis".into()));
        }
        let expect = nodes.pow(base_dim as u32);
        if values.len() != expect {
            return Err(Error::InvalidSurface(format!(
                "expected {expect} values, found {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidSurface(format!("value {v} outside [0,1]")));
        }
        let t = Self {
            base_dim,
            nodes,
            values,
        };
        // Neighbour checks along every axis suffice on a grid.
        for flat in 0..t.values.len() {
            let idx = t.unflatten(flat);
            for axis in 0..base_dim {
                if idx[axis] + 1 < nodes {
                    let mut next = idx.clone();
                    next[axis] += 1;
                    if t.values[t.flatten(&next)] > t.values[flat] {
                        return Err(Error::InvalidSurface(format!(
                            "samples increase along axis {axis} at node {idx:?}"
                        )));
                    }
                }
            }
        }
        Ok(t)
    }

    /// Tabulates `f` at the grid nodes.
    pub fn from_fn(base_dim: usize, nodes: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let h = 1.0 / (nodes - 1) as f64;
        let values = (0..nodes.pow(base_dim as u32))
            .map(|flat| {
                let mut rem = flat;
                let mut x = vec![0.0; base_dim];
                for k in (0..base_dim).rev() {
                    x[k] = (rem % nodes) as f64 * h;
                    rem /= nodes;
                }
                f(&x)
            })
            .collect();
        Self::new(base_dim, nodes, values)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.nodes + i)
    }

    pub(crate) fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.base_dim];
        for k in (0..self.base_dim).rev() {
            idx[k] = flat % self.nodes;
            flat /= self.nodes;
        }
        idx
    }

    pub fn node_coord(&self, i: usize) -> f64 {
        i as f64 / (self.nodes - 1) as f64
    }

    /// Cell index and local coordinate in `[0,1]` along one axis.
    fn locate(&self, v: f64) -> (usize, f64) {
        let cells = self.nodes - 1;
        let s = v.clamp(0.0, 1.0) * cells as f64;
        let c = (s.floor() as usize).min(cells - 1);
        (c, s - c as f64)
    }

    /// Multilinear interpolation.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let located: Vec<(usize, f64)> = x.iter().map(|&v| self.locate(v)).collect();
        let mut total = 0.0;
        for corner in 0..(1usize << self.base_dim) {
            let mut w = 1.0;
            let mut idx = Vec::with_capacity(self.base_dim);
            for (k, &(c, t)) in located.iter().enumerate() {
                if corner >> k & 1 == 1 {
                    w *= t;
                    idx.push(c + 1);
                } else {
                    w *= 1.0 - t;
                    idx.push(c);
                }
            }
            if w != 0.0 {
                total += w * self.values[self.flatten(&idx)];
            }
        }
        total
    }

    /// Gradient of the interpolant at an interior point of a cell.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let located: Vec<(usize, f64)> = x.iter().map(|&v| self.locate(v)).collect();
        let scale = (self.nodes - 1) as f64;
        (0..self.base_dim)
            .map(|axis| {
                let mut total = 0.0;
                for corner in 0..(1usize << self.base_dim) {
                    let mut w = 1.0;
                    let mut idx = Vec::with_capacity(self.base_dim);
                    for (k, &(c, t)) in located.iter().enumerate() {
                        let up = corner >> k & 1 == 1;
                        if k == axis {
                            w *= if up { scale } else { -scale };
                        } else {
                            w *= if up { t } else { 1.0 - t };
                        }
                        idx.push(if up { c + 1 } else { c });
                    }
                    total += w * self.values[self.flatten(&idx)];
                }
                total
            })
            .collect()
    }
}

/// An antichain (or weak antichain) presented as the graph of an
/// order-reversing function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MonotoneGraphSurface {
    /// `{x in [0,1]^n : sum x_i = n/2}`.
    Hyperplane { n: usize },
    /// `{x in [0,1]^n : ||x||_p = 1}`.
    LpSphere { n: usize, p: f64 },
    Linear(LinearGraph),
    Tabulated(TabulatedMonotone),
    /// Decreasing middle-thirds staircase at the given refinement depth.
    SingularStaircase { depth: u32 },
}

impl MonotoneGraphSurface {
    pub fn hyperplane(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSurface("hyperplane needs n >= 2".into()));
        }
        Ok(Self::Hyperplane { n })
    }

    pub fn lp_sphere(n: usize, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSurface("lp sphere needs n >= 2".into()));
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidSurface(format!("p = {p} must be finite and >= 1")));
        }
        Ok(Self::LpSphere { n, p })
    }

    pub fn staircase(depth: u32) -> Self {
        Self::SingularStaircase { depth }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Hyperplane { n } | Self::LpSphere { n, .. } => *n,
            Self::Linear(l) => l.gradient.len() + 1,
            Self::Tabulated(t) => t.base_dim + 1,
            Self::SingularStaircase { .. } => 2,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Hyperplane { .. } => "hyperplane",
            Self::LpSphere { .. } => "lpsphere",
            Self::Linear(_) => "linear",
            Self::Tabulated(_) => "tabulated",
            Self::SingularStaircase { .. } => "staircase",
        }
    }

    /// `f(x)` for `x` in the base region, `None` outside it.
    pub fn value(&self, x: &[f64]) -> Option<f64> {
        match self {
            Self::Hyperplane { n } => {
                let v = *n as f64 / 2.0 - x.iter().sum::<f64>();
                (0.0..=1.0).contains(&v).then_some(v)
            }
            Self::LpSphere { p, .. } => {
                let s: f64 = x.iter().map(|v| v.powf(*p)).sum();
                (s <= 1.0).then(|| (1.0 - s).max(0.0).powf(1.0 / p))
            }
            Self::Linear(l) => {
                let inside = l.boxes.iter().any(|b| {
                    x.iter()
                        .zip(b.lo.iter().zip(&b.hi))
                        .all(|(v, (a, c))| a <= v && v <= c)
                });
                inside.then(|| l.eval(x))
            }
            Self::Tabulated(t) => Some(t.eval(x)),
            Self::SingularStaircase { depth } => Some(staircase_value(*depth, x[0])),
        }
    }

    /// Ranges `(inf, sup, sup_attained)` of `f` over the part of the base
    /// cell lying in the base region. The cell is `[lo, hi)` on axes where
    /// `closed[k]` is false and `[lo, hi]` otherwise. Empty when the cell
    /// misses the base region.
    pub(crate) fn cell_ranges(&self, lo: &[f64], hi: &[f64], closed: &[bool]) -> Vec<(f64, f64, bool)> {
        match self {
            Self::Linear(l) => l
                .boxes
                .iter()
                .filter_map(|b| {
                    let d = lo.len();
                    let meets = (0..d).all(|k| {
                        b.hi[k] >= lo[k] && if closed[k] { b.lo[k] <= hi[k] } else { b.lo[k] < hi[k] }
                    });
                    if !meets {
                        return None;
                    }
                    let a: Vec<f64> = (0..d).map(|k| lo[k].max(b.lo[k])).collect();
                    let c: Vec<f64> = (0..d).map(|k| hi[k].min(b.hi[k])).collect();
                    // The maximum sits on the upper face of every axis with
                    // positive slope; it is missed if that face is open.
                    let attained =
                        (0..d).all(|k| l.gradient[k] <= 0.0 || closed[k] || b.hi[k] < hi[k]);
                    let (min, max) = linear_range(&l.gradient, l.offset, &a, &c);
                    Some((min, max, attained))
                })
                .collect(),
            Self::Hyperplane { n } => {
                let half = *n as f64 / 2.0;
                let top = half - lo.iter().sum::<f64>();
                let bottom = half - hi.iter().sum::<f64>();
                // f only reaches `bottom` when every upper face is closed
                let reaches_bottom = closed.iter().all(|&c| c);
                if bottom > 1.0 || (bottom == 1.0 && !reaches_bottom) || top < 0.0 {
                    Vec::new()
                } else {
                    vec![(bottom.max(0.0), top.min(1.0), true)]
                }
            }
            _ => match self.value(lo) {
                None => Vec::new(),
                // Decreasing and continuous on a down-closed base: the
                // maximum is at `lo`, the infimum at `hi` or on the rim
                // where f = 0.
                Some(max) => vec![(self.value(hi).unwrap_or(0.0), max, true)],
            },
        }
    }

    /// Base intervals of a planar surface over which `f` is defined.
    pub(crate) fn base_intervals(&self) -> Result<Vec<(f64, f64)>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok(match self {
            Self::Linear(l) => {
                let mut iv: Vec<(f64, f64)> = l.boxes.iter().map(|b| (b.lo[0], b.hi[0])).collect();
                iv.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut merged: Vec<(f64, f64)> = Vec::new();
                for (a, b) in iv {
                    match merged.last_mut() {
                        Some(last) if a <= last.1 => last.1 = last.1.max(b),
                        _ => merged.push((a, b)),
                    }
                }
                merged
            }
            _ => vec![(0.0, 1.0)],
        })
    }

    /// Parses the `key=value` descriptor format (see [`Self::to_descriptor`]).
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut family = None;
        let mut n = None;
        let mut p = None;
        let mut gradient = None;
        let mut offset = 0.0;
        let mut boxes = Vec::new();
        let mut nodes = None;
        let mut values = None;
        let mut depth = None;

        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, val) = l
                .split_once('=')
                .ok_or_else(|| perr(line, format!("expected key=value, found `{l}`")))?;
            let val = val.trim();
            let num = |v: &str| -> Result<f64> {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| perr(line, format!("bad number `{v}`")))
            };
            let list = |v: &str| -> Result<Vec<f64>> { v.split(',').map(num).collect() };
            match key.trim() {
                "family" => family = Some(val.to_ascii_lowercase()),
                "n" => n = Some(num(val)? as usize),
                "p" => p = Some(num(val)?),
                "gradient" => gradient = Some(list(val)?),
                "offset" => offset = num(val)?,
                "box" => {
                    let mut b = BaseBox {
                        lo: Vec::new(),
                        hi: Vec::new(),
                    };
                    for part in val.split(',') {
                        let (a, c) = part
                            .split_once(':')
                            .ok_or_else(|| perr(line, format!("box side `{part}` is not lo:hi")))?;
                        b.lo.push(num(a)?);
                        b.hi.push(num(c)?);
                    }
                    boxes.push(b);
                }
                "nodes" => nodes = Some(num(val)? as usize),
                "values" => values = Some(list(val)?),
                "depth" => depth = Some(num(val)? as u32),
                other => return Err(perr(line, format!("unknown key `{other}`"))),
            }
        }

        let need = |what: &str| Error::InvalidSurface(format!("descriptor is missing `{what}`"));
        match family.as_deref() {
            Some("hyperplane") => Self::hyperplane(n.ok_or_else(|| need("n"))?),
            Some("lpsphere") => Self::lp_sphere(n.ok_or_else(|| need("n"))?, p.ok_or_else(|| need("p"))?),
            Some("linear") => {
                let gradient = gradient.ok_or_else(|| need("gradient"))?;
                if let Some(n) = n {
                    if n != gradient.len() + 1 {
                        return Err(Error::InvalidSurface(format!(
                            "n = {n} but gradient has {} entries",
                            gradient.len()
                        )));
                    }
                }
                if boxes.is_empty() {
                    boxes.push(BaseBox::unit(gradient.len()));
                }
                Ok(Self::Linear(LinearGraph::new(gradient, offset, boxes)?))
            }
            Some("tabulated") => {
                let n = n.ok_or_else(|| need("n"))?;
                if n < 2 {
                    return Err(Error::InvalidSurface("tabulated surface needs n >= 2".into()));
                }
                Ok(Self::Tabulated(TabulatedMonotone::new(
                    n - 1,
                    nodes.ok_or_else(|| need("nodes"))?,
                    values.ok_or_else(|| need("values"))?,
                )?))
            }
            Some("staircase") => Ok(Self::staircase(depth.ok_or_else(|| need("depth"))?)),
            Some(other) => Err(Error::InvalidSurface(format!("unknown family `{other}`"))),
            None => Err(need("family")),
        }
    }

    pub fn to_descriptor(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = format!("family={}\n", self.family_name());
        match self {
            Self::Hyperplane { n } => {
                let _ = writeln!(out, "n={n}");
            }
            Self::LpSphere { n, p } => {
                let _ = writeln!(out, "n={n}\np={p}");
            }
            Self::Linear(l) => {
                let _ = writeln!(out, "n={}\ngradient={}\noffset={}", self.dim(), join(&l.gradient), l.offset);
                for b in &l.boxes {
                    let sides: Vec<String> =
                        b.lo.iter().zip(&b.hi).map(|(a, c)| format!("{a}:{c}")).collect();
                    let _ = writeln!(out, "box={}", sides.join(","));
                }
            }
            Self::Tabulated(t) => {
                let _ = writeln!(out, "n={}\nnodes={}\nvalues={}", self.dim(), t.nodes, join(&t.values));
            }
            Self::SingularStaircase { depth } => {
                let _ = writeln!(out, "depth={depth}");
            }
        }
        out
    }
}
