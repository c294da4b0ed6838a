//! Cube covers of subsets of `[0,1]^n`.
//!
//! The unit interval is cut into `I_j = [(j-1)/m, j/m)` for `j = 1..m`, the
//! last one closed. `C(d)` is the product of the `I_{d_i}` and the cover
//! `G_m(W)` collects the 1-based multi-indices `d` with `C(d)` meeting `W`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePointSet};
use crate::measure::{MeasureEstimate, MonotoneGraphSurface};

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::OutOfRange {
            name: "m",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    Ok(())
}

fn interval_index(v: f64, m: usize) -> i64 {
    ((v * m as f64).floor() as i64 + 1).min(m as i64)
}

/// Index of the interval whose values lie just below `v`, for a supremum
/// that is approached but not reached.
fn interval_index_below(v: f64, m: usize) -> i64 {
    ((v * m as f64).ceil() as i64).clamp(1, m as i64)
}

/// 1-based cube index of a point of `[0,1]^n`.
pub fn cube_index(x: &[f64], m: usize) -> Result<LatticePoint> {
    check_m(m)?;
    if let Some(&bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange {
            name: "coordinate",
            value: bad,
            range: "[0, 1]",
        });
    }
    LatticePoint::new(x.iter().map(|&v| interval_index(v, m)).collect())
}

/// Membership test for [`SetSampler::Predicate`].
pub type PointTest = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Something that can report which grid cubes meet a target set.
#[derive(Clone)]
pub enum SetSampler {
    /// A finite point list; covers are exact.
    Points { dim: usize, points: Vec<Vec<f64>> },
    Surface(MonotoneGraphSurface),
    UnitCube(usize),
    /// Membership test probed on a centred `per_axis^n` grid in every cube.
    /// Covers can miss cubes and are flagged inexact.
    Predicate {
        dim: usize,
        test: PointTest,
        per_axis: usize,
    },
}

impl fmt::Debug for SetSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Points { dim, points } => write!(f, "Points(dim={dim}, {} points)", points.len()),
            Self::Surface(s) => write!(f, "Surface({s:?})"),
            Self::UnitCube(n) => write!(f, "UnitCube({n})"),
            Self::Predicate { dim, per_axis, .. } => write!(f, "Predicate(dim={dim}, per_axis={per_axis})"),
        }
    }
}

impl SetSampler {
    pub fn points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, min: 1 });
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        Ok(Self::Points { dim, points })
    }

    pub fn predicate(dim: usize, per_axis: usize, test: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        Self::Predicate {
            dim,
            test: Arc::new(test),
            per_axis: per_axis.max(1),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Points { dim, .. } | Self::Predicate { dim, .. } => *dim,
            Self::Surface(s) => s.dim(),
            Self::UnitCube(n) => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCover {
    pub m: usize,
    pub dim: usize,
    pub indices: LatticePointSet,
    /// False when the cover came from sampling and may miss cubes.
    pub exact: bool,
}

impl GridCover {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    /// `|G_m| / m^n`, the volume of the union of the cubes.
    pub fn volume_ratio(&self) -> f64 {
        self.count() as f64 / (self.m as f64).powi(self.dim as i32)
    }

    /// Cover of the projection deleting `axis`, which equals the projection
    /// of the index set.
    pub fn project(&self, axis: usize) -> Result<GridCover> {
        Ok(GridCover {
            m: self.m,
            dim: self.dim - 1,
            indices: self.indices.project(axis)?,
            exact: self.exact,
        })
    }
}

/// Calls `f` with every 1-based index of `[1, m]^dim`, in parallel; results
/// are concatenated in lexicographic order of the index.
fn scan_cubes<F>(dim: usize, m: usize, f: F) -> Vec<LatticePoint>
where
    F: Fn(&[i64]) -> Vec<LatticePoint> + Sync,
{
    let total = m.pow(dim as u32);
    let chunks: Vec<Vec<LatticePoint>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut idx = vec![0i64; dim];
            for k in (0..dim).rev() {
                idx[k] = (rem % m) as i64 + 1;
                rem /= m;
            }
            f(&idx)
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

fn point(coords: Vec<i64>) -> LatticePoint {
    LatticePoint::new(coords).expect("non-empty index")
}

/// `sum x_i = n/2` meets `C(d)` iff `L <= nm/2 < L + n` with
/// `L = sum (d_i - 1)`, since the sum ranges over `[L/m, (L+n)/m)` there.
fn hyperplane_cover(n: usize, m: usize) -> Vec<LatticePoint> {
    let nm = (n * m) as i64;
    let mi = m as i64;
    scan_cubes(n - 1, m, |base| {
        let t: i64 = base.iter().map(|d| d - 1).sum();
        let hi = (nm - 2 * t).div_euclid(2) + 1;
        let lo = (nm - 2 * t - 2 * n as i64).div_euclid(2) + 2;
        (lo.max(1)..=hi.min(mi))
            .map(|last| {
                let mut c = base.to_vec();
                c.push(last);
                point(c)
            })
            .collect()
    })
}

fn graph_cover(surface: &MonotoneGraphSurface, m: usize) -> Vec<LatticePoint> {
    let mf = m as f64;
    scan_cubes(surface.dim() - 1, m, |base| {
        let lo: Vec<f64> = base.iter().map(|&d| (d - 1) as f64 / mf).collect();
        let hi: Vec<f64> = base.iter().map(|&d| d as f64 / mf).collect();
        let closed: Vec<bool> = base.iter().map(|&d| d == m as i64).collect();
        let mut lasts: Vec<i64> = Vec::new();
        for (min, max, attained) in surface.cell_ranges(&lo, &hi, &closed) {
            let top = if attained {
                interval_index(max, m)
            } else {
                interval_index_below(max, m)
            };
            lasts.extend(interval_index(min, m)..=top);
        }
        lasts.sort_unstable();
        lasts.dedup();
        lasts
            .into_iter()
            .map(|last| {
                let mut c = base.to_vec();
                c.push(last);
                point(c)
            })
            .collect()
    })
}

fn sampled_cover(dim: usize, m: usize, test: &(dyn Fn(&[f64]) -> bool + Send + Sync), per_axis: usize) -> Vec<LatticePoint> {
    let mf = m as f64;
    let k = per_axis as f64;
    scan_cubes(dim, m, |idx| {
        let mut x = vec![0.0; dim];
        let hit = (0..per_axis.pow(dim as u32)).any(|s| {
            let mut rem = s;
            for j in (0..dim).rev() {
                let sub = (rem % per_axis) as f64;
                rem /= per_axis;
                x[j] = ((idx[j] - 1) as f64 + (sub + 0.5) / k) / mf;
            }
            test(&x)
        });
        if hit {
            vec![point(idx.to_vec())]
        } else {
            Vec::new()
        }
    })
}

/// `G_m(W)`.
pub fn grid_cover(target: &SetSampler, m: usize) -> Result<GridCover> {
    check_m(m)?;
    let dim = target.dim();
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, min: 1 });
    }
    let (indices, exact) = match target {
        SetSampler::Points { points, .. } => (
            points.iter().map(|p| cube_index(p, m)).collect::<Result<Vec<_>>>()?,
            true,
        ),
        SetSampler::UnitCube(n) => (scan_cubes(*n, m, |idx| vec![point(idx.to_vec())]), true),
        SetSampler::Surface(MonotoneGraphSurface::Hyperplane { n }) => (hyperplane_cover(*n, m), true),
        SetSampler::Surface(s) => (graph_cover(s, m), true),
        SetSampler::Predicate { test, per_axis, .. } => (sampled_cover(dim, m, test.as_ref(), *per_axis), false),
    };
    Ok(GridCover {
        m,
        dim,
        indices: LatticePointSet::collect_dedup(dim, indices),
        exact,
    })
}

/// `alpha_s = pi^(s/2) / (2^s Gamma(s/2 + 1))`, the volume of a ball of
/// diameter 1 in dimension `s`.
pub fn alpha(s: f64) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "[0, inf)",
        });
    }
    if s.fract() == 0.0 && s <= 400.0 {
        // alpha_t = alpha_(t-2) * pi / (2t) from alpha_0 = alpha_1 = 1
        let mut v = 1.0;
        let mut t = s % 2.0;
        while t < s {
            t += 2.0;
            v *= std::f64::consts::PI / (2.0 * t);
        }
        return Ok(v);
    }
    Ok(std::f64::consts::PI.powf(s / 2.0) / (2f64.powf(s) * gamma(s / 2.0 + 1.0)))
}

/// `D = n^((n-1)/2) alpha_(n-1)`.
pub fn d_const(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: 0, min: 1 });
    }
    let s = (n - 1) as f64;
    Ok((n as f64).powf(s / 2.0) * alpha(s)?)
}

/// `alpha_(n-1) |G| (sqrt(n)/m)^(n-1)`: the cover by cubes of diameter
/// `sqrt(n)/m` bounds `H^(n-1)_delta` from above.
pub fn covering_bound(cover: &GridCover) -> Result<MeasureEstimate> {
    let n = cover.dim;
    if n < 2 {
        return Err(Error::InvalidDimension { dim: n, min: 2 });
    }
    let s = (n - 1) as f64;
    let diam = (n as f64).sqrt() / cover.m as f64;
    Ok(MeasureEstimate::covering(alpha(s)? * cover.count() as f64 * diam.powf(s)))
}

pub fn volume_ratio_curve(target: &SetSampler, ms: &[usize]) -> Result<Vec<f64>> {
    ms.iter().map(|&m| grid_cover(target, m).map(|c| c.volume_ratio())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub dimension: f64,
    /// Root mean square residual of the log-log fit.
    pub residual: f64,
    pub counts: Vec<(usize, usize)>,
}

/// Least-squares slope of `log |G_m|` against `log m`.
pub fn box_dimension(target: &SetSampler, ms: &[usize]) -> Result<BoxDimension> {
    let mut distinct = ms.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::OutOfRange {
            name: "resolutions",
            value: distinct.len() as f64,
            range: "at least 2 distinct values",
        });
    }
    let counts: Vec<(usize, usize)> = ms
        .iter()
        .map(|&m| grid_cover(target, m).map(|c| (m, c.count())))
        .collect::<Result<_>>()?;
    if counts.iter().all(|&(_, c)| c <= 1) {
        return Ok(BoxDimension {
            dimension: 0.0,
            residual: 0.0,
            counts,
        });
    }
    let xs: Vec<f64> = counts.iter().map(|&(m, _)| (m as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, c)| (c.max(1) as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(BoxDimension {
        dimension: slope,
        residual,
        counts,
    })
}
