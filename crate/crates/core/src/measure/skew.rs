//! Skewed projections of planar antichains and Lipschitz sampling of the
//! inverse maps used with them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::shear::{shear, shear_inverse, ShearParams};
use super::surface::MonotoneGraphSurface;
use super::{surface_measure, MeasureEstimate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkewReport {
    pub surface: MeasureEstimate,
    /// `H^1(Delta_1(A_1))` and `H^1(Delta_2(A_2))`.
    pub deltas: [MeasureEstimate; 2],
    pub delta_sum: MeasureEstimate,
    pub tolerance: f64,
    pub passes: bool,
}

fn union_length(mut iv: Vec<(f64, f64)>) -> f64 {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            Some((lo, hi)) if a <= hi => cur = Some((lo, hi.max(b))),
            Some((lo, hi)) => {
                total += hi - lo;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    total + cur.map_or(0.0, |(lo, hi)| hi - lo)
}

/// Compares `H^1(A)` with `H^1(Delta_1(A_1)) + H^1(Delta_2(A_2))` for a
/// planar graph. On each base interval `g(x) = f(x) - x` is monotone, so
/// `A_1 = {g >= 0}` maps onto `g`'s range clipped to `[0, inf)` and `A_2`
/// onto the negated range clipped the same way.
pub fn skew_measures_2d(surface: &MonotoneGraphSurface, tol: f64) -> Result<SkewReport> {
    let intervals = surface.base_intervals()?;
    let g = |x: f64| surface.value(&[x]).map(|y| y - x);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (a, b) in intervals {
        let (Some(ga), Some(gb)) = (g(a), g(b)) else {
            return Err(Error::InvalidSurface(format!("surface undefined at base end {a} or {b}")));
        };
        let (lo, hi) = (ga.min(gb), ga.max(gb));
        if hi >= 0.0 {
            first.push((lo.max(0.0), hi));
        }
        if lo <= 0.0 {
            second.push(((-hi).max(0.0), -lo));
        }
    }
    let d1 = MeasureEstimate::closed_form(union_length(first));
    let d2 = MeasureEstimate::closed_form(union_length(second));
    let delta_sum = MeasureEstimate::closed_form(d1.value + d2.value);
    let surf = surface_measure(surface, tol)?;
    let passes = surf.value <= delta_sum.value + tol + surf.error_bound;
    Ok(SkewReport {
        surface: surf,
        deltas: [d1, d2],
        delta_sum,
        tolerance: tol,
        passes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LipschitzMap {
    ShearInverse(ShearParams),
    /// `Delta^{-1}` on the skewed image of a planar graph. Domain points are
    /// named by their base abscissa `x`, which maps to `f(x) - x`.
    SkewInverse2D(MonotoneGraphSurface),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LipschitzReport {
    pub bound: f64,
    /// `None` when every pair was coincident.
    pub max_ratio: Option<f64>,
    pub pairs: usize,
    pub skipped: usize,
    pub passes: bool,
}

impl LipschitzMap {
    /// Ratio `|map(a) - map(b)| / |a - b|` for one pair, `None` if coincident.
    fn ratio(&self, a: &[f64], b: &[f64]) -> Result<Option<f64>> {
        match self {
            Self::ShearInverse(p) => {
                let dist = euclid(a, b);
                if dist == 0.0 {
                    return Ok(None);
                }
                Ok(Some(euclid(&shear_inverse(a, p)?, &shear_inverse(b, p)?) / dist))
            }
            Self::SkewInverse2D(s) => {
                let (x, y) = (a[0], b[0]);
                let (Some(fx), Some(fy)) = (s.value(&[x]), s.value(&[y])) else {
                    return Err(Error::InvalidSurface(format!("surface undefined at {x} or {y}")));
                };
                let (dx, df) = (x - y, fx - fy);
                // g(x) - g(y), grouped so a flat piece gives an exact zero in df
                let dist = (df - dx).abs();
                if dx == 0.0 || dist == 0.0 {
                    return Ok(None);
                }
                Ok(Some(dx.hypot(df) / dist))
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        match self {
            Self::ShearInverse(p) => {
                let x: Vec<f64> = (0..p.n()).map(|_| rng.random::<f64>()).collect();
                shear(&x, p)
            }
            Self::SkewInverse2D(s) => {
                let iv = s.base_intervals()?;
                let total: f64 = iv.iter().map(|(a, b)| b - a).sum();
                let mut t = rng.random::<f64>() * total;
                for (a, b) in &iv {
                    if t <= b - a {
                        return Ok(vec![a + t]);
                    }
                    t -= b - a;
                }
                Ok(vec![iv.last().map_or(0.0, |l| l.1)])
            }
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Largest ratio over explicit pairs and the number of coincident pairs.
pub fn max_lipschitz_ratio(map: &LipschitzMap, pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<(Option<f64>, usize)> {
    let mut best: Option<f64> = None;
    let mut skipped = 0;
    for (a, b) in pairs {
        match map.ratio(a, b)? {
            Some(r) => best = Some(best.map_or(r, |m| m.max(r))),
            None => skipped += 1,
        }
    }
    Ok((best, skipped))
}

/// Samples `pairs` random pairs and checks every ratio against
/// `bound * (1 + 1e-12)`.
pub fn lipschitz_sample_check(map: &LipschitzMap, bound: f64, pairs: usize, seed: u64) -> Result<LipschitzReport> {
    if !bound.is_finite() || bound < 1.0 {
        return Err(Error::OutOfRange {
            name: "bound",
            value: bound,
            range: "[1, inf)",
        });
    }
    if let LipschitzMap::SkewInverse2D(s) = map {
        if s.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: s.dim(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        sampled.push((map.sample(&mut rng)?, map.sample(&mut rng)?));
    }
    let (max_ratio, skipped) = max_lipschitz_ratio(map, &sampled)?;
    Ok(LipschitzReport {
        bound,
        max_ratio,
        pairs,
        skipped,
        passes: max_ratio.is_none_or(|r| r <= bound * (1.0 + 1e-12)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::surface::{BaseBox, LinearGraph, TabulatedMonotone};

    fn anti_diagonal() -> MonotoneGraphSurface {
        MonotoneGraphSurface::hyperplane(2).unwrap()
    }

    fn constant_half() -> MonotoneGraphSurface {
        MonotoneGraphSurface::Linear(LinearGraph::new(vec![0.0], 0.5, vec![BaseBox::unit(1)]).unwrap())
    }

    /// Length of a set of reals sampled densely, by bucketing.
    fn sampled_image_length(values: impl Iterator<Item = f64>, bucket: f64) -> f64 {
        let mut seen = std::collections::BTreeSet::new();
        for v in values {
            seen.insert((v / bucket).floor() as i64);
        }
        seen.len() as f64 * bucket
    }

    #[test]
    fn anti_diagonal_and_constant() {
        let r = skew_measures_2d(&anti_diagonal(), 1e-9).unwrap();
        assert!((r.surface.value - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.deltas[0].value - 1.0).abs() < 1e-15);
        assert!((r.deltas[1].value - 1.0).abs() < 1e-15);
        assert!(r.passes);

        let r = skew_measures_2d(&constant_half(), 1e-9).unwrap();
        assert!((r.surface.value - 1.0).abs() < 1e-15);
        assert_eq!(r.deltas[0].value, 0.5);
        assert_eq!(r.deltas[1].value, 0.5);
        assert_eq!(r.delta_sum.value, 1.0);
        assert!(r.passes);
    }

    #[test]
    fn quarter_circle() {
        let r = skew_measures_2d(&MonotoneGraphSurface::lp_sphere(2, 2.0).unwrap(), 1e-8).unwrap();
        assert!((r.surface.value - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
        assert!((r.delta_sum.value - 2.0).abs() < 1e-12);
        assert!(r.passes);
    }

    #[test]
    fn dense_sampling_oracle() {
        let t = TabulatedMonotone::new(1, 5, vec![0.9, 0.7, 0.65, 0.2, 0.1]).unwrap();
        let s = MonotoneGraphSurface::Tabulated(t);
        let r = skew_measures_2d(&s, 1e-9).unwrap();
        let n = 400_000;
        let xs = (0..=n).map(|i| i as f64 / n as f64);
        let g = |x: f64| s.value(&[x]).unwrap() - x;
        let d1 = sampled_image_length(xs.clone().map(g).filter(|v| *v >= 0.0), 1e-4);
        let d2 = sampled_image_length(xs.map(g).filter(|v| *v <= 0.0).map(|v| -v), 1e-4);
        assert!((r.deltas[0].value - d1).abs() < 1e-3, "{} vs {d1}", r.deltas[0].value);
        assert!((r.deltas[1].value - d2).abs() < 1e-3, "{} vs {d2}", r.deltas[1].value);
        assert!(r.passes);
    }

    #[test]
    fn increasing_linear_graph_overlaps_once() {
        // g = 0.5 x is non-negative, overlapping boxes count once
        let s = MonotoneGraphSurface::Linear(
            LinearGraph::new(
                vec![1.5],
                0.0,
                vec![BaseBox { lo: vec![0.0], hi: vec![0.4] }, BaseBox { lo: vec![0.2], hi: vec![0.6] }],
            )
            .unwrap(),
        );
        let r = skew_measures_2d(&s, 1e-9).unwrap();
        assert!((r.deltas[0].value - 0.3).abs() < 1e-15);
        assert_eq!(r.deltas[1].value, 0.0);
    }

    #[test]
    fn rejects_non_planar() {
        assert!(skew_measures_2d(&MonotoneGraphSurface::hyperplane(3).unwrap(), 1e-6).is_err());
    }

    #[test]
    fn lipschitz_checks() {
        let p = ShearParams::new(2, 0.1).unwrap();
        let r = lipschitz_sample_check(&LipschitzMap::ShearInverse(p), p.lipschitz(), 2000, 7).unwrap();
        assert!(r.passes);
        assert!(r.max_ratio.unwrap() <= 1.25 + 1e-12);

        for s in [anti_diagonal(), constant_half(), MonotoneGraphSurface::staircase(6)] {
            let r = lipschitz_sample_check(&LipschitzMap::SkewInverse2D(s), 1.0, 2000, 3).unwrap();
            assert!(r.passes, "{r:?}");
        }

        let map = LipschitzMap::ShearInverse(p);
        let pairs = vec![(vec![0.3, 0.2], vec![0.3, 0.2]); 3];
        assert_eq!(max_lipschitz_ratio(&map, &pairs).unwrap(), (None, 3));
        assert!(lipschitz_sample_check(&map, 0.5, 10, 1).is_err());
    }
}
