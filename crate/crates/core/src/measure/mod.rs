//! Graphs of order-reversing functions on `[0,1]^(n-1)` and their
//! `(n-1)`-dimensional surface and projection measures.
//!
//! Axes are 0-based: projection `i` deletes coordinate `i`, and the last
//! axis `n-1` is the graph's value axis, whose projection is the base region.

mod extension;
mod quadrature;
mod shear;
mod skew;
mod slab;
mod staircase;
mod surface;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

pub use extension::{monotone_extension, ScatteredSamples};
pub use shear::{shear, shear_inverse, ShearParams};
pub use skew::{lipschitz_sample_check, max_lipschitz_ratio, skew_measures_2d, LipschitzMap, LipschitzReport, SkewReport};
pub use slab::{simplex_cdf, slab_volume};
pub use staircase::{singular_staircase, staircase_length_closed_form, Staircase, MAX_STAIRCASE_DEPTH};
pub use surface::{BaseBox, LinearGraph, MonotoneGraphSurface, TabulatedMonotone};

use quadrature::{Cell, Quadrature};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimateMethod {
    Covering,
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeasureEstimate {
    pub value: f64,
    pub method: EstimateMethod,
    pub error_bound: f64,
    /// Set for covering sums, which only bound the measure from above.
    pub one_sided_upper: bool,
    /// False when quadrature stopped short of its tolerance.
    pub converged: bool,
}

impl MeasureEstimate {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            method: EstimateMethod::ClosedForm,
            error_bound: 0.0,
            one_sided_upper: false,
            converged: true,
        }
    }

    pub fn covering(value: f64) -> Self {
        Self {
            value,
            method: EstimateMethod::Covering,
            error_bound: 0.0,
            one_sided_upper: true,
            converged: true,
        }
    }

    pub fn quadrature(value: f64, error_bound: f64, tol: f64) -> Self {
        Self {
            value: value.max(0.0),
            method: EstimateMethod::Quadrature,
            error_bound,
            one_sided_upper: false,
            converged: error_bound <= tol,
        }
    }
}

/// Absolute quadrature target used when none is given.
pub fn default_tolerance(n: usize) -> f64 {
    if n <= 2 {
        1e-6
    } else {
        1e-3
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        })
    }
}

/// Measure of the base region `{x in [0,1]^(n-1) : n/2 - 1 <= sum x <= n/2}`.
fn hyperplane_base(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    simplex_cdf(n - 1, half) - simplex_cdf(n - 1, half - 1.0)
}

fn lp_value(p: f64, x: &[f64]) -> Option<f64> {
    let s: f64 = x.iter().map(|v| v.powf(p)).sum();
    (s <= 1.0).then(|| (1.0 - s).max(0.0).powf(1.0 / p))
}

/// `n` times the piece where the last coordinate is the largest. There the
/// partial derivatives `-(x_i/f)^(p-1)` lie in `[-1, 0]`, so the integrand
/// is smooth and at most `sqrt(n)`.
fn lp_surface(n: usize, p: f64, tol: f64) -> MeasureEstimate {
    let d = n - 1;
    let nf = n as f64;
    let integrand = |x: &[f64]| {
        let f = lp_value(p, x).unwrap_or(0.0);
        if f <= 0.0 {
            return nf.sqrt();
        }
        let grad: f64 = x.iter().map(|v| (v / f).powf(2.0 * (p - 1.0))).sum();
        (1.0 + grad).sqrt()
    };
    let gap = |x: &[f64]| lp_value(p, x).map(|f| f - x.iter().cloned().fold(0.0, f64::max));
    let classify = |lo: &[f64], hi: &[f64]| match (gap(lo), gap(hi)) {
        (None, _) => Cell::Outside,
        (Some(g), _) if g < 0.0 => Cell::Outside,
        (_, Some(g)) if g >= 0.0 => Cell::Inside,
        _ => Cell::Boundary,
    };
    let r = 0.5f64.powf(1.0 / p);
    let q = Quadrature {
        integrand: &integrand,
        classify: &classify,
        sup: nf.sqrt(),
        tol: tol / nf,
    };
    let res = q.integrate(&vec![0.0; d], &vec![r; d]);
    MeasureEstimate::quadrature(nf * res.value, nf * res.error, tol)
}

fn tabulated_surface(t: &TabulatedMonotone, tol: f64) -> MeasureEstimate {
    let d = t.base_dim();
    let nodes = t.nodes();
    if d == 1 {
        let h = 1.0 / (nodes - 1) as f64;
        let len = t.values().windows(2).map(|w| h.hypot(w[0] - w[1])).sum();
        return MeasureEstimate::closed_form(len);
    }
    // The interpolant is smooth inside every grid cell, so integrate cell by
    // cell.
    let cells = (nodes - 1).pow(d as u32);
    let per_cell = tol / cells as f64;
    let integrand = |x: &[f64]| (1.0 + t.gradient(x).iter().map(|g| g * g).sum::<f64>()).sqrt();
    let inside = |_: &[f64], _: &[f64]| Cell::Inside;
    let mut value = 0.0;
    let mut error = 0.0;
    for flat in 0..cells {
        let mut rem = flat;
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for k in (0..d).rev() {
            let i = rem % (nodes - 1);
            rem /= nodes - 1;
            lo[k] = t.node_coord(i);
            hi[k] = t.node_coord(i + 1);
        }
        let q = Quadrature {
            integrand: &integrand,
            classify: &inside,
            sup: 0.0,
            tol: per_cell,
        };
        let r = q.integrate(&lo, &hi);
        value += r.value;
        error += r.error;
    }
    MeasureEstimate::quadrature(value, error, tol)
}

/// `H^(n-1)` of the graph: `int_B sqrt(1 + |grad f|^2)`.
pub fn surface_measure(surface: &MonotoneGraphSurface, tol: f64) -> Result<MeasureEstimate> {
    check_tol(tol)?;
    Ok(match surface {
        MonotoneGraphSurface::Hyperplane { n } => {
            MeasureEstimate::closed_form((*n as f64).sqrt() * hyperplane_base(*n))
        }
        MonotoneGraphSurface::Linear(l) => {
            let scale = (1.0 + l.gradient.iter().map(|c| c * c).sum::<f64>()).sqrt();
            MeasureEstimate::closed_form(scale * l.base_measure())
        }
        MonotoneGraphSurface::LpSphere { n, p } => lp_surface(*n, *p, tol),
        MonotoneGraphSurface::Tabulated(t) => tabulated_surface(t, tol),
        MonotoneGraphSurface::SingularStaircase { depth } => {
            MeasureEstimate::closed_form(singular_staircase(*depth)?.length)
        }
    })
}

/// Surface measure by quadrature even where a closed form exists, for
/// cross-checks. Not available for the singular staircase.
pub fn surface_measure_quadrature(surface: &MonotoneGraphSurface, tol: f64) -> Result<MeasureEstimate> {
    check_tol(tol)?;
    match surface {
        MonotoneGraphSurface::Hyperplane { n } => {
            let d = n - 1;
            let half = *n as f64 / 2.0;
            let root = (*n as f64).sqrt();
            let integrand = |_: &[f64]| root;
            let classify = |lo: &[f64], hi: &[f64]| {
                let (a, b): (f64, f64) = (lo.iter().sum(), hi.iter().sum());
                if b < half - 1.0 || a > half {
                    Cell::Outside
                } else if a >= half - 1.0 && b <= half {
                    Cell::Inside
                } else {
                    Cell::Boundary
                }
            };
            let q = Quadrature {
                integrand: &integrand,
                classify: &classify,
                sup: root,
                tol,
            };
            let r = q.integrate(&vec![0.0; d], &vec![1.0; d]);
            Ok(MeasureEstimate::quadrature(r.value, r.error, tol))
        }
        MonotoneGraphSurface::Linear(l) => {
            let d = l.gradient.len();
            let root = (1.0 + l.gradient.iter().map(|c| c * c).sum::<f64>()).sqrt();
            let integrand = |_: &[f64]| root;
            let classify = |lo: &[f64], hi: &[f64]| {
                let within = |b: &BaseBox| (0..d).all(|k| b.lo[k] <= lo[k] && hi[k] <= b.hi[k]);
                let meets = |b: &BaseBox| (0..d).all(|k| b.lo[k] <= hi[k] && lo[k] <= b.hi[k]);
                if l.boxes.iter().any(within) {
                    Cell::Inside
                } else if l.boxes.iter().any(meets) {
                    Cell::Boundary
                } else {
                    Cell::Outside
                }
            };
            let q = Quadrature {
                integrand: &integrand,
                classify: &classify,
                sup: root,
                tol,
            };
            let r = q.integrate(&vec![0.0; d], &vec![1.0; d]);
            Ok(MeasureEstimate::quadrature(r.value, r.error, tol))
        }
        MonotoneGraphSurface::SingularStaircase { .. } => Err(Error::InvalidSurface(
            "the staircase has no integrable derivative; use its polyline length".into(),
        )),
        _ => surface_measure(surface, tol),
    }
}

/// `H^(n-1)` of the projection deleting `axis`: `int_B |D_axis f|` for
/// `axis < n-1`, the base measure for `axis = n-1`.
pub fn projection_measure(surface: &MonotoneGraphSurface, axis: usize, tol: f64) -> Result<MeasureEstimate> {
    check_tol(tol)?;
    let n = surface.dim();
    if axis >= n {
        return Err(Error::AxisOutOfRange { index: axis, dim: n });
    }
    let value = match surface {
        MonotoneGraphSurface::Hyperplane { n } => hyperplane_base(*n),
        MonotoneGraphSurface::LpSphere { n, p } => {
            let d = (n - 1) as f64;
            gamma(1.0 + 1.0 / p).powf(d) / gamma(1.0 + d / p)
        }
        MonotoneGraphSurface::Linear(l) => {
            let base = l.base_measure();
            if axis == n - 1 {
                base
            } else {
                l.gradient[axis].abs() * base
            }
        }
        MonotoneGraphSurface::Tabulated(_) if axis == n - 1 => 1.0,
        MonotoneGraphSurface::Tabulated(t) => tabulated_drop(t, axis),
        MonotoneGraphSurface::SingularStaircase { .. } => 1.0,
    };
    Ok(MeasureEstimate::closed_form(value))
}

/// `int (f|_{x_axis=0} - f|_{x_axis=1})` over the other axes. The
/// trapezoid rule is exact for multilinear interpolants.
fn tabulated_drop(t: &TabulatedMonotone, axis: usize) -> f64 {
    let nodes = t.nodes();
    let h = 1.0 / (nodes - 1) as f64;
    let weight = |i: usize| if i == 0 || i == nodes - 1 { 0.5 * h } else { h };
    let mut total = 0.0;
    for (flat, &v) in t.values().iter().enumerate() {
        let idx = t.unflatten(flat);
        let sign = if idx[axis] == 0 {
            1.0
        } else if idx[axis] == nodes - 1 {
            -1.0
        } else {
            continue;
        };
        let w: f64 = idx
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != axis)
            .map(|(_, &i)| weight(i))
            .product();
        total += sign * w * v;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectionReport {
    pub n: usize,
    pub left: MeasureEstimate,
    pub projections: Vec<MeasureEstimate>,
    pub right: f64,
    pub right_error: f64,
    /// `n`, the bound obtained from `H^(n-1)(pi_i A) <= 1`.
    pub n_bound: f64,
    pub passes: bool,
    pub within_n_bound: bool,
}

/// Checks `H^(n-1)(A) <= sum_i H^(n-1)(pi_i A)` up to the combined error
/// bounds of both sides.
pub fn verify_projection_inequality(surface: &MonotoneGraphSurface, tol: f64) -> Result<ProjectionReport> {
    let n = surface.dim();
    let left = surface_measure(surface, tol)?;
    let projections = (0..n)
        .map(|i| projection_measure(surface, i, tol))
        .collect::<Result<Vec<_>>>()?;
    let right: f64 = projections.iter().map(|e| e.value).sum();
    let right_error: f64 = projections.iter().map(|e| e.error_bound).sum();
    let slack = left.error_bound + right_error + 1e-12 * right.max(1.0);
    Ok(ProjectionReport {
        n,
        left,
        passes: left.value <= right + slack,
        within_n_bound: left.value <= n as f64 + left.error_bound,
        projections,
        right,
        right_error,
        n_bound: n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn linear(c: Vec<f64>, offset: f64) -> MonotoneGraphSurface {
        let d = c.len();
        MonotoneGraphSurface::Linear(LinearGraph::new(c, offset, vec![BaseBox::unit(d)]).unwrap())
    }

    #[test]
    fn hyperplane_closed_forms() {
        let s2 = surface_measure(&MonotoneGraphSurface::hyperplane(2).unwrap(), 1e-6).unwrap();
        assert!((s2.value - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(s2.method, EstimateMethod::ClosedForm);
        let s3 = surface_measure(&MonotoneGraphSurface::hyperplane(3).unwrap(), 1e-6).unwrap();
        assert!((s3.value - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
        let h2 = MonotoneGraphSurface::hyperplane(2).unwrap();
        assert_eq!(projection_measure(&h2, 0, 1e-6).unwrap().value, 1.0);
        assert_eq!(projection_measure(&h2, 1, 1e-6).unwrap().value, 1.0);
        assert!(projection_measure(&h2, 2, 1e-6).is_err());
    }

    #[test]
    fn hyperplane_quadrature_agrees() {
        for (n, tol, slack) in [(2, 1e-8, 1e-8), (3, 1e-4, 1e-4), (4, 1e-2, 1e-2)] {
            let s = MonotoneGraphSurface::hyperplane(n).unwrap();
            let exact = surface_measure(&s, tol).unwrap().value;
            let q = surface_measure_quadrature(&s, tol).unwrap();
            assert_eq!(q.method, EstimateMethod::Quadrature);
            assert!((q.value - exact).abs() <= slack, "n={n}: {} vs {exact}", q.value);
        }
    }

    #[test]
    fn linear_closed_forms() {
        let flat = linear(vec![0.0], 0.5);
        assert_eq!(surface_measure(&flat, 1e-6).unwrap().value, 1.0);
        let half = linear(vec![0.5], 0.0);
        assert_eq!(projection_measure(&half, 0, 1e-6).unwrap().value, 0.5);
        assert_eq!(projection_measure(&half, 1, 1e-6).unwrap().value, 1.0);
        let diag = linear(vec![-1.0], 1.0);
        let r = verify_projection_inequality(&diag, 1e-6).unwrap();
        assert!((r.left.value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.right, 2.0);
        assert!(r.passes && r.within_n_bound);
        let q = surface_measure_quadrature(&diag, 1e-9).unwrap();
        assert!((q.value - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn quarter_circle_arc() {
        let s = MonotoneGraphSurface::lp_sphere(2, 2.0).unwrap();
        let e = surface_measure(&s, 1e-6).unwrap();
        assert_eq!(e.method, EstimateMethod::Quadrature);
        assert!(e.converged);
        assert!((e.value - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        for i in 0..2 {
            assert!((projection_measure(&s, i, 1e-6).unwrap().value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_simplex_and_octant() {
        let s = MonotoneGraphSurface::lp_sphere(3, 1.0).unwrap();
        let e = surface_measure(&s, 1e-4).unwrap();
        assert!((e.value - 3f64.sqrt() / 2.0).abs() < 1e-4, "{e:?}");
        let s = MonotoneGraphSurface::lp_sphere(3, 2.0).unwrap();
        let e = surface_measure(&s, 1e-3).unwrap();
        assert!((e.value - std::f64::consts::PI / 2.0).abs() < 1e-3, "{e:?}");
        // quarter disc
        let pr = projection_measure(&s, 0, 1e-3).unwrap().value;
        assert!((pr - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn lp_measures_increase_with_p() {
        let values: Vec<f64> = [1.0, 1.5, 2.0, 4.0, 8.0, 32.0]
            .iter()
            .map(|&p| surface_measure(&MonotoneGraphSurface::lp_sphere(2, p).unwrap(), 1e-7).unwrap().value)
            .collect();
        assert!((values[0] - 2f64.sqrt()).abs() < 1e-7);
        assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
        assert!(values.iter().all(|&v| v <= 2.0));
    }

    #[test]
    fn tabulated_measures() {
        let t = TabulatedMonotone::new(1, 3, vec![1.0, 0.5, 0.0]).unwrap();
        let s = MonotoneGraphSurface::Tabulated(t);
        assert!((surface_measure(&s, 1e-6).unwrap().value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(projection_measure(&s, 0, 1e-6).unwrap().value, 1.0);

        // a tabulated plane reproduces the hyperplane-like closed form
        let t = TabulatedMonotone::from_fn(2, 5, |x| 1.0 - 0.25 * x[0] - 0.5 * x[1]).unwrap();
        let s = MonotoneGraphSurface::Tabulated(t);
        let e = surface_measure(&s, 1e-6).unwrap();
        assert!((e.value - (1.0f64 + 0.0625 + 0.25).sqrt()).abs() < 1e-9);
        assert!((projection_measure(&s, 0, 1e-6).unwrap().value - 0.25).abs() < 1e-15);
        assert!((projection_measure(&s, 1, 1e-6).unwrap().value - 0.5).abs() < 1e-15);
        assert_eq!(projection_measure(&s, 2, 1e-6).unwrap().value, 1.0);
        assert!(verify_projection_inequality(&s, 1e-6).unwrap().passes);
    }

    #[test]
    fn tabulated_curved_surface_against_fine_midpoint_sum() {
        let t = TabulatedMonotone::from_fn(2, 4, |x| 1.0 - 0.5 * x[0] * x[0] - 0.3 * x[1]).unwrap();
        let e = surface_measure(&MonotoneGraphSurface::Tabulated(t.clone()), 1e-6).unwrap();
        let k = 600;
        let h = 1.0 / k as f64;
        let mut mid = 0.0;
        for i in 0..k {
            for j in 0..k {
                let x = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h];
                mid += (1.0 + t.gradient(&x).iter().map(|g| g * g).sum::<f64>()).sqrt();
            }
        }
        mid *= h * h;
        assert!((e.value - mid).abs() < 1e-5, "{} vs {mid}", e.value);
    }

    #[test]
    fn staircase_measures() {
        let s = MonotoneGraphSurface::staircase(0);
        assert!((surface_measure(&s, 1e-6).unwrap().value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(projection_measure(&s, 0, 1e-6).unwrap().value, 1.0);
        assert!(surface_measure_quadrature(&s, 1e-6).is_err());
    }

    #[test]
    fn verify_reports() {
        let r = verify_projection_inequality(&MonotoneGraphSurface::hyperplane(2).unwrap(), 1e-6).unwrap();
        assert!((r.left.value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.right, 2.0);
        assert!(r.passes);
        let r = verify_projection_inequality(&MonotoneGraphSurface::lp_sphere(2, 8.0).unwrap(), 1e-6).unwrap();
        assert!(r.passes && r.left.value > 2f64.sqrt() && r.left.value < 2.0);
        let r = verify_projection_inequality(&MonotoneGraphSurface::hyperplane(4).unwrap(), 1e-3).unwrap();
        assert!(r.passes && r.right <= 4.0);
    }

    #[test]
    fn pointwise_gradient_bound_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let d = rng.random_range(1..6);
            let g: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
            let lhs = (1.0 + g.iter().map(|v| v * v).sum::<f64>()).sqrt();
            let rhs = 1.0 + g.iter().map(|v| v.abs()).sum::<f64>();
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn bad_tolerance() {
        assert!(surface_measure(&MonotoneGraphSurface::hyperplane(2).unwrap(), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn linear_graphs_satisfy_the_inequality(
            c in prop::collection::vec(-0.3f64..0.0, 1..4),
        ) {
            let s = linear(c, 0.95);
            let r = verify_projection_inequality(&s, 1e-6).unwrap();
            prop_assert!(r.passes);
            prop_assert!(r.within_n_bound);
        }
    }
}
