//! Adaptive tensor Gauss quadrature on dyadic subdivisions of a box,
//! restricted to a region described by a cell classifier.

use rayon::prelude::*;

const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cell {
    Inside,
    Outside,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Integral {
    pub value: f64,
    pub error: f64,
}

impl Integral {
    const ZERO: Self = Self {
        value: 0.0,
        error: 0.0,
    };

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

pub(crate) struct Quadrature<'a> {
    pub integrand: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    /// Where a closed cell `[lo, hi]` sits relative to the region. A
    /// degenerate cell asks about a single point.
    pub classify: &'a (dyn Fn(&[f64], &[f64]) -> Cell + Sync),
    /// Bound on `|integrand|`, charged in full on unresolved boundary cells.
    pub sup: f64,
    /// Absolute target on the integral over the root box.
    pub tol: f64,
}

fn max_depth(dim: usize) -> u32 {
    match dim {
        1 => 40,
        2 => 14,
        3 => 9,
        _ => 5,
    }
}

fn children<'a>(lo: &'a [f64], hi: &'a [f64]) -> impl Iterator<Item = (Vec<f64>, Vec<f64>)> + 'a {
    let d = lo.len();
    (0..1usize << d).map(move |mask| {
        let mut a = lo.to_vec();
        let mut b = hi.to_vec();
        for k in 0..d {
            let mid = 0.5 * (lo[k] + hi[k]);
            if mask >> k & 1 == 1 {
                a[k] = mid;
            } else {
                b[k] = mid;
            }
        }
        (a, b)
    })
}

impl Quadrature<'_> {
    fn gauss(&self, lo: &[f64], hi: &[f64]) -> f64 {
        let d = lo.len();
        let mut x = vec![0.0; d];
        let mut total = 0.0;
        for k in 0..3usize.pow(d as u32) {
            let mut rem = k;
            let mut w = 1.0;
            for j in 0..d {
                let t = rem % 3;
                rem /= 3;
                let half = 0.5 * (hi[j] - lo[j]);
                x[j] = lo[j] + half * (1.0 + NODES[t]);
                w *= WEIGHTS[t] * half;
            }
            total += w * (self.integrand)(&x);
        }
        total
    }

    fn midpoint(&self, lo: &[f64], hi: &[f64]) -> f64 {
        let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        match (self.classify)(&c, &c) {
            Cell::Outside => 0.0,
            _ => (self.integrand)(&c),
        }
    }

    fn refine(&self, lo: &[f64], hi: &[f64], depth: u32, coarse: Option<f64>, density: f64, limit: u32) -> Integral {
        let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
        let kind = if coarse.is_some() {
            Cell::Inside
        } else {
            (self.classify)(lo, hi)
        };
        match kind {
            Cell::Outside => Integral::ZERO,
            Cell::Boundary if depth >= limit => Integral {
                value: vol * self.midpoint(lo, hi),
                error: vol * self.sup,
            },
            Cell::Boundary => children(lo, hi)
                .map(|(a, b)| self.refine(&a, &b, depth + 1, None, density, limit))
                .fold(Integral::ZERO, Integral::add),
            Cell::Inside => {
                let coarse = coarse.unwrap_or_else(|| self.gauss(lo, hi));
                let kids: Vec<(Vec<f64>, Vec<f64>, f64)> = children(lo, hi)
                    .map(|(a, b)| {
                        let v = self.gauss(&a, &b);
                        (a, b, v)
                    })
                    .collect();
                let fine: f64 = kids.iter().map(|k| k.2).sum();
                let err = (fine - coarse).abs();
                if err <= density * vol || depth >= limit {
                    Integral {
                        value: fine,
                        error: err,
                    }
                } else {
                    kids.iter()
                        .map(|(a, b, v)| self.refine(a, b, depth + 1, Some(*v), density, limit))
                        .fold(Integral::ZERO, Integral::add)
                }
            }
        }
    }

    /// Integrates over the region inside `[lo, hi]`. Top-level cells are
    /// processed in parallel and summed in a fixed order.
    pub(crate) fn integrate(&self, lo: &[f64], hi: &[f64]) -> Integral {
        let d = lo.len();
        let root_vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
        if root_vol <= 0.0 {
            return Integral::ZERO;
        }
        let density = self.tol / root_vol;
        let limit = max_depth(d).min(((self.sup.max(1.0) / self.tol).log2().ceil() as u32).max(1) + 3);
        let split = 6usize.div_ceil(d).max(1);
        let mut cells = vec![(lo.to_vec(), hi.to_vec())];
        for _ in 0..split {
            cells = cells
                .iter()
                .flat_map(|(a, b)| children(a, b).collect::<Vec<_>>())
                .collect();
        }
        let parts: Vec<Integral> = cells
            .par_iter()
            .map(|(a, b)| self.refine(a, b, split as u32, None, density, limit.max(split as u32)))
            .collect();
        parts.into_iter().fold(Integral::ZERO, Integral::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inside(_: &[f64], _: &[f64]) -> Cell {
        Cell::Inside
    }

    #[test]
    fn polynomials_are_exact() {
        let f = |x: &[f64]| x[0].powi(5) + x[1] * x[1] * x[0];
        let q = Quadrature {
            integrand: &f,
            classify: &inside,
            sup: 2.0,
            tol: 1e-12,
        };
        let r = q.integrate(&[0.0, 0.0], &[1.0, 1.0]);
        assert!((r.value - (1.0 / 6.0 + 1.0 / 6.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_integrand_meets_tolerance() {
        let f = |x: &[f64]| (3.0 * x[0]).sin().exp();
        let q = Quadrature {
            integrand: &f,
            classify: &inside,
            sup: 3.0,
            tol: 1e-10,
        };
        let r = q.integrate(&[0.0], &[2.0]);
        // Simpson oracle on a fine grid.
        let n = 200_000;
        let h = 2.0 / n as f64;
        let mut s = f(&[0.0]) + f(&[2.0]);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(&[i as f64 * h]);
        }
        s *= h / 3.0;
        assert!((r.value - s).abs() < 1e-9, "{} vs {}", r.value, s);
        assert!(r.error <= 1e-10);
    }

    #[test]
    fn disc_area_with_boundary_cells() {
        let one = |_: &[f64]| 1.0;
        let classify = |lo: &[f64], hi: &[f64]| {
            if hi[0] * hi[0] + hi[1] * hi[1] <= 1.0 {
                Cell::Inside
            } else if lo[0] * lo[0] + lo[1] * lo[1] > 1.0 {
                Cell::Outside
            } else {
                Cell::Boundary
            }
        };
        let q = Quadrature {
            integrand: &one,
            classify: &classify,
            sup: 1.0,
            tol: 1e-3,
        };
        let r = q.integrate(&[0.0, 0.0], &[1.0, 1.0]);
        let exact = std::f64::consts::FRAC_PI_4;
        assert!((r.value - exact).abs() <= r.error);
        assert!((r.value - exact).abs() < 1e-4);
    }
}
