//! Volumes of slabs `{x in [0,1]^n : a <= sum x_i < b}`.

use crate::error::{Error, Result};

/// Distribution function of a sum of `n` independent uniforms on `[0,1]`:
/// `(1/n!) sum_k (-1)^k C(n,k) max(t-k, 0)^n`.
pub fn simplex_cdf(n: usize, t: f64) -> f64 {
    if n == 0 {
        return if t >= 0.0 { 1.0 } else { 0.0 };
    }
    if t <= 0.0 {
        return 0.0;
    }
    if t >= n as f64 {
        return 1.0;
    }
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 0..=n {
        let base = t - k as f64;
        if base <= 0.0 {
            break;
        }
        let term = binom * base.powi(n as i32);
        total += if k % 2 == 0 { term } else { -term };
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    (total / factorial).clamp(0.0, 1.0)
}

/// Volume of the central slab `(n-c)/2 <= sum x_i < (n+c)/2`.
pub fn slab_volume(n: usize, c: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: 0, min: 1 });
    }
    if !(0.0..=n as f64).contains(&c) {
        return Err(Error::OutOfRange {
            name: "c",
            value: c,
            range: "[0, n]",
        });
    }
    let half = n as f64 / 2.0;
    Ok(simplex_cdf(n, half + c / 2.0) - simplex_cdf(n, half - c / 2.0))
}
