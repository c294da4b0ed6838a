//! Order-reversing extension of a function known on finitely many points.

use serde::{Deserialize, Serialize};

use super::surface::TabulatedMonotone;
use crate::error::{Error, Result};

/// Pairs `(a, f(a))` with `a` in `[0,1]^d` and `f(a)` in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteredSamples {
    dim: usize,
    samples: Vec<(Vec<f64>, f64)>,
}

impl ScatteredSamples {
    pub fn new(dim: usize, samples: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        for (a, v) in &samples {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            if let Some(bad) = a.iter().chain([v]).find(|c| !(0.0..=1.0).contains(*c)) {
                return Err(Error::OutOfRange {
                    name: "sample",
                    value: *bad,
                    range: "[0, 1]",
                });
            }
        }
        Ok(Self { dim, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> &[(Vec<f64>, f64)] {
        &self.samples
    }
}

impl From<&TabulatedMonotone> for ScatteredSamples {
    fn from(t: &TabulatedMonotone) -> Self {
        let samples = t
            .values()
            .iter()
            .enumerate()
            .map(|(flat, &v)| {
                let x = t.unflatten(flat).into_iter().map(|i| t.node_coord(i)).collect();
                (x, v)
            })
            .collect();
        Self {
            dim: t.base_dim(),
            samples,
        }
    }
}

/// `inf { f(a) : a <= x }`, and `1` when no sample lies below `x`.
pub fn monotone_extension(samples: &ScatteredSamples, x: &[f64]) -> f64 {
    samples
        .samples
        .iter()
        .filter(|(a, _)| a.iter().zip(x).all(|(ai, xi)| ai <= xi))
        .map(|(_, v)| *v)
        .fold(1.0, f64::min)
}
