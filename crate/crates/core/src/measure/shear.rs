//! The shear `x -> x - eps * S(x) * (1,...,1)`, `S(x) = sum x_i`, which turns
//! weak antichains into antichains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearParams {
    n: usize,
    epsilon: f64,
    lipschitz: f64,
}

impl ShearParams {
    /// Requires `0 < epsilon < 1/(2n)`.
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if !(epsilon > 0.0 && epsilon < 1.0 / (2.0 * n as f64)) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                range: "(0, 1/(2n))",
            });
        }
        Ok(Self {
            n,
            epsilon,
            lipschitz: 1.0 / (1.0 - 2.0 * n as f64 * epsilon).sqrt(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `1 / sqrt(1 - 2 n eps)`, a Lipschitz constant for the inverse.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }
}

pub fn shear(x: &[f64], params: &ShearParams) -> Result<Vec<f64>> {
    params.check(x)?;
    let s: f64 = x.iter().sum();
    Ok(x.iter().map(|v| v - params.epsilon * s).collect())
}

/// `S(x) = S(y) / (1 - n eps)`, then `x_i = y_i + eps S(x)`.
pub fn shear_inverse(y: &[f64], params: &ShearParams) -> Result<Vec<f64>> {
    params.check(y)?;
    let s = y.iter().sum::<f64>() / (1.0 - params.n as f64 * params.epsilon);
    Ok(y.iter().map(|v| v + params.epsilon * s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = ShearParams::new(2, 0.1).unwrap();
        let y = shear(&[1.0, 0.0], &p).unwrap();
        assert!((y[0] - 0.9).abs() < 1e-15 && (y[1] + 0.1).abs() < 1e-15);
        assert!((y.iter().sum::<f64>() - 0.8).abs() < 1e-15);
        let y = shear(&[1.0, 1.0], &p).unwrap();
        assert!((y[0] - 0.8).abs() < 1e-15 && (y[1] - 0.8).abs() < 1e-15);
        assert_eq!(shear(&[0.0, 0.0], &p).unwrap(), vec![0.0, 0.0]);
        let x = shear_inverse(&[0.9, -0.1], &p).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert_eq!(shear_inverse(&[0.0, 0.0], &p).unwrap(), vec![0.0, 0.0]);
        assert!((p.lipschitz() - 1.0 / 0.6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(ShearParams::new(2, 0.25).is_err());
        assert!(ShearParams::new(2, 0.0).is_err());
        assert!(ShearParams::new(3, 0.17).is_err());
        assert!(ShearParams::new(0, 0.1).is_err());
        let p = ShearParams::new(3, 0.1).unwrap();
        assert!(matches!(shear(&[0.1, 0.2], &p), Err(Error::DimensionMismatch { .. })));
    }

    proptest! {
        #[test]
        fn sum_scales_and_roundtrips(x in prop::collection::vec(0.0f64..=1.0, 1..6), t in 0.01f64..0.99) {
            let n = x.len();
            let p = ShearParams::new(n, t / (2.0 * n as f64)).unwrap();
            let y = shear(&x, &p).unwrap();
            let sx: f64 = x.iter().sum();
            let sy: f64 = y.iter().sum();
            prop_assert!((sy - (1.0 - n as f64 * p.epsilon()) * sx).abs() <= 1e-12);
            let back = shear_inverse(&y, &p).unwrap();
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a - b).abs() <= 1e-14);
            }
        }
    }
}
