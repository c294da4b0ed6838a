//! Extremal (weak) antichains on the grid `{0,...,m-1}^n`: the middle
//! layers, the set of points with a zero coordinate, and exact widths via
//! minimum chain covers.

mod matching;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{box_points, dominates_coords, LatticePoint, LatticePointSet, OrderMode};

/// Largest ground set accepted by [`max_antichain`] unless overridden.
pub const DEFAULT_WIDTH_BUDGET: usize = 4096;

/// Number of grid points with coordinate sum `level`: the coefficient of
/// `t^level` in `(1 + t + ... + t^(m-1))^n`.
pub fn layer_size(n: usize, m: usize, level: usize) -> u128 {
    if m == 0 || level > n * (m - 1) {
        return 0;
    }
    let mut coeffs = vec![1u128];
    for _ in 0..n {
        let mut next = vec![0u128; coeffs.len() + m - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + m] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    coeffs[level]
}

/// Size of the largest layer, attained at `floor(n(m-1)/2)`.
pub fn middle_layer_size(n: usize, m: usize) -> u128 {
    layer_size(n, m, n * m.saturating_sub(1) / 2)
}

fn fill_layer(prefix: &mut Vec<i64>, n: usize, m: i64, remaining: i64, out: &mut Vec<LatticePoint>) {
    if prefix.len() == n {
        if remaining == 0 {
            out.push(LatticePoint::new(prefix.clone()).expect("n >= 1"));
        }
        return;
    }
    let slots_left = (n - prefix.len() - 1) as i64;
    for v in 0..m.min(remaining + 1) {
        if remaining - v > slots_left * (m - 1) {
            continue;
        }
        prefix.push(v);
        fill_layer(prefix, n, m, remaining - v, out);
        prefix.pop();
    }
}

fn check_grid(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: n, min: 1 });
    }
    if m == 0 {
        return Err(Error::OutOfRange {
            name: "m",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    Ok(())
}

/// All grid points with coordinate sum `level`; empty when out of range.
pub fn layer_construct(n: usize, m: usize, level: usize) -> Result<LatticePointSet> {
    check_grid(n, m)?;
    let mut out = Vec::new();
    if level <= n * (m - 1) {
        fill_layer(&mut Vec::with_capacity(n), n, m as i64, level as i64, &mut out);
    }
    Ok(LatticePointSet::from_sorted_unchecked(n, out))
}

/// All grid points with at least one zero coordinate.
pub fn wn_construct(n: usize, m: usize) -> Result<LatticePointSet> {
    check_grid(n, m)?;
    let pts = box_points(n, m as i64)
        .into_iter()
        .filter(|p| p.coords().contains(&0))
        .collect();
    Ok(LatticePointSet::from_sorted_unchecked(n, pts))
}

/// `m^n - (m-1)^n`.
pub fn wn_size(n: usize, m: usize) -> u128 {
    (m as u128).pow(n as u32) - (m as u128).saturating_sub(1).pow(n as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoset {
    pub n: usize,
    pub m: usize,
    pub mode: OrderMode,
}

impl GridPoset {
    pub fn new(n: usize, m: usize, mode: OrderMode) -> Result<Self> {
        check_grid(n, m)?;
        if mode == OrderMode::Leq {
            return Err(Error::OutOfRange {
                name: "mode",
                value: 0.0,
                range: "{StrictProduct, StrongAll}",
            });
        }
        Ok(Self { n, m, mode })
    }

    pub fn ground_size(&self) -> Option<usize> {
        self.m.checked_pow(self.n as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WidthMethod {
    Matching,
    Construction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthResult {
    pub width: usize,
    pub witness: LatticePointSet,
    pub method: WidthMethod,
}

/// Exact width through Dilworth's theorem: the minimum number of chains is
/// `|P|` minus a maximum matching in the comparability graph, and König's
/// theorem turns the matching into a maximum antichain.
pub fn max_antichain(poset: &GridPoset, budget: usize) -> Result<WidthResult> {
    let size = poset.ground_size().unwrap_or(usize::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded {
            required: size as u128,
            budget: budget as u128,
            hint: "use the closed-form construction",
        });
    }
    let points = box_points(poset.n, poset.m as i64);
    let adj: Vec<Vec<usize>> = points
        .iter()
        .map(|x| {
            points
                .iter()
                .enumerate()
                .filter(|(_, y)| dominates_coords(x.coords(), y.coords(), poset.mode))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let (ml, mr) = matching::hopcroft_karp(&adj, points.len());
    let matched = ml.iter().flatten().count();
    let (left_reach, right_reach) = matching::alternating_reach(&adj, &ml, &mr);
    // Left copies outside the reach and right copies inside it form a
    // minimum vertex cover; untouched elements form the antichain.
    let witness: Vec<LatticePoint> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| left_reach[i] && !right_reach[i])
        .map(|(_, p)| p.clone())
        .collect();
    debug_assert_eq!(witness.len(), points.len() - matched);
    Ok(WidthResult {
        width: points.len() - matched,
        witness: LatticePointSet::from_sorted_unchecked(poset.n, witness),
        method: WidthMethod::Matching,
    })
}

/// The closed-form extremal set for the poset: a middle layer for antichains,
/// the zero-coordinate set for weak antichains.
pub fn construction(poset: &GridPoset) -> Result<WidthResult> {
    let witness = match poset.mode {
        OrderMode::StrongAll => wn_construct(poset.n, poset.m)?,
        _ => layer_construct(poset.n, poset.m, poset.n * (poset.m - 1) / 2)?,
    };
    Ok(WidthResult {
        width: witness.len(),
        witness,
        method: WidthMethod::Construction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, pts: &[&[i64]]) -> LatticePointSet {
        LatticePointSet::from_coords(dim, pts.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn layer_size_examples() {
        assert_eq!(layer_size(1, 5, 3), 1);
        assert_eq!(layer_size(2, 2, 1), 2);
        assert_eq!(layer_size(2, 3, 2), 3);
        assert_eq!(layer_size(2, 3, 5), 0);
        assert_eq!(layer_size(4, 2, 2), 6);
    }

    #[test]
    fn layer_examples() {
        assert_eq!(
            layer_construct(2, 3, 2).unwrap(),
            set(2, &[&[0, 2], &[1, 1], &[2, 0]])
        );
        assert_eq!(layer_construct(2, 2, 1).unwrap(), set(2, &[&[0, 1], &[1, 0]]));
        assert_eq!(
            layer_construct(3, 2, 1).unwrap(),
            set(3, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
        assert!(layer_construct(2, 3, 9).unwrap().is_empty());
    }

    #[test]
    fn wn_examples() {
        let w = wn_construct(2, 3).unwrap();
        assert_eq!(w, set(2, &[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[2, 0]]));
        assert_eq!(wn_construct(1, 4).unwrap(), set(1, &[&[0]]));
        assert_eq!(wn_construct(2, 2).unwrap().len(), 3);
        assert!(w.classify().is_weak_antichain);
        assert!(!w.classify().is_antichain);
    }

    #[test]
    fn width_examples() {
        let w = |n, m, mode| {
            max_antichain(&GridPoset::new(n, m, mode).unwrap(), DEFAULT_WIDTH_BUDGET)
                .unwrap()
                .width
        };
        assert_eq!(w(2, 2, OrderMode::StrictProduct), 2);
        assert_eq!(w(2, 3, OrderMode::StrictProduct), 3);
        assert_eq!(w(2, 3, OrderMode::StrongAll), 5);
        assert_eq!(w(1, 6, OrderMode::StrictProduct), 1);
        assert_eq!(w(3, 1, OrderMode::StrongAll), 1);
    }

    #[test]
    fn poset_validation_and_budget() {
        assert!(GridPoset::new(2, 2, OrderMode::Leq).is_err());
        assert!(GridPoset::new(0, 2, OrderMode::StrongAll).is_err());
        let p = GridPoset::new(3, 5, OrderMode::StrictProduct).unwrap();
        assert!(matches!(max_antichain(&p, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn widths_match_closed_forms_on_small_grids() {
        for n in 1..=4usize {
            for m in 1..=6usize {
                if m.pow(n as u32) > 256 {
                    continue;
                }
                let strict = GridPoset::new(n, m, OrderMode::StrictProduct).unwrap();
                let r = max_antichain(&strict, DEFAULT_WIDTH_BUDGET).unwrap();
                let best_layer = (0..=n * (m - 1)).map(|l| layer_size(n, m, l)).max().unwrap();
                assert_eq!(r.width as u128, best_layer, "n={n} m={m}");
                assert_eq!(r.witness.len(), r.width);
                assert!(r.witness.classify().is_antichain);

                let weak = GridPoset::new(n, m, OrderMode::StrongAll).unwrap();
                let r = max_antichain(&weak, DEFAULT_WIDTH_BUDGET).unwrap();
                assert_eq!(r.width as u128, wn_size(n, m), "n={n} m={m}");
                assert!(r.witness.classify().is_weak_antichain);

                assert_eq!(construction(&strict).unwrap().width as u128, best_layer);
                assert_eq!(construction(&weak).unwrap().width as u128, wn_size(n, m));
            }
        }
    }

    #[test]
    fn layer_sums_and_symmetry() {
        for n in 1..=5usize {
            for m in 1..=5usize {
                let top = n * (m - 1);
                let total: u128 = (0..=top).map(|l| layer_size(n, m, l)).sum();
                assert_eq!(total, (m as u128).pow(n as u32));
                for l in 0..=top {
                    assert_eq!(layer_size(n, m, l), layer_size(n, m, top - l));
                    assert_eq!(layer_construct(n, m, l).unwrap().len() as u128, layer_size(n, m, l));
                }
            }
        }
    }

    #[test]
    fn layer_to_wn_ratio_shrinks_for_binary_cube() {
        let ratios: Vec<f64> = (2..=12)
            .map(|n| middle_layer_size(n, 2) as f64 / wn_size(n, 2) as f64)
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }
}
