//! The greedy split of a weak antichain into `n` parts, part `i` being
//! injective under deletion of coordinate `i`, and the projection gap
//! `sum_i |pi_i(A)| - |A|`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dominates_coords, LatticePoint, LatticePointSet, OrderMode};

/// Retries allowed to [`random_weak_antichain`] before giving up.
pub const DEFAULT_RANDOM_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub source: LatticePointSet,
    pub parts: Vec<LatticePointSet>,
    /// `|pi_i(parts[i])|` for each axis.
    pub part_projection_sizes: Vec<usize>,
}

impl PartitionCertificate {
    /// Re-checks disjointness, coverage and per-part injectivity from scratch.
    pub fn is_valid(&self) -> bool {
        let n = self.source.dim();
        if self.parts.len() != n || self.part_projection_sizes.len() != n {
            return false;
        }
        let mut all: Vec<&LatticePoint> = self.parts.iter().flat_map(|p| p.iter()).collect();
        let total = all.len();
        all.sort();
        all.dedup();
        if all.len() != total || total != self.source.len() {
            return false;
        }
        if !all.iter().all(|p| self.source.contains(p)) {
            return false;
        }
        self.parts.iter().enumerate().all(|(axis, part)| {
            let image = projected_len(part, axis);
            image == part.len() && image == self.part_projection_sizes[axis]
        })
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }
}

fn projected_len(set: &LatticePointSet, axis: usize) -> usize {
    if set.dim() == 1 {
        usize::from(!set.is_empty())
    } else {
        set.project(axis).map(|s| s.len()).unwrap_or(0)
    }
}

/// Splits a weak antichain: part `i` takes, among the points not yet
/// assigned, those whose `i`-th coordinate is smallest within their line
/// parallel to axis `i`.
pub fn greedy_partition(set: &LatticePointSet) -> Result<PartitionCertificate> {
    let n = set.dim();
    let mut remaining: Vec<LatticePoint> = set.points().to_vec();
    let mut parts = Vec::with_capacity(n);

    for axis in 0..n {
        let mut line_min: HashMap<Vec<i64>, usize> = HashMap::with_capacity(remaining.len());
        for (idx, p) in remaining.iter().enumerate() {
            line_min
                .entry(p.without(axis))
                .and_modify(|best| {
                    if p.coords()[axis] < remaining[*best].coords()[axis] {
                        *best = idx;
                    }
                })
                .or_insert(idx);
        }
        let mut chosen = vec![false; remaining.len()];
        for &idx in line_min.values() {
            chosen[idx] = true;
        }
        let (part, rest): (Vec<_>, Vec<_>) = remaining
            .into_iter()
            .zip(chosen)
            .partition(|(_, keep)| *keep);
        parts.push(LatticePointSet::from_sorted_unchecked(
            n,
            part.into_iter().map(|(p, _)| p).collect(),
        ));
        remaining = rest.into_iter().map(|(p, _)| p).collect();
    }

    if let Some((lower, upper)) = set.find_comparable(OrderMode::StrongAll) {
        return Err(Error::NotWeakAntichain {
            lower: lower.coords().to_vec(),
            upper: upper.coords().to_vec(),
            leftover: remaining.len(),
        });
    }
    debug_assert!(remaining.is_empty());

    let part_projection_sizes = parts
        .iter()
        .enumerate()
        .map(|(axis, p)| projected_len(p, axis))
        .collect();
    Ok(PartitionCertificate {
        source: set.clone(),
        parts,
        part_projection_sizes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub set_size: usize,
    pub projection_sizes: Vec<usize>,
    /// `sum(projection_sizes) - set_size`.
    pub gap: i64,
}

pub fn projection_gap(set: &LatticePointSet) -> GapReport {
    let projection_sizes: Vec<usize> = (0..set.dim()).map(|i| projected_len(set, i)).collect();
    let total: usize = projection_sizes.iter().sum();
    GapReport {
        set_size: set.len(),
        gap: total as i64 - set.len() as i64,
        projection_sizes,
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapScan {
    pub n: usize,
    pub side: i64,
    pub size: usize,
    /// `None` when the box holds no weak antichain of the requested size.
    pub min_gap: Option<i64>,
    pub witness: Option<LatticePointSet>,
    /// Number of weak antichains of the requested size that were examined.
    pub examined: u64,
}

fn box_len(n: usize, side: i64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: 0, min: 1 });
    }
    if side < 1 {
        return Err(Error::OutOfRange {
            name: "side",
            value: side as f64,
            range: "[1, inf)",
        });
    }
    (side as usize)
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget: usize::MAX as u128,
            hint: "box too large",
        })
}

/// Depth-first enumeration of weak antichains in lexicographic subset order,
/// extending only with points incomparable to every chosen point.
struct WeakAntichainDfs<'a> {
    universe: &'a [LatticePoint],
    size: usize,
    chosen: Vec<usize>,
}

impl WeakAntichainDfs<'_> {
    fn compatible(&self, idx: usize) -> bool {
        let c = self.universe[idx].coords();
        self.chosen.iter().all(|&j| {
            let d = self.universe[j].coords();
            !dominates_coords(c, d, OrderMode::StrongAll)
                && !dominates_coords(d, c, OrderMode::StrongAll)
        })
    }

    fn walk<F: FnMut(&[usize])>(&mut self, start: usize, visit: &mut F) {
        if self.chosen.len() == self.size {
            visit(&self.chosen);
            return;
        }
        let need = self.size - self.chosen.len();
        for idx in start..self.universe.len() {
            if self.universe.len() - idx < need {
                break;
            }
            if self.compatible(idx) {
                self.chosen.push(idx);
                self.walk(idx + 1, visit);
                self.chosen.pop();
            }
        }
    }
}

/// Minimum projection gap over all weak antichains of `size` points inside
/// `[0, side)^n`. The witness is the lexicographically least subset attaining
/// the minimum.
pub fn exhaustive_gap_scan(n: usize, side: i64, size: usize, budget: u128) -> Result<GapScan> {
    let total = box_len(n, side)?;
    let required = binomial(total as u128, size as u128);
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            budget,
            hint: "use the randomized scan instead",
        });
    }
    let universe = crate::lattice::box_points(n, side);

    let build = |idx: &[usize]| {
        LatticePointSet::from_sorted_unchecked(n, idx.iter().map(|&i| universe[i].clone()).collect())
    };

    // Split on the first chosen point; branches are in lexicographic order so
    // the reduction keeps the earliest witness among equal gaps.
    let branch = |first: usize| -> (Option<(i64, Vec<usize>)>, u64) {
        let mut dfs = WeakAntichainDfs {
            universe: &universe,
            size,
            chosen: vec![first],
        };
        let mut best: Option<(i64, Vec<usize>)> = None;
        let mut count = 0u64;
        dfs.walk(first + 1, &mut |idx| {
            count += 1;
            let gap = projection_gap(&build(idx)).gap;
            if best.as_ref().is_none_or(|(g, _)| gap < *g) {
                best = Some((gap, idx.to_vec()));
            }
        });
        (best, count)
    };

    let (best, examined): (Option<(i64, Vec<usize>)>, u64) = if size == 0 {
        (Some((0, Vec::new())), 1)
    } else {
        let results: Vec<_> = (0..total).into_par_iter().map(branch).collect();
        results
            .into_iter()
            .fold((None, 0u64), |(best, count): (Option<(i64, Vec<usize>)>, u64), (b, c)| {
                let best = match (best, b) {
                    (None, b) => b,
                    (Some(a), Some(b)) if b.0 < a.0 => Some(b),
                    (a, _) => a,
                };
                (best, count + c)
            })
    };

    Ok(GapScan {
        n,
        side,
        size,
        min_gap: best.as_ref().map(|(g, _)| *g),
        witness: best.map(|(_, idx)| build(&idx)),
        examined,
    })
}

/// Every weak antichain in `[0, side)^n`, including the empty set, in
/// order of size and then lexicographically.
pub fn weak_antichains_in_box(n: usize, side: i64, budget: u128) -> Result<Vec<LatticePointSet>> {
    let total = box_len(n, side)?;
    let required = if total >= 128 { u128::MAX } else { 1u128 << total };
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            budget,
            hint: "shrink the box",
        });
    }
    let universe = crate::lattice::box_points(n, side);
    let mut out = Vec::new();
    for size in 0..=total {
        let before = out.len();
        let mut dfs = WeakAntichainDfs {
            universe: &universe,
            size,
            chosen: Vec::new(),
        };
        dfs.walk(0, &mut |idx| {
            out.push(LatticePointSet::from_sorted_unchecked(
                n,
                idx.iter().map(|&i| universe[i].clone()).collect(),
            ))
        });
        if out.len() == before {
            break;
        }
    }
    Ok(out)
}

/// Size of the largest weak antichain in `[0, side)^n`.
pub fn max_weak_antichain_size(n: usize, side: i64) -> u128 {
    let side = side.max(0) as u128;
    side.pow(n as u32) - side.saturating_sub(1).pow(n as u32)
}

/// Visits every point of the sub-box `lo <= x < hi` (row-major).
fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(a, b)| a >= b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut axis = cur.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] < hi[axis] {
                break;
            }
            cur[axis] = lo[axis];
        }
    }
}

/// A weak antichain of exactly `target` points in `[0, side)^n`,
/// deterministic in `seed`.
///
/// Points are drawn uniformly from the cells not yet excluded; each accepted
/// point excludes everything strictly above or below it in all coordinates.
/// A run that gets stuck at a maximal weak antichain smaller than `target`
/// is restarted.
pub fn random_weak_antichain(n: usize, side: i64, target: usize, seed: u64) -> Result<LatticePointSet> {
    random_weak_antichain_with_attempts(n, side, target, seed, DEFAULT_RANDOM_ATTEMPTS)
}

pub fn random_weak_antichain_with_attempts(
    n: usize,
    side: i64,
    target: usize,
    seed: u64,
    attempts: usize,
) -> Result<LatticePointSet> {
    let total = box_len(n, side)?;
    if target as u128 > max_weak_antichain_size(n, side) {
        return Err(Error::TargetUnreachable {
            target,
            attempts: 0,
        });
    }
    if target == 0 {
        return Ok(LatticePointSet::empty(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strides: Vec<usize> = (0..n).map(|i| (side as usize).pow((n - 1 - i) as u32)).collect();
    let index_of = |c: &[i64]| -> usize { c.iter().zip(&strides).map(|(&v, s)| v as usize * s).sum() };
    let decode = |mut idx: usize| -> Vec<i64> {
        strides
            .iter()
            .map(|s| {
                let v = idx / s;
                idx %= s;
                v as i64
            })
            .collect()
    };

    for _ in 0..attempts.max(1) {
        let mut blocked = vec![false; total];
        let mut available = total;
        let mut chosen = Vec::with_capacity(target);
        while chosen.len() < target && available > 0 {
            let idx = if available * 8 >= total {
                loop {
                    let i = rng.random_range(0..total);
                    if !blocked[i] {
                        break i;
                    }
                }
            } else {
                let r = rng.random_range(0..available);
                (0..total).filter(|&i| !blocked[i]).nth(r).expect("r < available")
            };
            let c = decode(idx);
            let mut block = |x: &[i64]| {
                let j = index_of(x);
                if !blocked[j] {
                    blocked[j] = true;
                    available -= 1;
                }
            };
            block(&c);
            let above: Vec<i64> = c.iter().map(|v| v + 1).collect();
            for_each_in_box(&above, &vec![side; n], &mut block);
            for_each_in_box(&vec![0; n], &c, &mut block);
            chosen.push(LatticePoint::new(c).expect("n >= 1"));
        }
        if chosen.len() == target {
            return LatticePointSet::new(n, chosen);
        }
    }
    Err(Error::TargetUnreachable { target, attempts })
}

/// Randomized counterpart of [`exhaustive_gap_scan`]: minimum gap over
/// `samples` random weak antichains of `size` points. Sample `i` uses seed
/// `seed + i`; ties keep the lowest sample index.
pub fn random_gap_scan(
    n: usize,
    side: i64,
    size: usize,
    samples: usize,
    seed: u64,
) -> Result<GapScan> {
    let results: Vec<Result<(i64, LatticePointSet)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = random_weak_antichain(n, side, size, seed.wrapping_add(i as u64))?;
            Ok((projection_gap(&s).gap, s))
        })
        .collect();
    let mut best: Option<(i64, LatticePointSet)> = None;
    let mut examined = 0u64;
    for r in results {
        let (gap, s) = r?;
        examined += 1;
        if best.as_ref().is_none_or(|(g, _)| gap < *g) {
            best = Some((gap, s));
        }
    }
    Ok(GapScan {
        n,
        side,
        size,
        min_gap: best.as_ref().map(|(g, _)| *g),
        witness: best.map(|(_, s)| s),
        examined,
    })
}
