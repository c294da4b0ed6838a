//! Integer lattice points, the three product orders and the projections that
//! delete or subtract a coordinate.
//!
//! Axes are 0-based throughout the library: `project(0)` deletes the first
//! coordinate.

mod format;

pub use format::{parse_point_set, parse_real_points, write_real_points};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three componentwise orders on tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderMode {
    /// `x <= y` in every coordinate.
    Leq,
    /// `x <= y` and `x != y`.
    StrictProduct,
    /// `x < y` in every coordinate.
    StrongAll,
}

/// Order test on raw coordinate slices of equal length.
pub fn dominates_coords<T: PartialOrd>(x: &[T], y: &[T], mode: OrderMode) -> bool {
    debug_assert_eq!(x.len(), y.len());
    match mode {
        OrderMode::Leq => x.iter().zip(y).all(|(a, b)| a <= b),
        OrderMode::StrictProduct => {
            let mut strict = false;
            for (a, b) in x.iter().zip(y) {
                if a > b {
                    return false;
                }
                strict |= a < b;
            }
            strict
        }
        OrderMode::StrongAll => x.iter().zip(y).all(|(a, b)| a < b),
    }
}

/// A point of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    /// The point with coordinate `axis` removed.
    pub fn without(&self, axis: usize) -> Vec<i64> {
        let mut rest = Vec::with_capacity(self.0.len().saturating_sub(1));
        rest.extend_from_slice(&self.0[..axis]);
        rest.extend_from_slice(&self.0[axis + 1..]);
        rest
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn dominates(x: &LatticePoint, y: &LatticePoint, mode: OrderMode) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(dominates_coords(x.coords(), y.coords(), mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_antichain: bool,
    pub is_weak_antichain: bool,
}

/// Classifies any finite family of equal-length coordinate tuples.
///
/// Duplicated tuples are treated as the same element.
pub fn classify_coords<T: PartialOrd, P: AsRef<[T]>>(points: &[P]) -> Classification {
    let mut out = Classification {
        is_antichain: true,
        is_weak_antichain: true,
    };
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            let (x, y) = (x.as_ref(), y.as_ref());
            if out.is_antichain
                && (dominates_coords(x, y, OrderMode::StrictProduct)
                    || dominates_coords(y, x, OrderMode::StrictProduct))
            {
                out.is_antichain = false;
            }
            if dominates_coords(x, y, OrderMode::StrongAll)
                || dominates_coords(y, x, OrderMode::StrongAll)
            {
                out.is_weak_antichain = false;
                return out;
            }
        }
    }
    out
}

/// For each axis, the indices of the points whose coordinate on that axis
/// equals their minimum coordinate. Points with ties appear in several lists.
pub fn skew_split_indices<T: PartialOrd + Copy, P: AsRef<[T]>>(
    dim: usize,
    points: &[P],
) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); dim];
    for (idx, p) in points.iter().enumerate() {
        let p = p.as_ref();
        let Some(min) = p.iter().copied().reduce(|a, b| if b < a { b } else { a }) else {
            continue;
        };
        for (axis, part) in parts.iter_mut().enumerate() {
            if p[axis] == min {
                part.push(idx);
            }
        }
    }
    parts
}

/// A finite set of lattice points sharing one dimension, kept sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePointSet {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl LatticePointSet {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
        }
    }

    /// Builds a set, rejecting mixed dimensions and duplicates.
    pub fn new(dim: usize, points: Vec<LatticePoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, min: 1 });
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let mut points = points;
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].coords().to_vec()));
        }
        Ok(Self { dim, points })
    }

    pub fn from_coords<I>(dim: usize, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        let points = coords
            .into_iter()
            .map(LatticePoint::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, points)
    }

    /// Like [`LatticePointSet::new`] but every coordinate must lie in `[0, side)`.
    pub fn in_box(dim: usize, side: i64, points: Vec<LatticePoint>) -> Result<Self> {
        for p in &points {
            if p.coords().iter().any(|&c| c < 0 || c >= side) {
                return Err(Error::OutOfBox {
                    point: p.coords().to_vec(),
                    side,
                });
            }
        }
        Self::new(dim, points)
    }

    /// Collects points, silently merging duplicates.
    pub(crate) fn collect_dedup(dim: usize, mut points: Vec<LatticePoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        Self { dim, points }
    }

    /// Caller guarantees `points` is sorted, duplicate free and of dimension `dim`.
    pub(crate) fn from_sorted_unchecked(dim: usize, points: Vec<LatticePoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Self { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatticePoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn classify(&self) -> Classification {
        classify_coords(&self.coord_slices())
    }

    /// First pair `(lower, upper)` in lexicographic scan order with
    /// `lower` below `upper` under `mode`.
    pub fn find_comparable(&self, mode: OrderMode) -> Option<(&LatticePoint, &LatticePoint)> {
        for (i, x) in self.points.iter().enumerate() {
            for y in &self.points[i + 1..] {
                if dominates_coords(x.coords(), y.coords(), mode) {
                    return Some((x, y));
                }
                if dominates_coords(y.coords(), x.coords(), mode) {
                    return Some((y, x));
                }
            }
        }
        None
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                index: axis,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Image under deletion of coordinate `axis`.
    pub fn project(&self, axis: usize) -> Result<LatticePointSet> {
        self.check_axis(axis)?;
        if self.dim < 2 {
            return Err(Error::InvalidDimension {
                dim: self.dim,
                min: 2,
            });
        }
        let image = self
            .points
            .iter()
            .map(|p| LatticePoint(p.without(axis)))
            .collect();
        Ok(Self::collect_dedup(self.dim - 1, image))
    }

    /// Sizes `|pi_i(S)|` for every axis.
    pub fn projection_sizes(&self) -> Result<Vec<usize>> {
        (0..self.dim).map(|i| self.project(i).map(|s| s.len())).collect()
    }

    /// Splits by the axis attaining the minimum coordinate. A point with a
    /// tied minimum is placed in every matching part.
    pub fn skew_split(&self) -> Vec<LatticePointSet> {
        let coords = self.coord_slices();
        skew_split_indices(self.dim, &coords)
            .into_iter()
            .map(|idx| {
                let pts = idx.into_iter().map(|i| self.points[i].clone()).collect();
                Self::from_sorted_unchecked(self.dim, pts)
            })
            .collect()
    }

    /// Disjoint variant of [`skew_split`](Self::skew_split): a tied point goes
    /// to the lowest attaining axis only.
    pub fn skew_split_disjoint(&self) -> Vec<LatticePointSet> {
        let mut parts = vec![Vec::new(); self.dim];
        for p in &self.points {
            let c = p.coords();
            let min = *c.iter().min().expect("dim >= 1");
            let axis = c.iter().position(|&v| v == min).expect("min is attained");
            parts[axis].push(p.clone());
        }
        parts
            .into_iter()
            .map(|pts| Self::from_sorted_unchecked(self.dim, pts))
            .collect()
    }

    /// Image under the skewed projection that subtracts coordinate `axis`
    /// from the others and deletes it. Every point must attain its minimum
    /// at `axis`.
    pub fn skew_project(&self, axis: usize) -> Result<LatticePointSet> {
        self.check_axis(axis)?;
        if self.dim < 2 {
            return Err(Error::InvalidDimension {
                dim: self.dim,
                min: 2,
            });
        }
        let mut image = Vec::with_capacity(self.len());
        for p in &self.points {
            let c = p.coords();
            let base = c[axis];
            if c.iter().any(|&v| v < base) {
                return Err(Error::NotMinimalCoordinate {
                    point: c.to_vec(),
                    axis,
                });
            }
            image.push(LatticePoint(
                p.without(axis).into_iter().map(|v| v - base).collect(),
            ));
        }
        Ok(Self::collect_dedup(self.dim - 1, image))
    }

    pub(crate) fn coord_slices(&self) -> Vec<&[i64]> {
        self.points.iter().map(|p| p.coords()).collect()
    }
}

impl<'a> IntoIterator for &'a LatticePointSet {
    type Item = &'a LatticePoint;
    type IntoIter = std::slice::Iter<'a, LatticePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// All `side^dim` points of the box `[0, side)^dim` in lexicographic order.
pub fn box_points(dim: usize, side: i64) -> Vec<LatticePoint> {
    let total = (side.max(0) as usize).pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0i64; dim];
    for _ in 0..total {
        out.push(LatticePoint(cur.clone()));
        for c in cur.iter_mut().rev() {
            *c += 1;
            if *c < side {
                break;
            }
            *c = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec()).unwrap()
    }

    fn set(dim: usize, pts: &[&[i64]]) -> LatticePointSet {
        LatticePointSet::from_coords(dim, pts.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(&[0, 0]), &pt(&[1, 1]), OrderMode::StrongAll).unwrap());
        assert!(!dominates(&pt(&[0, 1]), &pt(&[1, 0]), OrderMode::Leq).unwrap());
        assert!(dominates(&pt(&[0, 0]), &pt(&[0, 1]), OrderMode::StrictProduct).unwrap());
        assert!(!dominates(&pt(&[0, 0]), &pt(&[0, 1]), OrderMode::StrongAll).unwrap());
        assert!(dominates(&pt(&[3, 3]), &pt(&[3, 3]), OrderMode::Leq).unwrap());
        assert!(!dominates(&pt(&[3, 3]), &pt(&[3, 3]), OrderMode::StrictProduct).unwrap());
    }

    #[test]
    fn dominance_dimension_mismatch() {
        let err = dominates(&pt(&[0]), &pt(&[0, 1]), OrderMode::Leq).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn classify_examples() {
        let c = set(2, &[&[0, 1], &[1, 0]]).classify();
        assert!(c.is_antichain && c.is_weak_antichain);
        let c = set(2, &[&[0, 0], &[0, 1]]).classify();
        assert!(!c.is_antichain && c.is_weak_antichain);
        let c = set(2, &[&[0, 0], &[1, 1]]).classify();
        assert!(!c.is_antichain && !c.is_weak_antichain);
        let c = LatticePointSet::empty(3).classify();
        assert!(c.is_antichain && c.is_weak_antichain);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            LatticePointSet::from_coords(2, vec![vec![1, 2], vec![1, 2]]).unwrap_err(),
            Error::DuplicatePoint(vec![1, 2])
        );
        assert!(matches!(
            LatticePointSet::from_coords(2, vec![vec![1, 2, 3]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            LatticePointSet::in_box(2, 3, vec![pt(&[0, 3])]),
            Err(Error::OutOfBox { .. })
        ));
        assert!(LatticePointSet::in_box(2, 3, vec![pt(&[0, 2])]).is_ok());
        // signed coordinates are fine outside the box constructor
        assert!(LatticePointSet::from_coords(2, vec![vec![-5, 7]]).is_ok());
    }

    #[test]
    fn projection_examples() {
        let s = set(2, &[&[0, 2], &[1, 1], &[2, 0]]);
        assert_eq!(s.project(0).unwrap(), set(1, &[&[0], &[1], &[2]]));
        assert_eq!(set(2, &[&[0, 0], &[1, 0]]).project(0).unwrap().len(), 1);
        assert_eq!(
            set(2, &[&[0, 1], &[1, 0]]).project(1).unwrap(),
            set(1, &[&[0], &[1]])
        );
        assert!(matches!(
            s.project(2),
            Err(Error::AxisOutOfRange { index: 2, dim: 2 })
        ));
        assert!(set(1, &[&[4]]).project(0).is_err());
    }

    #[test]
    fn skew_split_examples() {
        let parts = set(2, &[&[0, 2], &[2, 0]]).skew_split();
        assert_eq!(parts[0], set(2, &[&[0, 2]]));
        assert_eq!(parts[1], set(2, &[&[2, 0]]));

        let parts = set(2, &[&[1, 1]]).skew_split();
        assert_eq!(parts[0], set(2, &[&[1, 1]]));
        assert_eq!(parts[1], set(2, &[&[1, 1]]));

        let parts = set(2, &[&[0, 1], &[1, 0], &[2, 2]]).skew_split();
        assert_eq!(parts[0], set(2, &[&[0, 1], &[2, 2]]));
        assert_eq!(parts[1], set(2, &[&[1, 0], &[2, 2]]));

        let disjoint = set(2, &[&[0, 1], &[1, 0], &[2, 2]]).skew_split_disjoint();
        assert_eq!(disjoint[0], set(2, &[&[0, 1], &[2, 2]]));
        assert_eq!(disjoint[1], set(2, &[&[1, 0]]));
    }

    #[test]
    fn skew_project_examples() {
        assert_eq!(
            set(2, &[&[0, 2]]).skew_project(0).unwrap(),
            set(1, &[&[2]])
        );
        assert_eq!(
            set(2, &[&[1, 0]]).skew_project(1).unwrap(),
            set(1, &[&[1]])
        );
        assert_eq!(
            set(2, &[&[0, 1], &[1, 3]]).skew_project(0).unwrap(),
            set(1, &[&[1], &[2]])
        );
        assert_eq!(
            set(2, &[&[2, 0]]).skew_project(0).unwrap_err(),
            Error::NotMinimalCoordinate {
                point: vec![2, 0],
                axis: 0
            }
        );
    }

    #[test]
    fn box_points_are_lexicographic() {
        let pts = box_points(2, 2);
        let coords: Vec<_> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(box_points(3, 3).len(), 27);
    }

    #[test]
    fn skew_projection_injective_on_all_small_weak_antichains() {
        let universe = box_points(2, 3);
        for mask in 0u32..(1 << universe.len()) {
            let pts = (0..universe.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| universe[i].clone())
                .collect();
            let s = LatticePointSet::new(2, pts).unwrap();
            if !s.classify().is_weak_antichain {
                continue;
            }
            for (axis, part) in s.skew_split().iter().enumerate() {
                assert_eq!(part.skew_project(axis).unwrap().len(), part.len());
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn point_set(dim: usize) -> impl Strategy<Value = LatticePointSet> {
            prop::collection::btree_set(prop::collection::vec(-3i64..4, dim), 0..12)
                .prop_map(move |s| LatticePointSet::from_coords(dim, s).unwrap())
        }

        proptest! {
            #[test]
            fn order_implications(x in prop::collection::vec(-3i64..4, 3),
                                  y in prop::collection::vec(-3i64..4, 3)) {
                if dominates_coords(&x, &y, OrderMode::StrongAll) {
                    prop_assert!(dominates_coords(&x, &y, OrderMode::StrictProduct));
                }
                if dominates_coords(&x, &y, OrderMode::StrictProduct) {
                    prop_assert!(dominates_coords(&x, &y, OrderMode::Leq));
                }
            }

            #[test]
            fn antichain_implies_weak(s in point_set(3)) {
                let c = s.classify();
                prop_assert!(!c.is_antichain || c.is_weak_antichain);
                prop_assert_eq!(c.is_antichain, s.find_comparable(OrderMode::StrictProduct).is_none());
                prop_assert_eq!(c.is_weak_antichain, s.find_comparable(OrderMode::StrongAll).is_none());
            }

            #[test]
            fn projection_injective_on_antichains(s in point_set(3)) {
                if s.classify().is_antichain {
                    for axis in 0..3 {
                        prop_assert_eq!(s.project(axis).unwrap().len(), s.len());
                    }
                }
                for axis in 0..3 {
                    prop_assert!(s.project(axis).unwrap().len() <= s.len());
                }
            }

            #[test]
            fn skew_parts_cover(s in point_set(3)) {
                let parts = s.skew_split();
                let mut union: Vec<LatticePoint> = parts.iter().flat_map(|p| p.points().to_vec()).collect();
                union.sort();
                union.dedup();
                prop_assert_eq!(union, s.points().to_vec());
                let disjoint: usize = s.skew_split_disjoint().iter().map(|p| p.len()).sum();
                prop_assert_eq!(disjoint, s.len());
            }
        }
    }
}
