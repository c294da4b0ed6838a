//! Cross-module checks through the public API.

use antichain_core::extremal::{max_antichain, middle_layer_size, wn_size, GridPoset};
use antichain_core::grid::{covering_bound, d_const, grid_cover, SetSampler};
use antichain_core::lattice::{parse_point_set, OrderMode};
use antichain_core::measure::{
    projection_measure, shear, surface_measure, verify_projection_inequality, MonotoneGraphSurface, ShearParams,
    TabulatedMonotone,
};
use antichain_core::partition::{greedy_partition, max_weak_antichain_size, projection_gap, random_weak_antichain};
use proptest::prelude::*;

#[test]
fn text_roundtrip_then_certificate() {
    let set = parse_point_set("dim=3\n0,1,2\n2,0,1\n1,2,0\n1,1,1\n").unwrap();
    assert_eq!(parse_point_set(&set.to_text()).unwrap(), set);
    let cert = greedy_partition(&set).unwrap();
    assert!(cert.is_valid());
    let gap = projection_gap(&set);
    assert_eq!(gap.set_size, 4);
    assert!(gap.gap >= 2);
}

#[test]
fn matching_widths_agree_with_counts() {
    for (n, m) in [(2, 3), (3, 3), (2, 5)] {
        let strict = GridPoset::new(n, m, OrderMode::StrictProduct).unwrap();
        assert_eq!(max_antichain(&strict, 1 << 16).unwrap().width as u128, middle_layer_size(n, m));
        let weak = GridPoset::new(n, m, OrderMode::StrongAll).unwrap();
        assert_eq!(max_antichain(&weak, 1 << 16).unwrap().width as u128, wn_size(n, m));
    }
}

#[test]
fn hyperplane_cover_is_weak_antichain_and_bounds_measure() {
    let s = MonotoneGraphSurface::hyperplane(3).unwrap();
    let exact = surface_measure(&s, 1e-9).unwrap().value;
    let d = d_const(3).unwrap();
    for m in [4, 8, 16] {
        let cover = grid_cover(&SetSampler::Surface(s.clone()), m).unwrap();
        assert!(cover.indices.classify().is_weak_antichain, "m = {m}");
        let bound = covering_bound(&cover).unwrap().value;
        let projections: f64 = (0..3).map(|i| covering_bound(&cover.project(i).unwrap()).unwrap().value).sum();
        assert!(bound <= d * projections + 1e-9, "m = {m}");
        // Cubes of diameter sqrt(3)/m over-count the area.
        assert!(bound >= exact, "m = {m}: {bound} < {exact}");
    }
}

#[test]
fn tabulated_surface_verifies_in_three_dimensions() {
    let t = TabulatedMonotone::from_fn(2, 5, |x| (1.0 - 0.5 * x[0] - 0.4 * x[1] * x[1]).clamp(0.0, 1.0)).unwrap();
    let s = MonotoneGraphSurface::Tabulated(t);
    let r = verify_projection_inequality(&s, 1e-3).unwrap();
    assert!(r.passes);
    assert!(r.within_n_bound);
    let bottom = projection_measure(&s, 2, 1e-3).unwrap().value;
    assert!((bottom - 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_weak_antichains_pass_everything(n in 2usize..5, side in 2i64..6, target in 1usize..12, seed: u64) {
        let target = target.min(max_weak_antichain_size(n, side) as usize);
        let set = random_weak_antichain(n, side, target, seed).unwrap();
        prop_assert!(set.classify().is_weak_antichain);
        let cert = greedy_partition(&set).unwrap();
        prop_assert!(cert.is_valid());
        prop_assert!(projection_gap(&set).gap >= n as i64 - 1);
    }

    #[test]
    fn sheared_weak_antichains_are_antichains(n in 2usize..4, side in 2i64..6, target in 2usize..8, seed: u64, frac in 0.05f64..0.95) {
        let target = target.min(max_weak_antichain_size(n, side) as usize);
        let set = random_weak_antichain(n, side, target, seed).unwrap();
        let params = ShearParams::new(n, frac / (2.0 * n as f64) / side as f64).unwrap();
        let image: Vec<Vec<f64>> = set
            .iter()
            .map(|p| shear(&p.coords().iter().map(|&c| c as f64).collect::<Vec<_>>(), &params).unwrap())
            .collect();
        prop_assert!(antichain_core::lattice::classify_coords(&image).is_antichain);
    }
}
