//! Recorded outputs of verification runs. A change here means the numerics
//! moved; investigate before updating a number.

use rotset_core::confinement::complement_disk_stats;
use rotset_core::manifold::{grow_manifold, Branch, GrowthOptions, ManifoldCurve, ManifoldKind};
use rotset_core::periodic::PeriodicPoint;
use rotset_core::probes::{closure_invariance_score, mixing_probe, Ball};
use rotset_core::rotation::{estimate_vertical_rotation_set, measure_rotation_vector, Horizons, SeedGrid};
use rotset_core::transversality::{translate_scan, RectangleSpec, TranslateRange};
use rotset_core::{LiftedTorusMap, Rect, Vec2};

fn k2_tangle(budget: f64) -> (Vec<ManifoldCurve>, Vec<ManifoldCurve>) {
    let map = LiftedTorusMap::standard(2.0, 0.0);
    let pp = PeriodicPoint::at(&map, Vec2::ZERO, 1, [0, 0]);
    let opts = GrowthOptions {
        arclength_budget: budget,
        h_max: 1e-3,
        ..GrowthOptions::default()
    };
    let grow = |kind| {
        [Branch::Plus, Branch::Minus]
            .into_iter()
            .map(|b| grow_manifold(&map, &pp, kind, b, &opts).unwrap())
            .collect::<Vec<_>>()
    };
    (grow(ManifoldKind::Unstable), grow(ManifoldKind::Stable))
}

#[test]
fn vertical_rotation_interval_k2() {
    let map = LiftedTorusMap::standard(2.0, 0.0);
    let iv = estimate_vertical_rotation_set(&map, &SeedGrid::unit(64), Horizons::new(1_000, 10_000)).unwrap();
    assert!(iv.lo < 0.0 && 0.0 < iv.hi);
    // Grid points on x = 1/4 and 3/4 with integer y are accelerator modes.
    assert_eq!(iv.lo, -2.0);
    assert_eq!(iv.hi, 2.0);
}

#[test]
fn perturbed_family_drifts_north() {
    let map = LiftedTorusMap::standard(0.5, 0.01);
    let n = 1000;
    let samples: Vec<Vec2> = (0..n * n)
        .map(|i| Vec2::new((i % n) as f64 / n as f64, (i / n) as f64 / n as f64))
        .collect();
    let rho = measure_rotation_vector(&map, &samples).unwrap();
    assert!((rho.y - 0.01).abs() < 1e-6, "{rho:?}");

    let iv = estimate_vertical_rotation_set(&map, &SeedGrid::unit(64), Horizons::new(1_000, 10_000)).unwrap();
    assert!(iv.hi >= 0.01 - 1e-3, "{iv:?}");
    assert!((iv.lo - -0.2500011225138076).abs() < 1e-9, "{iv:?}");
    assert!((iv.hi - 0.023416245749845372).abs() < 1e-9, "{iv:?}");
}

#[test]
fn translate_scan_k2_finds_all_nine() {
    let (u, s) = k2_tangle(200.0);
    let table = translate_scan(&u, &s, TranslateRange::square(1), RectangleSpec::from_h_max(1e-3));
    assert_eq!(table.cells.len(), 9);
    for cell in &table.cells {
        assert!(cell.has_witness(), "{:?}", cell.translate);
    }
}

#[test]
fn closure_and_disks_k2() {
    let (u, s) = k2_tangle(50.0);
    let unstable: Vec<Vec2> = u.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    let region = Rect::new(0.0, 2.0, 0.0, 2.0);
    let score = closure_invariance_score(&unstable, [1, 0], region, 0.05);
    assert_eq!(score.compared, 13690);
    assert!((score.score - 0.11364576154754845).abs() < 1e-9, "{score:?}");

    let mut obstacle = Vec::new();
    for c in u.iter().chain(&s) {
        for a in -3..=3 {
            for b in -3..=3 {
                obstacle.extend(c.translated([a, b]));
            }
        }
    }
    let disks = complement_disk_stats(&obstacle, region, 1.0 / 64.0).unwrap();
    assert_eq!(disks.disks.len(), 380);
    assert!((disks.max_diameter - 0.3081731706768128).abs() < 1e-9, "{}", disks.max_diameter);
}

#[test]
fn mixing_table_k2() {
    let map = LiftedTorusMap::standard(2.0, 0.0);
    let r = mixing_probe(
        &map,
        Ball::new(Vec2::new(0.25, 0.25), 0.2),
        Ball::new(Vec2::new(0.75, 0.75), 0.2),
        200,
        64,
    );
    assert_eq!(r.samples, 12849);
    assert_eq!(r.escaped, 0);
    // Lifted orbits spread out, so hits thin out and no full tail is seen.
    assert_eq!(r.tail_start, None);
    assert_eq!(r.hits.iter().sum::<usize>(), 51);
    assert_eq!(r.hits.iter().filter(|&&c| c > 0).count(), 21);
    assert_eq!(&r.hits[..10], &[0, 0, 0, 9, 2, 8, 2, 5, 4, 2]);
}
