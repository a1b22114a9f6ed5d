//! Library results checked against independent reference computations.

#[path = "support/crossing_oracle.rs"]
mod crossing_oracle;
#[path = "support/polyline_cases.rs"]
mod polyline_cases;

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rotset_core::geometry::Mat2;
use rotset_core::periodic::{
    classify_jacobian, newton_periodic, sweep_periodic, Classification, NewtonOptions, SweepOptions,
};
use rotset_core::rotation::SeedGrid;
use rotset_core::sft::{bounded_deviation_orbit, QVec, WeightedSft};
use rotset_core::transversality::{detect_crossings, CrossingDetector};
use rotset_core::{LiftedTorusMap, PlaneMap, Vec2};

use crossing_oracle::{distance_to_polyline, oracle_witnesses};

#[test]
fn detector_matches_brute_force_on_random_pairs() {
    let cases = polyline_cases::cases(20_240_611);
    assert_eq!(cases.len(), 100);
    let mut total = 0;
    for (i, c) in cases.iter().enumerate() {
        let det = detect_crossings(&c.piece, &c.target, [0, 0], c.rect);
        let oracle = oracle_witnesses(&c.piece, &c.target, c.rect);
        assert_eq!(det.len(), oracle.len(), "case {i}");
        if c.tangency {
            assert!(det.is_empty(), "touch case {i} produced a witness");
        }
        for w in &det {
            assert!(distance_to_polyline(&c.piece, w.location) < 1e-9);
            assert!(distance_to_polyline(&c.target, w.location) < 1e-9);
        }
        total += det.len();
    }
    assert!(total >= 30, "random cases too sparse: {total} witnesses");
}

#[test]
fn touch_cases_do_intersect() {
    // The constructed touches are real contacts, so rejecting them is a
    // decision of the side test, not a missed intersection.
    for c in polyline_cases::cases(7).iter().filter(|c| c.tangency) {
        assert!(!crossing_oracle::oracle_candidates(&c.piece, &c.target).is_empty());
    }
}

#[test]
fn detector_reuse_across_translates() {
    let cases = polyline_cases::cases(99);
    let c = &cases[0];
    let det = CrossingDetector::new(&c.piece, c.rect);
    for v in [[0, 0], [1, 0], [0, -1]] {
        let shifted: Vec<Vec2> = c.target.iter().map(|p| *p + Vec2::from_int(v)).collect();
        assert_eq!(
            det.detect(&c.target, v).len(),
            oracle_witnesses(&c.piece, &shifted, c.rect).len()
        );
    }
}

#[test]
fn k2_fixed_points_match_closed_form() {
    let map = LiftedTorusMap::standard(2.0, 0.0);
    let report = sweep_periodic(&map, 1, [0, 0], &SeedGrid::unit(16), &SweepOptions::default()).unwrap();
    assert_eq!(report.orbits.len(), 2);
    let mut found: Vec<Vec2> = report.orbits.iter().map(|o| o.point.torus_reduce()).collect();
    found.sort_by(|a, b| a.x.total_cmp(&b.x));
    for (f, want) in found.iter().zip([Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.0)]) {
        assert!(f.torus_dist(want) < 1e-10);
    }
    for o in &report.orbits {
        assert!(o.residual < 1e-10);
        // Hand-differentiated Jacobian [[1+c, 1], [c, 1]], c = 2πk cos 2πx.
        let c = 2.0 * PI * 2.0 * (2.0 * PI * o.point.x).cos();
        let hand = Mat2::new(1.0 + c, 1.0, c, 1.0);
        assert!(o.jacobian.sub(&hand).max_abs() < 1e-9);
        let want = if o.point.torus_dist(Vec2::ZERO) < 1e-6 {
            Classification::HyperbolicPositive
        } else {
            Classification::HyperbolicNegative
        };
        assert_eq!(o.classification, want);
        assert_eq!(classify_jacobian(&hand), want);
    }
}

#[test]
fn k2_vertical_translate_fixed_points_exist() {
    // Fixed points of z ↦ f(z) − (0,1): sin 2πx = 1/2 with y = −1.
    let map = LiftedTorusMap::standard(2.0, 0.0);
    for x in [1.0 / 12.0, 5.0 / 12.0] {
        let z = Vec2::new(x, -1.0);
        let image = map.forward(z);
        assert!((image - z - Vec2::new(0.0, 1.0)).norm() < 1e-12);
        let pp = newton_periodic(&map, 1, [0, 1], z + Vec2::new(0.01, 0.01), &NewtonOptions::default()).unwrap();
        assert!(pp.point.dist(z) < 1e-10 || pp.point.torus_dist(z) < 1e-10);
    }
}

#[test]
fn elliptic_at_small_k() {
    let map = LiftedTorusMap::standard(0.05, 0.0);
    let pp = newton_periodic(&map, 1, [0, 0], Vec2::new(0.48, 0.01), &NewtonOptions::default()).unwrap();
    assert!((pp.jacobian.trace() - (2.0 - 0.1 * PI)).abs() < 1e-12);
    assert_eq!(pp.classification, Classification::Elliptic);
}

fn brute_force_max_deviation(g: &WeightedSft, word: &[usize], rho: &QVec, n_max: usize) -> f64 {
    let mut sx = BigRational::zero();
    let mut sy = BigRational::zero();
    let mut worst = BigRational::zero();
    for n in 1..=n_max {
        let e = &g.edges[word[(n - 1) % word.len()]];
        sx += &e.weight.0;
        sy += &e.weight.1;
        let k = BigRational::from_integer((n as i64).into());
        let dx = &sx - &rho.0 * &k;
        let dy = &sy - &rho.1 * &k;
        let d2 = &dx * &dx + &dy * &dy;
        if d2 > worst {
            worst = d2;
        }
    }
    worst.to_f64().unwrap().sqrt()
}

#[test]
fn sft_deviation_matches_direct_partial_sums() {
    let g = WeightedSft::parse("vertices 1\n0 0 1 0\n0 0 0 1\n").unwrap();
    for (rho, hand) in [
        (QVec::ratio(1, 2, 1, 2), Some(2f64.sqrt() / 2.0)),
        (QVec::ratio(1, 3, 2, 3), None),
    ] {
        let o = bounded_deviation_orbit(&g, &rho, 10_000, 100).unwrap();
        let direct = brute_force_max_deviation(&g, &o.word, &rho, 10_000);
        assert_eq!(o.max_deviation, direct);
        assert!(direct <= o.deviation_bound);
        if let Some(h) = hand {
            assert!((direct - h).abs() < 1e-15);
        }
    }
    let tri = WeightedSft::parse("vertices 2\n0 0 1 0\n1 1 0 1\n0 1 0 0\n1 0 0 0\n").unwrap();
    let rho = QVec::ratio(2, 7, 1, 5);
    let o = bounded_deviation_orbit(&tri, &rho, 5_000, 100).unwrap();
    assert_eq!(o.max_deviation, brute_force_max_deviation(&tri, &o.word, &rho, 5_000));
}

