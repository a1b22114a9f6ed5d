//! Periodic points of `g̃ = f̃^q(·) − (p,r)` by Newton's method, with orbit
//! deduplication and trace/determinant classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::NewtonError;
use crate::geometry::{IVec2, Mat2, Vec2};
use crate::map::{jacobian_power, HomotopyMatrix, PlaneMap};
use crate::par;
use crate::rotation::SeedGrid;

pub const PARABOLIC_BAND: f64 = 1e-9;
pub const DEDUP_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    HyperbolicPositive,
    HyperbolicNegative,
    Elliptic,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvalues {
    Real { l1: f64, l2: f64 },
    Complex { re: f64, im: f64 },
}

impl Eigenvalues {
    /// Eigenvalues of a real 2×2 matrix from its trace and determinant.
    /// Real pairs are ordered by decreasing modulus.
    pub fn of(j: &Mat2) -> Self {
        let tr = j.trace();
        let det = j.det();
        let disc = tr * tr - 4.0 * det;
        if disc >= 0.0 {
            let root = disc.sqrt();
            let big = 0.5 * (tr + tr.signum() * root);
            if big == 0.0 {
                return Eigenvalues::Real { l1: 0.0, l2: 0.0 };
            }
            Eigenvalues::Real {
                l1: big,
                l2: det / big,
            }
        } else {
            Eigenvalues::Complex {
                re: 0.5 * tr,
                im: 0.5 * (-disc).sqrt(),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: Vec2,
    pub period: u32,
    pub translation: IVec2,
    /// `Df̃^q` at the point.
    pub jacobian: Mat2,
    pub eigenvalues: Eigenvalues,
    pub classification: Classification,
    /// `‖f̃^q(Q̃) − Q̃ − (p,r)‖`.
    pub residual: f64,
}

impl PeriodicPoint {
    /// Assemble a point, computing `Df̃^q`, the residual and the class.
    pub fn at<M: PlaneMap + ?Sized>(map: &M, point: Vec2, period: u32, translation: IVec2) -> Self {
        let (image, jacobian) = jacobian_power(map, point, period);
        let residual = (image - point - Vec2::from_int(translation)).norm();
        Self {
            point,
            period,
            translation,
            jacobian,
            eigenvalues: Eigenvalues::of(&jacobian),
            classification: classify_jacobian(&jacobian),
            residual,
        }
    }

    /// The lift `Q̃ + v`, whose translation is `(p,r) + (A^q − I)·v`.
    pub fn translated<M: PlaneMap + ?Sized>(&self, map: &M, v: IVec2) -> Self {
        let shift = match map.homotopy() {
            Some(h) => {
                let av = h.pow(self.period).apply(v);
                [av[0] - v[0], av[1] - v[1]]
            }
            None => [0, 0],
        };
        Self::at(
            map,
            self.point + Vec2::from_int(v),
            self.period,
            [self.translation[0] + shift[0], self.translation[1] + shift[1]],
        )
    }

    /// Same point viewed with period `2q`. Its translation is
    /// `(I + A^q)·(p,r)`, which reduces to `2·(p,r)` unless a Dehn twist
    /// acts on a nonzero vertical translation. A hyperbolic point with
    /// negative eigenvalues becomes one with positive eigenvalues.
    pub fn doubled<M: PlaneMap + ?Sized>(&self, map: &M) -> Self {
        let h = map.homotopy().unwrap_or(HomotopyMatrix::Identity);
        let at = h.pow(self.period).apply(self.translation);
        Self::at(
            map,
            self.point,
            2 * self.period,
            [self.translation[0] + at[0], self.translation[1] + at[1]],
        )
    }

    /// `f̃^j(Q̃)` for `j = 0..q`.
    pub fn orbit<M: PlaneMap + ?Sized>(&self, map: &M) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.period as usize);
        let mut z = self.point;
        for _ in 0..self.period {
            out.push(z);
            z = map.forward(z);
        }
        out
    }
}

/// Trace test on the period-`q` Jacobian.
pub fn classify_jacobian(j: &Mat2) -> Classification {
    let tr = j.trace();
    let excess = tr.abs() - 2.0;
    if excess.abs() < PARABOLIC_BAND {
        Classification::Parabolic
    } else if excess > 0.0 {
        if tr > 0.0 {
            Classification::HyperbolicPositive
        } else {
            Classification::HyperbolicNegative
        }
    } else {
        Classification::Elliptic
    }
}

pub fn classify(pp: &PeriodicPoint) -> Classification {
    classify_jacobian(&pp.jacobian)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    /// Stop when the Newton step is shorter than this.
    pub step_tol: f64,
    /// Accept only when the residual is below this.
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            step_tol: 1e-12,
            residual_tol: 1e-10,
            max_iter: 50,
        }
    }
}

/// Newton's method on `F(z) = f̃^q(z) − z − (p,r)` with the chain-rule
/// Jacobian `F′ = Df̃^q − I`.
pub fn newton_periodic<M: PlaneMap + ?Sized>(
    map: &M,
    q: u32,
    pr: IVec2,
    seed: Vec2,
    opts: &NewtonOptions,
) -> Result<PeriodicPoint, NewtonError> {
    if q == 0 {
        return Err(NewtonError::BadPeriod);
    }
    if opts.step_tol.is_nan()
        || opts.step_tol <= 0.0
        || opts.residual_tol.is_nan()
        || opts.residual_tol <= 0.0
    {
        return Err(NewtonError::BadTolerance);
    }
    let target = Vec2::from_int(pr);
    let mut z = seed;
    let mut residual = f64::INFINITY;
    for iter in 0..opts.max_iter {
        let (image, jac) = jacobian_power(map, z, q);
        if !image.is_finite() || !map.in_bounds(image) {
            return Err(NewtonError::NoConvergence {
                iterations: iter,
                residual: f64::INFINITY,
            });
        }
        let f = image - z - target;
        residual = f.norm();
        let fp = jac.sub(&Mat2::IDENTITY);
        let scale = 1.0 + jac.max_abs() * jac.max_abs();
        let inv = fp
            .inverse(1e-12 * scale)
            .ok_or(NewtonError::Singular { at: z })?;
        let step = inv.apply(f);
        z = z - step;
        if !z.is_finite() {
            return Err(NewtonError::NoConvergence {
                iterations: iter + 1,
                residual,
            });
        }
        if step.norm() < opts.step_tol {
            break;
        }
    }
    let pp = PeriodicPoint::at(map, z, q, pr);
    if pp.residual < opts.residual_tol {
        Ok(pp)
    } else {
        Err(NewtonError::NoConvergence {
            iterations: opts.max_iter,
            residual: pp.residual.min(residual),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub newton: NewtonOptions,
    /// Uniform jitter amplitude applied to each seed (0 disables).
    pub jitter: f64,
    /// Root of the per-seed ChaCha8 streams used for jitter.
    pub rng_seed: u64,
    pub dedup_radius: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            newton: NewtonOptions::default(),
            jitter: 0.0,
            rng_seed: 0,
            dedup_radius: DEDUP_RADIUS,
        }
    }
}

/// Deterministic per-seed generator: ChaCha8 keyed by `root`, stream `index`.
pub fn seed_stream(root: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub orbits: Vec<PeriodicPoint>,
    pub seeds: usize,
    pub singular_seeds: usize,
    pub failed_seeds: usize,
    /// Some seed hit a singular Newton matrix: fixed sets may be non-isolated
    /// (for instance curves of fixed points of a shear).
    pub non_isolated: bool,
}

/// Newton from every grid seed, deduplicating modulo point distance,
/// integer translations and cyclic shifts along the orbit.
pub fn sweep_periodic<M: PlaneMap + ?Sized>(
    map: &M,
    q: u32,
    pr: IVec2,
    grid: &SeedGrid,
    opts: &SweepOptions,
) -> Result<SweepReport, NewtonError> {
    if q == 0 {
        return Err(NewtonError::BadPeriod);
    }
    let results = par::map_range(grid.len(), |i| {
        let mut seed = grid.point(i);
        if opts.jitter > 0.0 {
            let mut rng = seed_stream(opts.rng_seed, i as u64);
            seed.x += opts.jitter * rng.random_range(-1.0..1.0);
            seed.y += opts.jitter * rng.random_range(-1.0..1.0);
        }
        newton_periodic(map, q, pr, seed, &opts.newton)
    });

    let mut report = SweepReport {
        orbits: Vec::new(),
        seeds: grid.len(),
        singular_seeds: 0,
        failed_seeds: 0,
        non_isolated: false,
    };
    let mut orbit_points: Vec<Vec<Vec2>> = Vec::new();
    for r in results {
        match r {
            Ok(pp) => {
                let orbit = pp.orbit(map);
                let seen = orbit_points.iter().any(|known| {
                    known
                        .iter()
                        .any(|k| orbit.iter().any(|o| o.torus_dist(*k) < opts.dedup_radius))
                });
                if !seen {
                    orbit_points.push(orbit);
                    report.orbits.push(pp);
                }
            }
            Err(NewtonError::Singular { .. }) => report.singular_seeds += 1,
            Err(NewtonError::BadPeriod) | Err(NewtonError::BadTolerance) => {
                return Err(NewtonError::BadTolerance)
            }
            Err(_) => report.failed_seeds += 1,
        }
    }
    report.non_isolated = report.singular_seeds > 0;
    Ok(report)
}

/// `‖f̃^q(Q̃+v) − (Q̃+v) − (p,r) − (A^q − I)·v‖`.
pub fn translation_covariance_residual<M: PlaneMap + ?Sized>(
    map: &M,
    pp: &PeriodicPoint,
    v: IVec2,
) -> f64 {
    let h = map.homotopy().unwrap_or(HomotopyMatrix::Identity);
    let av = h.pow(pp.period).apply(v);
    let shift = Vec2::new((av[0] - v[0]) as f64, (av[1] - v[1]) as f64);
    let z = pp.point + Vec2::from_int(v);
    let (image, _) = jacobian_power(map, z, pp.period);
    (image - z - Vec2::from_int(pp.translation) - shift).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{make_standard_map, LiftedTorusMap};
    use std::f64::consts::PI;

    #[test]
    fn newton_finds_closed_form_fixed_points() {
        let s = make_standard_map(2.0, 0.0);
        let o = NewtonOptions::default();
        let a = newton_periodic(&s, 1, [0, 0], Vec2::new(0.1, 0.1), &o).unwrap();
        assert!(a.point.torus_dist(Vec2::ZERO) < 1e-12);
        assert!(a.residual < 1e-10);
        let b = newton_periodic(&s, 1, [0, 0], Vec2::new(0.45, 0.05), &o).unwrap();
        assert!((b.point - Vec2::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_map_is_singular() {
        let id = LiftedTorusMap::identity();
        let r = newton_periodic(&id, 1, [0, 0], Vec2::new(0.3, 0.2), &NewtonOptions::default());
        assert!(matches!(r, Err(NewtonError::Singular { .. })));
    }

    #[test]
    fn bad_inputs() {
        let s = make_standard_map(2.0, 0.0);
        assert!(matches!(
            newton_periodic(&s, 0, [0, 0], Vec2::ZERO, &NewtonOptions::default()),
            Err(NewtonError::BadPeriod)
        ));
        let o = NewtonOptions {
            residual_tol: 0.0,
            ..NewtonOptions::default()
        };
        assert!(matches!(
            newton_periodic(&s, 1, [0, 0], Vec2::ZERO, &o),
            Err(NewtonError::BadTolerance)
        ));
    }

    #[test]
    fn classification_by_trace() {
        let s = make_standard_map(2.0, 0.0);
        let a = PeriodicPoint::at(&s, Vec2::ZERO, 1, [0, 0]);
        assert!((a.jacobian.trace() - (2.0 + 4.0 * PI)).abs() < 1e-12);
        assert_eq!(classify(&a), Classification::HyperbolicPositive);
        let b = PeriodicPoint::at(&s, Vec2::new(0.5, 0.0), 1, [0, 0]);
        assert!((b.jacobian.trace() - (2.0 - 4.0 * PI)).abs() < 1e-12);
        assert_eq!(classify(&b), Classification::HyperbolicNegative);
        let e = PeriodicPoint::at(&make_standard_map(0.05, 0.0), Vec2::new(0.5, 0.0), 1, [0, 0]);
        assert!((e.jacobian.trace() - (2.0 - 0.1 * PI)).abs() < 1e-12);
        assert_eq!(classify(&e), Classification::Elliptic);
        assert_eq!(
            classify_jacobian(&Mat2::new(1.0, 1.0, 0.0, 1.0)),
            Classification::Parabolic
        );
    }

    #[test]
    fn doubling_a_flip_saddle() {
        let s = make_standard_map(2.0, 0.0);
        let b = PeriodicPoint::at(&s, Vec2::new(0.5, 0.0), 1, [0, 0]);
        let d = b.doubled(&s);
        assert_eq!(d.period, 2);
        assert_eq!(d.translation, [0, 0]);
        assert_eq!(d.classification, Classification::HyperbolicPositive);
        assert!(d.residual < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_det() {
        match Eigenvalues::of(&Mat2::new(2.0, 0.0, 0.0, 0.5)) {
            Eigenvalues::Real { l1, l2 } => assert_eq!((l1, l2), (2.0, 0.5)),
            _ => panic!(),
        }
        match Eigenvalues::of(&Mat2::new(0.0, -1.0, 1.0, 0.0)) {
            Eigenvalues::Complex { re, im } => assert_eq!((re, im), (0.0, 1.0)),
            _ => panic!(),
        }
    }

    #[test]
    fn sweep_k2_two_orbits() {
        let s = make_standard_map(2.0, 0.0);
        let rep = sweep_periodic(&s, 1, [0, 0], &SeedGrid::unit(16), &SweepOptions::default())
            .unwrap();
        assert_eq!(rep.orbits.len(), 2);
        let mut found: Vec<Vec2> = rep.orbits.iter().map(|o| o.point.torus_reduce()).collect();
        found.sort_by(|a, b| a.x.total_cmp(&b.x));
        assert!(found[0].torus_dist(Vec2::ZERO) < 1e-10);
        assert!(found[1].torus_dist(Vec2::new(0.5, 0.0)) < 1e-10);
    }

    #[test]
    fn sweep_shear_is_non_isolated() {
        let s = make_standard_map(0.0, 0.0);
        let rep =
            sweep_periodic(&s, 1, [0, 0], &SeedGrid::unit(4), &SweepOptions::default()).unwrap();
        assert!(rep.non_isolated);
        assert!(rep.orbits.is_empty());
        assert_eq!(rep.singular_seeds, 16);
    }

    #[test]
    fn period_two_orbit_counted_once() {
        // k=2, q=2: both points of a 2-cycle appear as separate Newton
        // solutions but collapse to one orbit.
        let s = make_standard_map(2.0, 0.0);
        let rep = sweep_periodic(&s, 2, [0, 0], &SeedGrid::unit(24), &SweepOptions::default())
            .unwrap();
        for (i, a) in rep.orbits.iter().enumerate() {
            for b in rep.orbits.iter().skip(i + 1) {
                let ob = b.orbit(&s);
                assert!(a.orbit(&s).iter().all(|p| ob.iter().all(|q| p.torus_dist(*q) >= 1e-8)));
            }
        }
    }

    #[test]
    fn jittered_sweep_is_reproducible() {
        let s = make_standard_map(2.0, 0.0);
        let o = SweepOptions {
            jitter: 0.01,
            rng_seed: 42,
            ..SweepOptions::default()
        };
        let a = sweep_periodic(&s, 1, [0, 0], &SeedGrid::unit(8), &o).unwrap();
        let b = sweep_periodic(&s, 1, [0, 0], &SeedGrid::unit(8), &o).unwrap();
        assert_eq!(a, b);
    }
}
