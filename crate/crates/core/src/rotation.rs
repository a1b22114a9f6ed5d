//! Rotation-set estimation from finite Birkhoff averages of the
//! displacement `f̃ⁿ(z) − z`.
//!
//! Every estimate here is an inner approximation: the convex hull of
//! finitely many finite-horizon means. The gap between the hulls at two
//! horizons is reported as a convergence diagnostic, never as a bound.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{MapError, RotationError};
use crate::geometry::{convex_hull, hausdorff_convex, IVec2, Rect, Vec2};
use crate::map::{HomotopyMatrix, PlaneMap};
use crate::par;

/// Rectangular, half-open seed grid: `nx × ny` points at
/// `x_min + i·w/nx`, `y_min + j·h/ny`, row-major in `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedGrid {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl SeedGrid {
    pub fn new(domain: Rect, nx: usize, ny: usize) -> Self {
        Self { domain, nx, ny }
    }

    /// `n × n` grid on the fundamental domain `[0,1)²`.
    pub fn unit(n: usize) -> Self {
        Self::new(Rect::new(0.0, 1.0, 0.0, 1.0), n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: usize) -> Vec2 {
        let i = idx % self.nx;
        let j = idx / self.nx;
        Vec2::new(
            self.domain.x_min + self.domain.width() * i as f64 / self.nx as f64,
            self.domain.y_min + self.domain.height() * j as f64 / self.ny as f64,
        )
    }

    pub fn points(&self) -> Vec<Vec2> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Point `idx` written as `representative + shift` with `shift` the
    /// integer part of the domain origin. Grids that differ by a deck
    /// translation share their representatives bit for bit.
    pub fn split_point(&self, idx: usize) -> (Vec2, IVec2) {
        let sx = self.domain.x_min.floor();
        let sy = self.domain.y_min.floor();
        let i = idx % self.nx;
        let j = idx / self.nx;
        let rep = Vec2::new(
            (self.domain.x_min - sx) + self.domain.width() * i as f64 / self.nx as f64,
            (self.domain.y_min - sy) + self.domain.height() * j as f64 / self.ny as f64,
        );
        (rep, [sx as i64, sy as i64])
    }

    /// Same grid shifted by an integer deck translation.
    pub fn translated(&self, v: Vec2) -> Self {
        let d = self.domain;
        Self::new(
            Rect::new(d.x_min + v.x, d.x_max + v.x, d.y_min + v.y, d.y_max + v.y),
            self.nx,
            self.ny,
        )
    }
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self::unit(64)
    }
}

/// The two iteration budgets `n1 < n2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horizons {
    pub n1: u64,
    pub n2: u64,
}

impl Horizons {
    pub fn new(n1: u64, n2: u64) -> Self {
        Self { n1, n2 }
    }

    fn validate(&self) -> Result<(), RotationError> {
        if self.n1 == 0 || self.n1 >= self.n2 {
            return Err(RotationError::BadHorizons(self.n1, self.n2));
        }
        Ok(())
    }
}

impl Default for Horizons {
    fn default() -> Self {
        Self::new(1_000, 10_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMean {
    pub seed: Vec2,
    pub mean: Vec2,
    pub horizon: u64,
}

/// Convex inner estimate of the rotation set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationPolygon {
    /// Hull of the horizon-`n2` means, counterclockwise.
    pub hull: Vec<Vec2>,
    /// Hull of the horizon-`n1` means.
    pub hull_n1: Vec<Vec2>,
    /// Means at both horizons, seed-major.
    pub sample_means: Vec<SampleMean>,
    pub horizons: Horizons,
    pub hausdorff_gap: f64,
}

/// Interval estimate of the vertical rotation set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_n1: f64,
    pub hi_n1: f64,
    pub sample_means: Vec<SampleMean>,
    pub horizons: Horizons,
    pub hausdorff_gap: f64,
}

impl RotationInterval {
    /// Signed distance of `v` to the interval ends; positive when strictly
    /// inside. Heuristic only.
    pub fn interior_margin(&self, v: f64) -> f64 {
        (v - self.lo).min(self.hi - v)
    }
}

/// Pointwise rotation vector: a plane vector for identity-class maps, the
/// vertical rotation number for Dehn-twist maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PointRotation {
    Vector(Vec2),
    Vertical(f64),
}

/// `(f̃ⁿ(z) − z)/n`.
pub fn birkhoff_mean<M: PlaneMap + ?Sized>(map: &M, z: Vec2, n: u64) -> Result<Vec2, RotationError> {
    if n == 0 {
        return Err(RotationError::BadHorizons(0, 0));
    }
    let end = crate::map::forward_n(map, z, n)?;
    Ok((end - z).scale(1.0 / n as f64))
}

/// Means at `n1` and `n2` along one orbit.
fn two_horizon_means<M: PlaneMap + ?Sized>(
    map: &M,
    z: Vec2,
    h: Horizons,
) -> Result<(Vec2, Vec2), MapError> {
    let mut cur = z;
    let mut at_n1 = z;
    for step in 1..=h.n2 {
        cur = map.forward(cur);
        if !cur.is_finite() || !map.in_bounds(cur) {
            return Err(MapError::Escape {
                step,
                partial: vec![z],
            });
        }
        if step == h.n1 {
            at_n1 = cur;
        }
    }
    Ok((
        (at_n1 - z).scale(1.0 / h.n1 as f64),
        (cur - z).scale(1.0 / h.n2 as f64),
    ))
}

fn sweep_means<M: PlaneMap + ?Sized>(
    map: &M,
    grid: &SeedGrid,
    h: Horizons,
) -> Result<Vec<(Vec2, Vec2, Vec2)>, RotationError> {
    if grid.is_empty() {
        return Err(RotationError::EmptyGrid);
    }
    h.validate()?;
    // Means are deck invariant (up to the shear term of a Dehn twist), so
    // each seed is iterated from its base-cell representative.
    let homotopy = map.homotopy();
    let results = par::map_range(grid.len(), |i| {
        let (rep, shift) = grid.split_point(i);
        let (start, offset) = match homotopy {
            Some(HomotopyMatrix::Identity) => (rep, Vec2::ZERO),
            Some(HomotopyMatrix::DehnTwist { k }) => (rep, Vec2::new((k * shift[1]) as f64, 0.0)),
            None => (grid.point(i), Vec2::ZERO),
        };
        two_horizon_means(map, start, h).map(|(a, b)| (grid.point(i), a + offset, b + offset))
    });
    results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(RotationError::from)
}

fn collect_samples(means: &[(Vec2, Vec2, Vec2)], h: Horizons) -> Vec<SampleMean> {
    means
        .iter()
        .flat_map(|&(seed, m1, m2)| {
            [
                SampleMean {
                    seed,
                    mean: m1,
                    horizon: h.n1,
                },
                SampleMean {
                    seed,
                    mean: m2,
                    horizon: h.n2,
                },
            ]
        })
        .collect()
}

/// Hull of the horizon-`n2` Birkhoff means over the grid, compared with the
/// horizon-`n1` hull.
pub fn estimate_rotation_set<M: PlaneMap + ?Sized>(
    map: &M,
    grid: &SeedGrid,
    horizons: Horizons,
) -> Result<RotationPolygon, RotationError> {
    if map.homotopy() != Some(HomotopyMatrix::Identity) {
        return Err(RotationError::WrongHomotopy(
            "rotation set needs a map homotopic to the identity",
        ));
    }
    let means = sweep_means(map, grid, horizons)?;
    let m1: Vec<Vec2> = means.iter().map(|m| m.1).collect();
    let m2: Vec<Vec2> = means.iter().map(|m| m.2).collect();
    let hull = collapse_roundoff(convex_hull(&m2));
    let hull_n1 = collapse_roundoff(convex_hull(&m1));
    let hausdorff_gap = hausdorff_convex(&hull, &hull_n1);
    Ok(RotationPolygon {
        hull,
        hull_n1,
        sample_means: collect_samples(&means, horizons),
        horizons,
        hausdorff_gap,
    })
}

/// A hull whose extent is at the level of roundoff in the means is a point.
fn collapse_roundoff(hull: Vec<Vec2>) -> Vec<Vec2> {
    let Some(b) = Rect::bounding(&hull) else {
        return hull;
    };
    let c = Vec2::new(0.5 * (b.x_min + b.x_max), 0.5 * (b.y_min + b.y_max));
    if b.width().max(b.height()) <= 1e-12 * c.norm().max(1.0) {
        vec![hull[0]]
    } else {
        hull
    }
}

/// `[min, max]` of the vertical means at horizon `n2`.
pub fn estimate_vertical_rotation_set<M: PlaneMap + ?Sized>(
    map: &M,
    grid: &SeedGrid,
    horizons: Horizons,
) -> Result<RotationInterval, RotationError> {
    if !map.homotopy().is_some_and(|h| h.is_dehn()) {
        return Err(RotationError::WrongHomotopy(
            "vertical rotation set needs a Dehn-twist map",
        ));
    }
    let means = sweep_means(map, grid, horizons)?;
    let span = |sel: fn(&(Vec2, Vec2, Vec2)) -> f64| {
        means.iter().map(sel).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
    };
    let (lo, hi) = span(|m| m.2.y);
    let (lo_n1, hi_n1) = span(|m| m.1.y);
    Ok(RotationInterval {
        lo,
        hi,
        lo_n1,
        hi_n1,
        sample_means: collect_samples(&means, horizons),
        horizons,
        hausdorff_gap: (lo - lo_n1).abs().max((hi - hi_n1).abs()),
    })
}

/// Rotation vector of a single point when the means at both horizons agree
/// within `tol`; `None` means "not converged".
pub fn rotation_vector_of_point<M: PlaneMap + ?Sized>(
    map: &M,
    z: Vec2,
    horizons: Horizons,
    tol: f64,
) -> Result<Option<PointRotation>, RotationError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(RotationError::BadTolerance);
    }
    horizons.validate()?;
    let (m1, m2) = match two_horizon_means(map, z, horizons) {
        Ok(m) => m,
        Err(MapError::Escape { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let dehn = map.homotopy().is_some_and(|h| h.is_dehn());
    if dehn {
        Ok(((m1.y - m2.y).abs() < tol).then_some(PointRotation::Vertical(m2.y)))
    } else {
        Ok(((m1 - m2).norm() < tol).then_some(PointRotation::Vector(m2)))
    }
}

/// Mean one-step displacement over the samples: the rotation vector of the
/// empirical measure carried by them.
pub fn measure_rotation_vector<M: PlaneMap + ?Sized>(
    map: &M,
    samples: &[Vec2],
) -> Result<Vec2, RotationError> {
    if samples.is_empty() {
        return Err(RotationError::NoSamples);
    }
    let (sx, sy) = par::sum2_range(samples.len(), |i| {
        let z = samples[i];
        let d = map.forward(z) - z;
        (d.x, d.y)
    });
    let n = samples.len() as f64;
    Ok(Vec2::new(sx / n, sy / n))
}

/// `seed_x,seed_y,mean_x,mean_y,horizon` rows.
pub fn samples_csv(samples: &[SampleMean]) -> String {
    let mut out = String::from("seed_x,seed_y,mean_x,mean_y,horizon\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.seed.x, s.seed.y, s.mean.x, s.mean.y, s.horizon
        );
    }
    out
}
