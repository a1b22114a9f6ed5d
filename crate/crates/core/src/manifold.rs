//! Stable and unstable manifold branches of hyperbolic periodic points,
//! grown as refined polylines.
//!
//! A branch is the forward orbit of one fundamental domain under the
//! periodic map `g̃(z) = f̃^q(z) − (p,r)` (or `g̃⁻¹` for stable branches).
//! The fundamental domain is the straight segment from
//! `a = Q̃ + (δ/μ)·e` to `g̃(a)`, parametrized by `t ∈ [0,1]`. Every vertex
//! of generation `j` is `g̃^j` of a point of that segment, so refinement
//! inserts `g̃^j(seed(t_mid))` between neighbours that are too far apart.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::ManifoldError;
use crate::geometry::{IVec2, Vec2};
use crate::map::{HomotopyMatrix, PlaneMap};
use crate::par;
use crate::periodic::{Classification, Eigenvalues, PeriodicPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenFrame {
    pub unstable: Vec2,
    pub stable: Vec2,
    /// Expanding eigenvalue (> 1).
    pub lambda_u: f64,
    /// Contracting eigenvalue (in (0, 1)).
    pub lambda_s: f64,
}

fn orient(v: Vec2) -> Vec2 {
    let v = v.normalized();
    if v.y.abs() > 1e-12 {
        if v.y < 0.0 {
            -v
        } else {
            v
        }
    } else if v.x < 0.0 {
        -v
    } else {
        v
    }
}

fn eigenvector(j: &crate::geometry::Mat2, lambda: f64) -> Vec2 {
    let [[a, b], [c, d]] = j.m;
    let v1 = Vec2::new(b, lambda - a);
    let v2 = Vec2::new(lambda - d, c);
    if v1.norm() >= v2.norm() {
        v1
    } else {
        v2
    }
}

/// Unit eigenvectors of `Df̃^q`. The `+` branch points into the upper half
/// plane, or toward positive `x` when the direction is horizontal.
pub fn eigen_frame(pp: &PeriodicPoint) -> Result<EigenFrame, ManifoldError> {
    if pp.classification != Classification::HyperbolicPositive {
        return Err(ManifoldError::NotHyperbolicPositive(format!(
            "{:?}",
            pp.classification
        )));
    }
    let (lu, ls) = match pp.eigenvalues {
        Eigenvalues::Real { l1, l2 } => (l1, l2),
        Eigenvalues::Complex { .. } => {
            return Err(ManifoldError::NotHyperbolicPositive("complex".into()))
        }
    };
    Ok(EigenFrame {
        unstable: orient(eigenvector(&pp.jacobian, lu)),
        stable: orient(eigenvector(&pp.jacobian, ls)),
        lambda_u: lu,
        lambda_s: ls,
    })
}

/// `g̃` and `g̃⁻¹` for a periodic point with period `q`, translation `(p,r)`.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicDynamics<'a, M: PlaneMap + ?Sized> {
    map: &'a M,
    period: u32,
    translation: Vec2,
}

impl<'a, M: PlaneMap + ?Sized> PeriodicDynamics<'a, M> {
    pub fn new(map: &'a M, pp: &PeriodicPoint) -> Self {
        Self {
            map,
            period: pp.period,
            translation: Vec2::from_int(pp.translation),
        }
    }

    pub fn forward(&self, z: Vec2) -> Vec2 {
        let mut w = z;
        for _ in 0..self.period {
            w = self.map.forward(w);
        }
        w - self.translation
    }

    pub fn backward(&self, z: Vec2) -> Vec2 {
        let mut w = z + self.translation;
        for _ in 0..self.period {
            w = self.map.backward(w);
        }
        w
    }

    /// The step that expands along `kind`: `g̃` for unstable, `g̃⁻¹` for stable.
    pub fn expanding(&self, kind: ManifoldKind, z: Vec2) -> Vec2 {
        match kind {
            ManifoldKind::Unstable => self.forward(z),
            ManifoldKind::Stable => self.backward(z),
        }
    }

    /// The step that contracts along `kind`.
    pub fn contracting(&self, kind: ManifoldKind, z: Vec2) -> Vec2 {
        match kind {
            ManifoldKind::Unstable => self.backward(z),
            ManifoldKind::Stable => self.forward(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthOptions {
    pub arclength_budget: f64,
    pub h_max: f64,
    pub delta_seed: f64,
    pub vertex_cap: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            arclength_budget: 200.0,
            h_max: 1e-3,
            delta_seed: 1e-6,
            vertex_cap: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GrowthLog {
    /// Fundamental-domain generations produced after the seed segment.
    pub generations: u32,
    /// Vertices obtained by one application of the periodic map.
    pub pushforwards: u64,
    /// Midpoints inserted by refinement.
    pub insertions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldCurve {
    pub owner: PeriodicPoint,
    pub kind: ManifoldKind,
    pub branch: Branch,
    pub vertices: Vec<Vec2>,
    pub arclength: f64,
    pub growth_log: GrowthLog,
}

impl ManifoldCurve {
    pub fn translated(&self, v: IVec2) -> Vec<Vec2> {
        let d = Vec2::from_int(v);
        self.vertices.iter().map(|p| *p + d).collect()
    }

    pub fn max_spacing(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| w[0].dist(w[1]))
            .fold(0.0, f64::max)
    }

    /// `x,y` rows.
    pub fn vertices_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for v in &self.vertices {
            let _ = writeln!(out, "{},{}", v.x, v.y);
        }
        out
    }
}

fn polyline_length(pts: &[Vec2]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Grow one branch of `W^u` or `W^s` up to `arclength_budget`.
///
/// For deck-equivariant maps the curve is grown from the lift of the owner
/// nearest the origin and shifted back, so integer translates of a point
/// give translated curves up to one rounding per coordinate.
pub fn grow_manifold<M: PlaneMap + ?Sized>(
    map: &M,
    pp: &PeriodicPoint,
    kind: ManifoldKind,
    branch: Branch,
    opts: &GrowthOptions,
) -> Result<ManifoldCurve, ManifoldError> {
    let w = [pp.point.x.round() as i64, pp.point.y.round() as i64];
    if map.homotopy().is_none() || w == [0, 0] || !pp.point.is_finite() {
        return grow_from(map, pp, kind, branch, opts);
    }
    let base = pp.translated(map, [-w[0], -w[1]]);
    let mut curve = grow_from(map, &base, kind, branch, opts)?;
    curve.vertices = curve.translated(w);
    curve.owner = pp.clone();
    Ok(curve)
}

fn grow_from<M: PlaneMap + ?Sized>(
    map: &M,
    pp: &PeriodicPoint,
    kind: ManifoldKind,
    branch: Branch,
    opts: &GrowthOptions,
) -> Result<ManifoldCurve, ManifoldError> {
    let frame = eigen_frame(pp)?;
    for (name, v) in [
        ("arclength_budget", opts.arclength_budget),
        ("h_max", opts.h_max),
        ("delta_seed", opts.delta_seed),
    ] {
        if v.is_nan() || v <= 0.0 {
            return Err(ManifoldError::BadParameter(name));
        }
    }
    let dynamics = PeriodicDynamics::new(map, pp);
    let (dir, mu) = match kind {
        ManifoldKind::Unstable => (frame.unstable, frame.lambda_u),
        ManifoldKind::Stable => (frame.stable, 1.0 / frame.lambda_s),
    };
    let e = dir.scale(branch.sign());
    let a = pp.point + e.scale(opts.delta_seed / mu);
    let b = dynamics.expanding(kind, a);
    if !b.is_finite() {
        return Err(ManifoldError::NonFinite);
    }
    let seed = |t: f64| if t >= 1.0 { b } else { a + (b - a).scale(t) };
    let image = |t: f64, generation: u32| {
        let mut z = seed(t);
        for _ in 0..generation {
            z = dynamics.expanding(kind, z);
        }
        z
    };

    let mut log = GrowthLog::default();
    // Generation 0: the seed segment, refined to h_max.
    let mut current: Vec<(f64, Vec2)> = refine_pair((0.0, a), (1.0, b), 0, opts.h_max, &image);
    log.insertions += current.len() as u64 - 2;
    let first_len = polyline_length(&current.iter().map(|c| c.1).collect::<Vec<_>>());
    if first_len >= opts.arclength_budget {
        return Err(ManifoldError::BudgetInsideFirstDomain {
            budget: opts.arclength_budget,
            first_domain: first_len,
        });
    }
    let mut vertices: Vec<Vec2> = current.iter().map(|c| c.1).collect();
    let mut arclength = first_len;

    let mut generation = 0u32;
    'grow: loop {
        generation += 1;
        let pushed: Vec<(f64, Vec2)> = par::map_slice(&current, |&(t, z)| {
            (t, dynamics.expanding(kind, z))
        });
        log.pushforwards += pushed.len() as u64;
        if pushed.iter().any(|p| !p.1.is_finite()) {
            return Err(ManifoldError::NonFinite);
        }
        let pieces: Vec<Vec<(f64, Vec2)>> = par::map_range(pushed.len() - 1, |i| {
            refine_pair(pushed[i], pushed[i + 1], generation, opts.h_max, &image)
        });
        let mut next: Vec<(f64, Vec2)> = Vec::with_capacity(pushed.len());
        next.push(pushed[0]);
        for piece in pieces {
            log.insertions += piece.len() as u64 - 2;
            next.extend_from_slice(&piece[1..]);
        }
        if next.len() + vertices.len() > opts.vertex_cap {
            return Err(ManifoldError::VertexCap {
                cap: opts.vertex_cap,
            });
        }
        if next.iter().any(|p| !p.1.is_finite()) {
            return Err(ManifoldError::NonFinite);
        }
        // next[0] coincides with the last vertex of the previous generation.
        for w in next.windows(2) {
            let step = w[0].1.dist(w[1].1);
            vertices.push(w[1].1);
            arclength += step;
            if arclength >= opts.arclength_budget {
                break 'grow;
            }
        }
        current = next;
    }
    log.generations = generation;

    Ok(ManifoldCurve {
        owner: pp.clone(),
        kind,
        branch,
        vertices,
        arclength,
        growth_log: log,
    })
}

/// Bisect `[lo, hi]` in the seed parameter until consecutive images are at
/// most `h_max` apart. Both endpoints are included in the output.
fn refine_pair<F>(
    lo: (f64, Vec2),
    hi: (f64, Vec2),
    generation: u32,
    h_max: f64,
    image: &F,
) -> Vec<(f64, Vec2)>
where
    F: Fn(f64, u32) -> Vec2,
{
    let mut out = vec![lo];
    let mut stack = vec![hi];
    let mut left = lo;
    while let Some(right) = stack.pop() {
        let tm = 0.5 * (left.0 + right.0);
        if left.1.dist(right.1) <= h_max || tm <= left.0 || tm >= right.0 {
            out.push(right);
            left = right;
        } else {
            stack.push(right);
            stack.push((tm, image(tm, generation)));
        }
    }
    out
}

/// Log-linear fit of pullback distances to the owner point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullbackFit {
    /// Mean of `ln(d_{m+1}/d_m)` over consecutive pullbacks inside the band.
    pub slope: f64,
    /// `-ln λ` for the expanding eigenvalue.
    pub expected_slope: f64,
    /// Smallest `C` with `d_m ≤ C·λ^{-m}` over the sampled vertices.
    pub constant: f64,
    pub pairs: usize,
    pub vertices_sampled: usize,
}

impl PullbackFit {
    pub fn relative_error(&self) -> f64 {
        ((self.slope - self.expected_slope) / self.expected_slope).abs()
    }
}

/// Pull sampled vertices back toward the owner point with the contracting
/// step and fit the decay rate of the distance. Only distances within
/// `band = (lo, hi)` enter the slope, keeping the fit inside the linear
/// regime and above the round-off floor.
pub fn pullback_fit<M: PlaneMap + ?Sized>(
    map: &M,
    curve: &ManifoldCurve,
    stride: usize,
    band: (f64, f64),
    max_steps: usize,
) -> Result<PullbackFit, ManifoldError> {
    let frame = eigen_frame(&curve.owner)?;
    let mu = match curve.kind {
        ManifoldKind::Unstable => frame.lambda_u,
        ManifoldKind::Stable => 1.0 / frame.lambda_s,
    };
    let dynamics = PeriodicDynamics::new(map, &curve.owner);
    let q = curve.owner.point;
    let idx: Vec<usize> = (0..curve.vertices.len()).step_by(stride.max(1)).collect();
    let per_vertex = par::map_slice(&idx, |&i| {
        let mut z = curve.vertices[i];
        let mut d = z.dist(q);
        let mut sum = 0.0;
        let mut pairs = 0usize;
        let mut c: f64 = d;
        let mut scale = 1.0;
        for _ in 0..max_steps {
            if d < band.0 {
                break;
            }
            let z2 = dynamics.contracting(curve.kind, z);
            let d2 = z2.dist(q);
            scale *= mu;
            if d <= band.1 && d2 >= band.0 && d2 > 0.0 {
                sum += (d2 / d).ln();
                pairs += 1;
            }
            if d2 >= band.0 {
                c = c.max(d2 * scale);
            }
            z = z2;
            d = d2;
        }
        (sum, pairs, c)
    });
    let (sum, pairs, constant) = per_vertex
        .iter()
        .fold((0.0, 0usize, 0.0_f64), |acc, v| (acc.0 + v.0, acc.1 + v.1, acc.2.max(v.2)));
    Ok(PullbackFit {
        slope: if pairs > 0 { sum / pairs as f64 } else { f64::NAN },
        expected_slope: -mu.ln(),
        constant,
        pairs,
        vertices_sampled: idx.len(),
    })
}

/// Periodic point of the inverse lift at the same location: `f̃^{-q}(Q̃) =
/// Q̃ − A^{-q}(p,r)`.
pub fn inverse_owner<M: PlaneMap + ?Sized>(inverse: &M, pp: &PeriodicPoint) -> PeriodicPoint {
    // `inverse.homotopy()` is already A⁻¹.
    let h = inverse.homotopy().unwrap_or(HomotopyMatrix::Identity);
    let t = h.pow(pp.period).apply(pp.translation);
    PeriodicPoint::at(inverse, pp.point, pp.period, [-t[0], -t[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Mat2;
    use crate::map::{make_standard_map, LinearSaddle};

    fn fake_point(j: Mat2) -> PeriodicPoint {
        PeriodicPoint {
            point: Vec2::ZERO,
            period: 1,
            translation: [0, 0],
            jacobian: j,
            eigenvalues: Eigenvalues::of(&j),
            classification: crate::periodic::classify_jacobian(&j),
            residual: 0.0,
        }
    }

    #[test]
    fn frame_of_diagonal_jacobian() {
        let f = eigen_frame(&fake_point(Mat2::new(2.0, 0.0, 0.0, 0.5))).unwrap();
        assert_eq!(f.unstable, Vec2::new(1.0, 0.0));
        assert_eq!(f.stable, Vec2::new(0.0, 1.0));
        assert_eq!((f.lambda_u, f.lambda_s), (2.0, 0.5));
    }

    #[test]
    fn frame_of_standard_saddle_has_small_residual() {
        let s = make_standard_map(2.0, 0.0);
        let pp = PeriodicPoint::at(&s, Vec2::ZERO, 1, [0, 0]);
        let f = eigen_frame(&pp).unwrap();
        let j = pp.jacobian;
        assert!((j.apply(f.unstable) - f.unstable.scale(f.lambda_u)).norm() < 1e-10);
        assert!((j.apply(f.stable) - f.stable.scale(f.lambda_s)).norm() < 1e-10);
        assert!(f.unstable.y > 0.0 && f.stable.y > 0.0);
    }

    #[test]
    fn frame_rejects_flip_saddle() {
        let s = make_standard_map(2.0, 0.0);
        let pp = PeriodicPoint::at(&s, Vec2::new(0.5, 0.0), 1, [0, 0]);
        assert!(matches!(
            eigen_frame(&pp),
            Err(ManifoldError::NotHyperbolicPositive(_))
        ));
    }

    #[test]
    fn linear_saddle_manifold_is_the_axis() {
        let m = LinearSaddle::new(2.0);
        let pp = PeriodicPoint::at(&m, Vec2::ZERO, 1, [0, 0]);
        let opts = GrowthOptions {
            arclength_budget: 5.0,
            h_max: 0.01,
            ..GrowthOptions::default()
        };
        let c = grow_manifold(&m, &pp, ManifoldKind::Unstable, Branch::Plus, &opts).unwrap();
        assert!(c.vertices.iter().all(|v| v.y.abs() < 1e-12 && v.x > 0.0));
        assert!(c.vertices.windows(2).all(|w| w[1].x > w[0].x));
        assert!(c.max_spacing() <= 0.01 + 1e-15);
        assert!(c.arclength >= 5.0);
        assert!(c.vertices[0].dist(pp.point) <= opts.delta_seed);
    }

    #[test]
    fn budget_inside_first_domain() {
        let m = LinearSaddle::new(2.0);
        let pp = PeriodicPoint::at(&m, Vec2::ZERO, 1, [0, 0]);
        let opts = GrowthOptions {
            arclength_budget: 1e-7,
            ..GrowthOptions::default()
        };
        assert!(matches!(
            grow_manifold(&m, &pp, ManifoldKind::Unstable, Branch::Plus, &opts),
            Err(ManifoldError::BudgetInsideFirstDomain { .. })
        ));
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let s = make_standard_map(2.0, 0.0);
        let pp = PeriodicPoint::at(&s, Vec2::ZERO, 1, [0, 0]);
        let opts = GrowthOptions {
            arclength_budget: 50.0,
            vertex_cap: 1000,
            ..GrowthOptions::default()
        };
        assert!(matches!(
            grow_manifold(&s, &pp, ManifoldKind::Unstable, Branch::Plus, &opts),
            Err(ManifoldError::VertexCap { cap: 1000 })
        ));
    }

    #[test]
    fn bad_parameters() {
        let m = LinearSaddle::new(2.0);
        let pp = PeriodicPoint::at(&m, Vec2::ZERO, 1, [0, 0]);
        let opts = GrowthOptions {
            h_max: 0.0,
            ..GrowthOptions::default()
        };
        assert!(matches!(
            grow_manifold(&m, &pp, ManifoldKind::Stable, Branch::Minus, &opts),
            Err(ManifoldError::BadParameter("h_max"))
        ));
    }
}
