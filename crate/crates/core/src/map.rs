//! Lifted torus maps: explicit plane maps with homotopy data, closed-form
//! inverses and Jacobians.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::MapError;
use crate::geometry::{IVec2, Mat2, Vec2};

/// Default coordinate bound past which an orbit counts as escaped.
pub const DEFAULT_ESCAPE_BOUND: f64 = 1e9;

/// Default cap on `|n|` for [`iterate`].
pub const DEFAULT_ITERATION_BUDGET: u64 = 10_000_000;

/// Homotopy class of a lift: the identity or a Dehn twist `[[1,k],[0,1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomotopyMatrix {
    Identity,
    DehnTwist { k: i64 },
}

impl HomotopyMatrix {
    /// Validate a raw integer matrix against the two admitted shapes.
    pub fn from_entries(m: [[i64; 2]; 2]) -> Result<Self, MapError> {
        match m {
            [[1, 0], [0, 1]] => Ok(Self::Identity),
            [[1, k], [0, 1]] if k != 0 => Ok(Self::DehnTwist { k }),
            other => Err(MapError::InvalidHomotopy(other)),
        }
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        match *self {
            Self::Identity => [[1, 0], [0, 1]],
            Self::DehnTwist { k } => [[1, k], [0, 1]],
        }
    }

    pub fn apply(&self, v: IVec2) -> IVec2 {
        match *self {
            Self::Identity => v,
            Self::DehnTwist { k } => [v[0] + k * v[1], v[1]],
        }
    }

    /// `A^q`; powers of a Dehn twist stay in the same family.
    pub fn pow(&self, q: u32) -> Self {
        match *self {
            Self::Identity => Self::Identity,
            Self::DehnTwist { .. } if q == 0 => Self::Identity,
            Self::DehnTwist { k } => Self::DehnTwist { k: k * q as i64 },
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Self::Identity => Self::Identity,
            Self::DehnTwist { k } => Self::DehnTwist { k: -k },
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    pub fn is_dehn(&self) -> bool {
        matches!(self, Self::DehnTwist { .. })
    }
}

/// Anything that can be iterated in the plane with a closed-form inverse.
///
/// Every [`LiftedTorusMap`] is a `PlaneMap`; a few test maps (the linear
/// saddle) are plane maps without a torus quotient and report no homotopy.
pub trait PlaneMap: Send + Sync {
    fn forward(&self, z: Vec2) -> Vec2;
    fn backward(&self, z: Vec2) -> Vec2;
    fn jacobian(&self, z: Vec2) -> Mat2;
    fn homotopy(&self) -> Option<HomotopyMatrix>;
    fn name(&self) -> &str;

    fn escape_bound(&self) -> f64 {
        DEFAULT_ESCAPE_BOUND
    }

    /// True when `z` is finite and inside the escape bound.
    fn in_bounds(&self, z: Vec2) -> bool {
        let b = self.escape_bound();
        z.x.abs() <= b && z.y.abs() <= b
    }
}

/// `x - round(x)`: exact, odd in `x`, and keeps `sin(2πx)` accurate far
/// from the origin.
fn phase(x: f64) -> f64 {
    x - x.round()
}

fn sin_turn(x: f64) -> f64 {
    (TAU * phase(x)).sin()
}

fn cos_turn(x: f64) -> f64 {
    (TAU * phase(x)).cos()
}

/// Closed-form families shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapFamily {
    /// `(x, y) ↦ (x + y + k sin 2πx, y + k sin 2πx + ε)`.
    Standard { k: f64, epsilon: f64 },
    /// `z ↦ z + (dx, dy)`.
    Translation { dx: f64, dy: f64 },
    /// Composition of a horizontal and a vertical shear:
    /// `x' = x + a cos 2πy`, `y' = y + b cos 2πx'`.
    DoubleShear { a: f64, b: f64 },
}

impl MapFamily {
    fn forward(&self, z: Vec2) -> Vec2 {
        match *self {
            MapFamily::Standard { k, epsilon } => {
                let s = k * sin_turn(z.x);
                Vec2::new(z.x + z.y + s, z.y + s + epsilon)
            }
            MapFamily::Translation { dx, dy } => Vec2::new(z.x + dx, z.y + dy),
            MapFamily::DoubleShear { a, b } => {
                let x = z.x + a * cos_turn(z.y);
                Vec2::new(x, z.y + b * cos_turn(x))
            }
        }
    }

    fn backward(&self, z: Vec2) -> Vec2 {
        match *self {
            MapFamily::Standard { k, epsilon } => {
                let x = z.x - z.y + epsilon;
                Vec2::new(x, z.y - epsilon - k * sin_turn(x))
            }
            MapFamily::Translation { dx, dy } => Vec2::new(z.x - dx, z.y - dy),
            MapFamily::DoubleShear { a, b } => {
                let y = z.y - b * cos_turn(z.x);
                Vec2::new(z.x - a * cos_turn(y), y)
            }
        }
    }

    fn jacobian(&self, z: Vec2) -> Mat2 {
        match *self {
            MapFamily::Standard { k, .. } => {
                let c = TAU * k * cos_turn(z.x);
                Mat2::new(1.0 + c, 1.0, c, 1.0)
            }
            MapFamily::Translation { .. } => Mat2::IDENTITY,
            MapFamily::DoubleShear { a, b } => {
                let da = -TAU * a * sin_turn(z.y);
                let x = z.x + a * cos_turn(z.y);
                let db = -TAU * b * sin_turn(x);
                Mat2::new(1.0, da, db, 1.0 + db * da)
            }
        }
    }

    fn homotopy(&self) -> HomotopyMatrix {
        match self {
            MapFamily::Standard { .. } => HomotopyMatrix::DehnTwist { k: 1 },
            MapFamily::Translation { .. } | MapFamily::DoubleShear { .. } => {
                HomotopyMatrix::Identity
            }
        }
    }

    /// Conjugate by the point reflection `z ↦ -z`.
    fn reflected(&self) -> MapFamily {
        match *self {
            MapFamily::Standard { k, epsilon } => MapFamily::Standard {
                k,
                epsilon: -epsilon,
            },
            MapFamily::Translation { dx, dy } => MapFamily::Translation { dx: -dx, dy: -dy },
            MapFamily::DoubleShear { a, b } => MapFamily::DoubleShear { a: -a, b: -b },
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            MapFamily::Standard { k, epsilon } => vec![k, epsilon],
            MapFamily::Translation { dx, dy } => vec![dx, dy],
            MapFamily::DoubleShear { a, b } => vec![a, b],
        }
    }
}

/// A lift `f̃: R² → R²` of a torus diffeomorphism, given by closed-form
/// rules. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedTorusMap {
    name: String,
    family: MapFamily,
    /// Forward and backward rules swapped.
    inverted: bool,
    escape_bound: f64,
}

impl LiftedTorusMap {
    fn from_family(name: impl Into<String>, family: MapFamily) -> Self {
        Self {
            name: name.into(),
            family,
            inverted: false,
            escape_bound: DEFAULT_ESCAPE_BOUND,
        }
    }

    pub fn standard(k: f64, epsilon: f64) -> Self {
        Self::from_family("standard", MapFamily::Standard { k, epsilon })
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Self::from_family("translation", MapFamily::Translation { dx, dy })
    }

    pub fn identity() -> Self {
        Self::from_family("identity", MapFamily::Translation { dx: 0.0, dy: 0.0 })
    }

    pub fn double_shear(a: f64, b: f64) -> Self {
        Self::from_family("double_shear", MapFamily::DoubleShear { a, b })
    }

    pub fn with_escape_bound(mut self, bound: f64) -> Self {
        self.escape_bound = bound;
        self
    }

    pub fn family(&self) -> &MapFamily {
        &self.family
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// Parameter vector of the underlying family.
    pub fn params(&self) -> Vec<f64> {
        self.family.params()
    }

    pub fn homotopy_matrix(&self) -> HomotopyMatrix {
        let h = self.family.homotopy();
        if self.inverted {
            h.inverse()
        } else {
            h
        }
    }

    /// The lift `f̃⁻¹`, with forward and backward rules exchanged.
    pub fn inverse_map(&self) -> Self {
        let name = match self.name.strip_prefix("inverse(") {
            Some(inner) if self.inverted => inner.trim_end_matches(')').to_string(),
            _ => format!("inverse({})", self.name),
        };
        Self {
            name,
            family: self.family,
            inverted: !self.inverted,
            escape_bound: self.escape_bound,
        }
    }

    /// Conjugate `z ↦ -f̃(-z)`. Swaps the roles of the south and north
    /// confinement sets.
    pub fn reflected(&self) -> Self {
        Self {
            name: format!("reflected({})", self.name),
            family: self.family.reflected(),
            inverted: self.inverted,
            escape_bound: self.escape_bound,
        }
    }
}

impl PlaneMap for LiftedTorusMap {
    fn forward(&self, z: Vec2) -> Vec2 {
        if self.inverted {
            self.family.backward(z)
        } else {
            self.family.forward(z)
        }
    }

    fn backward(&self, z: Vec2) -> Vec2 {
        if self.inverted {
            self.family.forward(z)
        } else {
            self.family.backward(z)
        }
    }

    fn jacobian(&self, z: Vec2) -> Mat2 {
        if self.inverted {
            let j = self.family.jacobian(self.family.backward(z));
            // det = 1, so the inverse is the adjugate.
            Mat2::new(j.m[1][1], -j.m[0][1], -j.m[1][0], j.m[0][0])
        } else {
            self.family.jacobian(z)
        }
    }

    fn homotopy(&self) -> Option<HomotopyMatrix> {
        Some(self.homotopy_matrix())
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn escape_bound(&self) -> f64 {
        self.escape_bound
    }
}

/// Linear saddle `(x, y) ↦ (λx, y/λ)`. A plane map only: it does not
/// commute with integer translations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSaddle {
    pub lambda: f64,
}

impl LinearSaddle {
    pub fn new(lambda: f64) -> Self {
        Self { lambda }
    }
}

impl PlaneMap for LinearSaddle {
    fn forward(&self, z: Vec2) -> Vec2 {
        Vec2::new(self.lambda * z.x, z.y / self.lambda)
    }

    fn backward(&self, z: Vec2) -> Vec2 {
        Vec2::new(z.x / self.lambda, self.lambda * z.y)
    }

    fn jacobian(&self, _z: Vec2) -> Mat2 {
        Mat2::new(self.lambda, 0.0, 0.0, 1.0 / self.lambda)
    }

    fn homotopy(&self) -> Option<HomotopyMatrix> {
        None
    }

    fn name(&self) -> &str {
        "linear_saddle"
    }
}

/// Standard map family member `S̃` with parameters `k`, `ε`.
pub fn make_standard_map(k: f64, epsilon: f64) -> LiftedTorusMap {
    LiftedTorusMap::standard(k, epsilon)
}

/// One forward step, rejecting non-finite or escaped images.
pub fn eval_lift<M: PlaneMap + ?Sized>(map: &M, z: Vec2) -> Result<Vec2, MapError> {
    let w = map.forward(z);
    if !w.is_finite() {
        return Err(MapError::NonFinite { point: z });
    }
    Ok(w)
}

/// Orbit segment `z, f̃(z), …, f̃ⁿ(z)`; the inverse rule is used for `n < 0`.
///
/// Escape past the map's coordinate bound aborts with the partial orbit.
pub fn iterate<M: PlaneMap + ?Sized>(map: &M, z: Vec2, n: i64) -> Result<Vec<Vec2>, MapError> {
    iterate_with_budget(map, z, n, DEFAULT_ITERATION_BUDGET)
}

pub fn iterate_with_budget<M: PlaneMap + ?Sized>(
    map: &M,
    z: Vec2,
    n: i64,
    budget: u64,
) -> Result<Vec<Vec2>, MapError> {
    if n.unsigned_abs() > budget {
        return Err(MapError::BudgetExceeded { requested: n, budget });
    }
    let mut orbit = Vec::with_capacity(n.unsigned_abs() as usize + 1);
    orbit.push(z);
    let mut cur = z;
    for step in 1..=n.unsigned_abs() {
        cur = if n > 0 {
            map.forward(cur)
        } else {
            map.backward(cur)
        };
        if !cur.is_finite() || !map.in_bounds(cur) {
            return Err(MapError::Escape {
                step,
                partial: orbit,
            });
        }
        orbit.push(cur);
    }
    Ok(orbit)
}

/// `f̃ⁿ(z)` for `n ≥ 0` without storing the orbit.
pub fn forward_n<M: PlaneMap + ?Sized>(map: &M, z: Vec2, n: u64) -> Result<Vec2, MapError> {
    let mut cur = z;
    for step in 1..=n {
        cur = map.forward(cur);
        if !cur.is_finite() || !map.in_bounds(cur) {
            return Err(MapError::Escape {
                step,
                partial: vec![z],
            });
        }
    }
    Ok(cur)
}

/// Jacobian of `f̃^q` at `z` by the chain rule, together with `f̃^q(z)`.
pub fn jacobian_power<M: PlaneMap + ?Sized>(map: &M, z: Vec2, q: u32) -> (Vec2, Mat2) {
    let mut cur = z;
    let mut jac = Mat2::IDENTITY;
    for _ in 0..q {
        jac = map.jacobian(cur).mul(&jac);
        cur = map.forward(cur);
    }
    (cur, jac)
}

/// `‖f̃(z+v) − f̃(z) − A·v‖`.
pub fn deck_residual(map: &LiftedTorusMap, z: Vec2, v: IVec2) -> f64 {
    let av = map.homotopy_matrix().apply(v);
    let lhs = map.forward(z + Vec2::from_int(v));
    let rhs = map.forward(z) + Vec2::from_int(av);
    (lhs - rhs).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn homotopy_shapes() {
        assert_eq!(
            HomotopyMatrix::from_entries([[1, 0], [0, 1]]).unwrap(),
            HomotopyMatrix::Identity
        );
        assert_eq!(
            HomotopyMatrix::from_entries([[1, 3], [0, 1]]).unwrap(),
            HomotopyMatrix::DehnTwist { k: 3 }
        );
        assert!(HomotopyMatrix::from_entries([[1, 0], [1, 1]]).is_err());
        assert!(HomotopyMatrix::from_entries([[2, 1], [1, 1]]).is_err());
        assert_eq!(HomotopyMatrix::DehnTwist { k: 2 }.pow(3), HomotopyMatrix::DehnTwist { k: 6 });
        assert_eq!(HomotopyMatrix::DehnTwist { k: 1 }.apply([0, 1]), [1, 1]);
    }

    #[test]
    fn standard_map_examples() {
        let shear = make_standard_map(0.0, 0.0);
        assert_eq!(eval_lift(&shear, Vec2::new(0.3, 0.7)).unwrap(), Vec2::new(1.0, 0.7));

        let pert = make_standard_map(0.5, 0.01);
        let z = Vec2::new(0.0, 0.25);
        assert!((pert.forward(z).y - z.y - 0.01).abs() < 1e-15);

        let k2 = make_standard_map(2.0, 0.0);
        assert_eq!(eval_lift(&k2, Vec2::ZERO).unwrap(), Vec2::ZERO);
        assert!(close(eval_lift(&k2, Vec2::new(0.25, 0.0)).unwrap(), Vec2::new(2.25, 2.0), 1e-15));

        for k in [0.0, 0.5, 2.0, 7.3] {
            let m = make_standard_map(k, 0.0);
            let z = Vec2::new(0.17, -0.4);
            let d = m.forward(z + Vec2::new(0.0, 1.0)) - m.forward(z);
            assert!(close(d, Vec2::new(1.0, 1.0), 1e-14));
        }
    }

    #[test]
    fn identity_and_translation() {
        let id = LiftedTorusMap::identity();
        assert_eq!(eval_lift(&id, Vec2::new(2.5, -1.0)).unwrap(), Vec2::new(2.5, -1.0));
        let t = LiftedTorusMap::translation(0.3, 0.4);
        assert!(deck_residual(&t, Vec2::new(0.2, 0.9), [5, -7]) < 1e-12);
    }

    #[test]
    fn iterate_examples() {
        let k0 = make_standard_map(0.0, 0.0);
        let z = Vec2::new(0.0, 0.5);
        assert_eq!(iterate(&k0, z, 0).unwrap(), vec![z]);
        assert_eq!(
            iterate(&k0, z, 2).unwrap(),
            vec![z, Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.5)]
        );
        let k2 = make_standard_map(2.0, 0.01);
        let w = Vec2::new(0.31, 0.77);
        let back = iterate(&k2, w, -1).unwrap()[1];
        let fwd = iterate(&k2, back, 1).unwrap()[1];
        assert!(close(fwd, w, 1e-10));
    }

    #[test]
    fn escape_reports_partial_orbit() {
        let m = LiftedTorusMap::translation(1.0, 0.0).with_escape_bound(3.5);
        match iterate(&m, Vec2::ZERO, 10) {
            Err(MapError::Escape { step, partial }) => {
                assert_eq!(step, 4);
                assert_eq!(partial.len(), 4);
            }
            other => panic!("expected escape, got {other:?}"),
        }
        assert!(matches!(
            iterate_with_budget(&m, Vec2::ZERO, 11, 10),
            Err(MapError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn non_finite_result_is_an_error() {
        let m = make_standard_map(f64::MAX, 0.0);
        assert!(eval_lift(&m, Vec2::new(0.25, f64::MAX)).is_err());
    }

    #[test]
    fn deck_examples() {
        let k2 = make_standard_map(2.0, 0.0);
        for z in [Vec2::new(0.1, 0.2), Vec2::new(-3.7, 12.25)] {
            assert!(deck_residual(&k2, z, [1, 0]) <= 1e-12);
            assert!(deck_residual(&k2, z, [0, 1]) <= 1e-12);
        }
    }

    #[test]
    fn inverse_map_swaps_rules() {
        let m = make_standard_map(1.3, 0.02);
        let inv = m.inverse_map();
        let z = Vec2::new(0.4, -0.3);
        assert_eq!(inv.forward(z), m.backward(z));
        assert_eq!(inv.homotopy_matrix(), HomotopyMatrix::DehnTwist { k: -1 });
        let j = inv.jacobian(z).mul(&m.jacobian(inv.forward(z)));
        assert!((j.sub(&Mat2::IDENTITY)).max_abs() < 1e-12);
        assert_eq!(inv.inverse_map(), m);
    }

    #[test]
    fn reflection_conjugacy_is_exact() {
        let m = make_standard_map(2.0, 0.01);
        let r = m.reflected();
        for z in [Vec2::new(0.3, -1.2), Vec2::new(-2.71, 0.5)] {
            assert_eq!(r.forward(-z), -m.forward(z));
        }
        let d = LiftedTorusMap::double_shear(0.8, 0.6);
        let dr = d.reflected();
        let z = Vec2::new(0.12, 0.93);
        assert_eq!(dr.forward(-z), -d.forward(z));
    }

    #[test]
    fn double_shear_inverse_and_jacobian() {
        let m = LiftedTorusMap::double_shear(1.0, 1.0);
        let z = Vec2::new(0.37, 0.11);
        assert!(close(m.backward(m.forward(z)), z, 1e-13));
        let h = 1e-6;
        let j = m.jacobian(z);
        let fx = (m.forward(z + Vec2::new(h, 0.0)) - m.forward(z - Vec2::new(h, 0.0))).scale(0.5 / h);
        let fy = (m.forward(z + Vec2::new(0.0, h)) - m.forward(z - Vec2::new(0.0, h))).scale(0.5 / h);
        assert!((j.m[0][0] - fx.x).abs() < 1e-6 && (j.m[1][0] - fx.y).abs() < 1e-6);
        assert!((j.m[0][1] - fy.x).abs() < 1e-6 && (j.m[1][1] - fy.y).abs() < 1e-6);
    }
}
