//! Randomized polyline pairs for the crossing detector, plus constructed
//! one-sided touches that must never produce a witness.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotset_core::transversality::RectangleSpec;
use rotset_core::Vec2;

pub struct Case {
    pub piece: Vec<Vec2>,
    pub target: Vec<Vec2>,
    pub rect: RectangleSpec,
    pub tangency: bool,
}

pub const RECT: RectangleSpec = RectangleSpec {
    length: 0.2,
    width: 0.04,
};

fn wavy_piece(rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let amp = rng.random_range(0.0..0.25);
    let freq = rng.random_range(0.5..3.0);
    let phase = rng.random_range(0.0..6.0);
    (0..=40)
        .map(|i| {
            let x = -1.0 + i as f64 * 0.05 + rng.random_range(-0.01..0.01);
            Vec2::new(x, amp * (freq * x + phase).sin())
        })
        .collect()
}

fn random_walk(rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let n = rng.random_range(10..30);
    let mut p = Vec2::new(rng.random_range(-0.8..0.8), rng.random_range(-0.4..0.4));
    let mut heading: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let mut out = vec![p];
    for _ in 0..n {
        heading += rng.random_range(-1.2..1.2);
        let step = rng.random_range(0.05..0.4);
        p = p + Vec2::new(heading.cos(), heading.sin()) * step;
        out.push(p);
    }
    out
}

/// V-shaped curve with its apex on a vertex of the piece and both arms on
/// the same side.
fn vertex_touch(rng: &mut ChaCha8Rng, piece: &[Vec2]) -> Vec<Vec2> {
    let k = rng.random_range(5..piece.len() - 5);
    let apex = piece[k];
    let t = (piece[k + 1] - piece[k - 1]).normalized();
    let n = t.perp();
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let h = rng.random_range(0.1..0.2);
    let e = rng.random_range(0.03..0.08);
    vec![apex + n * (side * h) - t * e, apex, apex + n * (side * h) + t * e]
}

/// Sampled parabola touching a straight piece from one side.
fn parabola_touch(rng: &mut ChaCha8Rng) -> (Vec<Vec2>, Vec<Vec2>) {
    let x0 = rng.random_range(-0.5..0.5);
    let c = rng.random_range(0.5..4.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let piece = vec![Vec2::new(-1.0, 0.0), Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
    let target = (-20..=20)
        .map(|i| {
            let dx = i as f64 * 0.03;
            Vec2::new(x0 + dx, c * dx * dx)
        })
        .collect();
    (piece, target)
}

/// 100 cases: 85 random, 15 constructed touches.
pub fn cases(seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..85 {
        let piece = wavy_piece(&mut rng);
        let target = random_walk(&mut rng);
        out.push(Case {
            piece,
            target,
            rect: RECT,
            tangency: false,
        });
    }
    for i in 0..15 {
        let (piece, target) = if i % 2 == 0 {
            let piece = wavy_piece(&mut rng);
            let target = vertex_touch(&mut rng, &piece);
            (piece, target)
        } else {
            parabola_touch(&mut rng)
        };
        out.push(Case {
            piece,
            target,
            rect: RECT,
            tangency: true,
        });
    }
    out
}
