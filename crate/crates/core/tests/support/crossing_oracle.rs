//! Brute-force reference for crossing witnesses: every segment pair is
//! tested, and every candidate is validated by scanning the whole local
//! piece for the nearest point.

#![allow(dead_code)]

use rotset_core::transversality::RectangleSpec;
use rotset_core::Vec2;

#[derive(Debug, Clone, Copy)]
pub struct OracleHit {
    pub point: Vec2,
    pub piece_arc: f64,
    pub target_param: f64,
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x - b.x, a.y - b.y)
}

fn at(a: Vec2, b: Vec2, t: f64) -> Vec2 {
    Vec2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

fn len(a: Vec2, b: Vec2) -> f64 {
    ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt()
}

/// Parameters of the common point of two closed segments, if any.
fn intersect(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<(f64, f64)> {
    let r = sub(p1, p0);
    let s = sub(q1, q0);
    let den = cross(r, s);
    let qp = sub(q0, p0);
    if den == 0.0 {
        if cross(qp, r) != 0.0 {
            return None;
        }
        // Collinear: earliest point of q that lies on p.
        let rr = r.x * r.x + r.y * r.y;
        let ss = s.x * s.x + s.y * s.y;
        let on_p = |pt: Vec2| -> Option<f64> {
            let u = if rr == 0.0 { 0.0 } else { ((pt.x - p0.x) * r.x + (pt.y - p0.y) * r.y) / rr };
            (-1e-12..=1.0 + 1e-12).contains(&u).then_some(u.clamp(0.0, 1.0))
        };
        let mut ts = vec![0.0, 1.0];
        if ss > 0.0 {
            for e in [p0, p1] {
                ts.push(((e.x - q0.x) * s.x + (e.y - q0.y) * s.y) / ss);
            }
        }
        ts.retain(|t| (0.0..=1.0).contains(t));
        ts.sort_by(f64::total_cmp);
        for t in ts {
            if let Some(u) = on_p(at(q0, q1, t)) {
                return Some((u, t));
            }
        }
        return None;
    }
    let u = cross(qp, s) / den;
    let t = cross(qp, r) / den;
    let tol = 1e-12;
    if u < -tol || u > 1.0 + tol || t < -tol || t > 1.0 + tol {
        return None;
    }
    Some((u.clamp(0.0, 1.0), t.clamp(0.0, 1.0)))
}

/// Sub-polyline of `piece` between arclengths `lo` and `hi`.
fn clip(piece: &[Vec2], lo: f64, hi: f64) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::new();
    let mut acc = 0.0;
    for k in 0..piece.len() - 1 {
        let (a, b) = (piece[k], piece[k + 1]);
        let l = len(a, b);
        let (s0, s1) = (acc, acc + l);
        acc = s1;
        if s1 < lo || s0 > hi || l == 0.0 {
            continue;
        }
        let ta = ((lo - s0) / l).max(0.0);
        let tb = ((hi - s0) / l).min(1.0);
        let pa = if ta == 0.0 { a } else { at(a, b, ta) };
        let pb = if tb == 1.0 { b } else { at(a, b, tb) };
        if out.last() != Some(&pa) {
            out.push(pa);
        }
        if out.last() != Some(&pb) {
            out.push(pb);
        }
    }
    out
}

/// `Some(sign)` once `p` is outside the rectangle, `None` while inside.
fn exit_sign(window: &[Vec2], p: Vec2, half_w: f64) -> Option<i8> {
    let mut best = (f64::INFINITY, 0.0, false);
    let n = window.len() - 1;
    for k in 0..n {
        let (a, b) = (window[k], window[k + 1]);
        let d = sub(b, a);
        let dd = d.x * d.x + d.y * d.y;
        if dd == 0.0 {
            continue;
        }
        let u = ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / dd;
        let foot = at(a, b, u.clamp(0.0, 1.0));
        let dist = len(foot, p);
        if dist < best.0 {
            let side = cross(d, sub(p, a));
            let signed = if side > 0.0 { dist } else if side < 0.0 { -dist } else { 0.0 };
            let past_end = (k == 0 && u < 0.0) || (k == n - 1 && u > 1.0);
            best = (dist, signed, past_end);
        }
    }
    let (_, signed, past_end) = best;
    let sign = if signed > 0.0 { 1 } else if signed < 0.0 { -1 } else { 0 };
    (past_end || signed.abs() > half_w).then_some(sign)
}

fn walk_exit(target: &[Vec2], param: f64, forward: bool, window: &[Vec2], rect: RectangleSpec) -> Option<i8> {
    let step = 0.25 * rect.width.min(rect.length);
    let half_w = 0.5 * rect.width;
    let j = (param.floor() as usize).min(target.len() - 2);
    let start = at(target[j], target[j + 1], param - j as f64);
    let order: Vec<Vec2> = if forward {
        target[j + 1..].to_vec()
    } else {
        target[..=j].iter().rev().copied().collect()
    };
    let mut prev = start;
    for next in order {
        let n = ((len(prev, next) / step).ceil() as usize).max(1);
        for m in 1..=n {
            let p = if m == n { next } else { at(prev, next, m as f64 / n as f64) };
            if let Some(s) = exit_sign(window, p, half_w) {
                return Some(s);
            }
        }
        prev = next;
    }
    None
}

/// All raw intersections, one per distinct geometric point.
pub fn oracle_candidates(piece: &[Vec2], target: &[Vec2]) -> Vec<OracleHit> {
    let mut arc = vec![0.0];
    for k in 1..piece.len() {
        arc.push(arc[k - 1] + len(piece[k - 1], piece[k]));
    }
    let mut raw = Vec::new();
    for i in 0..piece.len() - 1 {
        for j in 0..target.len() - 1 {
            if let Some((u, t)) = intersect(piece[i], piece[i + 1], target[j], target[j + 1]) {
                raw.push(OracleHit {
                    point: at(piece[i], piece[i + 1], u),
                    piece_arc: arc[i] + u * (arc[i + 1] - arc[i]),
                    target_param: j as f64 + t,
                });
            }
        }
    }
    raw.sort_by(|a, b| a.target_param.total_cmp(&b.target_param));
    let mut kept: Vec<OracleHit> = Vec::new();
    for h in raw {
        let scale = 1.0 + (h.point.x * h.point.x + h.point.y * h.point.y).sqrt();
        if kept.iter().all(|k| len(k.point, h.point) > 1e-12 * scale) {
            kept.push(h);
        }
    }
    kept
}

pub fn oracle_witnesses(piece: &[Vec2], target: &[Vec2], rect: RectangleSpec) -> Vec<OracleHit> {
    oracle_candidates(piece, target)
        .into_iter()
        .filter(|h| {
            let window = clip(piece, h.piece_arc - 0.5 * rect.length, h.piece_arc + 0.5 * rect.length);
            if window.len() < 2 {
                return false;
            }
            let f = walk_exit(target, h.target_param, true, &window, rect);
            let b = walk_exit(target, h.target_param, false, &window, rect);
            matches!((f, b), (Some(x), Some(y)) if x != 0 && x == -y)
        })
        .collect()
}

pub fn distance_to_polyline(poly: &[Vec2], p: Vec2) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..poly.len() - 1 {
        let (a, b) = (poly[k], poly[k + 1]);
        let d = sub(b, a);
        let dd = d.x * d.x + d.y * d.y;
        let u = if dd == 0.0 { 0.0 } else { (((p.x - a.x) * d.x + (p.y - a.y) * d.y) / dd).clamp(0.0, 1.0) };
        best = best.min(len(at(a, b, u), p));
    }
    best
}
