//! Detection of topologically transverse intersections between a manifold
//! piece `λ` and a closed set `K` given as a polyline.
//!
//! Around each intersection point a rectangle is erected along `λ`: length
//! `ℓ` along the piece and width `w` across it. `K` is followed from the
//! intersection in both directions until it leaves the rectangle. The
//! intersection is a witness only if the two walks leave on strictly
//! opposite sides of `λ`, so each of the two components of `R \ λ` contains
//! a piece of `K` touching `λ` and another side. Tangential touches leave on
//! the same side and are rejected.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{segment_intersection, IVec2, Rect, Vec2};
use crate::manifold::ManifoldCurve;
use crate::par;

/// Rectangle dimensions: `length` along the piece, `width` across it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleSpec {
    pub length: f64,
    pub width: f64,
}

impl RectangleSpec {
    /// `ℓ = 10·h_max`, `w = 2·h_max`.
    pub fn from_h_max(h_max: f64) -> Self {
        Self {
            length: 10.0 * h_max,
            width: 2.0 * h_max,
        }
    }

    /// Longest step used when following `K` through the rectangle.
    pub fn walk_step(&self) -> f64 {
        0.25 * self.width.min(self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RectSide {
    /// Long side on the left of `λ` (positive side).
    LongLeft,
    /// Long side on the right of `λ`.
    LongRight,
    /// Short side at the start of the local piece.
    ShortStart,
    /// Short side at the end of the local piece.
    ShortEnd,
}

/// Where a walk along `K` left the rectangle, and on which side of `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideHit {
    pub side: RectSide,
    /// `+1` for the left component, `-1` for the right one.
    pub component: i8,
    pub exit_point: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingWitness {
    pub location: Vec2,
    pub translate: IVec2,
    /// Segment indices of the intersection on the piece and on `K`.
    pub piece_segment: usize,
    pub target_segment: usize,
    /// Unit tangent of `λ` at the intersection.
    pub tangent: Vec2,
    /// Corners of the rectangle, counterclockwise, in the tangent frame.
    pub rectangle: [Vec2; 4],
    /// Exits of `K` in the left and right components.
    pub sides_hit: [SideHit; 2],
}

/// Uniform-grid bucket index over the segments of a polyline.
#[derive(Debug, Clone)]
struct SegmentIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl SegmentIndex {
    fn build(pts: &[Vec2], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, w) in pts.windows(2).enumerate() {
            let (x0, x1) = (w[0].x.min(w[1].x), w[0].x.max(w[1].x));
            let (y0, y1) = (w[0].y.min(w[1].y), w[0].y.max(w[1].y));
            let (i0, i1) = ((x0 / cell).floor() as i64, (x1 / cell).floor() as i64);
            let (j0, j1) = ((y0 / cell).floor() as i64, (y1 / cell).floor() as i64);
            for ci in i0..=i1 {
                for cj in j0..=j1 {
                    buckets.entry((ci, cj)).or_default().push(i as u32);
                }
            }
        }
        Self { cell, buckets }
    }

    fn query(&self, a: Vec2, b: Vec2, out: &mut Vec<u32>) {
        out.clear();
        let c = self.cell;
        let (i0, i1) = ((a.x.min(b.x) / c).floor() as i64, (a.x.max(b.x) / c).floor() as i64);
        let (j0, j1) = ((a.y.min(b.y) / c).floor() as i64, (a.y.max(b.y) / c).floor() as i64);
        // Long query segments over a fine grid: fall back to the bucket scan.
        if (i1 - i0 + 1).saturating_mul(j1 - j0 + 1) > 4 * self.buckets.len() as i64 {
            for v in self.buckets.values() {
                out.extend_from_slice(v);
            }
        } else {
            for ci in i0..=i1 {
                for cj in j0..=j1 {
                    if let Some(v) = self.buckets.get(&(ci, cj)) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    piece_seg: usize,
    piece_t: f64,
    target_seg: usize,
    target_t: f64,
    point: Vec2,
}

/// Reusable detector for one piece `λ`.
#[derive(Debug, Clone)]
pub struct CrossingDetector {
    piece: Vec<Vec2>,
    /// Cumulative arclength at each vertex of the piece.
    arc: Vec<f64>,
    bounds: Rect,
    index: SegmentIndex,
    rect: RectangleSpec,
}

impl CrossingDetector {
    pub fn new(piece: &[Vec2], rect: RectangleSpec) -> Self {
        let mut arc = Vec::with_capacity(piece.len());
        let mut s = 0.0;
        for (i, p) in piece.iter().enumerate() {
            if i > 0 {
                s += p.dist(piece[i - 1]);
            }
            arc.push(s);
        }
        let bounds = Rect::bounding(piece).unwrap_or(Rect::new(0.0, 0.0, 0.0, 0.0));
        let nseg = piece.len().saturating_sub(1).max(1);
        let mean_seg = s / nseg as f64;
        let diag = bounds.width().hypot(bounds.height());
        let cell = (4.0 * mean_seg)
            .max(rect.length)
            .max(diag / 4096.0)
            .max(1e-12);
        Self {
            piece: piece.to_vec(),
            arc,
            bounds,
            index: SegmentIndex::build(piece, cell),
            rect,
        }
    }

    pub fn piece(&self) -> &[Vec2] {
        &self.piece
    }

    /// All intersections of the piece with `target + translate`,
    /// clustered so that one geometric point yields one candidate.
    fn candidates(&self, target: &[Vec2]) -> Vec<Candidate> {
        let mut out = Vec::new();
        if self.piece.len() < 2 || target.len() < 2 {
            return out;
        }
        let grow = self.rect.length;
        let b = self.bounds;
        let near = |p: Vec2, q: Vec2| {
            p.x.max(q.x) >= b.x_min - grow
                && p.x.min(q.x) <= b.x_max + grow
                && p.y.max(q.y) >= b.y_min - grow
                && p.y.min(q.y) <= b.y_max + grow
        };
        let mut hits = Vec::new();
        for (j, w) in target.windows(2).enumerate() {
            if !near(w[0], w[1]) {
                continue;
            }
            self.index.query(w[0], w[1], &mut hits);
            for &i in &hits {
                let i = i as usize;
                let (p0, p1) = (self.piece[i], self.piece[i + 1]);
                if let Some((s, t)) = segment_intersection(p0, p1, w[0], w[1]) {
                    out.push(Candidate {
                        piece_seg: i,
                        piece_t: s,
                        target_seg: j,
                        target_t: t,
                        point: p0.lerp(p1, s),
                    });
                }
            }
        }
        out.sort_by(|a, b| {
            (a.target_seg as f64 + a.target_t)
                .total_cmp(&(b.target_seg as f64 + b.target_t))
                .then(a.piece_seg.cmp(&b.piece_seg))
        });
        let mut merged: Vec<Candidate> = Vec::with_capacity(out.len());
        for c in out {
            let dup = merged.iter().rev().take(4).any(|m| {
                m.point.dist(c.point) <= 1e-12 * (1.0 + c.point.norm())
            });
            if !dup {
                merged.push(c);
            }
        }
        merged
    }

    /// Local window of the piece: arclength within `±ℓ/2` of the crossing.
    fn window(&self, seg: usize, t: f64) -> Vec<Vec2> {
        let s0 = self.arc[seg] + t * (self.arc[seg + 1] - self.arc[seg]);
        let (lo, hi) = (s0 - 0.5 * self.rect.length, s0 + 0.5 * self.rect.length);
        let at = |s: f64| {
            let k = self.arc.partition_point(|&a| a < s).clamp(1, self.arc.len() - 1);
            let (a0, a1) = (self.arc[k - 1], self.arc[k]);
            let u = if a1 > a0 { ((s - a0) / (a1 - a0)).clamp(0.0, 1.0) } else { 0.0 };
            self.piece[k - 1].lerp(self.piece[k], u)
        };
        let mut w = Vec::new();
        w.push(if lo <= 0.0 { self.piece[0] } else { at(lo) });
        for (k, &a) in self.arc.iter().enumerate() {
            if a > lo && a < hi {
                w.push(self.piece[k]);
            }
        }
        let last = *self.arc.last().unwrap();
        w.push(if hi >= last { *self.piece.last().unwrap() } else { at(hi) });
        w.dedup_by(|a, b| a == b);
        w
    }

    /// Witnesses for `target + translate`.
    pub fn detect(&self, target: &[Vec2], translate: IVec2) -> Vec<CrossingWitness> {
        let d = Vec2::from_int(translate);
        let shifted: Vec<Vec2> = target.iter().map(|p| *p + d).collect();
        self.candidates(&shifted)
            .into_iter()
            .filter_map(|c| self.validate(&shifted, &c, translate))
            .collect()
    }

    fn validate(&self, target: &[Vec2], c: &Candidate, translate: IVec2) -> Option<CrossingWitness> {
        let window = self.window(c.piece_seg, c.piece_t);
        if window.len() < 2 {
            return None;
        }
        let half_w = 0.5 * self.rect.width;
        let step = self.rect.walk_step();
        let fwd = walk(target, c.target_seg, c.target_t, true, step, |p| {
            locate(&window, p, half_w)
        })?;
        let bwd = walk(target, c.target_seg, c.target_t, false, step, |p| {
            locate(&window, p, half_w)
        })?;
        if fwd.component == 0 || fwd.component != -bwd.component {
            return None;
        }
        let (left, right) = if fwd.component > 0 { (fwd, bwd) } else { (bwd, fwd) };
        let p0 = self.piece[c.piece_seg];
        let p1 = self.piece[c.piece_seg + 1];
        let tangent = (p1 - p0).normalized();
        let n = tangent.perp();
        let (hl, hw) = (0.5 * self.rect.length, half_w);
        let o = c.point;
        Some(CrossingWitness {
            location: o,
            translate,
            piece_segment: c.piece_seg,
            target_segment: c.target_seg,
            tangent,
            rectangle: [
                o - tangent * hl - n * hw,
                o + tangent * hl - n * hw,
                o + tangent * hl + n * hw,
                o - tangent * hl + n * hw,
            ],
            sides_hit: [left, right],
        })
    }
}

enum Located {
    Inside,
    Exit(RectSide, i8),
}

/// Position of `p` relative to the rectangle around the window polyline.
fn locate(window: &[Vec2], p: Vec2, half_w: f64) -> Located {
    let mut best = f64::INFINITY;
    let mut best_signed = 0.0;
    let mut beyond: Option<RectSide> = None;
    let last = window.len() - 2;
    for (k, w) in window.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let ab = b - a;
        let len2 = ab.norm_sq();
        if len2 == 0.0 {
            continue;
        }
        let raw = (p - a).dot(ab) / len2;
        let t = raw.clamp(0.0, 1.0);
        let dist = p.dist(a + ab * t);
        if dist < best {
            best = dist;
            best_signed = ab.cross(p - a).signum() * dist;
            beyond = if k == 0 && raw < 0.0 {
                Some(RectSide::ShortStart)
            } else if k == last && raw > 1.0 {
                Some(RectSide::ShortEnd)
            } else {
                None
            };
        }
    }
    let sign = if best_signed > 0.0 {
        1
    } else if best_signed < 0.0 {
        -1
    } else {
        0
    };
    if let Some(side) = beyond {
        return Located::Exit(side, sign);
    }
    if best_signed.abs() > half_w {
        let side = if sign > 0 {
            RectSide::LongLeft
        } else {
            RectSide::LongRight
        };
        return Located::Exit(side, sign);
    }
    Located::Inside
}

/// Follow the polyline from parameter `seg + t` in one direction, in steps
/// of at most `step`, until it leaves the rectangle.
fn walk<F>(poly: &[Vec2], seg: usize, t: f64, forward: bool, step: f64, locate: F) -> Option<SideHit>
where
    F: Fn(Vec2) -> Located,
{
    let check = |p: Vec2| match locate(p) {
        Located::Inside => None,
        Located::Exit(side, component) => Some(SideHit {
            side,
            component,
            exit_point: p,
        }),
    };
    let start = poly[seg].lerp(poly[seg + 1], t);
    if forward {
        let mut prev = start;
        for next in &poly[seg + 1..] {
            if let Some(hit) = sub_steps(prev, *next, step, &check) {
                return Some(hit);
            }
            prev = *next;
        }
    } else {
        let mut prev = start;
        for k in (0..=seg).rev() {
            let next = poly[k];
            if let Some(hit) = sub_steps(prev, next, step, &check) {
                return Some(hit);
            }
            prev = next;
        }
    }
    None
}

fn sub_steps<F>(from: Vec2, to: Vec2, step: f64, check: &F) -> Option<SideHit>
where
    F: Fn(Vec2) -> Option<SideHit>,
{
    let len = from.dist(to);
    let n = ((len / step).ceil() as usize).max(1);
    for m in 1..=n {
        let p = if m == n { to } else { from.lerp(to, m as f64 / n as f64) };
        if let Some(hit) = check(p) {
            return Some(hit);
        }
    }
    None
}

/// One-shot detection of `piece ⋔ (target + translate)`.
pub fn detect_crossings(
    piece: &[Vec2],
    target: &[Vec2],
    translate: IVec2,
    rect: RectangleSpec,
) -> Vec<CrossingWitness> {
    CrossingDetector::new(piece, rect).detect(target, translate)
}

/// Inclusive box of integer translates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslateRange {
    pub a_min: i64,
    pub a_max: i64,
    pub b_min: i64,
    pub b_max: i64,
}

impl TranslateRange {
    pub fn square(radius: i64) -> Self {
        Self {
            a_min: -radius,
            a_max: radius,
            b_min: -radius,
            b_max: radius,
        }
    }

    pub fn cells(&self) -> Vec<IVec2> {
        let mut out = Vec::new();
        for b in self.b_min..=self.b_max {
            for a in self.a_min..=self.a_max {
                out.push([a, b]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanOutcome {
    Witness {
        count: usize,
        first: Box<CrossingWitness>,
    },
    /// Nothing found at the current growth budget. Not the same as absent.
    NotFoundAtBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub translate: IVec2,
    pub outcome: ScanOutcome,
}

impl ScanCell {
    pub fn has_witness(&self) -> bool {
        matches!(self.outcome, ScanOutcome::Witness { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub cells: Vec<ScanCell>,
}

impl ScanTable {
    pub fn get(&self, v: IVec2) -> Option<&ScanCell> {
        self.cells.iter().find(|c| c.translate == v)
    }
}

/// For each `(a,b)` in `range`, look for `W^u ⋔ (W^s + (a,b))` over all
/// pairs of grown branches.
pub fn translate_scan(
    unstable: &[ManifoldCurve],
    stable: &[ManifoldCurve],
    range: TranslateRange,
    rect: RectangleSpec,
) -> ScanTable {
    let detectors: Vec<CrossingDetector> = unstable
        .iter()
        .map(|u| CrossingDetector::new(&u.vertices, rect))
        .collect();
    let cells = range.cells();
    let outcomes = par::map_slice(&cells, |&v| {
        let mut count = 0usize;
        let mut first: Option<CrossingWitness> = None;
        for det in &detectors {
            for s in stable {
                let found = det.detect(&s.vertices, v);
                count += found.len();
                if first.is_none() {
                    first = found.into_iter().next();
                }
            }
        }
        let outcome = match first {
            Some(w) => ScanOutcome::Witness {
                count,
                first: Box::new(w),
            },
            None => ScanOutcome::NotFoundAtBudget,
        };
        ScanCell {
            translate: v,
            outcome,
        }
    });
    ScanTable { cells: outcomes }
}
