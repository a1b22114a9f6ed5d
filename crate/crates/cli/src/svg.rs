//! Minimal SVG writer. Coordinates are printed with fixed precision so the
//! files are byte-stable.

use std::fmt::Write;

use rotset_core::{Rect, Vec2};

const SIZE: f64 = 800.0;
const PAD: f64 = 20.0;

pub struct Plot {
    view: Rect,
    body: String,
}

impl Plot {
    /// A plot covering `view`, padded when the box is degenerate.
    pub fn new(view: Rect) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (view.x_min, view.x_max, view.y_min, view.y_max);
        if x1 - x0 < 1e-9 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-9 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        Self {
            view: Rect::new(x0, x1, y0, y1),
            body: String::new(),
        }
    }

    pub fn fitting(points: &[Vec2]) -> Self {
        Self::new(Rect::bounding(points).unwrap_or(Rect::new(0.0, 1.0, 0.0, 1.0)))
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let s = (SIZE - 2.0 * PAD) / self.view.width().max(self.view.height());
        (PAD + (p.x - self.view.x_min) * s, SIZE - PAD - (p.y - self.view.y_min) * s)
    }

    fn coords(&self, pts: &[Vec2]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.3},{y:.3}");
        }
        s
    }

    pub fn polyline(&mut self, pts: &[Vec2], color: &str) {
        let c = self.coords(pts);
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="0.8" points="{c}"/>"#
        );
    }

    pub fn polygon(&mut self, pts: &[Vec2], color: &str) {
        let c = self.coords(pts);
        let _ = writeln!(
            self.body,
            r#"<polygon fill="{color}" fill-opacity="0.2" stroke="{color}" points="{c}"/>"#
        );
    }

    pub fn points(&mut self, pts: &[Vec2], color: &str) {
        for p in pts {
            let (x, y) = self.map(*p);
            let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5" fill="{color}"/>"#);
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Every `stride`-th point plus the last, keeping at most about `max` points.
pub fn thin(pts: &[Vec2], max: usize) -> Vec<Vec2> {
    if pts.len() <= max {
        return pts.to_vec();
    }
    let stride = pts.len().div_ceil(max);
    let mut out: Vec<Vec2> = pts.iter().step_by(stride).copied().collect();
    if let Some(last) = pts.last() {
        if out.last() != Some(last) {
            out.push(*last);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_corners_and_is_stable() {
        let mut p = Plot::new(Rect::new(0.0, 1.0, 0.0, 1.0));
        p.polyline(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)], "black");
        let s = p.finish();
        assert!(s.contains("20.000,780.000 780.000,20.000"));
        assert!(s.starts_with("<svg"));
    }

    #[test]
    fn thin_keeps_ends() {
        let pts: Vec<Vec2> = (0..1001).map(|i| Vec2::new(i as f64, 0.0)).collect();
        let t = thin(&pts, 100);
        assert!(t.len() <= 102);
        assert_eq!(t[0], pts[0]);
        assert_eq!(*t.last().unwrap(), pts[1000]);
    }
}
