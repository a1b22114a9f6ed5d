//! Finite-budget probes around grown manifolds: translation invariance of
//! the closure and topological mixing in the lift.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{IVec2, Rect, Vec2};
use crate::map::PlaneMap;
use crate::par;

/// One-sided distance from `curve + v` to `curve`, over the shifted
/// vertices that fall inside `region`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureScore {
    pub score: f64,
    pub compared: usize,
    pub eps: f64,
}

/// Nearest-vertex lookup on a bucket grid of side `eps`.
struct VertexBuckets {
    eps: f64,
    buckets: HashMap<(i64, i64), Vec<Vec2>>,
}

impl VertexBuckets {
    fn new(points: &[Vec2], eps: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<Vec2>> = HashMap::new();
        for &p in points {
            buckets.entry(Self::key(p, eps)).or_default().push(p);
        }
        Self { eps, buckets }
    }

    fn key(p: Vec2, eps: f64) -> (i64, i64) {
        ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64)
    }

    fn nearest(&self, p: Vec2) -> f64 {
        let (ci, cj) = Self::key(p, self.eps);
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            for i in ci - ring..=ci + ring {
                for j in cj - ring..=cj + ring {
                    if (i - ci).abs() != ring && (j - cj).abs() != ring {
                        continue;
                    }
                    if let Some(b) = self.buckets.get(&(i, j)) {
                        for q in b {
                            best = best.min(p.dist(*q));
                        }
                    }
                }
            }
            // Everything outside this ring is at least `ring·eps` away.
            if best <= ring as f64 * self.eps || ring > 1 << 20 {
                return best;
            }
            ring += 1;
        }
    }
}

pub fn closure_invariance_score(curve: &[Vec2], v: IVec2, region: Rect, eps: f64) -> ClosureScore {
    let eps = if eps > 0.0 { eps } else { 1e-3 };
    if curve.is_empty() {
        return ClosureScore {
            score: 0.0,
            compared: 0,
            eps,
        };
    }
    let index = VertexBuckets::new(curve, eps);
    let d = Vec2::from_int(v);
    let shifted: Vec<Vec2> = curve
        .iter()
        .map(|p| *p + d)
        .filter(|p| region.contains(*p))
        .collect();
    let dists = par::map_slice(&shifted, |p| index.nearest(*p));
    ClosureScore {
        score: dists.iter().copied().fold(0.0, f64::max),
        compared: shifted.len(),
        eps,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec2,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec2, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.dist(self.center) < self.radius
    }

    /// Square lattice of spacing `radius / per_radius` clipped to the open ball.
    pub fn lattice(&self, per_radius: usize) -> Vec<Vec2> {
        let m = per_radius.max(1) as i64;
        let h = self.radius / m as f64;
        let mut out = Vec::new();
        for j in -m..=m {
            for i in -m..=m {
                let p = self.center + Vec2::new(i as f64 * h, j as f64 * h);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    /// `hits[n-1]` is the number of samples of `U` whose n-th iterate lies in `V`.
    pub hits: Vec<usize>,
    pub samples: usize,
    /// Samples whose orbit left the coordinate bound before `n_max`.
    pub escaped: usize,
    /// Smallest `N₀` with a hit for every `n ∈ [N₀, n_max]`.
    pub tail_start: Option<u64>,
}

impl MixingReport {
    pub fn hit(&self, n: u64) -> bool {
        n >= 1 && self.hits.get(n as usize - 1).is_some_and(|&c| c > 0)
    }
}

pub fn mixing_probe<M: PlaneMap + ?Sized>(
    map: &M,
    u: Ball,
    v: Ball,
    n_max: u64,
    per_radius: usize,
) -> MixingReport {
    let seeds = u.lattice(per_radius);
    let per_seed = par::map_slice(&seeds, |&z0| {
        let mut z = z0;
        let mut hit_at = Vec::new();
        for n in 1..=n_max {
            z = map.forward(z);
            if !map.in_bounds(z) {
                return (hit_at, true);
            }
            if v.contains(z) {
                hit_at.push(n);
            }
        }
        (hit_at, false)
    });
    let mut hits = vec![0usize; n_max as usize];
    let mut escaped = 0;
    for (hit_at, esc) in &per_seed {
        for &n in hit_at {
            hits[n as usize - 1] += 1;
        }
        escaped += *esc as usize;
    }
    let tail = hits.iter().rev().take_while(|&&c| c > 0).count() as u64;
    let tail_start = (tail > 0).then(|| n_max - tail + 1);
    MixingReport {
        hits,
        samples: seeds.len(),
        escaped,
        tail_start,
    }
}
