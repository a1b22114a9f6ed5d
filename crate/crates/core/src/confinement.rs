//! Grid approximations of the half-plane confinement sets, their
//! window-touching components, forward persistence probes, and complement
//! disk statistics for obstacle clouds.

use serde::{Deserialize, Serialize};

use crate::error::ConfinementError;
use crate::geometry::{convex_hull, Rect, Vec2};
use crate::map::PlaneMap;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConfinementMode {
    /// `⟨z, (cos θ, sin θ)⟩ ≥ 0`.
    Theta { theta: f64 },
    /// `y ≤ 0`.
    South,
    /// `y ≥ 0`.
    North,
}

impl ConfinementMode {
    /// Coordinate that must stay non-negative, and grows along the
    /// predicted drift.
    pub fn projection(&self, z: Vec2) -> f64 {
        match *self {
            Self::Theta { theta } => z.x * theta.cos() + z.y * theta.sin(),
            Self::South => -z.y,
            Self::North => z.y,
        }
    }

    pub fn holds(&self, z: Vec2) -> bool {
        self.projection(z) >= 0.0
    }

    pub fn label(&self) -> String {
        match self {
            Self::Theta { theta } => format!("theta({theta})"),
            Self::South => "south".into(),
            Self::North => "north".into(),
        }
    }
}

/// Lattice `window.x_min + i·step`, `i = 0..nx`, both window edges included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowGrid {
    pub window: Rect,
    pub step: f64,
}

impl WindowGrid {
    pub fn new(window: Rect, step: f64) -> Self {
        Self { window, step }
    }

    pub fn square(half: f64, step: f64) -> Self {
        Self::new(Rect::square(half), step)
    }

    pub fn nx(&self) -> usize {
        self.count(self.window.width())
    }

    pub fn ny(&self) -> usize {
        self.count(self.window.height())
    }

    fn count(&self, extent: f64) -> usize {
        if !(self.step > 0.0) || !(extent >= 0.0) {
            return 0;
        }
        (extent / self.step).round() as usize + 1
    }

    pub fn point(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            self.window.x_min + i as f64 * self.step,
            self.window.y_min + j as f64 * self.step,
        )
    }

    /// Same step, window scaled about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.window.scaled(s), self.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudComponent {
    pub size: usize,
    pub touches_boundary: bool,
    /// Meets the central half-size window.
    #[serde(default)]
    pub reaches_inner: bool,
}

impl CloudComponent {
    /// Touches the window boundary and reaches the central half-window, so
    /// it spans at least half the window radius.
    pub fn candidate_unbounded(&self) -> bool {
        self.touches_boundary && self.reaches_inner
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfinementCloud {
    pub mode: ConfinementMode,
    pub horizon: u64,
    pub grid: WindowGrid,
    /// Grid indices `(i, j)` of retained points, row-major.
    pub cells: Vec<(u32, u32)>,
    pub points: Vec<Vec2>,
    /// Component id per retained point.
    pub component_of: Vec<u32>,
    pub components: Vec<CloudComponent>,
}

impl ConfinementCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn unbounded_flags(&self) -> Vec<bool> {
        self.components.iter().map(|c| c.touches_boundary).collect()
    }

    /// Points in candidate-unbounded components.
    pub fn unbounded_points(&self) -> Vec<Vec2> {
        self.points
            .iter()
            .zip(&self.component_of)
            .filter(|(_, &c)| self.components[c as usize].candidate_unbounded())
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn unbounded_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.candidate_unbounded())
            .map(|c| c.size)
            .sum()
    }
}

fn check_mode<M: PlaneMap + ?Sized>(map: &M, mode: ConfinementMode) -> Result<(), ConfinementError> {
    if let (ConfinementMode::Theta { .. }, Some(h)) = (mode, map.homotopy()) {
        if !h.is_identity() {
            return Err(ConfinementError::WrongHomotopy(
                "theta mode needs a map homotopic to the identity",
            ));
        }
    }
    Ok(())
}

/// True when `z` and its first `horizon` iterates satisfy the inequality.
fn confined<M: PlaneMap + ?Sized>(map: &M, mode: ConfinementMode, mut z: Vec2, horizon: u64) -> bool {
    if !mode.holds(z) {
        return false;
    }
    for _ in 0..horizon {
        z = map.forward(z);
        if !map.in_bounds(z) || !mode.holds(z) {
            return false;
        }
    }
    true
}

pub fn compute_confinement<M: PlaneMap + ?Sized>(
    map: &M,
    mode: ConfinementMode,
    grid: &WindowGrid,
    horizon: u64,
) -> Result<ConfinementCloud, ConfinementError> {
    let (nx, ny) = (grid.nx(), grid.ny());
    if nx == 0 || ny == 0 {
        return Err(ConfinementError::EmptyGrid);
    }
    if horizon == 0 {
        return Err(ConfinementError::BadHorizon);
    }
    check_mode(map, mode)?;
    let keep = par::map_range(nx * ny, |idx| {
        let (i, j) = (idx % nx, idx / nx);
        confined(map, mode, grid.point(i, j), horizon)
    });
    let (component_of_grid, mut components) = label_components(&keep, nx, ny, true);
    let inner = grid.window.scaled(0.5);
    let mut cells = Vec::new();
    let mut points = Vec::new();
    let mut component_of = Vec::new();
    for (idx, &k) in keep.iter().enumerate() {
        if k {
            let (i, j) = (idx % nx, idx / nx);
            let p = grid.point(i, j);
            let c = component_of_grid[idx];
            if inner.contains(p) {
                components[c as usize].reaches_inner = true;
            }
            cells.push((i as u32, j as u32));
            points.push(p);
            component_of.push(c);
        }
    }
    Ok(ConfinementCloud {
        mode,
        horizon,
        grid: *grid,
        cells,
        points,
        component_of,
        components,
    })
}

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        let up = parent[parent[a as usize] as usize];
        parent[a as usize] = up;
        a = up;
    }
    a
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi as usize] = lo;
    }
}

/// Union-find labelling of occupied cells. Ids are assigned in row-major
/// order of first appearance, so labels are deterministic.
fn label_components(
    occupied: &[bool],
    nx: usize,
    ny: usize,
    diagonal: bool,
) -> (Vec<u32>, Vec<CloudComponent>) {
    let n = nx * ny;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    for j in 0..ny {
        for i in 0..nx {
            let idx = j * nx + i;
            if !occupied[idx] {
                continue;
            }
            if i > 0 && occupied[idx - 1] {
                union(&mut parent, idx as u32, (idx - 1) as u32);
            }
            if j > 0 {
                let up = idx - nx;
                if occupied[up] {
                    union(&mut parent, idx as u32, up as u32);
                }
                if diagonal {
                    if i > 0 && occupied[up - 1] {
                        union(&mut parent, idx as u32, (up - 1) as u32);
                    }
                    if i + 1 < nx && occupied[up + 1] {
                        union(&mut parent, idx as u32, (up + 1) as u32);
                    }
                }
            }
        }
    }
    let mut id_of_root = vec![u32::MAX; n];
    let mut labels = vec![u32::MAX; n];
    let mut comps: Vec<CloudComponent> = Vec::new();
    for idx in 0..n {
        if !occupied[idx] {
            continue;
        }
        let r = find(&mut parent, idx as u32) as usize;
        if id_of_root[r] == u32::MAX {
            id_of_root[r] = comps.len() as u32;
            comps.push(CloudComponent {
                size: 0,
                touches_boundary: false,
                reaches_inner: false,
            });
        }
        let id = id_of_root[r];
        labels[idx] = id;
        let c = &mut comps[id as usize];
        c.size += 1;
        let (i, j) = (idx % nx, idx / nx);
        if i == 0 || j == 0 || i + 1 == nx || j + 1 == ny {
            c.touches_boundary = true;
        }
    }
    (labels, comps)
}

/// Window-touching point counts at the configured window and at twice the
/// window, restricted to the original window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSensitivity {
    pub base_unbounded: usize,
    pub doubled_unbounded_in_base: usize,
    /// Symmetric difference relative to the base count.
    pub relative_change: f64,
}

pub fn window_sensitivity<M: PlaneMap + ?Sized>(
    map: &M,
    base: &ConfinementCloud,
) -> Result<WindowSensitivity, ConfinementError> {
    let big = compute_confinement(map, base.mode, &base.grid.scaled(2.0), base.horizon)?;
    let w = base.grid.window;
    let inside = |p: &Vec2| w.contains(*p);
    let mut a: Vec<(i64, i64)> = base
        .unbounded_points()
        .iter()
        .map(|p| key(*p, base.grid.step))
        .collect();
    let mut b: Vec<(i64, i64)> = big
        .unbounded_points()
        .iter()
        .filter(|p| inside(p))
        .map(|p| key(*p, base.grid.step))
        .collect();
    a.sort_unstable();
    b.sort_unstable();
    let common = count_common(&a, &b);
    let diff = a.len() + b.len() - 2 * common;
    Ok(WindowSensitivity {
        base_unbounded: a.len(),
        doubled_unbounded_in_base: b.len(),
        relative_change: if a.is_empty() {
            if b.is_empty() { 0.0 } else { 1.0 }
        } else {
            diff as f64 / a.len() as f64
        },
    })
}

fn key(p: Vec2, step: f64) -> (i64, i64) {
    ((p.x / step).round() as i64, (p.y / step).round() as i64)
}

fn count_common(a: &[(i64, i64)], b: &[(i64, i64)]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVerdict {
    Escaping,
    Persistent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaOptions {
    pub extra_iterations: u64,
    /// Cap on sampled window-touching points, taken at an even stride.
    pub max_samples: usize,
    pub drift_threshold: f64,
    pub escape_fraction: f64,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        Self {
            extra_iterations: 10_000,
            max_samples: 4096,
            drift_threshold: 1e-3,
            escape_fraction: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub verdict: OmegaVerdict,
    /// True when there was nothing to sample and the verdict holds vacuously.
    pub vacuous: bool,
    pub sampled: usize,
    /// Samples that satisfied the inequality through all extra iterations.
    pub survivors: usize,
    /// Survivors whose projected coordinate never left the window band.
    pub persistent: usize,
    /// Survivors with drift beyond the threshold in the predicted direction.
    pub drifting: usize,
    pub drift_min: f64,
    pub drift_max: f64,
    pub drift_mean: f64,
    /// `(bin lower edge, count)` over the survivors' drifts.
    pub histogram: Vec<(f64, usize)>,
}

/// Projected Birkhoff drift of one point: `(p(f^N z) − p(z)) / N` with the
/// sign convention that the predicted drift is positive.
struct Probe {
    survived: bool,
    in_band: bool,
    drift: f64,
}

fn probe_point<M: PlaneMap + ?Sized>(
    map: &M,
    mode: ConfinementMode,
    band: f64,
    z0: Vec2,
    total: u64,
) -> Probe {
    let p0 = mode.projection(z0);
    let mut z = z0;
    let mut in_band = true;
    for _ in 0..total {
        z = map.forward(z);
        if !map.in_bounds(z) {
            break;
        }
        let p = mode.projection(z);
        if p < 0.0 {
            return Probe {
                survived: false,
                in_band: false,
                drift: f64::NAN,
            };
        }
        if p > band {
            in_band = false;
        }
    }
    if !map.in_bounds(z) {
        // Left the coordinate bound while confined: the drift is large.
        return Probe {
            survived: true,
            in_band: false,
            drift: f64::INFINITY,
        };
    }
    Probe {
        survived: true,
        in_band,
        drift: (mode.projection(z) - p0) / total as f64,
    }
}

/// Width of the window band `{0 ≤ projection ≤ band}` for each mode.
fn band_width(mode: ConfinementMode, w: &Rect) -> f64 {
    let corners = [
        Vec2::new(w.x_min, w.y_min),
        Vec2::new(w.x_max, w.y_min),
        Vec2::new(w.x_min, w.y_max),
        Vec2::new(w.x_max, w.y_max),
    ];
    corners
        .iter()
        .map(|c| mode.projection(*c))
        .fold(0.0, f64::max)
}

pub fn omega_probe<M: PlaneMap + ?Sized>(
    cloud: &ConfinementCloud,
    map: &M,
    opts: &OmegaOptions,
) -> Result<OmegaReport, ConfinementError> {
    if cloud.is_empty() {
        return Err(ConfinementError::EmptyCloud);
    }
    let pool = cloud.unbounded_points();
    let stride = pool.len().div_ceil(opts.max_samples.max(1)).max(1);
    let samples: Vec<Vec2> = pool.iter().step_by(stride).copied().collect();
    let band = band_width(cloud.mode, &cloud.grid.window);
    let total = cloud.horizon + opts.extra_iterations;
    let probes = par::map_slice(&samples, |z| probe_point(map, cloud.mode, band, *z, total));
    let drifts: Vec<f64> = probes.iter().filter(|p| p.survived).map(|p| p.drift).collect();
    let survivors = drifts.len();
    let persistent = probes.iter().filter(|p| p.survived && p.in_band).count();
    let drifting = drifts.iter().filter(|&&d| d > opts.drift_threshold).count();
    let vacuous = survivors == 0;
    let verdict = if persistent > 0 {
        OmegaVerdict::Persistent
    } else if vacuous || drifting as f64 >= opts.escape_fraction * survivors as f64 {
        OmegaVerdict::Escaping
    } else {
        OmegaVerdict::Inconclusive
    };
    let finite: Vec<f64> = drifts.iter().copied().filter(|d| d.is_finite()).collect();
    let (lo, hi) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
    let mean = if finite.is_empty() {
        0.0
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    };
    Ok(OmegaReport {
        verdict,
        vacuous,
        sampled: samples.len(),
        survivors,
        persistent,
        drifting,
        drift_min: if finite.is_empty() { 0.0 } else { lo },
        drift_max: if finite.is_empty() { 0.0 } else { hi },
        drift_mean: mean,
        histogram: histogram(&finite, 20),
    })
}

fn histogram(xs: &[f64], bins: usize) -> Vec<(f64, usize)> {
    if xs.is_empty() {
        return Vec::new();
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return vec![(lo, xs.len())];
    }
    let w = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        let b = (((x - lo) / w) as usize).min(bins - 1);
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| (lo + b as f64 * w, c))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub id: usize,
    pub cells: usize,
    pub diameter: f64,
    pub touches_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    pub region: Rect,
    pub grid_step: f64,
    pub disks: Vec<Disk>,
    /// Largest diameter among disks that stay off the region boundary.
    pub max_diameter: f64,
    /// Cell labels, row-major, `None` for obstacle cells.
    #[serde(skip)]
    pub labels: Vec<Option<u32>>,
    pub nx: usize,
    pub ny: usize,
}

impl DiskReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("id,cells,diameter,touches_boundary\n");
        for d in &self.disks {
            s.push_str(&format!("{},{},{},{}\n", d.id, d.cells, d.diameter, d.touches_boundary));
        }
        s
    }
}

/// Rasterize `region` into square cells of side `grid_step`, delete every
/// cell holding an obstacle point, and measure the 4-connected components
/// of what is left. Diameters are taken over the corners of the component's
/// cells grown by half a step, which splits each bordering obstacle cell
/// evenly between its neighbours.
pub fn complement_disk_stats(
    obstacle: &[Vec2],
    region: Rect,
    grid_step: f64,
) -> Result<DiskReport, ConfinementError> {
    if obstacle.is_empty() {
        return Err(ConfinementError::EmptyObstacle);
    }
    if !(grid_step > 0.0) || region.width() < grid_step || region.height() < grid_step {
        return Err(ConfinementError::RegionTooSmall);
    }
    let nx = (region.width() / grid_step).round().max(1.0) as usize;
    let ny = (region.height() / grid_step).round().max(1.0) as usize;
    let mut free = vec![true; nx * ny];
    for p in obstacle {
        if !region.contains(*p) {
            continue;
        }
        let i = (((p.x - region.x_min) / grid_step).floor() as usize).min(nx - 1);
        let j = (((p.y - region.y_min) / grid_step).floor() as usize).min(ny - 1);
        free[j * nx + i] = false;
    }
    let (labels, comps) = label_components(&free, nx, ny, false);
    let mut corners: Vec<Vec<Vec2>> = vec![Vec::new(); comps.len()];
    for (idx, &l) in labels.iter().enumerate() {
        if l == u32::MAX {
            continue;
        }
        let (i, j) = ((idx % nx) as f64, (idx / nx) as f64);
        let x0 = region.x_min + (i - 0.5) * grid_step;
        let y0 = region.y_min + (j - 0.5) * grid_step;
        let side = 2.0 * grid_step;
        corners[l as usize].extend([
            Vec2::new(x0, y0),
            Vec2::new(x0 + side, y0),
            Vec2::new(x0, y0 + side),
            Vec2::new(x0 + side, y0 + side),
        ]);
    }
    let diameters = par::map_slice(&corners, |c| diameter(c));
    let disks: Vec<Disk> = comps
        .iter()
        .enumerate()
        .map(|(id, c)| Disk {
            id,
            cells: c.size,
            diameter: diameters[id],
            touches_boundary: c.touches_boundary,
        })
        .collect();
    let max_diameter = disks
        .iter()
        .filter(|d| !d.touches_boundary)
        .map(|d| d.diameter)
        .fold(0.0, f64::max);
    Ok(DiskReport {
        region,
        grid_step,
        disks,
        max_diameter,
        labels: labels
            .into_iter()
            .map(|l| (l != u32::MAX).then_some(l))
            .collect(),
        nx,
        ny,
    })
}

fn diameter(points: &[Vec2]) -> f64 {
    let hull = convex_hull(points);
    let mut best: f64 = 0.0;
    for (a, p) in hull.iter().enumerate() {
        for q in &hull[a + 1..] {
            best = best.max(p.dist(*q));
        }
    }
    if hull.len() < 2 && points.len() > 1 {
        for p in points {
            best = best.max(p.dist(points[0]));
        }
    }
    best
}
