//! Command pipelines. Each command returns its output files in memory; the
//! caller writes them only after the whole command succeeded.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use rotset_core::confinement::{
    complement_disk_stats, compute_confinement, omega_probe, ConfinementCloud, ConfinementMode, OmegaOptions,
    OmegaReport, WindowGrid,
};
use rotset_core::manifold::{
    grow_manifold, pullback_fit, Branch, GrowthLog, GrowthOptions, ManifoldCurve, ManifoldKind, PullbackFit,
};
use rotset_core::periodic::{
    newton_periodic, sweep_periodic, Classification, NewtonOptions, PeriodicPoint, SweepOptions, SweepReport,
};
use rotset_core::probes::{mixing_probe, Ball, MixingReport};
use rotset_core::rotation::{
    estimate_rotation_set, estimate_vertical_rotation_set, samples_csv, Horizons, SeedGrid,
};
use rotset_core::sft::{
    bounded_deviation_orbit, cycle_rotation_hull, deviation_profile, parse_rational, verify_deviation, QVec,
    WeightedSft,
};
use rotset_core::transversality::{translate_scan, RectangleSpec, ScanOutcome, ScanTable, TranslateRange};
use rotset_core::{LiftedTorusMap, Rect, SftError, Vec2};

use crate::config::{Command, ConfigError, RunConfig};
use crate::svg::{thin, Plot};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical abort: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Usage(_) | RunError::Io(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> RunError {
    RunError::Numerical(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn text(name: &str, s: String) -> Self {
        Self {
            name: name.to_string(),
            bytes: s.into_bytes(),
        }
    }

    pub fn json<T: Serialize>(name: &str, v: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(v).expect("serializable output");
        bytes.push(b'\n');
        Self {
            name: name.to_string(),
            bytes,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<OutputFile>,
    /// False when a check failed (exit status 1).
    pub passed: bool,
    /// Human-readable summary for stdout.
    pub report: String,
}

impl Outcome {
    fn ok(files: Vec<OutputFile>, report: String) -> Self {
        Self {
            files,
            passed: true,
            report,
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let map = cfg.map.as_ref().map(|m| m.build());
    let need_map = || map.as_ref().ok_or_else(|| RunError::Usage("command needs a [map] block".into()));
    match cfg.command {
        Command::Rotset => rotset(cfg, need_map()?),
        Command::Vrotset => vrotset(cfg, need_map()?),
        Command::FindPeriodic => find_periodic(cfg, need_map()?),
        Command::Grow => grow(cfg, need_map()?),
        Command::ScanTranslates => scan(cfg, need_map()?),
        Command::Confinement => confinement(cfg, need_map()?),
        Command::OmegaProbe => omega(cfg, need_map()?),
        Command::Disks => disks(cfg, need_map()?),
        Command::Mixing => mixing(cfg, need_map()?),
        Command::SftHull => sft_hull(cfg),
        Command::SftOrbit => sft_orbit(cfg),
        Command::CheckAll => crate::check::check_all(cfg, need_map()?),
    }
}

pub fn seed_grid(cfg: &RunConfig) -> SeedGrid {
    SeedGrid::new(Rect::new(0.0, 1.0, 0.0, 1.0), cfg.rotation.nx, cfg.rotation.ny)
}

pub fn horizons(cfg: &RunConfig) -> Horizons {
    Horizons::new(cfg.rotation.n1, cfg.rotation.n2)
}

#[derive(Serialize)]
struct PolygonOut<'a> {
    hull: &'a [Vec2],
    hull_n1: &'a [Vec2],
    hausdorff_gap: f64,
    horizons: Horizons,
    samples: usize,
}

fn rotset(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let r = estimate_rotation_set(map, &seed_grid(cfg), horizons(cfg)).map_err(numerical)?;
    let mut plot = Plot::fitting(&r.sample_means.iter().map(|s| s.mean).collect::<Vec<_>>());
    let finals: Vec<Vec2> = r.sample_means.iter().filter(|s| s.horizon == r.horizons.n2).map(|s| s.mean).collect();
    plot.points(&finals, "steelblue");
    if r.hull.len() >= 3 {
        plot.polygon(&r.hull, "crimson");
    } else {
        plot.polyline(&r.hull, "crimson");
    }
    let report = format!(
        "rotation set: {} hull vertices, hausdorff gap {:e}\n",
        r.hull.len(),
        r.hausdorff_gap
    );
    Ok(Outcome::ok(
        vec![
            OutputFile::json(
                "rotation.json",
                &PolygonOut {
                    hull: &r.hull,
                    hull_n1: &r.hull_n1,
                    hausdorff_gap: r.hausdorff_gap,
                    horizons: r.horizons,
                    samples: r.sample_means.len(),
                },
            ),
            OutputFile::text("samples.csv", samples_csv(&r.sample_means)),
            OutputFile::text("rotation.svg", plot.finish()),
        ],
        report,
    ))
}

#[derive(Serialize)]
struct IntervalOut {
    lo: f64,
    hi: f64,
    lo_n1: f64,
    hi_n1: f64,
    hausdorff_gap: f64,
    horizons: Horizons,
    samples: usize,
}

fn vrotset(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let r = estimate_vertical_rotation_set(map, &seed_grid(cfg), horizons(cfg)).map_err(numerical)?;
    let report = format!("vertical rotation interval: [{}, {}], gap {:e}\n", r.lo, r.hi, r.hausdorff_gap);
    Ok(Outcome::ok(
        vec![
            OutputFile::json(
                "vrotation.json",
                &IntervalOut {
                    lo: r.lo,
                    hi: r.hi,
                    lo_n1: r.lo_n1,
                    hi_n1: r.hi_n1,
                    hausdorff_gap: r.hausdorff_gap,
                    horizons: r.horizons,
                    samples: r.sample_means.len(),
                },
            ),
            OutputFile::text("samples.csv", samples_csv(&r.sample_means)),
        ],
        report,
    ))
}

pub fn sweep(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<SweepReport, RunError> {
    let p = &cfg.periodic;
    let opts = SweepOptions {
        newton: NewtonOptions {
            residual_tol: p.residual_tol,
            max_iter: p.max_iter,
            ..NewtonOptions::default()
        },
        jitter: p.jitter,
        rng_seed: cfg.rng_seed,
        ..SweepOptions::default()
    };
    let grid = SeedGrid::new(Rect::new(0.0, 1.0, 0.0, 1.0), p.nx, p.ny);
    sweep_periodic(map, p.period, [p.p, p.r], &grid, &opts).map_err(numerical)
}

fn periodic_csv(orbits: &[PeriodicPoint]) -> String {
    let mut s = String::from("x,y,period,p,r,trace,classification,residual\n");
    for o in orbits {
        let class = serde_json::to_value(o.classification).unwrap();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            o.point.x,
            o.point.y,
            o.period,
            o.translation[0],
            o.translation[1],
            o.jacobian.trace(),
            class.as_str().unwrap_or(""),
            o.residual
        );
    }
    s
}

fn find_periodic(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let r = sweep(cfg, map)?;
    let report = format!(
        "{} orbit(s) from {} seeds ({} singular, {} failed)\n",
        r.orbits.len(),
        r.seeds,
        r.singular_seeds,
        r.failed_seeds
    );
    Ok(Outcome::ok(
        vec![
            OutputFile::json("periodic.json", &r),
            OutputFile::text("periodic.csv", periodic_csv(&r.orbits)),
        ],
        report,
    ))
}

/// Saddle whose manifolds are grown: Newton from the configured seed, or
/// the first saddle of the sweep. Flip saddles are used through their
/// period-doubled version.
pub fn owner_point(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Option<PeriodicPoint>, RunError> {
    let positive = |pp: PeriodicPoint| match pp.classification {
        Classification::HyperbolicPositive => Some(pp),
        Classification::HyperbolicNegative => Some(pp.doubled(map)),
        _ => None,
    };
    if let (Some(x), Some(y)) = (cfg.manifold.x, cfg.manifold.y) {
        let p = &cfg.periodic;
        let opts = NewtonOptions {
            residual_tol: p.residual_tol,
            max_iter: p.max_iter,
            ..NewtonOptions::default()
        };
        let pp = newton_periodic(map, p.period, [p.p, p.r], Vec2::new(x, y), &opts).map_err(numerical)?;
        return Ok(positive(pp));
    }
    let report = sweep(cfg, map)?;
    let mut orbits = report.orbits;
    // Prefer a saddle with positive eigenvalues over a doubled flip saddle.
    orbits.sort_by_key(|o| o.classification != Classification::HyperbolicPositive);
    Ok(orbits.into_iter().find_map(positive))
}

pub fn growth_options(cfg: &RunConfig, budget: f64) -> GrowthOptions {
    GrowthOptions {
        arclength_budget: budget,
        h_max: cfg.manifold.h_max,
        delta_seed: cfg.manifold.delta_seed,
        vertex_cap: cfg.manifold.vertex_cap,
    }
}

pub const BRANCHES: [(ManifoldKind, Branch); 4] = [
    (ManifoldKind::Unstable, Branch::Plus),
    (ManifoldKind::Unstable, Branch::Minus),
    (ManifoldKind::Stable, Branch::Plus),
    (ManifoldKind::Stable, Branch::Minus),
];

pub fn curve_name(c: &ManifoldCurve) -> String {
    let k = match c.kind {
        ManifoldKind::Unstable => "unstable",
        ManifoldKind::Stable => "stable",
    };
    let b = match c.branch {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    };
    format!("{k}_{b}")
}

pub fn grow_all(
    map: &LiftedTorusMap,
    owner: &PeriodicPoint,
    opts: &GrowthOptions,
) -> Result<Vec<ManifoldCurve>, RunError> {
    BRANCHES
        .iter()
        .map(|&(k, b)| grow_manifold(map, owner, k, b, opts).map_err(numerical))
        .collect()
}

fn require_owner(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<PeriodicPoint, RunError> {
    owner_point(cfg, map)?.ok_or_else(|| RunError::Numerical("no hyperbolic periodic point found".into()))
}

/// Pullback band: above round-off, inside the linear regime.
pub const PULLBACK_BAND: (f64, f64) = (1e-6, 1e-3);

pub fn fit(map: &LiftedTorusMap, c: &ManifoldCurve) -> Result<PullbackFit, RunError> {
    let stride = (c.vertices.len() / 300).max(1);
    pullback_fit(map, c, stride, PULLBACK_BAND, 60).map_err(numerical)
}

#[derive(Serialize)]
struct CurveOut {
    name: String,
    kind: ManifoldKind,
    branch: Branch,
    vertices: usize,
    arclength: f64,
    max_spacing: f64,
    growth_log: GrowthLog,
    pullback: PullbackFit,
}

#[derive(Serialize)]
struct GrowOut<'a> {
    owner: &'a PeriodicPoint,
    options: GrowthOptions,
    curves: Vec<CurveOut>,
}

fn tangle_svg(curves: &[ManifoldCurve]) -> String {
    let all: Vec<Vec2> = curves.iter().flat_map(|c| thin(&c.vertices, 5_000)).collect();
    let mut plot = Plot::fitting(&all);
    for c in curves {
        let color = match c.kind {
            ManifoldKind::Unstable => "crimson",
            ManifoldKind::Stable => "steelblue",
        };
        plot.polyline(&thin(&c.vertices, 5_000), color);
    }
    plot.finish()
}

fn grow(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let owner = require_owner(cfg, map)?;
    let opts = growth_options(cfg, cfg.manifold.budget);
    let curves = grow_all(map, &owner, &opts)?;
    let mut files = Vec::new();
    let mut out = Vec::new();
    let mut report = String::new();
    for c in &curves {
        let name = curve_name(c);
        let f = fit(map, c)?;
        let _ = writeln!(
            report,
            "{name}: {} vertices, arclength {:.3}, pullback slope {:.4} (expected {:.4})",
            c.vertices.len(),
            c.arclength,
            f.slope,
            f.expected_slope
        );
        files.push(OutputFile::text(&format!("{name}.csv"), c.vertices_csv()));
        out.push(CurveOut {
            name,
            kind: c.kind,
            branch: c.branch,
            vertices: c.vertices.len(),
            arclength: c.arclength,
            max_spacing: c.max_spacing(),
            growth_log: c.growth_log,
            pullback: f,
        });
    }
    files.push(OutputFile::json(
        "manifolds.json",
        &GrowOut {
            owner: &owner,
            options: opts,
            curves: out,
        },
    ));
    files.push(OutputFile::text("tangle.svg", tangle_svg(&curves)));
    Ok(Outcome::ok(files, report))
}

pub fn scan_table(cfg: &RunConfig, curves: &[ManifoldCurve]) -> ScanTable {
    let (u, s): (Vec<ManifoldCurve>, Vec<ManifoldCurve>) =
        curves.iter().cloned().partition(|c| c.kind == ManifoldKind::Unstable);
    translate_scan(
        &u,
        &s,
        TranslateRange::square(cfg.manifold.scan_range),
        RectangleSpec::from_h_max(cfg.manifold.h_max),
    )
}

fn scan_csv(t: &ScanTable) -> String {
    let mut s = String::from("a,b,status,count,x,y\n");
    for c in &t.cells {
        match &c.outcome {
            ScanOutcome::Witness { count, first } => {
                let _ = writeln!(
                    s,
                    "{},{},witness,{},{},{}",
                    c.translate[0], c.translate[1], count, first.location.x, first.location.y
                );
            }
            ScanOutcome::NotFoundAtBudget => {
                let _ = writeln!(s, "{},{},not_found_at_budget,0,,", c.translate[0], c.translate[1]);
            }
        }
    }
    s
}

fn scan(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let owner = require_owner(cfg, map)?;
    let curves = grow_all(map, &owner, &growth_options(cfg, cfg.manifold.budget))?;
    let table = scan_table(cfg, &curves);
    let mut report = String::new();
    for c in &table.cells {
        let _ = writeln!(
            report,
            "({:>2},{:>2}) {}",
            c.translate[0],
            c.translate[1],
            if c.has_witness() { "witness" } else { "not found at budget" }
        );
    }
    Ok(Outcome::ok(
        vec![OutputFile::json("scan.json", &table), OutputFile::text("scan.csv", scan_csv(&table))],
        report,
    ))
}

pub fn window(cfg: &RunConfig) -> WindowGrid {
    WindowGrid::square(cfg.confinement.half_width, cfg.confinement.step)
}

pub fn clouds(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Vec<ConfinementCloud>, RunError> {
    let grid = window(cfg);
    cfg.confinement
        .modes()
        .into_iter()
        .map(|m| compute_confinement(map, m, &grid, cfg.confinement.horizon).map_err(numerical))
        .collect()
}

#[derive(Serialize)]
pub struct CloudSummary {
    pub mode: ConfinementMode,
    pub horizon: u64,
    pub grid: WindowGrid,
    pub points: usize,
    pub components: usize,
    pub boundary_components: usize,
    pub spanning_components: usize,
    pub unbounded_points: usize,
}

pub fn summarize(c: &ConfinementCloud) -> CloudSummary {
    CloudSummary {
        mode: c.mode,
        horizon: c.horizon,
        grid: c.grid,
        points: c.len(),
        components: c.components.len(),
        boundary_components: c.components.iter().filter(|x| x.touches_boundary).count(),
        spanning_components: c.components.iter().filter(|x| x.candidate_unbounded()).count(),
        unbounded_points: c.unbounded_count(),
    }
}

fn mode_slug(m: &ConfinementMode) -> String {
    match m {
        ConfinementMode::South => "south".into(),
        ConfinementMode::North => "north".into(),
        ConfinementMode::Theta { .. } => "theta".into(),
    }
}

fn confinement(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let clouds = clouds(cfg, map)?;
    let mut files = Vec::new();
    let mut report = String::new();
    let mut summaries = Vec::new();
    for c in &clouds {
        let s = summarize(c);
        let _ = writeln!(
            report,
            "{}: {} points, {} components, {} spanning ({} points)",
            c.mode.label(),
            s.points,
            s.components,
            s.spanning_components,
            s.unbounded_points
        );
        let mut csv = String::from("x,y\n");
        for p in c.unbounded_points() {
            let _ = writeln!(csv, "{},{}", p.x, p.y);
        }
        files.push(OutputFile::text(&format!("cloud_{}.csv", mode_slug(&c.mode)), csv));
        summaries.push(s);
    }
    files.push(OutputFile::json("confinement.json", &summaries));
    Ok(Outcome::ok(files, report))
}

pub fn omega_options(cfg: &RunConfig) -> OmegaOptions {
    OmegaOptions {
        extra_iterations: cfg.confinement.extra_iterations,
        max_samples: cfg.confinement.max_samples,
        drift_threshold: cfg.confinement.drift_threshold,
        escape_fraction: cfg.confinement.escape_fraction,
    }
}

#[derive(Serialize)]
pub struct OmegaOut {
    pub cloud: CloudSummary,
    pub report: OmegaReport,
}

pub fn omega_runs(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Vec<OmegaOut>, RunError> {
    let opts = omega_options(cfg);
    clouds(cfg, map)?
        .into_iter()
        .map(|c| {
            let report = omega_probe(&c, map, &opts).map_err(numerical)?;
            Ok(OmegaOut {
                cloud: summarize(&c),
                report,
            })
        })
        .collect()
}

fn omega(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let runs = omega_runs(cfg, map)?;
    let mut report = String::new();
    for r in &runs {
        let _ = writeln!(
            report,
            "{}: {:?}{} ({} sampled, {} survivors, {} persistent, {} drifting)",
            r.cloud.mode.label(),
            r.report.verdict,
            if r.report.vacuous { ", vacuous" } else { "" },
            r.report.sampled,
            r.report.survivors,
            r.report.persistent,
            r.report.drifting
        );
    }
    Ok(Outcome::ok(vec![OutputFile::json("omega.json", &runs)], report))
}

/// Integer translates of the four branches, tiled over `[-t, t]²`.
pub fn tiled_tangle(curves: &[ManifoldCurve], t: i64) -> Vec<Vec2> {
    let mut out = Vec::new();
    for c in curves {
        for b in -t..=t {
            for a in -t..=t {
                out.extend(c.translated([a, b]));
            }
        }
    }
    out
}

pub fn disk_report(
    cfg: &RunConfig,
    map: &LiftedTorusMap,
    owner: &PeriodicPoint,
) -> Result<rotset_core::confinement::DiskReport, RunError> {
    let d = &cfg.disks;
    let curves = grow_all(map, owner, &growth_options(cfg, d.budget))?;
    let obstacle = tiled_tangle(&curves, d.tiling);
    complement_disk_stats(&obstacle, Rect::new(d.x_min, d.x_max, d.y_min, d.y_max), d.step).map_err(numerical)
}

fn disks(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let owner = require_owner(cfg, map)?;
    let r = disk_report(cfg, map, &owner)?;
    let report = format!(
        "{} complementary disks, max interior diameter {}\n",
        r.disks.len(),
        r.max_diameter
    );
    Ok(Outcome::ok(
        vec![OutputFile::json("disks.json", &r), OutputFile::text("disks.csv", r.csv())],
        report,
    ))
}

pub fn mixing_report(cfg: &RunConfig, map: &LiftedTorusMap) -> MixingReport {
    let m = &cfg.mixing;
    mixing_probe(
        map,
        Ball::new(Vec2::new(m.u_x, m.u_y), m.radius),
        Ball::new(Vec2::new(m.v_x, m.v_y), m.radius),
        m.n_max,
        m.per_radius,
    )
}

fn mixing(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let r = mixing_report(cfg, map);
    let mut csv = String::from("n,hits\n");
    for (i, h) in r.hits.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", i + 1, h);
    }
    let report = match r.tail_start {
        Some(n) => format!("every n in [{n}, {}] hits\n", cfg.mixing.n_max),
        None => format!("no full tail of hits up to n = {}\n", cfg.mixing.n_max),
    };
    Ok(Outcome::ok(
        vec![OutputFile::json("mixing.json", &r), OutputFile::text("mixing.csv", csv)],
        report,
    ))
}

fn sft_input_error(e: SftError) -> RunError {
    RunError::Usage(format!("subshift: {e}"))
}

pub fn load_sft(cfg: &RunConfig) -> Result<WeightedSft, RunError> {
    let s = &cfg.sft;
    let text = if let Some(f) = &s.file {
        let path = cfg.base_dir.join(f);
        std::fs::read_to_string(&path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?
    } else if let Some(edges) = &s.edges {
        let mut t = format!("vertices {}\n", s.vertices.unwrap_or(0));
        for e in edges.split(';') {
            t.push_str(e.trim());
            t.push('\n');
        }
        t
    } else {
        return Err(RunError::Usage("no subshift configured".into()));
    };
    WeightedSft::parse(&text).map_err(sft_input_error)
}

pub fn parse_rho(s: &str) -> Result<QVec, RunError> {
    let bad = || RunError::Usage(format!("`sft.rho` must be `x, y` with rational entries, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(QVec(
        parse_rational(a.trim()).ok_or_else(bad)?,
        parse_rational(b.trim()).ok_or_else(bad)?,
    ))
}

fn sft_hull(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let g = load_sft(cfg)?;
    let h = cycle_rotation_hull(&g, cfg.sft.cycle_cap).map_err(sft_input_error)?;
    let hull: Vec<String> = h.hull.iter().map(|v| v.to_string()).collect();
    let report = format!(
        "{} simple cycles{}, hull dimension {}: {}\n",
        h.cycles.len(),
        if h.partial { " (capped)" } else { "" },
        h.dimension(),
        hull.join(" ")
    );
    Ok(Outcome::ok(vec![OutputFile::json("sft_hull.json", &h)], report))
}

#[derive(Serialize)]
struct OrbitOut<'a> {
    orbit: &'a rotset_core::sft::BoundedDeviationOrbit,
    verified: bool,
    observed_max: Option<f64>,
    violation: Option<String>,
}

fn sft_orbit(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let g = load_sft(cfg)?;
    let rho = parse_rho(cfg.sft.rho.as_deref().unwrap_or(""))?;
    let orbit = bounded_deviation_orbit(&g, &rho, cfg.sft.horizon, cfg.sft.cycle_cap).map_err(sft_input_error)?;
    let check = verify_deviation(&g, &orbit, cfg.sft.horizon);
    let profile = deviation_profile(&g, &orbit, cfg.sft.horizon);
    let mut csv = String::from("n,max_deviation\n");
    for (i, d) in profile.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", i + 1, d);
    }
    let (passed, observed, violation) = match &check {
        Ok(v) => (true, Some(*v), None),
        Err(e) => (false, None, Some(e.to_string())),
    };
    let report = format!(
        "word length {}, bound {}, observed max {} over n <= {}: {}\n",
        orbit.word.len(),
        orbit.deviation_bound,
        observed.map_or("-".to_string(), |v| v.to_string()),
        cfg.sft.horizon,
        if passed { "pass" } else { "FAIL" }
    );
    Ok(Outcome {
        files: vec![
            OutputFile::json(
                "sft_orbit.json",
                &OrbitOut {
                    orbit: &orbit,
                    verified: passed,
                    observed_max: observed,
                    violation,
                },
            ),
            OutputFile::text("deviation.csv", csv),
        ],
        passed,
        report,
    })
}
