//! `check-all`: the whole pipeline on one map, summarized as a table of
//! pass / fail / inconclusive / skipped rows.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use rotset_core::confinement::OmegaVerdict;
use rotset_core::manifold::{grow_manifold, inverse_owner, Branch, ManifoldKind};
use rotset_core::map::deck_residual;
use rotset_core::periodic::{seed_stream, Classification, PeriodicPoint};
use rotset_core::rotation::{estimate_rotation_set, estimate_vertical_rotation_set};
use rotset_core::sft::{bounded_deviation_orbit, cycle_rotation_hull, verify_deviation};
use rotset_core::{LiftedTorusMap, PlaneMap, Vec2};

use crate::config::RunConfig;
use crate::run::{
    curve_name, disk_report, fit, grow_all, growth_options, horizons, load_sft, mixing_report, omega_runs,
    owner_point, parse_rho, scan_table, seed_grid, sweep, Outcome, OutputFile, RunError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Serialize)]
struct CheckOut {
    hypothesis: bool,
    rows: Vec<Row>,
    details: Value,
}

const DECK_TOL: f64 = 1e-12;
const PULLBACK_TOL: f64 = 0.1;
const ORACLE_TOL: f64 = 1e-8;
pub const HYPOTHESIS_SKIP: &str = "hypothesis not met, skipped";

struct Table {
    rows: Vec<Row>,
    details: serde_json::Map<String, Value>,
}

impl Table {
    fn row(&mut self, check: &str, status: Status, detail: impl Into<String>) {
        self.rows.push(Row {
            check: check.to_string(),
            status,
            detail: detail.into(),
        });
    }

    fn detail<T: Serialize>(&mut self, key: &str, v: &T) {
        self.details.insert(key.to_string(), serde_json::to_value(v).unwrap());
    }
}

fn deck_row(t: &mut Table, cfg: &RunConfig, map: &LiftedTorusMap) {
    let mut rng = seed_stream(cfg.rng_seed, u64::MAX);
    let pts: Vec<Vec2> = (0..cfg.check.deck_points)
        .map(|_| Vec2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
        .collect();
    let inv = map.inverse_map();
    let mut worst_deck: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for &z in &pts {
        for b in -2..=2 {
            for a in -2..=2 {
                worst_deck = worst_deck.max(deck_residual(map, z, [a, b]));
            }
        }
        worst_det = worst_det
            .max((map.jacobian(z).det() - 1.0).abs())
            .max((inv.jacobian(z).det() - 1.0).abs());
    }
    let status = if worst_deck < DECK_TOL && worst_det < DECK_TOL {
        Status::Pass
    } else {
        Status::Fail
    };
    t.row(
        "deck-equivariance",
        status,
        format!(
            "{} points, v in [-2,2]^2: max residual {worst_deck:e}, max |det-1| {worst_det:e}",
            pts.len()
        ),
    );
    t.detail("deck", &json!({"points": pts.len(), "max_residual": worst_deck, "max_det_error": worst_det}));
}

/// Returns whether the rotation hypothesis holds: a Dehn-twist map whose
/// vertical rotation interval holds 0 with margin above the horizon gap.
fn rotation_row(t: &mut Table, cfg: &RunConfig, map: &LiftedTorusMap) -> Result<bool, RunError> {
    let dehn = map.homotopy().is_some_and(|h| h.is_dehn());
    if !dehn {
        let r = estimate_rotation_set(map, &seed_grid(cfg), horizons(cfg)).map_err(|e| RunError::Numerical(e.to_string()))?;
        let hull: Vec<String> = r.hull.iter().map(|v| format!("({}, {})", v.x, v.y)).collect();
        t.row(
            "rotation-set",
            Status::Pass,
            format!("hull {} (gap {:e})", hull.join(" "), r.hausdorff_gap),
        );
        t.detail("rotation", &json!({"hull": r.hull, "hausdorff_gap": r.hausdorff_gap}));
        t.row("hypothesis", Status::Skipped, "needs a Dehn-twist map, skipped");
        return Ok(false);
    }
    let r = estimate_vertical_rotation_set(map, &seed_grid(cfg), horizons(cfg))
        .map_err(|e| RunError::Numerical(e.to_string()))?;
    let shown = if r.lo == r.hi {
        format!("{{{}}}", r.lo)
    } else {
        format!("[{}, {}]", r.lo, r.hi)
    };
    t.row(
        "rotation-interval",
        Status::Pass,
        format!("{shown} (gap {:e})", r.hausdorff_gap),
    );
    let margin = r.interior_margin(0.0);
    let met = margin > 0.0 && margin > r.hausdorff_gap;
    t.row(
        "hypothesis",
        if met { Status::Pass } else { Status::Skipped },
        if met {
            format!("0 interior with margin {margin} > gap {:e}", r.hausdorff_gap)
        } else {
            format!("0 not interior with margin above gap (margin {margin}), gated rows skipped")
        },
    );
    t.detail(
        "rotation",
        &json!({"lo": r.lo, "hi": r.hi, "lo_n1": r.lo_n1, "hi_n1": r.hi_n1, "hausdorff_gap": r.hausdorff_gap}),
    );
    Ok(met)
}

fn periodic_row(t: &mut Table, cfg: &RunConfig, map: &LiftedTorusMap) -> Result<(), RunError> {
    let r = sweep(cfg, map)?;
    let count = |c: Classification| r.orbits.iter().filter(|o| o.classification == c).count();
    let worst = r.orbits.iter().map(|o| o.residual).fold(0.0, f64::max);
    let (status, detail) = if r.orbits.is_empty() {
        (
            Status::Inconclusive,
            format!(
                "no isolated orbit from {} seeds{}",
                r.seeds,
                if r.non_isolated { " (singular Newton: fixed set may be non-isolated)" } else { "" }
            ),
        )
    } else {
        (
            if worst < cfg.periodic.residual_tol { Status::Pass } else { Status::Fail },
            format!(
                "{} orbit(s): {} hyperbolic+, {} hyperbolic-, {} elliptic, {} parabolic; max residual {worst:e}",
                r.orbits.len(),
                count(Classification::HyperbolicPositive),
                count(Classification::HyperbolicNegative),
                count(Classification::Elliptic),
                count(Classification::Parabolic)
            ),
        )
    };
    t.row("periodic-orbits", status, detail);
    t.detail("periodic", &r.orbits);
    Ok(())
}

fn inverse_oracle(cfg: &RunConfig, map: &LiftedTorusMap, owner: &PeriodicPoint) -> Result<(bool, f64), RunError> {
    let inv = map.inverse_map();
    let iowner = inverse_owner(&inv, owner);
    let opts = growth_options(cfg, cfg.check.oracle_budget);
    let mut worst: f64 = 0.0;
    let mut aligned = true;
    for b in [Branch::Plus, Branch::Minus] {
        let s = grow_manifold(map, owner, ManifoldKind::Stable, b, &opts).map_err(|e| RunError::Numerical(e.to_string()))?;
        let u = grow_manifold(&inv, &iowner, ManifoldKind::Unstable, b, &opts)
            .map_err(|e| RunError::Numerical(e.to_string()))?;
        if s.vertices.len() != u.vertices.len() {
            aligned = false;
            continue;
        }
        for (p, q) in s.vertices.iter().zip(&u.vertices) {
            worst = worst.max(p.dist(*q));
        }
    }
    Ok((aligned, worst))
}

pub fn check_all(cfg: &RunConfig, map: &LiftedTorusMap) -> Result<Outcome, RunError> {
    let mut t = Table {
        rows: Vec::new(),
        details: serde_json::Map::new(),
    };
    deck_row(&mut t, cfg, map);
    let hypothesis = rotation_row(&mut t, cfg, map)?;
    periodic_row(&mut t, cfg, map)?;

    let owner = owner_point(cfg, map)?;
    let curves = match &owner {
        None => {
            t.row("manifold-pullback", Status::Skipped, "no hyperbolic periodic point, skipped");
            t.row("manifold-inverse-oracle", Status::Skipped, "no hyperbolic periodic point, skipped");
            None
        }
        Some(pp) => {
            let curves = grow_all(map, pp, &growth_options(cfg, cfg.manifold.budget))?;
            let mut worst: f64 = 0.0;
            let mut fits = serde_json::Map::new();
            for c in &curves {
                let f = fit(map, c)?;
                worst = worst.max(if f.pairs == 0 { f64::INFINITY } else { f.relative_error() });
                fits.insert(curve_name(c), serde_json::to_value(f).unwrap());
            }
            t.row(
                "manifold-pullback",
                if worst < PULLBACK_TOL { Status::Pass } else { Status::Fail },
                format!(
                    "owner ({}, {}) period {}: worst slope error {:.4} over 4 branches",
                    pp.point.x, pp.point.y, pp.period, worst
                ),
            );
            t.detail("owner", pp);
            t.detail("pullback", &fits);
            let (aligned, gap) = inverse_oracle(cfg, map, pp)?;
            t.row(
                "manifold-inverse-oracle",
                if aligned && gap < ORACLE_TOL { Status::Pass } else { Status::Fail },
                if aligned {
                    format!("stable vs inverse unstable, vertexwise max {gap:e}")
                } else {
                    "stable and inverse unstable curves have different vertex counts".to_string()
                },
            );
            Some(curves)
        }
    };

    let gated = |t: &mut Table, name: &str, enabled: bool| -> bool {
        if !hypothesis {
            t.row(name, Status::Skipped, HYPOTHESIS_SKIP);
            false
        } else if !enabled {
            t.row(name, Status::Skipped, "disabled in [check], skipped");
            false
        } else {
            true
        }
    };

    if gated(&mut t, "translate-scan", cfg.check.scan) {
        match &curves {
            None => t.row("translate-scan", Status::Skipped, "no hyperbolic periodic point, skipped"),
            Some(curves) => {
                let table = scan_table(cfg, curves);
                let r = cfg.manifold.scan_range.min(1);
                let required: Vec<[i64; 2]> = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]
                    .into_iter()
                    .filter(|v: &[i64; 2]| v[0].abs() <= r && v[1].abs() <= r)
                    .collect();
                let missing: Vec<String> = required
                    .iter()
                    .filter(|v| !table.get(**v).is_some_and(|c| c.has_witness()))
                    .map(|v| format!("({},{})", v[0], v[1]))
                    .collect();
                let found = table.cells.iter().filter(|c| c.has_witness()).count();
                let status = if missing.is_empty() { Status::Pass } else { Status::Inconclusive };
                let mut detail = format!("{found}/{} cells with a witness", table.cells.len());
                if !missing.is_empty() {
                    let _ = write!(detail, "; not found at budget: {}", missing.join(" "));
                }
                t.row("translate-scan", status, detail);
                let cells: Vec<Value> = table
                    .cells
                    .iter()
                    .map(|c| json!({"translate": c.translate, "witness": c.has_witness()}))
                    .collect();
                t.detail("scan", &cells);
            }
        }
    }

    if gated(&mut t, "omega", cfg.check.omega) {
        let runs = omega_runs(cfg, map)?;
        for r in &runs {
            let rep = &r.report;
            let status = match rep.verdict {
                OmegaVerdict::Escaping => Status::Pass,
                OmegaVerdict::Persistent => Status::Fail,
                OmegaVerdict::Inconclusive => Status::Inconclusive,
            };
            let detail = if rep.vacuous {
                format!("escaping (vacuous: no spanning component among {} points)", r.cloud.points)
            } else {
                format!(
                    "{:?}: {} survivors of {} sampled, {} drifting, {} persistent",
                    rep.verdict, rep.survivors, rep.sampled, rep.drifting, rep.persistent
                )
                .to_lowercase()
            };
            t.row(&format!("omega-{}", r.cloud.mode.label()), status, detail);
        }
        t.detail("omega", &runs);
    }

    if gated(&mut t, "disk-diameters", cfg.check.disks) {
        match &owner {
            None => t.row("disk-diameters", Status::Skipped, "no hyperbolic periodic point, skipped"),
            Some(pp) => {
                let d = disk_report(cfg, map, pp)?;
                let interior = d.disks.iter().filter(|x| !x.touches_boundary).count();
                let status = if interior == 0 {
                    Status::Inconclusive
                } else if d.max_diameter <= cfg.disks.max_diameter {
                    Status::Pass
                } else {
                    Status::Fail
                };
                t.row(
                    "disk-diameters",
                    status,
                    format!(
                        "{} disks, {interior} interior, max interior diameter {} (bound {})",
                        d.disks.len(),
                        d.max_diameter,
                        cfg.disks.max_diameter
                    ),
                );
                t.detail("disks", &json!({"count": d.disks.len(), "interior": interior, "max_diameter": d.max_diameter}));
            }
        }
    }

    if gated(&mut t, "mixing", cfg.check.mixing) {
        let m = mixing_report(cfg, map);
        let (status, detail) = match m.tail_start {
            Some(n) => (Status::Pass, format!("every n in [{n}, {}] hits", cfg.mixing.n_max)),
            None => (
                Status::Inconclusive,
                format!(
                    "no full tail up to n = {} ({} of {} steps hit)",
                    cfg.mixing.n_max,
                    m.hits.iter().filter(|&&h| h > 0).count(),
                    m.hits.len()
                ),
            ),
        };
        t.row("mixing", status, detail);
        t.detail("mixing", &m);
    }

    if cfg.sft.is_set() {
        let g = load_sft(cfg)?;
        let h = cycle_rotation_hull(&g, cfg.sft.cycle_cap).map_err(|e| RunError::Usage(e.to_string()))?;
        let hull: Vec<String> = h.hull.iter().map(|v| v.to_string()).collect();
        t.row("sft-hull", Status::Pass, format!("hull {}", hull.join(" ")));
        if let Some(rho) = &cfg.sft.rho {
            let rho = parse_rho(rho)?;
            let o = bounded_deviation_orbit(&g, &rho, cfg.sft.horizon, cfg.sft.cycle_cap)
                .map_err(|e| RunError::Usage(e.to_string()))?;
            match verify_deviation(&g, &o, cfg.sft.horizon) {
                Ok(v) => t.row(
                    "sft-orbit",
                    Status::Pass,
                    format!("max deviation {v} <= bound {} for n <= {}", o.deviation_bound, cfg.sft.horizon),
                ),
                Err(e) => t.row("sft-orbit", Status::Fail, e.to_string()),
            }
        }
    }

    let passed = t.rows.iter().all(|r| r.status != Status::Fail);
    let mut report = String::new();
    let width = t.rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
    for r in &t.rows {
        let _ = writeln!(report, "{:<width$}  {:<12}  {}", r.check, r.status.label(), r.detail);
    }
    let mut csv = String::from("check,status,detail\n");
    for r in &t.rows {
        let _ = writeln!(csv, "{},{},\"{}\"", r.check, r.status.label(), r.detail.replace('"', "'"));
    }
    let out = CheckOut {
        hypothesis,
        rows: t.rows,
        details: Value::Object(t.details),
    };
    Ok(Outcome {
        files: vec![OutputFile::json("check.json", &out), OutputFile::text("check.csv", csv)],
        passed,
        report,
    })
}
