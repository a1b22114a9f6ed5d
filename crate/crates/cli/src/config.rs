//! Run configuration: `[section]` headers followed by `key = value` lines.
//! `#` starts a comment. Numbers may be written as fractions (`1/128`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use rotset_core::confinement::ConfinementMode;
use rotset_core::{HomotopyMatrix, LiftedTorusMap, PlaneMap};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        msg: msg.into(),
    })
}

const SCHEMA: &[(&str, &[&str])] = &[
    ("map", &["map", "k", "epsilon", "a", "b", "dx", "dy", "escape_bound"]),
    ("run", &["command", "rng_seed", "out"]),
    ("rotation", &["nx", "ny", "n1", "n2"]),
    (
        "periodic",
        &["period", "p", "r", "nx", "ny", "jitter", "residual_tol", "max_iter"],
    ),
    (
        "manifold",
        &["x", "y", "budget", "h_max", "delta_seed", "vertex_cap", "scan_range"],
    ),
    (
        "confinement",
        &[
            "mode",
            "theta",
            "half_width",
            "step",
            "horizon",
            "extra_iterations",
            "max_samples",
            "drift_threshold",
            "escape_fraction",
        ],
    ),
    (
        "disks",
        &["x_min", "x_max", "y_min", "y_max", "step", "tiling", "budget", "max_diameter"],
    ),
    ("mixing", &["u_x", "u_y", "v_x", "v_y", "radius", "n_max", "per_radius"]),
    ("sft", &["file", "vertices", "edges", "rho", "horizon", "cycle_cap"]),
    (
        "check",
        &["deck_points", "oracle_budget", "scan", "omega", "disks", "mixing"],
    ),
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

/// Sections and entries as written, after duplicate resolution.
#[derive(Debug, Default)]
struct Raw {
    sections: BTreeMap<String, (usize, BTreeMap<String, Entry>)>,
    warnings: Vec<String>,
    last_line: usize,
}

fn parse_raw(text: &str) -> Result<Raw, ConfigError> {
    let mut raw = Raw::default();
    let mut current: Option<String> = None;
    for (idx, line) in text.lines().enumerate() {
        let n = idx + 1;
        raw.last_line = n;
        let line = match line.find('#') {
            Some(c) => &line[..c],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(n, format!("malformed section header `{line}`"));
            };
            let name = name.trim().to_string();
            if !SCHEMA.iter().any(|(s, _)| *s == name) {
                return err(n, format!("unknown section `[{name}]`"));
            }
            raw.sections.entry(name.clone()).or_insert((n, BTreeMap::new()));
            current = Some(name);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(n, format!("expected `key = value`, got `{line}`"));
        };
        let key = key.trim().to_string();
        let value = value.trim().trim_matches('"').to_string();
        let Some(section) = current.clone() else {
            return err(n, format!("key `{key}` appears before any section header"));
        };
        let allowed = SCHEMA.iter().find(|(s, _)| *s == section).unwrap().1;
        if !allowed.contains(&key.as_str()) {
            return err(n, format!("unknown key `{key}` in [{section}]"));
        }
        let entries = &mut raw.sections.get_mut(&section).unwrap().1;
        if let Some(prev) = entries.get(&key) {
            raw.warnings.push(format!(
                "line {n}: duplicate key `{section}.{key}` overrides line {}",
                prev.line
            ));
        }
        entries.insert(key, Entry { value, line: n });
    }
    Ok(raw)
}

/// Typed access to one section.
struct Section<'a> {
    name: &'static str,
    entries: Option<&'a BTreeMap<String, Entry>>,
}

fn parse_number(s: &str) -> Option<f64> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?);
        return (b != 0.0).then_some(a / b);
    }
    s.parse::<f64>().ok()
}

impl<'a> Section<'a> {
    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.entries.and_then(|e| e.get(key))
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.entry(key).map(|e| e.line)
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => match parse_number(&e.value) {
                Some(v) if v.is_finite() => Ok(v),
                _ => err(e.line, format!("`{}.{key}` expects a number, got `{}`", self.name, e.value)),
            },
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.f64(key, default)?;
        if v <= 0.0 {
            return err(
                self.line_of(key).unwrap_or(0),
                format!("`{}.{key}` must be positive", self.name),
            );
        }
        Ok(v)
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.entry(key).map(|_| self.f64(key, 0.0)).transpose()
    }

    fn int<T: std::str::FromStr>(&self, key: &str, default: T, what: &str) -> Result<T, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => e.value.parse::<T>().or_else(|_| {
                err(e.line, format!("`{}.{key}` expects {what}, got `{}`", self.name, e.value))
            }),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        let v = self.int(key, default, "a positive integer")?;
        if v == 0 {
            return err(self.line_of(key).unwrap_or(0), format!("`{}.{key}` must be at least 1", self.name));
        }
        Ok(v)
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        self.int(key, default, "a non-negative integer")
    }

    fn i64(&self, key: &str, default: i64) -> Result<i64, ConfigError> {
        self.int(key, default, "an integer")
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                v => err(e.line, format!("`{}.{key}` expects true or false, got `{v}`", self.name)),
            },
        }
    }

    fn string(&self, key: &str) -> Option<String> {
        self.entry(key).map(|e| e.value.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Rotset,
    Vrotset,
    FindPeriodic,
    Grow,
    ScanTranslates,
    Confinement,
    OmegaProbe,
    Disks,
    Mixing,
    SftHull,
    SftOrbit,
    CheckAll,
}

impl Command {
    pub const ALL: [(&'static str, Command); 12] = [
        ("rotset", Command::Rotset),
        ("vrotset", Command::Vrotset),
        ("find-periodic", Command::FindPeriodic),
        ("grow", Command::Grow),
        ("scan-translates", Command::ScanTranslates),
        ("confinement", Command::Confinement),
        ("omega-probe", Command::OmegaProbe),
        ("disks", Command::Disks),
        ("mixing", Command::Mixing),
        ("sft-hull", Command::SftHull),
        ("sft-orbit", Command::SftOrbit),
        ("check-all", Command::CheckAll),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, c)| *c == self).unwrap().0
    }

    pub fn needs_map(self) -> bool {
        !matches!(self, Command::SftHull | Command::SftOrbit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum MapChoice {
    Standard { k: f64, epsilon: f64 },
    DoubleShear { a: f64, b: f64 },
    Translation { dx: f64, dy: f64 },
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapConfig {
    #[serde(flatten)]
    pub choice: MapChoice,
    pub escape_bound: Option<f64>,
}

impl MapConfig {
    pub fn build(&self) -> LiftedTorusMap {
        let m = match self.choice {
            MapChoice::Standard { k, epsilon } => LiftedTorusMap::standard(k, epsilon),
            MapChoice::DoubleShear { a, b } => LiftedTorusMap::double_shear(a, b),
            MapChoice::Translation { dx, dy } => LiftedTorusMap::translation(dx, dy),
            MapChoice::Identity => LiftedTorusMap::identity(),
        };
        match self.escape_bound {
            Some(b) => m.with_escape_bound(b),
            None => m,
        }
    }

    pub fn is_dehn(&self) -> bool {
        self.build().homotopy().is_some_and(|h: HomotopyMatrix| h.is_dehn())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationConfig {
    pub nx: usize,
    pub ny: usize,
    pub n1: u64,
    pub n2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicConfig {
    pub period: u32,
    pub p: i64,
    pub r: i64,
    pub nx: usize,
    pub ny: usize,
    pub jitter: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldConfig {
    /// Newton seed for the owner point; otherwise the first saddle found by
    /// the periodic sweep.
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub budget: f64,
    pub h_max: f64,
    pub delta_seed: f64,
    pub vertex_cap: usize,
    pub scan_range: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    South,
    North,
    Both,
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfinementConfig {
    pub mode: ModeChoice,
    pub theta: f64,
    pub half_width: f64,
    pub step: f64,
    pub horizon: u64,
    pub extra_iterations: u64,
    pub max_samples: usize,
    pub drift_threshold: f64,
    pub escape_fraction: f64,
}

impl ConfinementConfig {
    pub fn modes(&self) -> Vec<ConfinementMode> {
        match self.mode {
            ModeChoice::South => vec![ConfinementMode::South],
            ModeChoice::North => vec![ConfinementMode::North],
            ModeChoice::Both => vec![ConfinementMode::South, ConfinementMode::North],
            ModeChoice::Theta => vec![ConfinementMode::Theta { theta: self.theta }],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisksConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub step: f64,
    pub tiling: i64,
    pub budget: f64,
    pub max_diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingConfig {
    pub u_x: f64,
    pub u_y: f64,
    pub v_x: f64,
    pub v_y: f64,
    pub radius: f64,
    pub n_max: u64,
    pub per_radius: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SftConfig {
    pub file: Option<String>,
    pub vertices: Option<usize>,
    pub edges: Option<String>,
    pub rho: Option<String>,
    pub horizon: u64,
    pub cycle_cap: usize,
}

impl SftConfig {
    pub fn is_set(&self) -> bool {
        self.file.is_some() || self.edges.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    pub deck_points: usize,
    pub oracle_budget: f64,
    pub scan: bool,
    pub omega: bool,
    pub disks: bool,
    pub mixing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub rng_seed: u64,
    /// Output directory from the config; kept out of the manifest so the
    /// manifest does not depend on where the run was written.
    #[serde(skip)]
    pub out: Option<String>,
    /// Directory of the config file, for relative `sft.file` paths.
    #[serde(skip)]
    pub base_dir: PathBuf,
    pub map: Option<MapConfig>,
    pub rotation: RotationConfig,
    pub periodic: PeriodicConfig,
    pub manifold: ManifoldConfig,
    pub confinement: ConfinementConfig,
    pub disks: DisksConfig,
    pub mixing: MixingConfig,
    pub sft: SftConfig,
    pub check: CheckConfig,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

fn parse_map(s: &Section, header_line: usize) -> Result<MapConfig, ConfigError> {
    let Some(name) = s.entry("map") else {
        return err(header_line, "[map] needs `map = standard | double-shear | translation | identity`");
    };
    let (choice, used): (MapChoice, &[&str]) = match name.value.as_str() {
        "standard" => (
            MapChoice::Standard {
                k: s.f64("k", 0.0)?,
                epsilon: s.f64("epsilon", 0.0)?,
            },
            &["k", "epsilon"],
        ),
        "double-shear" => (
            MapChoice::DoubleShear {
                a: s.f64("a", 0.0)?,
                b: s.f64("b", 0.0)?,
            },
            &["a", "b"],
        ),
        "translation" => (
            MapChoice::Translation {
                dx: s.f64("dx", 0.0)?,
                dy: s.f64("dy", 0.0)?,
            },
            &["dx", "dy"],
        ),
        "identity" => (MapChoice::Identity, &[]),
        other => return err(name.line, format!("unknown map `{other}`")),
    };
    for key in ["k", "epsilon", "a", "b", "dx", "dy"] {
        if !used.contains(&key) {
            if let Some(line) = s.line_of(key) {
                return err(line, format!("`{key}` does not apply to map `{}`", name.value));
            }
        }
    }
    let escape_bound = s.opt_f64("escape_bound")?;
    if let Some(b) = escape_bound {
        if b <= 0.0 {
            return err(s.line_of("escape_bound").unwrap(), "`map.escape_bound` must be positive");
        }
    }
    Ok(MapConfig { choice, escape_bound })
}

/// Parse and resolve a configuration with every default filled in.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw = parse_raw(text)?;
    let section = |name: &'static str| Section {
        name,
        entries: raw.sections.get(name).map(|s| &s.1),
    };
    let end = raw.last_line.max(1);

    let run = section("run");
    let Some(cmd) = run.entry("command") else {
        return err(
            raw.sections.get("run").map_or(end, |s| s.0),
            "missing `command` in [run]",
        );
    };
    let command = match Command::ALL.iter().find(|(n, _)| *n == cmd.value) {
        Some((_, c)) => *c,
        None => return err(cmd.line, format!("unknown command `{}`", cmd.value)),
    };
    let rng_seed = run.u64("rng_seed", 0)?;
    let out = run.string("out");

    let map = match raw.sections.get("map") {
        Some((line, _)) => Some(parse_map(&section("map"), *line)?),
        None if command.needs_map() => return err(end, "missing [map] block"),
        None => None,
    };

    let r = section("rotation");
    let rotation = RotationConfig {
        nx: r.count("nx", 64)?,
        ny: r.count("ny", 64)?,
        n1: r.u64("n1", 1_000)?,
        n2: r.u64("n2", 10_000)?,
    };
    if rotation.n1 == 0 || rotation.n1 >= rotation.n2 {
        return err(
            r.line_of("n2").or(r.line_of("n1")).unwrap_or(end),
            "horizons must satisfy 1 <= n1 < n2",
        );
    }

    let p = section("periodic");
    let periodic = PeriodicConfig {
        period: p.int("period", 1u32, "a positive integer")?,
        p: p.i64("p", 0)?,
        r: p.i64("r", 0)?,
        nx: p.count("nx", 32)?,
        ny: p.count("ny", 32)?,
        jitter: p.f64("jitter", 0.0)?,
        residual_tol: p.positive("residual_tol", 1e-10)?,
        max_iter: p.count("max_iter", 50)?,
    };
    if periodic.period == 0 {
        return err(p.line_of("period").unwrap_or(end), "`periodic.period` must be at least 1");
    }

    let m = section("manifold");
    let manifold = ManifoldConfig {
        x: m.opt_f64("x")?,
        y: m.opt_f64("y")?,
        budget: m.positive("budget", 200.0)?,
        h_max: m.positive("h_max", 1e-3)?,
        delta_seed: m.positive("delta_seed", 1e-6)?,
        vertex_cap: m.count("vertex_cap", 2_000_000)?,
        scan_range: m.i64("scan_range", 1)?,
    };
    if manifold.x.is_some() != manifold.y.is_some() {
        return err(
            m.line_of("x").or(m.line_of("y")).unwrap_or(end),
            "`manifold.x` and `manifold.y` must be given together",
        );
    }
    if manifold.scan_range < 0 {
        return err(m.line_of("scan_range").unwrap_or(end), "`manifold.scan_range` must be >= 0");
    }

    let c = section("confinement");
    let mode = match c.entry("mode") {
        None => ModeChoice::Both,
        Some(e) => match e.value.as_str() {
            "south" => ModeChoice::South,
            "north" => ModeChoice::North,
            "both" => ModeChoice::Both,
            "theta" => ModeChoice::Theta,
            v => return err(e.line, format!("unknown confinement mode `{v}`")),
        },
    };
    let confinement = ConfinementConfig {
        mode,
        theta: c.f64("theta", 0.0)?,
        half_width: c.positive("half_width", 4.0)?,
        step: c.positive("step", 1.0 / 128.0)?,
        horizon: c.u64("horizon", 1_000)?,
        extra_iterations: c.u64("extra_iterations", 10_000)?,
        max_samples: c.count("max_samples", 4096)?,
        drift_threshold: c.f64("drift_threshold", 1e-3)?,
        escape_fraction: c.f64("escape_fraction", 0.99)?,
    };
    if confinement.horizon == 0 {
        return err(c.line_of("horizon").unwrap_or(end), "`confinement.horizon` must be at least 1");
    }
    if let Some(mc) = &map {
        let dehn = mc.is_dehn();
        if dehn && mode == ModeChoice::Theta {
            if let Some(line) = c.line_of("mode") {
                return err(line, "theta mode needs an identity-homotopy map");
            }
        }
    }

    let d = section("disks");
    let disks = DisksConfig {
        x_min: d.f64("x_min", 0.0)?,
        x_max: d.f64("x_max", 2.0)?,
        y_min: d.f64("y_min", 0.0)?,
        y_max: d.f64("y_max", 2.0)?,
        step: d.positive("step", 1.0 / 64.0)?,
        tiling: d.i64("tiling", 3)?,
        budget: d.positive("budget", 50.0)?,
        max_diameter: d.positive("max_diameter", 1.0)?,
    };
    if disks.x_max <= disks.x_min || disks.y_max <= disks.y_min {
        return err(d.line_of("x_max").or(d.line_of("y_max")).unwrap_or(end), "empty disks region");
    }

    let x = section("mixing");
    let mixing = MixingConfig {
        u_x: x.f64("u_x", 0.25)?,
        u_y: x.f64("u_y", 0.25)?,
        v_x: x.f64("v_x", 0.75)?,
        v_y: x.f64("v_y", 0.75)?,
        radius: x.positive("radius", 0.2)?,
        n_max: x.u64("n_max", 200)?,
        per_radius: x.count("per_radius", 64)?,
    };

    let s = section("sft");
    let sft = SftConfig {
        file: s.string("file"),
        vertices: s.entry("vertices").map(|_| s.count("vertices", 1)).transpose()?,
        edges: s.string("edges"),
        rho: s.string("rho"),
        horizon: s.u64("horizon", 10_000)?,
        cycle_cap: s.count("cycle_cap", 10_000)?,
    };
    if sft.file.is_some() && sft.edges.is_some() {
        return err(s.line_of("edges").unwrap(), "give either `sft.file` or `sft.edges`, not both");
    }
    if sft.edges.is_some() && sft.vertices.is_none() {
        return err(s.line_of("edges").unwrap(), "`sft.edges` needs `sft.vertices`");
    }
    if matches!(command, Command::SftHull | Command::SftOrbit) && !sft.is_set() {
        return err(end, "this command needs an [sft] block with `file` or `edges`");
    }
    if command == Command::SftOrbit && sft.rho.is_none() {
        return err(raw.sections.get("sft").map_or(end, |s| s.0), "sft-orbit needs `sft.rho`");
    }

    let k = section("check");
    let check = CheckConfig {
        deck_points: k.count("deck_points", 10_000)?,
        oracle_budget: k.positive("oracle_budget", 20.0)?,
        scan: k.bool("scan", true)?,
        omega: k.bool("omega", true)?,
        disks: k.bool("disks", true)?,
        mixing: k.bool("mixing", true)?,
    };

    if let Some(mc) = &map {
        let dehn = mc.is_dehn();
        if command == Command::Rotset && dehn {
            return err(cmd.line, "rotset needs an identity-homotopy map; use vrotset");
        }
        if command == Command::Vrotset && !dehn {
            return err(cmd.line, "vrotset needs a Dehn-twist map (map = standard)");
        }
    }

    Ok(RunConfig {
        command,
        rng_seed,
        out,
        base_dir: PathBuf::from("."),
        map,
        rotation,
        periodic,
        manifold,
        confinement,
        disks,
        mixing,
        sft,
        check,
        warnings: raw.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config("[map]\nmap = standard\nk = 2\n[run]\ncommand = rotset\n");
        // rotset on a Dehn-twist map is rejected at the command line.
        assert_eq!(c.unwrap_err().line, 5);
        let c = parse_config("[map]\nmap = standard\nk = 2\n[run]\ncommand = vrotset\n").unwrap();
        assert_eq!((c.rotation.nx, c.rotation.ny), (64, 64));
        assert_eq!((c.rotation.n1, c.rotation.n2), (1_000, 10_000));
        assert_eq!(c.map.unwrap().choice, MapChoice::Standard { k: 2.0, epsilon: 0.0 });
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn type_error_has_line() {
        let e = parse_config("[map]\nmap = standard\nk = abc\n[run]\ncommand = vrotset\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("abc"));
    }

    #[test]
    fn unknown_key_and_section() {
        let e = parse_config("[map]\nmap = standard\nkk = 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_config("[run]\ncommand = vrotset\n[maps]\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn duplicate_is_last_wins() {
        let c = parse_config("[map]\nmap = standard\nk = 1\nk = 2 # again\n[run]\ncommand = vrotset\n").unwrap();
        assert_eq!(c.map.unwrap().choice, MapChoice::Standard { k: 2.0, epsilon: 0.0 });
        assert_eq!(c.warnings.len(), 1);
        assert!(c.warnings[0].starts_with("line 4"));
    }

    #[test]
    fn missing_map_block() {
        let e = parse_config("[run]\ncommand = grow\n").unwrap_err();
        assert!(e.msg.contains("[map]"));
        let c = parse_config("[run]\ncommand = sft-hull\n[sft]\nvertices = 1\nedges = 0 0 1 0; 0 0 0 1\n").unwrap();
        assert!(c.map.is_none());
    }

    #[test]
    fn fractions_and_foreign_keys() {
        let c = parse_config("[map]\nmap=standard\n[run]\ncommand=confinement\n[confinement]\nstep = 1/64\n").unwrap();
        assert_eq!(c.confinement.step, 1.0 / 64.0);
        let e = parse_config("[map]\nmap = standard\na = 1\n[run]\ncommand = grow\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
