//! Driver for `rotset-core` runs: reads a config, executes one command and
//! writes its JSON/CSV/SVG outputs together with a `manifest.json` that
//! echoes the resolved config and hashes every file.

pub mod check;
pub mod config;
pub mod run;
pub mod svg;

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{parse_config, RunConfig};
use crate::run::{execute, Outcome, RunError};

pub const DEFAULT_OUT: &str = "rotset-out";

#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Finished {
    pub out_dir: PathBuf,
    pub passed: bool,
    pub report: String,
    pub warnings: Vec<String>,
}

impl Finished {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    status: &'static str,
    config: &'a RunConfig,
    warnings: &'a [String],
    outputs: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Parse the config file and apply command-line overrides.
pub fn load(inv: &Invocation) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(&inv.config)
        .map_err(|e| RunError::Usage(format!("{}: {e}", inv.config.display())))?;
    let mut cfg = parse_config(&text)?;
    cfg.base_dir = inv
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    if let Some(s) = inv.seed {
        cfg.rng_seed = s;
    }
    Ok(cfg)
}

fn write_outputs(dir: &Path, cfg: &RunConfig, outcome: &Outcome) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut files: Vec<_> = outcome.files.iter().collect();
    files.sort_by(|a, b| a.name.cmp(&b.name));
    let mut entries = Vec::new();
    for f in files {
        std::fs::write(dir.join(&f.name), &f.bytes).map_err(io)?;
        entries.push(ManifestEntry {
            file: f.name.clone(),
            bytes: f.bytes.len(),
            sha256: sha256_hex(&f.bytes),
        });
    }
    let manifest = Manifest {
        tool: "rotset",
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.command.name(),
        status: if outcome.passed { "pass" } else { "check-failed" },
        config: cfg,
        warnings: &cfg.warnings,
        outputs: entries,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("serializable manifest");
    bytes.push(b'\n');
    std::fs::write(dir.join("manifest.json"), bytes).map_err(io)
}

/// Run one configured command. Nothing is written unless the command ran to
/// completion; a failed check still writes its outputs.
pub fn invoke(inv: &Invocation) -> Result<Finished, RunError> {
    let cfg = load(inv)?;
    let out_dir = inv
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let outcome = match inv.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Usage(format!("thread pool: {e}")))?;
            pool.install(|| execute(&cfg))?
        }
        None => execute(&cfg)?,
    };
    write_outputs(&out_dir, &cfg, &outcome)?;
    Ok(Finished {
        out_dir,
        passed: outcome.passed,
        report: outcome.report,
        warnings: cfg.warnings.clone(),
    })
}
