//! Validation, execution and artifact writing for one scenario.

use std::fs;
use std::path::{Path, PathBuf};

use narrowfront_core::rng::RNG_ALGORITHM;
use serde::Serialize;
use serde_json::json;

use crate::experiments::run_experiment;
use crate::output::{json_bytes, sha256_hex, Outcome};
use crate::{presets, RunError, Scenario};

const CSV_DIALECT: &str = "comma separated, header row, '.' decimal, LF line endings";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the scenario's `output.dir`.
    pub out: Option<PathBuf>,
    /// Worker threads, recorded in the manifest; results do not depend on it.
    pub threads: Option<usize>,
    pub verbose: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub config_hash: String,
}

/// Reads a scenario file; a path that does not exist but names a preset
/// loads the preset.
pub fn load(path: &Path) -> Result<Scenario, RunError> {
    match fs::read_to_string(path) {
        Ok(text) => Scenario::from_json(&text),
        Err(e) => match path.to_str().and_then(presets::get) {
            Some(sc) if !path.exists() => Ok(sc),
            _ => Err(RunError::Io(format!("cannot read {}: {e}", path.display()))),
        },
    }
}

/// `sha256:<hex>` of the compact resolved config (keys sorted).
pub fn config_hash(sc: &Scenario) -> String {
    let bytes = serde_json::to_vec(&sc.resolved()).expect("scenario serializes");
    format!("sha256:{}", sha256_hex(&bytes))
}

pub fn out_dir(sc: &Scenario, opts: &RunOptions) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| sc.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&sc.name))
}

#[derive(Serialize)]
struct ArtifactEntry {
    file: String,
    bytes: usize,
    sha256: String,
}

/// Validates, runs and writes `summary.json`, `manifest.json` and the module
/// tables. Nothing is written for configuration errors; numeric failures
/// leave a `diagnostic.json` only.
pub fn execute(sc: &Scenario, opts: &RunOptions) -> Result<RunReport, RunError> {
    sc.validate()?;
    let dir = out_dir(sc, opts);
    let hash = config_hash(sc);
    let threads = opts.threads.unwrap_or_else(rayon::current_num_threads);
    let outcome = match run_experiment(sc, opts.verbose) {
        Ok(o) => o,
        Err(e @ RunError::Numeric(_)) => {
            let diag = json!({
                "scenario": sc.name,
                "module": sc.experiment.module(),
                "seed": sc.seed,
                "config_hash": hash,
                "status": "numeric-failure",
                "error": e.to_string(),
                "config": sc.resolved(),
            });
            fs::create_dir_all(&dir)?;
            fs::write(dir.join("diagnostic.json"), json_bytes(&diag)?)?;
            return Err(e);
        }
        Err(e) => return Err(e),
    };
    write_outcome(sc, &dir, hash, threads, outcome)
}

fn write_outcome(sc: &Scenario, dir: &Path, hash: String, threads: usize, outcome: Outcome) -> Result<RunReport, RunError> {
    let Outcome { mut artifacts, summary } = outcome;
    let mut head = serde_json::Map::new();
    head.insert("scenario".into(), json!(sc.name));
    head.insert("module".into(), json!(sc.experiment.module()));
    head.insert("results".into(), serde_json::Value::Object(summary));
    artifacts.push(crate::output::Artifact {
        name: "summary.json".into(),
        bytes: json_bytes(&head)?,
    });
    let entries: Vec<ArtifactEntry> = artifacts
        .iter()
        .map(|a| ArtifactEntry {
            file: a.name.clone(),
            bytes: a.bytes.len(),
            sha256: sha256_hex(&a.bytes),
        })
        .collect();
    let manifest = json!({
        "scenario": sc.name,
        "module": sc.experiment.module(),
        "status": "ok",
        "seed": sc.seed,
        "config_hash": hash,
        "config": sc.resolved(),
        "versions": {
            "narrowfront-core": narrowfront_core::VERSION,
            "narrowfront-cli": env!("CARGO_PKG_VERSION"),
        },
        "rng": { "algorithm": RNG_ALGORITHM, "master_seed": sc.seed },
        "csv_dialect": CSV_DIALECT,
        "threads": threads,
        "artifacts": entries,
    });
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for a in &artifacts {
        fs::write(dir.join(&a.name), &a.bytes)?;
        files.push(a.name.clone());
    }
    fs::write(dir.join("manifest.json"), json_bytes(&manifest)?)?;
    files.push("manifest.json".into());
    Ok(RunReport {
        out_dir: dir.to_path_buf(),
        files,
        config_hash: hash,
    })
}
