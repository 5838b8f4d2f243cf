//! Ordered, optionally parallel and resumable sweeps over a list of integer
//! parameters (n, m or p), merged into one report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use borwein_core::report::{ReportDocument, TOOL_VERSION};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Completed per-item reports of an interrupted or extended sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub param_hash: String,
    /// Lowest and highest item ever requested against this manifest.
    pub range: Option<(u64, u64)>,
    pub entries: BTreeMap<u64, ReportDocument>,
}

impl RunManifest {
    pub fn new(command: &str, param_hash: String) -> Self {
        RunManifest {
            command: command.to_string(),
            param_hash,
            range: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Option<Self>, CliError> {
        match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("unreadable manifest {}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::Usage(format!("cannot read manifest {}: {e}", path.display()))),
        }
    }

    /// Written to a sibling temp file first, then renamed over the target.
    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut tmp = PathBuf::from(path);
        tmp.set_extension("tmp");
        let body = serde_json::to_string(self).expect("manifest serializes");
        fs::write(&tmp, body)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| CliError::Usage(format!("cannot write manifest {}: {e}", path.display())))
    }
}

/// Items of `requested` not yet completed in `manifest`, ascending.
///
/// Refuses when the manifest was written for different parameters.
pub fn resume(manifest: &RunManifest, param_hash: &str, requested: &[u64]) -> Result<Vec<u64>, CliError> {
    if manifest.param_hash != param_hash {
        return Err(CliError::Usage(format!(
            "manifest parameter hash {} does not match this run ({param_hash}); rerun with --fresh",
            manifest.param_hash
        )));
    }
    let mut remaining: Vec<u64> = requested
        .iter()
        .copied()
        .filter(|n| !manifest.entries.contains_key(n))
        .collect();
    remaining.sort_unstable();
    remaining.dedup();
    Ok(remaining)
}

/// SHA-256 over the command, its range-independent parameters and the tool version.
pub fn param_hash(command: &str, params: &Map<String, Value>) -> String {
    let canonical = serde_json::json!({
        "command": command,
        "params": params,
        "tool_version": TOOL_VERSION,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

pub struct SweepOptions<'a> {
    pub jobs: usize,
    pub manifest: Option<&'a Path>,
    pub fresh: bool,
}

/// Runs `per_item` over `items`, reusing manifest entries, and returns the
/// per-item reports in ascending item order.
pub fn run_sweep<F>(
    command: &str,
    hashed_params: &Map<String, Value>,
    items: &[u64],
    opts: &SweepOptions<'_>,
    per_item: F,
) -> Result<Vec<(u64, ReportDocument)>, CliError>
where
    F: Fn(u64) -> ReportDocument + Sync,
{
    let hash = param_hash(command, hashed_params);
    let mut manifest = match (opts.manifest, opts.fresh) {
        (Some(path), false) => RunManifest::load(path)?.unwrap_or_else(|| RunManifest::new(command, hash.clone())),
        _ => RunManifest::new(command, hash.clone()),
    };
    let remaining = resume(&manifest, &hash, items)?;
    if let (Some(&lo), Some(&hi)) = (items.iter().min(), items.iter().max()) {
        manifest.range = Some(match manifest.range {
            Some((a, b)) => (a.min(lo), b.max(hi)),
            None => (lo, hi),
        });
    }
    if !remaining.is_empty() {
        eprintln!(
            "{command}: {} item(s) to compute, {} reused",
            remaining.len(),
            items.len() - remaining.len()
        );
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let batch = opts.jobs.max(1);
    for chunk in remaining.chunks(batch) {
        let done: Vec<(u64, ReportDocument)> =
            pool.install(|| chunk.par_iter().map(|&n| (n, per_item(n))).collect());
        for (n, r) in done {
            eprintln!("{command}: item {n} -> {:?}", r.status);
            manifest.entries.insert(n, r);
        }
        if let Some(path) = opts.manifest {
            manifest.save(path)?;
        }
    }
    if let Some(path) = opts.manifest {
        manifest.save(path)?;
    }

    let mut sorted: Vec<u64> = items.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted
        .into_iter()
        .map(|n| (n, manifest.entries[&n].clone()))
        .collect())
}

/// Concatenates per-item reports in order; each item's `data` becomes one
/// element of `data.results`, tagged with the item key and its status.
pub fn merge(
    command: &str,
    params: Map<String, Value>,
    key: &str,
    parts: Vec<(u64, ReportDocument)>,
) -> ReportDocument {
    let mut out = ReportDocument::new(command);
    out.params = params;
    let mut results = Vec::with_capacity(parts.len());
    for (item, part) in parts {
        out.violations.extend(part.violations);
        out.cross_checks.extend(part.cross_checks);
        out.errors.extend(part.errors);
        let mut entry = Map::new();
        entry.insert(key.to_string(), Value::from(item));
        entry.insert("status".into(), serde_json::to_value(part.status).unwrap());
        entry.extend(part.data);
        results.push(Value::Object(entry));
    }
    out.data.insert("results".into(), Value::Array(results));
    out.refresh_status();
    out
}
