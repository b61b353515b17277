use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{DatasetRecord, PipelineError};
use crate::basis::{load_basis, BasisSet};
use crate::molio::{GeometryManifest, LengthUnit, ManifestEntry};
use crate::scf::{scf, SCFOptions};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub basis: String,
    pub scf: SCFOptions,
    pub workers: usize,
    /// Continue from an existing checkpoint instead of starting over.
    pub resume: bool,
    /// Unit of the manifest geometries.
    pub unit: LengthUnit,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            basis: "sto-3g".into(),
            scf: SCFOptions::default(),
            workers: thread::available_parallelism().map_or(1, |n| n.get()),
            resume: false,
            unit: LengthUnit::Angstrom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub id: String,
    pub reason: String,
}

/// Ids already handled by a run, written atomically after every record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format_version: u32,
    pub settings: serde_json::Value,
    pub completed: Vec<String>,
    pub failed: Vec<Failure>,
}

#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub total: usize,
    /// Entries skipped because the checkpoint already covered them.
    pub resumed: usize,
    /// Records appended by this invocation.
    pub written: usize,
    pub converged: usize,
    /// Failures of this invocation.
    pub failures: Vec<Failure>,
    pub seconds: f64,
}

#[derive(Serialize)]
struct Settings<'a> {
    basis: &'a str,
    unit: &'a str,
    scf: &'a SCFOptions,
}

pub fn checkpoint_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".checkpoint.json");
    PathBuf::from(s)
}

impl Checkpoint {
    fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        let corrupt = |reason: String| PipelineError::CorruptCheckpoint {
            path: path.to_path_buf(),
            reason,
        };
        let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if ck.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(corrupt(format!("unsupported format_version {}", ck.format_version)));
        }
        let mut seen = HashSet::new();
        for id in ck.completed.iter().chain(ck.failed.iter().map(|f| &f.id)) {
            if !seen.insert(id) {
                return Err(corrupt(format!("id '{id}' listed twice")));
            }
        }
        Ok(ck)
    }

    fn store(&self, path: &Path) -> Result<(), PipelineError> {
        let text = serde_json::to_string(self).expect("checkpoint serializes");
        write_atomic(path, text.as_bytes())
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| PipelineError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| PipelineError::io(path, e))
}

/// Drops output lines the checkpoint does not vouch for (a record written
/// just before an interruption, a torn last line) and checks that every
/// completed id still has its record.
fn reconcile_output(out: &Path, ck_path: &Path, ck: &Checkpoint) -> Result<(), PipelineError> {
    let text = match fs::read_to_string(out) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(PipelineError::io(out, e)),
    };
    let mut wanted: HashSet<&str> = ck.completed.iter().map(String::as_str).collect();
    let mut kept = String::new();
    for line in text.lines() {
        let Ok(rec) = serde_json::from_str::<DatasetRecord>(line) else {
            continue;
        };
        if wanted.remove(rec.id.as_str()) {
            kept.push_str(line);
            kept.push('\n');
        }
    }
    if let Some(id) = wanted.into_iter().next() {
        return Err(PipelineError::CorruptCheckpoint {
            path: ck_path.to_path_buf(),
            reason: format!("record for completed id '{id}' missing from {}", out.display()),
        });
    }
    if kept.len() != text.len() {
        write_atomic(out, kept.as_bytes())?;
    }
    Ok(())
}

fn process(entry: &ManifestEntry, basis_name: &str, basis: &BasisSet, opts: &GenerateOptions) -> Result<DatasetRecord, String> {
    let mol = entry.molecule(opts.unit).map_err(|e| format!("geometry: {e}"))?;
    let res = scf(&mol, basis, &opts.scf).map_err(|e| format!("scf: {e}"))?;
    DatasetRecord::from_scf(&entry.id, mol.smiles(), basis_name, &res).map_err(|e| format!("scf: {e}"))
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Computes a record for every manifest entry and appends it to `out` in
/// completion order. Per-entry failures are logged and listed in the
/// checkpoint and summary; only output or checkpoint I/O aborts the run.
pub fn run(manifest: &GeometryManifest, opts: &GenerateOptions, out: &Path) -> Result<RunSummary, PipelineError> {
    let start = Instant::now();
    if opts.workers == 0 {
        return Err(PipelineError::InvalidOptions("workers must be at least 1".into()));
    }
    opts.scf.validate().map_err(|e| PipelineError::InvalidOptions(e.to_string()))?;
    let basis = load_basis(&opts.basis)?;
    let settings = serde_json::to_value(Settings {
        basis: &opts.basis,
        unit: opts.unit.name(),
        scf: &opts.scf,
    })
    .expect("settings serialize");

    let ck_path = checkpoint_path(out);
    let mut ck = if opts.resume && ck_path.exists() {
        let ck = Checkpoint::load(&ck_path)?;
        if ck.settings != settings {
            return Err(PipelineError::CheckpointMismatch {
                path: ck_path,
                reason: format!("stored {}, requested {}", ck.settings, settings),
            });
        }
        reconcile_output(out, &ck_path, &ck)?;
        ck
    } else {
        fs::File::create(out).map_err(|e| PipelineError::io(out, e))?;
        let ck = Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            settings,
            completed: Vec::new(),
            failed: Vec::new(),
        };
        ck.store(&ck_path)?;
        ck
    };

    let done: HashSet<&str> = ck
        .completed
        .iter()
        .map(String::as_str)
        .chain(ck.failed.iter().map(|f| f.id.as_str()))
        .collect();
    let pending: Vec<&ManifestEntry> = manifest.entries.iter().filter(|e| !done.contains(e.id.as_str())).collect();
    let mut summary = RunSummary {
        total: manifest.len(),
        resumed: manifest.len() - pending.len(),
        ..Default::default()
    };
    drop(done);
    log::info!(
        "{} entries, {} already done, {} to compute with {} workers",
        summary.total,
        summary.resumed,
        pending.len(),
        opts.workers
    );

    let mut file = OpenOptions::new().append(true).open(out).map_err(|e| PipelineError::io(out, e))?;
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(String, Result<DatasetRecord, String>)>();

    let outcome = thread::scope(|s| {
        for _ in 0..opts.workers.min(pending.len()) {
            let tx = tx.clone();
            let (next, stop, pending, basis) = (&next, &stop, &pending, &basis);
            s.spawn(move || {
                while !stop.load(Ordering::Relaxed) {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(entry) = pending.get(i) else { break };
                    let result = catch_unwind(AssertUnwindSafe(|| process(entry, &opts.basis, basis, opts)))
                        .unwrap_or_else(|p| Err(format!("panic: {}", panic_message(p))));
                    if tx.send((entry.id.clone(), result)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        for (id, result) in rx {
            let step = match result {
                Ok(rec) => {
                    log::info!(
                        "{id}: E = {:.6} eV, gap = {:.4} eV, {} iterations{}",
                        rec.energy,
                        rec.gap,
                        rec.iterations,
                        if rec.converged { "" } else { " (not converged)" }
                    );
                    summary.written += 1;
                    summary.converged += rec.converged as usize;
                    ck.completed.push(id);
                    file.write_all(rec.to_line().as_bytes()).map_err(|e| PipelineError::io(out, e))
                }
                Err(reason) => {
                    log::warn!("{id}: {reason}");
                    let f = Failure { id, reason };
                    summary.failures.push(f.clone());
                    ck.failed.push(f);
                    Ok(())
                }
            };
            if let Err(e) = step.and_then(|_| ck.store(&ck_path)) {
                stop.store(true, Ordering::Relaxed);
                return Err(e);
            }
        }
        Ok(())
    });
    outcome?;
    summary.seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}
