use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::real::Precision;
use crate::scf::{properties, SCFResult, ScfError};
use crate::units::hartree_to_ev;

/// One output row. Energies are eV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecord {
    pub id: String,
    #[serde(default)]
    pub smiles: Option<String>,
    pub n_ao: usize,
    pub energy: f64,
    pub homo: f64,
    pub lumo: f64,
    pub gap: f64,
    pub converged: bool,
    pub iterations: usize,
    pub precision: Precision,
    pub basis: String,
    pub wall_ms: u64,
}

impl DatasetRecord {
    pub fn from_scf(id: &str, smiles: Option<&str>, basis: &str, res: &SCFResult) -> Result<Self, ScfError> {
        let p = properties(&res.solution)?;
        let homo = hartree_to_ev(p.homo);
        let lumo = hartree_to_ev(p.lumo);
        Ok(Self {
            id: id.to_string(),
            smiles: smiles.map(str::to_string),
            n_ao: res.n_ao,
            energy: hartree_to_ev(res.e_total),
            homo,
            lumo,
            gap: lumo - homo,
            converged: res.converged,
            iterations: res.iterations,
            precision: res.precision,
            basis: basis.to_string(),
            wall_ms: (res.seconds * 1000.0).round() as u64,
        })
    }

    /// Equality of everything except the wall time.
    pub fn same_result(&self, other: &Self) -> bool {
        Self { wall_ms: other.wall_ms, ..self.clone() } == *other
    }

    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("records serialize");
        s.push('\n');
        s
    }
}

/// Converged records only.
pub fn clean(records: &[DatasetRecord]) -> Vec<DatasetRecord> {
    records.iter().filter(|r| r.converged).cloned().collect()
}

pub fn read_records(path: &Path) -> Result<Vec<DatasetRecord>, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| PipelineError::BadRecord {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

pub fn write_records(path: &Path, records: &[DatasetRecord]) -> Result<(), PipelineError> {
    let mut f = fs::File::create(path).map_err(|e| PipelineError::io(path, e))?;
    for r in records {
        f.write_all(r.to_line().as_bytes()).map_err(|e| PipelineError::io(path, e))?;
    }
    Ok(())
}
