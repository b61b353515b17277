use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{DatasetRecord, PipelineError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordDelta {
    pub id: String,
    /// b − a, meV
    pub energy: f64,
    /// b − a, meV
    pub gap: f64,
}

/// Agreement between two runs over the same ids. Error statistics cover only
/// ids converged in both runs and are zero when there are none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Ids converged in both runs.
    pub n_molecules: usize,
    pub n_total: usize,
    pub mae_energy_mev: f64,
    pub mae_gap_mev: f64,
    pub max_energy_mev: f64,
    pub max_gap_mev: f64,
    pub convergence_rate_a: f64,
    pub convergence_rate_b: f64,
    pub deltas: Vec<RecordDelta>,
}

fn by_id(records: &[DatasetRecord]) -> Result<BTreeMap<&str, &DatasetRecord>, PipelineError> {
    let mut map = BTreeMap::new();
    for r in records {
        if map.insert(r.id.as_str(), r).is_some() {
            return Err(PipelineError::DuplicateRecord(r.id.clone()));
        }
    }
    Ok(map)
}

fn rate(records: &[DatasetRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.converged).count() as f64 / records.len() as f64
}

pub fn compare(a: &[DatasetRecord], b: &[DatasetRecord]) -> Result<ComparisonReport, PipelineError> {
    let ma = by_id(a)?;
    let mb = by_id(b)?;
    let only_a: Vec<&str> = ma.keys().filter(|k| !mb.contains_key(*k)).copied().collect();
    let only_b: Vec<&str> = mb.keys().filter(|k| !ma.contains_key(*k)).copied().collect();
    if !only_a.is_empty() || !only_b.is_empty() {
        return Err(PipelineError::IdMismatch {
            only_a: only_a.len(),
            only_b: only_b.len(),
            example: only_a.first().or(only_b.first()).unwrap().to_string(),
        });
    }
    let deltas: Vec<RecordDelta> = ma
        .iter()
        .filter_map(|(id, ra)| {
            let rb = mb[id];
            (ra.converged && rb.converged).then(|| RecordDelta {
                id: id.to_string(),
                energy: (rb.energy - ra.energy) * 1000.0,
                gap: (rb.gap - ra.gap) * 1000.0,
            })
        })
        .collect();
    let n = deltas.len();
    let mean = |f: fn(&RecordDelta) -> f64| {
        if n == 0 {
            0.0
        } else {
            deltas.iter().map(|d| f(d).abs()).sum::<f64>() / n as f64
        }
    };
    let max = |f: fn(&RecordDelta) -> f64| deltas.iter().map(|d| f(d).abs()).fold(0.0, f64::max);
    Ok(ComparisonReport {
        n_molecules: n,
        n_total: ma.len(),
        mae_energy_mev: mean(|d| d.energy),
        mae_gap_mev: mean(|d| d.gap),
        max_energy_mev: max(|d| d.energy),
        max_gap_mev: max(|d| d.gap),
        convergence_rate_a: rate(a),
        convergence_rate_b: rate(b),
        deltas,
    })
}

/// Same molecules and basis at two working precisions.
pub fn compare_precision(a: &[DatasetRecord], b: &[DatasetRecord]) -> Result<ComparisonReport, PipelineError> {
    compare(a, b)
}

/// Same molecules and precision in two basis sets.
pub fn compare_basis(sto3g: &[DatasetRecord], other: &[DatasetRecord]) -> Result<ComparisonReport, PipelineError> {
    compare(sto3g, other)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmilesSpread {
    pub smiles: String,
    pub n_conformers: usize,
    /// Population standard deviation of the gap, eV.
    pub std_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges, eV.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceStats {
    pub spreads: Vec<SmilesSpread>,
    pub histogram: Histogram,
}

impl Histogram {
    /// Equal-width bins from 0 to the largest value; the last bin is closed.
    pub fn new(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let hi = values.iter().copied().fold(0.0, f64::max);
        let width = hi / bins as f64;
        let edges = (0..=bins).map(|i| if i == bins { hi } else { width * i as f64 }).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let k = if width > 0.0 { ((v / width) as usize).min(bins - 1) } else { 0 };
            counts[k] += 1;
        }
        Self { edges, counts }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lo_ev,hi_ev,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{},{},{}\n", self.edges[k], self.edges[k + 1], c));
        }
        s
    }
}

/// Conformer spread of the gap per SMILES over converged records. SMILES
/// with fewer than two converged conformers, and records without SMILES,
/// are left out.
pub fn variance_stats(records: &[DatasetRecord], bins: usize) -> VarianceStats {
    let mut groups: HashMap<&str, Vec<f64>> = HashMap::new();
    for r in records.iter().filter(|r| r.converged) {
        if let Some(s) = &r.smiles {
            groups.entry(s.as_str()).or_default().push(r.gap);
        }
    }
    let mut spreads: Vec<SmilesSpread> = groups
        .into_iter()
        .filter(|(_, g)| g.len() >= 2)
        .map(|(s, g)| {
            let n = g.len() as f64;
            let mean = g.iter().sum::<f64>() / n;
            let var = g.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            SmilesSpread {
                smiles: s.to_string(),
                n_conformers: g.len(),
                std_gap: var.sqrt(),
            }
        })
        .collect();
    spreads.sort_by(|a, b| a.smiles.cmp(&b.smiles));
    let values: Vec<f64> = spreads.iter().map(|s| s.std_gap).collect();
    VarianceStats {
        histogram: Histogram::new(&values, bins),
        spreads,
    }
}
