//! Geometry manifests: JSON lines of `{id, path | xyz, smiles?}`, optionally
//! preceded by a `{"format_version": n}` header line. A multi-frame XYZ file
//! whose comment lines carry `id=` (and optionally `smiles=`) is accepted as
//! an equivalent manifest.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::xyz::split_frames;
use super::{parse_xyz, LengthUnit, MolError, Molecule};

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometrySource {
    Path(PathBuf),
    Inline(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub source: GeometrySource,
    pub smiles: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryManifest {
    pub entries: Vec<ManifestEntry>,
    pub format_version: u32,
}

#[derive(Serialize, Deserialize)]
struct EntryLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xyz: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    smiles: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format_version: Option<u32>,
}

impl ManifestEntry {
    /// Reads and parses the geometry. The manifest id and SMILES take
    /// precedence over anything in the XYZ comment line.
    pub fn molecule(&self, unit: LengthUnit) -> Result<Molecule, MolError> {
        let text = match &self.source {
            GeometrySource::Inline(t) => std::borrow::Cow::Borrowed(t.as_str()),
            GeometrySource::Path(p) => std::borrow::Cow::Owned(read(p)?),
        };
        let mol = parse_xyz(&text, unit)?;
        let smiles = self.smiles.clone().or_else(|| mol.smiles().map(str::to_string));
        Ok(mol.with_id(self.id.clone()).with_smiles(smiles))
    }
}

impl GeometryManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self, MolError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.id.as_str()) {
                return Err(MolError::DuplicateId(e.id.clone()));
            }
        }
        Ok(Self {
            entries,
            format_version: MANIFEST_FORMAT_VERSION,
        })
    }

    /// Loads a manifest file; `.xyz` files are read as frame streams, all
    /// other extensions as JSON lines. Relative `path` fields resolve against
    /// the manifest's directory.
    pub fn load(path: &Path) -> Result<Self, MolError> {
        let text = read(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("xyz")) {
            Self::from_xyz_stream(&text)
        } else {
            Self::from_jsonl(&text, path.parent().unwrap_or(Path::new(".")))
        }
    }

    pub fn from_jsonl(text: &str, base_dir: &Path) -> Result<Self, MolError> {
        let mut entries = Vec::new();
        let mut format_version = MANIFEST_FORMAT_VERSION;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |reason: String| MolError::Manifest { line: lineno, reason };
            let row: EntryLine = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            if let Some(v) = row.format_version {
                if row.id.is_some() || !entries.is_empty() {
                    return Err(bad("format_version must be a standalone first line".into()));
                }
                if v > MANIFEST_FORMAT_VERSION {
                    return Err(bad(format!("unsupported format_version {v}")));
                }
                format_version = v;
                continue;
            }
            let id = row.id.ok_or_else(|| bad("missing id".into()))?;
            let source = match (row.path, row.xyz) {
                (Some(p), None) => {
                    let p = PathBuf::from(p);
                    GeometrySource::Path(if p.is_absolute() { p } else { base_dir.join(p) })
                }
                (None, Some(x)) => GeometrySource::Inline(x),
                _ => return Err(bad("exactly one of 'path' or 'xyz' is required".into())),
            };
            entries.push(ManifestEntry {
                id,
                source,
                smiles: row.smiles,
            });
        }
        let mut m = Self::new(entries)?;
        m.format_version = format_version;
        Ok(m)
    }

    /// Frames without an `id=` get `frame-<index>`.
    pub fn from_xyz_stream(text: &str) -> Result<Self, MolError> {
        let entries = split_frames(text, LengthUnit::Angstrom)?
            .into_iter()
            .enumerate()
            .map(|(k, (mol, raw))| ManifestEntry {
                id: if mol.id().is_empty() {
                    format!("frame-{k}")
                } else {
                    mol.id().to_string()
                },
                smiles: mol.smiles().map(str::to_string),
                source: GeometrySource::Inline(raw),
            })
            .collect();
        Self::new(entries)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let (path, xyz) = match &e.source {
                GeometrySource::Path(p) => (Some(p.display().to_string()), None),
                GeometrySource::Inline(x) => (None, Some(x.clone())),
            };
            let row = EntryLine {
                id: Some(e.id.clone()),
                path,
                xyz,
                smiles: e.smiles.clone(),
                format_version: None,
            };
            out.push_str(&serde_json::to_string(&row).expect("manifest rows serialize"));
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn read(path: &Path) -> Result<String, MolError> {
    fs::read_to_string(path).map_err(|source| MolError::Io {
        path: path.display().to_string(),
        source,
    })
}
