//! Molecular geometry model, XYZ ingestion and scalar nuclear quantities.

mod elements;
mod manifest;
mod xyz;

use nalgebra::Vector3;
use thiserror::Error;

pub use elements::{element_symbol, atomic_number, MAX_ATOMIC_NUMBER};
pub use manifest::{GeometryManifest, GeometrySource, ManifestEntry, MANIFEST_FORMAT_VERSION};
pub use xyz::{emit_xyz, parse_xyz, parse_xyz_stream, LengthUnit};

/// Atoms closer than this (Bohr) make a geometry degenerate.
pub const MIN_ATOM_DISTANCE: f64 = 0.1;

#[derive(Debug, Error)]
pub enum MolError {
    #[error("line {line}: malformed atom count '{text}'")]
    BadCount { line: usize, text: String },
    #[error("line {line}: unknown element symbol '{symbol}'")]
    UnknownElement { line: usize, symbol: String },
    #[error("expected {expected} atoms, found {found}")]
    AtomCountMismatch { expected: usize, found: usize },
    #[error("line {line}: malformed atom record '{text}'")]
    BadAtomLine { line: usize, text: String },
    #[error("line {line}: non-finite coordinate")]
    NonFiniteCoordinate { line: usize },
    #[error("line {line}: malformed comment field '{text}'")]
    BadCommentField { line: usize, text: String },
    #[error("atomic number {0} outside supported range 1..=18")]
    UnsupportedElement(u32),
    #[error("atoms {a} and {b} are {distance:.4} Bohr apart (minimum {MIN_ATOM_DISTANCE})")]
    CoincidentAtoms { a: usize, b: usize, distance: f64 },
    #[error("molecule has no atoms")]
    Empty,
    #[error("electron count {0} is odd; only closed-shell molecules are supported")]
    OddElectronCount(i64),
    #[error("electron count {0} is not positive")]
    NonPositiveElectronCount(i64),
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
    #[error("duplicate manifest id '{0}'")]
    DuplicateId(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub atomic_number: u32,
    /// Bohr.
    pub position: Vector3<f64>,
}

/// A molecular geometry: nuclei in Bohr plus total charge.
///
/// Construction checks that every element is in 1..=18 and that no two atoms
/// are closer than [`MIN_ATOM_DISTANCE`]. Electron-count parity is checked by
/// [`Molecule::electron_count`], which the SCF driver calls before starting.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    charge: i32,
    id: String,
    smiles: Option<String>,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>, charge: i32) -> Result<Self, MolError> {
        if atoms.is_empty() {
            return Err(MolError::Empty);
        }
        for a in &atoms {
            if !(1..=MAX_ATOMIC_NUMBER).contains(&a.atomic_number) {
                return Err(MolError::UnsupportedElement(a.atomic_number));
            }
        }
        check_distances(&atoms)?;
        Ok(Self {
            atoms,
            charge,
            id: String::new(),
            smiles: None,
        })
    }

    /// Convenience constructor from `(Z, [x, y, z])` pairs in Bohr.
    pub fn from_bohr(atoms: &[(u32, [f64; 3])], charge: i32) -> Result<Self, MolError> {
        Self::new(
            atoms
                .iter()
                .map(|&(z, p)| Atom {
                    atomic_number: z,
                    position: Vector3::from(p),
                })
                .collect(),
            charge,
        )
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_smiles(mut self, smiles: Option<String>) -> Self {
        self.smiles = smiles;
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn smiles(&self) -> Option<&str> {
        self.smiles.as_deref()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.atomic_number > 1).count()
    }

    /// Σ Z − charge. Fails unless the result is even and positive.
    pub fn electron_count(&self) -> Result<usize, MolError> {
        let n: i64 = self.atoms.iter().map(|a| a.atomic_number as i64).sum::<i64>()
            - self.charge as i64;
        if n <= 0 {
            Err(MolError::NonPositiveElectronCount(n))
        } else if n % 2 != 0 {
            Err(MolError::OddElectronCount(n))
        } else {
            Ok(n as usize)
        }
    }

    /// Σ_{a<b} Z_a Z_b / |r_a − r_b| in Hartree.
    pub fn nuclear_repulsion(&self) -> Result<f64, MolError> {
        check_distances(&self.atoms)?;
        let mut e = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[..i] {
                let r = (a.position - b.position).norm();
                e += (a.atomic_number * b.atomic_number) as f64 / r;
            }
        }
        Ok(e)
    }

    /// Applies `f` to every position. Used for rigid-motion checks.
    pub fn map_positions(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Result<Self, MolError> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                atomic_number: a.atomic_number,
                position: f(&a.position),
            })
            .collect();
        Ok(Self::new(atoms, self.charge)?
            .with_id(self.id.clone())
            .with_smiles(self.smiles.clone()))
    }
}

fn check_distances(atoms: &[Atom]) -> Result<(), MolError> {
    for (i, a) in atoms.iter().enumerate() {
        for (j, b) in atoms[..i].iter().enumerate() {
            let distance = (a.position - b.position).norm();
            if distance < MIN_ATOM_DISTANCE {
                return Err(MolError::CoincidentAtoms { a: j, b: i, distance });
            }
        }
    }
    Ok(())
}
