#![allow(dead_code)]

use std::path::{Path, PathBuf};

use dftgen::basis::load_basis;
use dftgen::molio::{GeometryManifest, LengthUnit};
use dftgen::{AOBasis, Molecule};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn read_json<T: for<'de> Deserialize<'de>>(name: &str) -> T {
    let text = std::fs::read_to_string(data_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn manifest(name: &str) -> Vec<Molecule> {
    let m = GeometryManifest::load(&data_dir().join(name)).unwrap();
    m.entries.iter().map(|e| e.molecule(LengthUnit::Angstrom).unwrap()).collect()
}

pub fn oracle_suite() -> Vec<Molecule> {
    manifest("oracle_suite.jsonl")
}

pub fn suite_molecule(id: &str) -> Molecule {
    oracle_suite().into_iter().find(|m| m.id() == id).unwrap()
}

pub fn from_atoms(atoms: &[[f64; 4]]) -> Molecule {
    let a: Vec<(u32, [f64; 3])> = atoms.iter().map(|r| (r[0] as u32, [r[1], r[2], r[3]])).collect();
    Molecule::from_bohr(&a, 0).unwrap()
}

/// Basis name or a path relative to the repository root.
pub fn basis_for(mol: &Molecule, basis: &str) -> AOBasis {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let b = if basis.ends_with(".gbs") {
        load_basis(root.join(basis).to_str().unwrap()).unwrap()
    } else {
        load_basis(basis).unwrap()
    };
    AOBasis::expand(mol, &b).unwrap()
}

pub fn ethane() -> Molecule {
    dftgen::molio::parse_xyz(
        "8\nethane\n\
         C 0.0000 0.0000 0.7650\nC 0.0000 0.0000 -0.7650\n\
         H 1.0199 0.0000 1.1573\nH -0.5099 0.8832 1.1573\nH -0.5099 -0.8832 1.1573\n\
         H -1.0199 0.0000 -1.1573\nH 0.5099 -0.8832 -1.1573\nH 0.5099 0.8832 -1.1573\n",
        LengthUnit::Angstrom,
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}
