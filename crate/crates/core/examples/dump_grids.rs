//! Writes the integration grid of every oracle-suite molecule (plus H₂ at
//! 1.4 Bohr) as JSON, for feeding the same quadrature to a reference code.
//!
//! Usage: dump_grids <out_dir> [level]

use std::path::PathBuf;

use dftgen::molio::{GeometryManifest, LengthUnit};
use dftgen::xc::build_grid;
use dftgen::Molecule;

fn main() {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().expect("usage: dump_grids <out_dir> [level]"));
    let level: u32 = args.next().map_or(1, |s| s.parse().expect("level"));
    std::fs::create_dir_all(&out).unwrap();
    let suite = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/oracle_suite.jsonl");
    let manifest = GeometryManifest::load(&suite).unwrap();
    let mut mols: Vec<Molecule> = manifest
        .entries
        .iter()
        .map(|e| e.molecule(LengthUnit::Angstrom).unwrap())
        .collect();
    mols.push(
        Molecule::from_bohr(&[(1, [0.0, 0.0, 0.0]), (1, [0.0, 0.0, 1.4])], 0)
            .unwrap()
            .with_id("h2_1.4bohr"),
    );
    for mol in &mols {
        let grid = build_grid(mol, level).unwrap();
        let atoms: Vec<(u32, [f64; 3])> = mol
            .atoms()
            .iter()
            .map(|a| (a.atomic_number, [a.position.x, a.position.y, a.position.z]))
            .collect();
        let doc = serde_json::json!({
            "id": mol.id(),
            "level": level,
            "atoms_bohr": atoms,
            "coords": grid.points,
            "weights": grid.weights,
        });
        std::fs::write(out.join(format!("{}.json", mol.id())), doc.to_string()).unwrap();
        println!("{} {} points", mol.id(), grid.len());
    }
}
