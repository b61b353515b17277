mod common;

use common::*;
use dftgen::basis::load_basis;
use dftgen::integrals::{one_electron, IntegralSet};
use dftgen::scf::{
    density, fock, is_converged, population_std, properties, scf, scf_on_grid, solve_roothaan, Accelerator,
    OrbitalSolution, SCFOptions, ScfError,
};
use dftgen::xc::build_grid;
use dftgen::{Molecule, Precision};
use nalgebra::{DMatrix, Rotation3, Vector3};
use serde::Deserialize;

#[derive(Deserialize)]
struct ScfRef {
    id: String,
    e_total: f64,
    e_xc: f64,
    homo: f64,
    lumo: f64,
    gap_ev: f64,
    density: Option<Vec<Vec<f64>>>,
    fock: Option<Vec<Vec<f64>>>,
    core_eigenvalues: Option<Vec<f64>>,
}

fn reference(id: &str) -> ScfRef {
    let all: Vec<ScfRef> = read_json("oracle_scf.json");
    all.into_iter().find(|r| r.id == id).unwrap()
}

fn matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

fn tight() -> SCFOptions {
    SCFOptions {
        convergence_std: 1e-10,
        max_iterations: 60,
        ..SCFOptions::default()
    }
}

fn h2_bohr() -> Molecule {
    Molecule::from_bohr(&[(1, [0.0, 0.0, 0.0]), (1, [0.0, 0.0, 1.4])], 0).unwrap()
}

#[test]
fn h2_energy_and_density_match_reference() {
    let r = reference("h2_1.4bohr");
    let res = scf(&h2_bohr(), &load_basis("sto-3g").unwrap(), &tight()).unwrap();
    assert!(res.converged);
    assert!((res.e_total - r.e_total).abs() < 1e-6, "{} vs {}", res.e_total, r.e_total);
    let rho = density(&res.solution).unwrap();
    assert!(max_abs_diff(&rho, &matrix(r.density.as_ref().unwrap())) < 1e-6);
}

#[test]
fn water_matches_reference() {
    let r = reference("h2o");
    let mol = suite_molecule("h2o");
    let basis = load_basis("sto-3g").unwrap();
    let res = scf(&mol, &basis, &tight()).unwrap();
    assert!(res.converged);
    assert!((res.e_total - r.e_total).abs() < 1e-6);
    assert!((res.components.e_xc - r.e_xc).abs() < 1e-5, "{} vs {}", res.components.e_xc, r.e_xc);
    let p = properties(&res.solution).unwrap();
    assert!((p.homo - r.homo).abs() < 1e-5);
    assert!((p.lumo - r.lumo).abs() < 1e-5);
    assert!((p.gap_ev - r.gap_ev).abs() < 1e-4, "{} vs {}", p.gap_ev, r.gap_ev);

    // Fock matrix of the converged density
    let ao = basis_for(&mol, "sto-3g");
    let ints = one_electron::<f64>(&ao, &mol);
    let rho = density(&res.solution).unwrap();
    let eri = dftgen::integrals::eri_packed::<f64>(&ao, &Default::default()).unwrap();
    let (j, k) = dftgen::integrals::build_jk(&eri, &rho).unwrap();
    let grid = build_grid(&mol, 1).unwrap();
    let aov = dftgen::xc::eval_ao::<f64>(&ao, &grid);
    let xc = dftgen::xc::xc_matrix(&grid, &aov, &rho).unwrap();
    let f = fock(&ints, &j, &k, &xc.vxc).unwrap();
    assert!(max_abs_diff(&f, &f.transpose()) < 1e-10);
    assert!(max_abs_diff(&f, &matrix(r.fock.as_ref().unwrap())) < 1e-6);

    // first iteration: core-Hamiltonian eigenvalues
    let guess = solve_roothaan(&ints.core_hamiltonian(), &ints.s, 5).unwrap();
    for (a, b) in guess.epsilon.iter().zip(r.core_eigenvalues.as_ref().unwrap()) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn fock_reduces_to_core_hamiltonian() {
    let mol = suite_molecule("h2o");
    let ints: IntegralSet<f64> = one_electron(&basis_for(&mol, "sto-3g"), &mol);
    let z = DMatrix::zeros(7, 7);
    assert_eq!(fock(&ints, &z, &z, &z).unwrap(), ints.core_hamiltonian());
    assert!(matches!(fock(&ints, &DMatrix::zeros(2, 2), &z, &z), Err(ScfError::DimensionMismatch(_))));
}

#[test]
fn generalized_eigenproblem_residual() {
    let mut rng = rng(21);
    let n = 20;
    let a = random_symmetric(n, &mut rng);
    let s = &a * &a + DMatrix::identity(n, n) * 0.5;
    let f = random_symmetric(n, &mut rng);
    let sol = solve_roothaan(&f, &s, 4).unwrap();
    let eps = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sol.epsilon.clone()));
    let resid = (&f * &sol.c - &s * &sol.c * eps).abs().max();
    assert!(resid < 1e-8, "{resid}");
    let ortho = (sol.c.transpose() * &s * &sol.c - DMatrix::identity(n, n)).abs().max();
    assert!(ortho < 1e-8);
    let rho = density(&sol).unwrap();
    assert!(((&rho * &s).trace() - 8.0).abs() < 1e-8);
}

#[test]
fn properties_indexing_and_errors() {
    let sol = OrbitalSolution {
        c: DMatrix::identity(2, 2),
        epsilon: vec![-0.5, 0.1],
        n_occ: 1,
    };
    let p = properties(&sol).unwrap();
    assert_eq!((p.homo, p.lumo), (-0.5, 0.1));
    assert!((p.gap_ev - 16.3268316).abs() < 1e-6);
    let full = OrbitalSolution { n_occ: 2, ..sol };
    assert!(matches!(properties(&full), Err(ScfError::NoVirtual(2))));
}

#[test]
fn options_and_convergence_rule() {
    let bad = SCFOptions { max_iterations: 4, ..SCFOptions::default() };
    assert!(matches!(bad.validate(), Err(ScfError::InvalidOptions(_))));
    assert!(SCFOptions::default().validate().is_ok());
    assert!((population_std(&[1.0, 3.0]) - 1.0).abs() < 1e-15);
    assert!(!is_converged(&[1.0, 1.0, 1.0, 1.0], 0.01));
    assert!(is_converged(&[9.0, 1.0, 1.001, 1.0, 0.999, 1.0], 0.01));
    let odd = Molecule::from_bohr(&[(1, [0.0; 3]), (1, [0.0, 0.0, 1.4])], 1).unwrap();
    assert!(scf(&odd, &load_basis("sto-3g").unwrap(), &SCFOptions::default()).is_err());
}

#[test]
fn conservation_at_every_iteration() {
    for id in ["h2o", "nh3", "m000-c0"] {
        let res = scf(&suite_molecule(id), &load_basis("sto-3g").unwrap(), &SCFOptions::default()).unwrap();
        let n_elec = suite_molecule(id).electron_count().unwrap() as f64;
        for t in &res.trace {
            assert!((t.electrons - n_elec).abs() < 1e-8, "{id}: {}", t.electrons);
            assert!(t.orthonormality < 1e-8, "{id}: {}", t.orthonormality);
        }
        let c = res.components;
        assert_eq!(c.e_nn + c.e_core + c.e_coulomb + c.e_exx + c.e_xc, res.e_total);
        assert_eq!(*res.energy_history.last().unwrap(), res.e_total);
    }
}

#[test]
fn float32_conservation_and_determinism() {
    let mol = suite_molecule("nh3");
    let opts = SCFOptions { precision: Precision::F32, ..SCFOptions::default() };
    let basis = load_basis("6-31g").unwrap();
    let a = scf(&mol, &basis, &opts).unwrap();
    let b = scf(&mol, &basis, &opts).unwrap();
    assert_eq!(a.energy_history, b.energy_history);
    assert_eq!(a.solution.epsilon, b.solution.epsilon);
    for t in &a.trace {
        assert!((t.electrons - 10.0).abs() < 1e-3);
        assert!(t.orthonormality < 1e-4);
    }
    let d = scf(&mol, &basis, &SCFOptions::default()).unwrap();
    assert!((a.e_total - d.e_total).abs() < 1e-3);
}

#[test]
fn diis_beats_plain_damping() {
    let basis = load_basis("sto-3g").unwrap();
    let base = SCFOptions { convergence_std: 1e-6, max_iterations: 50, ..SCFOptions::default() };
    let damping = SCFOptions { accelerator: Accelerator::Damping, ..base.clone() };
    let water = suite_molecule("h2o");
    let diis = scf(&water, &basis, &base).unwrap();
    let damped = scf(&water, &basis, &damping).unwrap();
    assert!(diis.converged && diis.iterations <= 20, "DIIS took {}", diis.iterations);
    assert!(damped.converged && damped.iterations >= diis.iterations);
    // the gap opens up on a realistic nine-heavy-atom molecule
    let mol = suite_molecule("m000-c0");
    let diis = scf(&mol, &basis, &base).unwrap();
    let damped = scf(&mol, &basis, &damping).unwrap();
    assert!(diis.converged && diis.iterations <= 20, "DIIS took {}", diis.iterations);
    assert!(damped.iterations > 20, "damping took {}", damped.iterations);
}

#[test]
fn late_iterations_are_stable() {
    for id in ["h2o", "m000-c0"] {
        let res = scf(&suite_molecule(id), &load_basis("sto-3g").unwrap(), &tight()).unwrap();
        assert!(res.converged);
        let h = &res.energy_history;
        let stds: Vec<f64> = (h.len() - 9..=h.len() - 5).map(|s| population_std(&h[s..s + 5])).collect();
        assert!(stds.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12), "{id}: {stds:?}");
    }
}

#[test]
fn rigid_rotation_leaves_energy_and_gap_unchanged() {
    let mol = suite_molecule("nh3");
    let basis = load_basis("sto-3g").unwrap();
    let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(Vector3::new(0.3, -1.0, 0.6)), 0.83);
    let turned = mol.map_positions(|p| rot * p).unwrap();
    let grid = build_grid(&mol, 1).unwrap();
    let a = scf_on_grid(&mol, &basis, &tight(), Some(&grid)).unwrap();
    let b = scf_on_grid(&turned, &basis, &tight(), Some(&grid.rotated(rot.matrix()))).unwrap();
    assert!((a.e_total - b.e_total).abs() < 1e-6);
    let (pa, pb) = (properties(&a.solution).unwrap(), properties(&b.solution).unwrap());
    assert!((pa.gap_ev - pb.gap_ev).abs() / 27.211386 < 1e-6);
}

#[test]
fn damped_warm_up_converges_from_core_guess() {
    let m = manifest("conformers_9to11.jsonl");
    let mol = m.iter().find(|m| m.id() == "m041-c0").unwrap();
    let res = scf(mol, &load_basis("sto-3g").unwrap(), &SCFOptions::default()).unwrap();
    assert!(res.converged && res.iterations <= 25, "{} iterations", res.iterations);
    let gap = properties(&res.solution).unwrap().gap_ev;
    assert!((1.0..10.0).contains(&gap), "gap {gap}");
}
