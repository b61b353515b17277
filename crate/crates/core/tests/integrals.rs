mod common;

use common::*;
use dftgen::integrals::eri::{canonical, canonical_count, quartet, QuartetScratch};
use dftgen::integrals::pairs::ShellPair;
use dftgen::integrals::{
    build_jk, build_jk_dense, dense_eri, dump, eri_packed, one_electron, EriOptions, IntegralError,
};
use nalgebra::{DMatrix, Vector3};
use serde::Deserialize;

#[derive(Deserialize)]
struct Reference {
    name: String,
    basis: String,
    atoms_bohr: Vec<[f64; 4]>,
    n_ao: usize,
    e_nuc: f64,
    s: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    eri: Option<Vec<(usize, usize, usize, usize, f64)>>,
}

fn matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

#[test]
fn one_and_two_electron_integrals_match_reference() {
    let refs: Vec<Reference> = read_json("oracle_integrals.json");
    for r in &refs {
        let mol = from_atoms(&r.atoms_bohr);
        let ao = basis_for(&mol, &r.basis);
        assert_eq!(ao.n_ao, r.n_ao, "{}", r.name);
        assert!((mol.nuclear_repulsion().unwrap() - r.e_nuc).abs() < 1e-10, "{}", r.name);

        let ints = one_electron::<f64>(&ao, &mol);
        // Cartesian d components may be normalized differently by the
        // reference; compare in the unit-diagonal-overlap convention.
        let ref_s = matrix(&r.s);
        let d_ref: Vec<f64> = (0..r.n_ao).map(|i| ref_s[(i, i)].sqrt().recip()).collect();
        let d_own: Vec<f64> = (0..r.n_ao).map(|i| ints.s[(i, i)].sqrt().recip()).collect();
        for (own, reference, label) in [(&ints.s, &r.s, "S"), (&ints.t, &r.t, "T"), (&ints.v, &r.v, "V")] {
            let reference = matrix(reference);
            for i in 0..r.n_ao {
                for j in 0..r.n_ao {
                    let a = own[(i, j)] * d_own[i] * d_own[j];
                    let b = reference[(i, j)] * d_ref[i] * d_ref[j];
                    assert!((a - b).abs() < 1e-8, "{} {label}[{i},{j}]: {a} vs {b}", r.name);
                }
            }
        }

        if let Some(eri) = &r.eri {
            let dense = dense_eri::<f64>(&ao).unwrap();
            for &(i, j, k, l, v) in eri {
                let a = dense.get(i, j, k, l) * d_own[i] * d_own[j] * d_own[k] * d_own[l];
                let b = v * d_ref[i] * d_ref[j] * d_ref[k] * d_ref[l];
                assert!((a - b).abs() < 1e-8, "{} ({i}{j}|{k}{l}): {a} vs {b}", r.name);
            }
        }
    }
}

#[test]
fn overlap_diagonal_is_unity() {
    for mol in oracle_suite().iter().take(8) {
        for basis in ["sto-3g", "6-31g"] {
            let ao = basis_for(mol, basis);
            let s = one_electron::<f64>(&ao, mol).s;
            for i in 0..ao.n_ao {
                assert!((s[(i, i)] - 1.0).abs() < 1e-10, "{} {basis} S[{i},{i}] = {}", mol.id(), s[(i, i)]);
            }
        }
    }
}

#[test]
fn one_electron_translation_invariance() {
    let mol = suite_molecule("nh3");
    let shifted = mol.map_positions(|p| p + Vector3::new(3.1, -0.7, 12.4)).unwrap();
    let a = one_electron::<f64>(&basis_for(&mol, "6-31g"), &mol);
    let b = one_electron::<f64>(&basis_for(&shifted, "6-31g"), &shifted);
    assert!(max_abs_diff(&a.s, &b.s) < 1e-10);
    assert!(max_abs_diff(&a.t, &b.t) < 1e-10);
    assert!(max_abs_diff(&a.v, &b.v) < 1e-10);
}

#[test]
fn packed_values_sit_at_all_symmetry_images() {
    let mol = suite_molecule("h2o");
    let ao = basis_for(&mol, "crates/core/tests/data/d_shell.gbs");
    let packed = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
    let dense = dense_eri::<f64>(&ao).unwrap();
    for (q, &v) in packed.quads.iter().zip(&packed.values) {
        let [i, j, k, l] = q.map(usize::from);
        assert_eq!(canonical(i, j, k, l), [i, j, k, l]);
        for [a, b, c, d] in [
            [i, j, k, l],
            [j, i, k, l],
            [i, j, l, k],
            [j, i, l, k],
            [k, l, i, j],
            [l, k, i, j],
            [k, l, j, i],
            [l, k, j, i],
        ] {
            assert_eq!(dense.get(a, b, c, d), v);
        }
    }
    assert!(packed.len() <= canonical_count(ao.n_ao));
}

#[test]
fn non_canonical_quartets_agree_with_canonical_ones() {
    // Recompute every shell quartet in every orientation directly from the
    // kernel and compare with the symmetry-expanded tensor.
    let mol = suite_molecule("h2o");
    let ao = basis_for(&mol, "crates/core/tests/data/d_shell.gbs");
    let dense = dense_eri::<f64>(&ao).unwrap();
    let ns = ao.shells.len();
    let mut ws = QuartetScratch::default();
    let mut buf = Vec::new();
    let mut worst: f64 = 0.0;
    for a in 0..ns {
        for b in 0..ns {
            let bra = ShellPair::<f64>::new(a, &ao.shells[a], b, &ao.shells[b]);
            for c in 0..ns {
                for d in 0..ns {
                    let ket = ShellPair::<f64>::new(c, &ao.shells[c], d, &ao.shells[d]);
                    quartet(&bra, &ket, &mut ws, &mut buf);
                    let nd = ket.n_comp_b;
                    for ia in 0..bra.n_comp_a {
                        for ib in 0..bra.n_comp_b {
                            for ic in 0..ket.n_comp_a {
                                for id in 0..nd {
                                    let v = buf[(ia * bra.n_comp_b + ib) * ket.n_comp() + ic * nd + id];
                                    let (i, j) = (ao.ao_offsets[a] + ia, ao.ao_offsets[b] + ib);
                                    let (k, l) = (ao.ao_offsets[c] + ic, ao.ao_offsets[d] + id);
                                    worst = worst.max((v - dense.get(i, j, k, l)).abs());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(worst < 1e-12, "max deviation {worst:e}");
}

fn check_jk_against_dense(mol: &dftgen::Molecule, basis: &str, n_rho: usize, seed: u64) {
    let ao = basis_for(mol, basis);
    let opts = EriOptions {
        screen_eps: 0.0,
        ..EriOptions::default()
    };
    let packed = eri_packed::<f64>(&ao, &opts).unwrap();
    let dense = packed.unpack();
    let mut rng = rng(seed);
    for _ in 0..n_rho {
        let rho = random_symmetric(ao.n_ao, &mut rng);
        let (j, k) = build_jk(&packed, &rho).unwrap();
        let (jd, kd) = build_jk_dense(&dense, &rho).unwrap();
        assert!(max_abs_diff(&j, &jd) < 1e-10, "J n={}", ao.n_ao);
        assert!(max_abs_diff(&k, &kd) < 1e-10, "K n={}", ao.n_ao);
        assert!(max_abs_diff(&j, &j.transpose()) < 1e-10);
        assert!(max_abs_diff(&k, &k.transpose()) < 1e-10);
    }
}

#[test]
fn packed_jk_matches_dense_contraction() {
    check_jk_against_dense(&suite_molecule("h2o"), "sto-3g", 20, 1);
    check_jk_against_dense(&suite_molecule("ch4"), "6-31g", 20, 2);
    check_jk_against_dense(&ethane(), "6-31g", 20, 3);
}

#[test]
fn packed_jk_matches_dense_on_nine_heavy_atoms() {
    let mol = oracle_suite().into_iter().find(|m| m.heavy_atom_count() == 9).unwrap();
    check_jk_against_dense(&mol, "sto-3g", 2, 4);
}

#[test]
fn screening_changes_jk_negligibly() {
    let mol = oracle_suite().into_iter().find(|m| m.heavy_atom_count() == 9).unwrap();
    let ao = basis_for(&mol, "sto-3g");
    let full = eri_packed::<f64>(&ao, &EriOptions { screen_eps: 0.0, ..EriOptions::default() }).unwrap();
    let screened = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
    assert!(screened.len() < full.len());
    let mut rng = rng(5);
    for _ in 0..3 {
        let rho = random_symmetric(ao.n_ao, &mut rng);
        let (j0, k0) = build_jk(&full, &rho).unwrap();
        let (j1, k1) = build_jk(&screened, &rho).unwrap();
        assert!(max_abs_diff(&j0, &j1) < 1e-9);
        assert!(max_abs_diff(&k0, &k1) < 1e-9);
    }
}

#[test]
fn jk_is_linear_and_coulomb_energy_nonnegative() {
    let mol = suite_molecule("nh3");
    let ao = basis_for(&mol, "6-31g");
    let packed = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
    let mut rng = rng(6);
    for _ in 0..5 {
        let r1 = random_symmetric(ao.n_ao, &mut rng);
        let r2 = random_symmetric(ao.n_ao, &mut rng);
        let (a, b) = (0.7, -1.9);
        let (j1, k1) = build_jk(&packed, &r1).unwrap();
        let (j2, k2) = build_jk(&packed, &r2).unwrap();
        let (j, k) = build_jk(&packed, &(&r1 * a + &r2 * b)).unwrap();
        let jl = &j1 * a + &j2 * b;
        let kl = &k1 * a + &k2 * b;
        assert!(max_abs_diff(&j, &jl) <= 1e-12 * jl.abs().max());
        assert!(max_abs_diff(&k, &kl) <= 1e-12 * kl.abs().max());
        // (ρ|ρ) is a Coulomb self-energy
        assert!(r1.dot(&j1) >= -1e-10);
    }
}

#[test]
fn float32_integrals_track_float64() {
    let mol = suite_molecule("h2o");
    let ao = basis_for(&mol, "sto-3g");
    let i64 = one_electron::<f64>(&ao, &mol);
    let i32 = one_electron::<f32>(&ao, &mol);
    let h64 = i64.core_hamiltonian();
    let h32 = i32.core_hamiltonian().map(|x| x as f64);
    assert!(max_abs_diff(&h64, &h32) < 1e-4);
    let e64 = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap().unpack();
    let e32 = eri_packed::<f32>(&ao, &EriOptions::default()).unwrap().unpack();
    let worst = e64.data.iter().zip(&e32.data).map(|(a, &b)| (a - b as f64).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn size_limits_and_dimension_errors() {
    let mol = ethane();
    let ao = basis_for(&mol, "6-31g");
    let small = EriOptions { max_n_ao: 10, ..EriOptions::default() };
    assert!(matches!(eri_packed::<f64>(&ao, &small), Err(IntegralError::TooManyAOs { n_ao: 30, max: 10 })));
    let tight = EriOptions { memory_budget: 1000, ..EriOptions::default() };
    assert!(matches!(eri_packed::<f64>(&ao, &tight), Err(IntegralError::MemoryBudget { .. })));
    let big = oracle_suite().into_iter().find(|m| m.heavy_atom_count() == 9).unwrap();
    assert!(matches!(
        dense_eri::<f64>(&basis_for(&big, "sto-3g")),
        Err(IntegralError::DenseTooLarge { .. })
    ));
    let packed = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
    assert!(matches!(
        build_jk(&packed, &DMatrix::zeros(3, 3)),
        Err(IntegralError::DimensionMismatch { expected: 30, rows: 3, cols: 3 })
    ));
}

#[test]
fn binary_dump_round_trip() {
    let mol = suite_molecule("h2o");
    let ao = basis_for(&mol, "sto-3g");
    let packed = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
    let mut buf = Vec::new();
    dump::write_packed(&mut buf, &packed).unwrap();
    assert_eq!(buf.len(), 12 + packed.len() * 16);
    let back = dump::read_packed::<f64, _>(&mut buf.as_slice()).unwrap();
    assert_eq!(back.quads, packed.quads);
    assert_eq!(back.values, packed.values);

    let ints = one_electron::<f32>(&ao, &mol);
    let mut buf = Vec::new();
    dump::write_integral_set(&mut buf, &ints).unwrap();
    assert_eq!(buf.len(), 12 + 3 * 49 * 4);
    let back = dump::read_integral_set::<f32, _>(&mut buf.as_slice()).unwrap();
    assert_eq!(back.s, ints.s);
    assert_eq!(back.v, ints.v);
}
