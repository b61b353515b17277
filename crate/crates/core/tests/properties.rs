//! Randomized checks of basis, integral and Coulomb/exchange invariants on
//! small random molecules.

mod common;

use common::max_abs_diff;
use dftgen::basis::load_basis;
use dftgen::integrals::eri::{canonical, canonical_count};
use dftgen::integrals::{build_jk, eri_packed, one_electron, EriOptions};
use dftgen::{AOBasis, Molecule};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn arb_molecule() -> impl Strategy<Value = Molecule> {
    prop::collection::vec((prop::sample::select(vec![1u32, 6, 7, 8, 9]), prop::array::uniform3(-2.5f64..2.5)), 1..4)
        .prop_filter_map("degenerate", |atoms| {
            Molecule::from_bohr(&atoms, 0).ok().filter(|m| {
                m.atoms().iter().enumerate().all(|(i, a)| {
                    m.atoms()[..i].iter().all(|b| (a.position - b.position).norm() > 1.0)
                })
            })
        })
}

fn arb_matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
}

fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

fn setup() -> impl Strategy<Value = (Molecule, AOBasis, DMatrix<f64>, DMatrix<f64>, f64, f64)> {
    (arb_molecule(), prop::sample::select(vec!["sto-3g", "6-31g"])).prop_flat_map(|(m, name)| {
        let ao = AOBasis::expand(&m, &load_basis(name).unwrap()).unwrap();
        let n = ao.n_ao;
        (Just(m), Just(ao), arb_matrix(n), arb_matrix(n), -2.0f64..2.0, -2.0f64..2.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_is_deterministic_and_normalized((m, ao, ..) in setup()) {
        let again = AOBasis::expand(&m, &load_basis(&ao.basis_name).unwrap()).unwrap();
        prop_assert_eq!(&again, &ao);
        let s = one_electron::<f64>(&ao, &m).s;
        for i in 0..ao.n_ao {
            prop_assert!((s[(i, i)] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn packed_eri_symmetry_and_size((_m, ao, ..) in setup()) {
        let packed = eri_packed::<f64>(&ao, &EriOptions { screen_eps: 0.0, ..EriOptions::default() }).unwrap();
        prop_assert!(packed.len() <= canonical_count(ao.n_ao));
        let dense = packed.unpack();
        for (q, &v) in packed.quads.iter().zip(&packed.values) {
            let [i, j, k, l] = q.map(usize::from);
            prop_assert_eq!(canonical(i, j, k, l), [i, j, k, l]);
            for [a, b, c, d] in [[j, i, k, l], [i, j, l, k], [j, i, l, k], [k, l, i, j], [l, k, i, j], [k, l, j, i], [l, k, j, i]] {
                prop_assert_eq!(dense.get(a, b, c, d), v);
            }
        }
    }

    #[test]
    fn coulomb_and_exchange_are_linear_and_coulomb_energy_nonnegative((_m, ao, a1, a2, x, y) in setup()) {
        let packed = eri_packed::<f64>(&ao, &EriOptions::default()).unwrap();
        let (r1, r2) = (sym(&a1), sym(&a2));
        let (j1, k1) = build_jk(&packed, &r1).unwrap();
        let (j2, k2) = build_jk(&packed, &r2).unwrap();
        let (j, k) = build_jk(&packed, &(&r1 * x + &r2 * y)).unwrap();
        let jl = &j1 * x + &j2 * y;
        let kl = &k1 * x + &k2 * y;
        prop_assert!(max_abs_diff(&j, &jl) <= 1e-12 * jl.abs().max().max(1.0));
        prop_assert!(max_abs_diff(&k, &kl) <= 1e-12 * kl.abs().max().max(1.0));

        let psd = &a1 * a1.transpose();
        let (jp, _) = build_jk(&packed, &psd).unwrap();
        prop_assert!(psd.dot(&jp) >= -1e-12 * psd.norm_squared());
    }
}
