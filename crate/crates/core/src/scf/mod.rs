//! Restricted Kohn-Sham SCF driver.

pub mod diis;
pub mod solve;

use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{AOBasis, BasisError, BasisSet};
use crate::integrals::{build_jk, eri_packed, one_electron, EriOptions, IntegralError, IntegralSet};
use crate::molio::{MolError, Molecule};
use crate::real::{Precision, Real};
use crate::units::hartree_to_ev;
use crate::xc::{build_grid, eval_ao, xc_matrix, Grid, XcError, DEFAULT_GRID_LEVEL, HF_EXCHANGE};

pub use diis::{Diis, DiisStep};
pub use solve::{density, orthogonalizer, solve_roothaan, solve_with, sorted_eigen, OrbitalSolution};

/// Energies over which the convergence criterion is evaluated.
pub const CONVERGENCE_WINDOW: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum ScfError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("overlap matrix is not positive definite (eigenvalue {0:e})")]
    OverlapNotPositive(f64),
    #[error("symmetric eigensolver did not converge")]
    EigenSolver,
    #[error("{n_occ} occupied orbitals requested but only {n_orbitals} available")]
    BasisTooSmall { n_occ: usize, n_orbitals: usize },
    #[error("no virtual orbital: all {0} orbitals are occupied")]
    NoVirtual(usize),
    #[error(transparent)]
    Molecule(#[from] MolError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Xc(#[from] XcError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Accelerator {
    /// Pulay DIIS, falling back to damping when its system is singular.
    Diis,
    /// Damped Fock mixing only.
    Damping,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SCFOptions {
    pub max_iterations: usize,
    /// Threshold on the population standard deviation of the last five
    /// total energies, in Hartree.
    pub convergence_std: f64,
    pub diis_history: usize,
    /// Iterations mixed with damping before DIIS extrapolation starts.
    pub diis_start: usize,
    pub precision: Precision,
    /// Weight of the previous Fock matrix in damped iterations.
    pub damping_factor: f64,
    pub grid_level: u32,
    pub accelerator: Accelerator,
    pub screen_eps: f64,
}

impl Default for SCFOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            convergence_std: 0.01,
            diis_history: 8,
            diis_start: 2,
            precision: Precision::F64,
            damping_factor: 0.5,
            grid_level: DEFAULT_GRID_LEVEL,
            accelerator: Accelerator::Diis,
            screen_eps: EriOptions::default().screen_eps,
        }
    }
}

impl SCFOptions {
    pub fn validate(&self) -> Result<(), ScfError> {
        if self.max_iterations < CONVERGENCE_WINDOW {
            return Err(ScfError::InvalidOptions(format!(
                "max_iterations must be at least {CONVERGENCE_WINDOW}, got {}",
                self.max_iterations
            )));
        }
        if !(self.convergence_std > 0.0) {
            return Err(ScfError::InvalidOptions("convergence_std must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.damping_factor) {
            return Err(ScfError::InvalidOptions("damping_factor must be in [0, 1)".into()));
        }
        if self.diis_history == 0 {
            return Err(ScfError::InvalidOptions("diis_history must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyComponents {
    pub e_nn: f64,
    /// Tr(ρ(T+V))
    pub e_core: f64,
    /// ½ Tr(ρJ)
    pub e_coulomb: f64,
    /// ½ a_x Tr(ρK)
    pub e_exx: f64,
    pub e_xc: f64,
}

impl EnergyComponents {
    pub fn total(&self) -> f64 {
        self.e_nn + self.e_core + self.e_coulomb + self.e_exx + self.e_xc
    }
}

/// Per-iteration diagnostics of the density the energy was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub energy: f64,
    /// Tr(ρS)
    pub electrons: f64,
    /// max |CᵀSC − I| of the orbitals that produced ρ.
    pub orthonormality: f64,
}

#[derive(Debug, Clone)]
pub struct SCFResult {
    /// Orbitals of the final Fock matrix, converted to f64.
    pub solution: OrbitalSolution<f64>,
    pub e_total: f64,
    pub components: EnergyComponents,
    pub energy_history: Vec<f64>,
    pub trace: Vec<IterationTrace>,
    pub converged: bool,
    pub iterations: usize,
    pub precision: Precision,
    pub n_ao: usize,
    pub n_grid_points: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Properties {
    /// Hartree
    pub homo: f64,
    /// Hartree
    pub lumo: f64,
    /// lumo − homo in eV
    pub gap_ev: f64,
}

/// Population standard deviation.
pub fn population_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt()
}

/// Convergence test on the trailing window of an energy history.
pub fn is_converged(history: &[f64], threshold: f64) -> bool {
    history.len() >= CONVERGENCE_WINDOW && population_std(&history[history.len() - CONVERGENCE_WINDOW..]) < threshold
}

/// F = H + J + a_x K + V_xc.
pub fn fock<T: Real>(ints: &IntegralSet<T>, j: &DMatrix<T>, k: &DMatrix<T>, vxc: &DMatrix<T>) -> Result<DMatrix<T>, ScfError> {
    let n = ints.n_ao;
    for (name, m) in [("J", j), ("K", k), ("V_xc", vxc)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(ScfError::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
        }
    }
    Ok(ints.core_hamiltonian() + j + k * T::of(HF_EXCHANGE) + vxc)
}

fn trace_product<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| x.f64() * y.f64()).sum()
}

fn orthonormality_error<T: Real>(c: &DMatrix<T>, s: &DMatrix<T>) -> f64 {
    let c64 = c.map(|x| x.f64());
    let m = c64.transpose() * s.map(|x| x.f64()) * &c64;
    (m - DMatrix::identity(c.ncols(), c.ncols())).abs().max()
}

/// HOMO, LUMO and gap from an orbital solution.
pub fn properties(sol: &OrbitalSolution<f64>) -> Result<Properties, ScfError> {
    if sol.n_occ == 0 || sol.n_occ >= sol.epsilon.len() {
        return Err(ScfError::NoVirtual(sol.epsilon.len()));
    }
    let homo = sol.epsilon[sol.n_occ - 1];
    let lumo = sol.epsilon[sol.n_occ];
    Ok(Properties {
        homo,
        lumo,
        gap_ev: hartree_to_ev(lumo - homo),
    })
}

/// Runs the SCF in the precision selected by `opts`.
pub fn scf(mol: &Molecule, basis: &BasisSet, opts: &SCFOptions) -> Result<SCFResult, ScfError> {
    scf_on_grid(mol, basis, opts, None)
}

/// As [`scf`], optionally on a caller-supplied grid instead of one built at
/// `opts.grid_level`.
pub fn scf_on_grid(mol: &Molecule, basis: &BasisSet, opts: &SCFOptions, grid: Option<&Grid>) -> Result<SCFResult, ScfError> {
    match opts.precision {
        Precision::F64 => run::<f64>(mol, basis, opts, grid),
        Precision::F32 => run::<f32>(mol, basis, opts, grid),
    }
}

fn run<T: Real>(mol: &Molecule, basis: &BasisSet, opts: &SCFOptions, grid: Option<&Grid>) -> Result<SCFResult, ScfError> {
    opts.validate()?;
    let start = Instant::now();
    let n_elec = mol.electron_count()?;
    let n_occ = n_elec / 2;
    let e_nn = mol.nuclear_repulsion()?;
    let ao = AOBasis::expand(mol, basis)?;
    let n = ao.n_ao;

    let ints = one_electron::<T>(&ao, mol);
    let eri = eri_packed::<T>(
        &ao,
        &EriOptions {
            screen_eps: opts.screen_eps,
            ..EriOptions::default()
        },
    )?;
    let built;
    let grid = match grid {
        Some(g) => g,
        None => {
            built = build_grid(mol, opts.grid_level)?;
            &built
        }
    };
    let aov = eval_ao::<T>(&ao, grid);
    let x = orthogonalizer(&ints.s)?;
    let h = ints.core_hamiltonian();

    let mut sol = solve_with(&h, &x, n_occ)?;
    let mut rho = density(&sol)?;
    let mut diis = Diis::<T>::new(opts.diis_history);
    let mut previous_fock: Option<DMatrix<T>> = None;
    let mut history = Vec::new();
    let mut trace = Vec::new();
    let mut components = EnergyComponents::default();
    let mut last_fock = h.clone();
    let mut converged = false;
    let damp = T::of(opts.damping_factor);

    for it in 0..opts.max_iterations {
        let (j, k) = build_jk(&eri, &rho)?;
        let xc = xc_matrix(grid, &aov, &rho)?;
        let f = fock(&ints, &j, &k, &xc.vxc)?;
        components = EnergyComponents {
            e_nn,
            e_core: trace_product(&rho, &h),
            e_coulomb: 0.5 * trace_product(&rho, &j),
            e_exx: 0.5 * HF_EXCHANGE * trace_product(&rho, &k),
            e_xc: xc.exc,
        };
        let energy = components.total();
        history.push(energy);
        trace.push(IterationTrace {
            energy,
            electrons: trace_product(&rho, &ints.s),
            orthonormality: orthonormality_error(&sol.c, &ints.s),
        });
        last_fock = f.clone();
        if is_converged(&history, opts.convergence_std) {
            converged = true;
            break;
        }

        let damped = |f: &DMatrix<T>, prev: &Option<DMatrix<T>>| match prev {
            Some(p) => f * (T::one() - damp) + p * damp,
            None => f.clone(),
        };
        let next = match opts.accelerator {
            Accelerator::Damping => damped(&f, &previous_fock),
            Accelerator::Diis => {
                let err = &f * &rho * &ints.s - &ints.s * &rho * &f;
                diis.push(f.clone(), err);
                match diis.extrapolate() {
                    DiisStep::Extrapolated(g) if it >= opts.diis_start => g,
                    _ => damped(&f, &previous_fock),
                }
            }
        };
        sol = solve_with(&next, &x, n_occ)?;
        rho = density(&sol)?;
        previous_fock = Some(next);
    }

    // orbitals of the Fock matrix built from the last density
    let final_sol = solve_with(&last_fock, &x, n_occ)?;
    log::debug!(
        "scf {} {:?}: {} iterations, E = {:.8}, converged = {converged}",
        mol.id(),
        T::PRECISION,
        history.len(),
        components.total()
    );
    Ok(SCFResult {
        solution: OrbitalSolution {
            c: final_sol.c.map(|v| v.f64()),
            epsilon: final_sol.epsilon.iter().map(|v| v.f64()).collect(),
            n_occ,
        },
        e_total: components.total(),
        components,
        iterations: history.len(),
        energy_history: history,
        trace,
        converged,
        precision: T::PRECISION,
        n_ao: n,
        n_grid_points: grid.len(),
        seconds: start.elapsed().as_secs_f64(),
    })
}
