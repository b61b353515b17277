//! Generalized symmetric eigenproblem FC = SCε and the closed-shell density.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::real::Real;

use super::ScfError;

/// Overlap eigenvalues below this are treated as linear dependencies.
pub const OVERLAP_DROP: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct OrbitalSolution<T: Real> {
    /// `N × M` coefficients, M ≤ N after removing linear dependencies.
    pub c: DMatrix<T>,
    /// Orbital energies in Hartree, ascending.
    pub epsilon: Vec<T>,
    pub n_occ: usize,
}

impl<T: Real> OrbitalSolution<T> {
    pub fn n_orbitals(&self) -> usize {
        self.epsilon.len()
    }
}

/// Eigenpairs of a symmetric matrix sorted by ascending eigenvalue.
pub fn sorted_eigen<T: Real>(m: DMatrix<T>) -> Result<(Vec<T>, DMatrix<T>), ScfError> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m, T::default_epsilon(), 1000 * n.max(1)).ok_or(ScfError::EigenSolver)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Canonical orthogonalizer X = U s^{-1/2}, keeping eigenvalues ≥ [`OVERLAP_DROP`].
pub fn orthogonalizer<T: Real>(s: &DMatrix<T>) -> Result<DMatrix<T>, ScfError> {
    let (vals, vecs) = sorted_eigen(s.clone())?;
    if let Some(&lowest) = vals.first() {
        if lowest.f64() < -OVERLAP_DROP {
            return Err(ScfError::OverlapNotPositive(lowest.f64()));
        }
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k].f64() >= OVERLAP_DROP).collect();
    if keep.is_empty() {
        return Err(ScfError::OverlapNotPositive(vals.last().map_or(0.0, |v| v.f64())));
    }
    Ok(DMatrix::from_fn(s.nrows(), keep.len(), |i, j| {
        vecs[(i, keep[j])] / vals[keep[j]].sqrt()
    }))
}

/// Solves FC = SCε through canonical orthogonalization.
pub fn solve_roothaan<T: Real>(f: &DMatrix<T>, s: &DMatrix<T>, n_occ: usize) -> Result<OrbitalSolution<T>, ScfError> {
    let x = orthogonalizer(s)?;
    solve_with(f, &x, n_occ)
}

/// Same as [`solve_roothaan`] with a precomputed orthogonalizer.
pub fn solve_with<T: Real>(f: &DMatrix<T>, x: &DMatrix<T>, n_occ: usize) -> Result<OrbitalSolution<T>, ScfError> {
    if f.nrows() != x.nrows() || f.ncols() != x.nrows() {
        return Err(ScfError::DimensionMismatch(format!(
            "Fock is {}x{}, overlap has {} rows",
            f.nrows(),
            f.ncols(),
            x.nrows()
        )));
    }
    let fp = x.tr_mul(&(f * x));
    let fp = (&fp + fp.transpose()) * T::of(0.5);
    let (epsilon, cp) = sorted_eigen(fp)?;
    Ok(OrbitalSolution { c: x * cp, epsilon, n_occ })
}

/// ρ = 2 C_occ C_occᵀ.
pub fn density<T: Real>(sol: &OrbitalSolution<T>) -> Result<DMatrix<T>, ScfError> {
    if sol.n_occ > sol.c.ncols() {
        return Err(ScfError::BasisTooSmall {
            n_occ: sol.n_occ,
            n_orbitals: sol.c.ncols(),
        });
    }
    let occ = sol.c.columns(0, sol.n_occ);
    Ok(occ * occ.transpose() * T::of(2.0))
}
