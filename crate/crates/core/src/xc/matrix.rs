//! Exchange-correlation energy and potential matrix.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::real::Real;

use super::ao::{AOGridValues, GridBatch};
use super::functional::b3lyp;
use super::grid::Grid;
use super::XcError;

#[derive(Debug, Clone)]
pub struct XCResult<T: Real> {
    /// Semi-local XC energy in Hartree (exact exchange excluded).
    pub exc: f64,
    pub vxc: DMatrix<T>,
}

/// Density and its gradient on a batch: returns (n, ∇n) with ∇n as three columns.
fn batch_density<T: Real>(b: &GridBatch<T>, rho: &DMatrix<T>) -> (DVector<T>, [DVector<T>; 3]) {
    let x = &b.phi * rho;
    let n = x.component_mul(&b.phi).column_sum();
    let two = T::of(2.0);
    let g = [
        x.component_mul(&b.grad[0]).column_sum() * two,
        x.component_mul(&b.grad[1]).column_sum() * two,
        x.component_mul(&b.grad[2]).column_sum() * two,
    ];
    (n, g)
}

/// Electron density at every grid point, in grid order.
pub fn density_on_grid<T: Real>(aov: &AOGridValues<T>, rho: &DMatrix<T>) -> Vec<T> {
    aov.batches
        .iter()
        .flat_map(|b| batch_density(b, rho).0.iter().copied().collect::<Vec<_>>())
        .collect()
}

/// E_xc = Σ_p w_p n_p exc_p and V_xc = φᵀA + Aᵀφ with
/// A = w (½ vrho φ + 2 vsigma ∇n·∇φ).
pub fn xc_matrix<T: Real>(grid: &Grid, aov: &AOGridValues<T>, rho: &DMatrix<T>) -> Result<XCResult<T>, XcError> {
    let n = aov.n_ao;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(XcError::DimensionMismatch(format!(
            "density is {}x{}, basis has {n} functions",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if grid.len() != aov.n_points {
        return Err(XcError::DimensionMismatch(format!(
            "grid has {} points, AO values were evaluated on {}",
            grid.len(),
            aov.n_points
        )));
    }
    let partials: Vec<Result<(f64, DMatrix<T>), XcError>> = aov
        .batches
        .par_iter()
        .map(|b| {
            let (dens, g) = batch_density(b, rho);
            let sigma: Vec<T> = (0..dens.len())
                .map(|i| g[0][i] * g[0][i] + g[1][i] * g[1][i] + g[2][i] * g[2][i])
                .collect();
            let (exc, vrho, vsigma) = b3lyp(dens.as_slice(), &sigma)?;
            let mut e = 0.0;
            for i in 0..dens.len() {
                e += b.weights[i].f64() * dens[i].f64() * exc[i].f64();
            }
            let half = T::of(0.5);
            let two = T::of(2.0);
            let mut aow = b.phi.clone();
            for (i, mut row) in aow.row_iter_mut().enumerate() {
                let w = b.weights[i];
                let a = w * half * vrho[i];
                let s = w * two * vsigma[i];
                let (gx, gy, gz) = (s * g[0][i], s * g[1][i], s * g[2][i]);
                for (j, v) in row.iter_mut().enumerate() {
                    *v = a * *v + gx * b.grad[0][(i, j)] + gy * b.grad[1][(i, j)] + gz * b.grad[2][(i, j)];
                }
            }
            Ok((e, b.phi.tr_mul(&aow)))
        })
        .collect();

    let mut exc = 0.0;
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for p in partials {
        let (e, v) = p?;
        exc += e;
        acc.zip_apply(&v, |a, b| *a += b.f64());
    }
    let vxc = DMatrix::from_fn(n, n, |i, j| T::of(acc[(i, j)] + acc[(j, i)]));
    Ok(XCResult { exc, vxc })
}
