//! Atomic orbitals and their Cartesian gradients on grid points.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::basis::{cart_components, AOBasis};
use crate::real::Real;

use super::grid::Grid;

/// Points per batch. Batches are the unit of parallel work and of the
/// fixed-order reductions in [`super::xc_matrix`].
pub const BATCH_SIZE: usize = 1024;

/// Shells whose most diffuse primitive has decayed below e^{-CUTOFF} at a
/// point are left at zero there.
const EXPONENT_CUTOFF: f64 = 40.0;

pub struct GridBatch<T: Real> {
    pub weights: DVector<T>,
    /// `n_points × n_ao`
    pub phi: DMatrix<T>,
    /// ∂/∂x, ∂/∂y, ∂/∂z of `phi`.
    pub grad: [DMatrix<T>; 3],
}

pub struct AOGridValues<T: Real> {
    pub batches: Vec<GridBatch<T>>,
    pub n_ao: usize,
    pub n_points: usize,
}

impl<T: Real> AOGridValues<T> {
    /// Values at global point `p` as (phi row, gradient rows).
    pub fn point(&self, p: usize) -> (Vec<T>, [Vec<T>; 3]) {
        let b = &self.batches[p / BATCH_SIZE];
        let r = p % BATCH_SIZE;
        let row = |m: &DMatrix<T>| (0..self.n_ao).map(|j| m[(r, j)]).collect::<Vec<T>>();
        (row(&b.phi), [row(&b.grad[0]), row(&b.grad[1]), row(&b.grad[2])])
    }
}

struct ShellEval {
    origin: [f64; 3],
    offset: usize,
    comps: Vec<[u32; 3]>,
    scales: Vec<f64>,
    exponents: Vec<f64>,
    coefficients: Vec<f64>,
    min_exp: f64,
}

fn ipow<T: Real>(x: T, k: u32) -> T {
    let mut r = T::one();
    for _ in 0..k {
        r *= x;
    }
    r
}

/// Evaluates every AO and its gradient at the grid points.
pub fn eval_ao<T: Real>(ao: &AOBasis, grid: &Grid) -> AOGridValues<T> {
    let shells: Vec<ShellEval> = ao
        .shells
        .iter()
        .map(|s| ShellEval {
            origin: [s.origin.x, s.origin.y, s.origin.z],
            offset: s.ao_offset,
            comps: cart_components(s.l),
            scales: s.component_scales(),
            exponents: s.exponents.clone(),
            coefficients: s.coefficients.clone(),
            min_exp: s.exponents.iter().copied().fold(f64::INFINITY, f64::min),
        })
        .collect();
    let n = ao.n_ao;
    let batches = grid
        .points
        .par_chunks(BATCH_SIZE)
        .zip(grid.weights.par_chunks(BATCH_SIZE))
        .map(|(pts, ws)| {
            let np = pts.len();
            let mut phi = DMatrix::<T>::zeros(np, n);
            let mut gx = DMatrix::<T>::zeros(np, n);
            let mut gy = DMatrix::<T>::zeros(np, n);
            let mut gz = DMatrix::<T>::zeros(np, n);
            for sh in &shells {
                for (ip, p) in pts.iter().enumerate() {
                    let d = [p[0] - sh.origin[0], p[1] - sh.origin[1], p[2] - sh.origin[2]];
                    let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    if sh.min_exp * r2 > EXPONENT_CUTOFF {
                        continue;
                    }
                    let r2t = T::of(r2);
                    // radial part R and G = (1/r) dR/dr
                    let mut rad = T::zero();
                    let mut g = T::zero();
                    for (&a, &c) in sh.exponents.iter().zip(&sh.coefficients) {
                        let e = T::of(c) * (-T::of(a) * r2t).exp();
                        rad += e;
                        g -= T::of(2.0 * a) * e;
                    }
                    let x = [T::of(d[0]), T::of(d[1]), T::of(d[2])];
                    for (k, (c, &s)) in sh.comps.iter().zip(&sh.scales).enumerate() {
                        let j = sh.offset + k;
                        let s = T::of(s);
                        let px = [ipow(x[0], c[0]), ipow(x[1], c[1]), ipow(x[2], c[2])];
                        let mono = px[0] * px[1] * px[2];
                        phi[(ip, j)] = s * mono * rad;
                        for (axis, out) in [&mut gx, &mut gy, &mut gz].into_iter().enumerate() {
                            let others = px[(axis + 1) % 3] * px[(axis + 2) % 3];
                            let lower = if c[axis] > 0 {
                                T::of(c[axis] as f64) * ipow(x[axis], c[axis] - 1) * rad
                            } else {
                                T::zero()
                            };
                            out[(ip, j)] = s * others * (lower + px[axis] * x[axis] * g);
                        }
                    }
                }
            }
            GridBatch {
                weights: DVector::from_iterator(np, ws.iter().map(|&w| T::of(w))),
                phi,
                grad: [gx, gy, gz],
            }
        })
        .collect();
    AOGridValues {
        batches,
        n_ao: n,
        n_points: grid.len(),
    }
}
