//! Coulomb and exchange matrices from the packed ERI tensor.
//!
//! J_kl = Σ_ij (ij|kl) ρ_ij and K_il = -½ Σ_jk (ij|kl) ρ_jk. The ½ of the
//! closed-shell exchange is folded into K, so F = H + J + a_x K + V_xc.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::real::Real;

use super::eri::{DenseERI, PackedERI};
use super::IntegralError;

/// Entries per partial accumulator. Fixed so the reduction order, and hence
/// the result, does not depend on the number of threads.
const CHUNK: usize = 1 << 15;

fn check_dims<T: Real>(n: usize, rho: &DMatrix<T>) -> Result<(), IntegralError> {
    if rho.nrows() != n || rho.ncols() != n {
        return Err(IntegralError::DimensionMismatch {
            expected: n,
            rows: rho.nrows(),
            cols: rho.ncols(),
        });
    }
    Ok(())
}

/// Builds (J, K) in a single pass over the canonical entries. Accumulation
/// is carried out in `f64`.
pub fn build_jk<T: Real>(eri: &PackedERI<T>, rho: &DMatrix<T>) -> Result<(DMatrix<T>, DMatrix<T>), IntegralError> {
    let n = eri.n_ao;
    check_dims(n, rho)?;
    let p: Vec<f64> = (0..n * n).map(|x| rho[(x / n, x % n)].f64()).collect();

    let partials: Vec<(Vec<f64>, Vec<f64>)> = eri
        .quads
        .par_chunks(CHUNK)
        .zip(eri.values.par_chunks(CHUNK))
        .map(|(qs, vs)| {
            let mut j = vec![0.0; n * n];
            let mut k = vec![0.0; n * n];
            for (q, &v) in qs.iter().zip(vs) {
                let [a, b, c, d] = q.map(usize::from);
                let mut v = v.f64();
                if a == b {
                    v *= 0.5;
                }
                if c == d {
                    v *= 0.5;
                }
                if a == c && b == d {
                    v *= 0.5;
                }
                j[a * n + b] += 2.0 * v * p[c * n + d];
                j[c * n + d] += 2.0 * v * p[a * n + b];
                k[a * n + d] += v * p[b * n + c];
                k[b * n + d] += v * p[a * n + c];
                k[a * n + c] += v * p[b * n + d];
                k[b * n + c] += v * p[a * n + d];
            }
            (j, k)
        })
        .collect();

    let mut jacc = vec![0.0; n * n];
    let mut kacc = vec![0.0; n * n];
    for (j, k) in partials {
        for (a, b) in jacc.iter_mut().zip(&j) {
            *a += b;
        }
        for (a, b) in kacc.iter_mut().zip(&k) {
            *a += b;
        }
    }
    let jm = DMatrix::from_fn(n, n, |r, c| T::of(jacc[r * n + c] + jacc[c * n + r]));
    let km = DMatrix::from_fn(n, n, |r, c| T::of(-0.5 * (kacc[r * n + c] + kacc[c * n + r])));
    Ok((jm, km))
}

/// Direct contraction over the dense tensor.
pub fn build_jk_dense<T: Real>(eri: &DenseERI<T>, rho: &DMatrix<T>) -> Result<(DMatrix<T>, DMatrix<T>), IntegralError> {
    let n = eri.n;
    check_dims(n, rho)?;
    let mut j = DMatrix::<f64>::zeros(n, n);
    let mut k = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = eri.get(a, b, c, d).f64();
                    j[(c, d)] += v * rho[(a, b)].f64();
                    k[(a, d)] -= 0.5 * v * rho[(b, c)].f64();
                }
            }
        }
    }
    Ok((j.map(T::of), k.map(T::of)))
}
