use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::{cart_components, AOBasis};
use crate::molio::Molecule;
use crate::real::Real;

use super::boys::boys;
use super::hermite::{hermite_list, hermite_r, Hermite1D, RScratch};
use super::pairs::ShellPair;

/// Overlap, kinetic and nuclear-attraction matrices.
#[derive(Debug, Clone)]
pub struct IntegralSet<T: Real> {
    pub s: DMatrix<T>,
    pub t: DMatrix<T>,
    pub v: DMatrix<T>,
    pub n_ao: usize,
}

impl<T: Real> IntegralSet<T> {
    /// Core Hamiltonian T + V.
    pub fn core_hamiltonian(&self) -> DMatrix<T> {
        &self.t + &self.v
    }
}

struct Block<T> {
    a: usize,
    b: usize,
    s: Vec<T>,
    t: Vec<T>,
    v: Vec<T>,
}

/// Analytic S, T and V over the AO basis; V sums −Z_C/|r−C| over all
/// nuclei of `mol`.
pub fn one_electron<T: Real>(ao: &AOBasis, mol: &Molecule) -> IntegralSet<T> {
    let pairs: Vec<(usize, usize)> = (0..ao.shells.len())
        .flat_map(|a| (0..=a).map(move |b| (a, b)))
        .collect();
    let nuclei: Vec<(T, [f64; 3])> = mol
        .atoms()
        .iter()
        .map(|at| (T::of(at.atomic_number as f64), at.position.into()))
        .collect();

    let blocks: Vec<Block<T>> = pairs
        .par_iter()
        .map(|&(a, b)| shell_pair_block(ao, a, b, &nuclei))
        .collect();

    let n = ao.n_ao;
    let mut s = DMatrix::zeros(n, n);
    let mut t = DMatrix::zeros(n, n);
    let mut v = DMatrix::zeros(n, n);
    for blk in blocks {
        let sa = &ao.shells[blk.a];
        let sb = &ao.shells[blk.b];
        let nb = sb.n_cart();
        for i in 0..sa.n_cart() {
            for j in 0..nb {
                let (p, q) = (sa.ao_offset + i, sb.ao_offset + j);
                let k = i * nb + j;
                for (m, src) in [(&mut s, &blk.s), (&mut t, &blk.t), (&mut v, &blk.v)] {
                    m[(p, q)] = src[k];
                    m[(q, p)] = src[k];
                }
            }
        }
    }
    IntegralSet { s, t, v, n_ao: n }
}

fn shell_pair_block<T: Real>(ao: &AOBasis, a: usize, b: usize, nuclei: &[(T, [f64; 3])]) -> Block<T> {
    let sa = &ao.shells[a];
    let sb = &ao.shells[b];
    let comps_a = cart_components(sa.l);
    let comps_b = cart_components(sb.l);
    let scale_a = sa.component_scales();
    let scale_b = sb.component_scales();
    let (la, lb) = (sa.l as usize, sb.l as usize);
    let ncomp = comps_a.len() * comps_b.len();
    let mut s = vec![T::zero(); ncomp];
    let mut t = vec![T::zero(); ncomp];
    let pi = T::pi();

    let ab = sa.origin - sb.origin;
    for (&ea, &ca) in sa.exponents.iter().zip(&sa.coefficients) {
        for (&eb, &cb) in sb.exponents.iter().zip(&sb.coefficients) {
            let p = ea + eb;
            let mu = ea * eb / p;
            let center = (sa.origin * ea + sb.origin * eb) / p;
            let pt = T::of(p);
            let axes: Vec<Hermite1D<T>> = (0..3)
                .map(|d| {
                    Hermite1D::new(
                        la,
                        lb + 2,
                        pt,
                        T::of(center[d] - sa.origin[d]),
                        T::of(center[d] - sb.origin[d]),
                        T::of((-mu * ab[d] * ab[d]).exp()),
                    )
                })
                .collect();
            let norm = T::of(ca * cb) * (pi / pt).powf(T::of(1.5));
            let bexp = T::of(eb);
            for (ia, ca3) in comps_a.iter().enumerate() {
                for (ib, cb3) in comps_b.iter().enumerate() {
                    let ov = |d: usize, dj: i32| -> T {
                        let j = cb3[d] as i32 + dj;
                        if j < 0 {
                            T::zero()
                        } else {
                            axes[d].get(ca3[d] as usize, j as usize, 0)
                        }
                    };
                    let lap = |d: usize| -> T {
                        let j = cb3[d] as f64;
                        T::of(j * (j - 1.0)) * ov(d, -2) - T::of(2.0 * (2.0 * j + 1.0)) * bexp * ov(d, 0)
                            + T::of(4.0) * bexp * bexp * ov(d, 2)
                    };
                    let (sx, sy, sz) = (ov(0, 0), ov(1, 0), ov(2, 0));
                    let f = norm * T::of(scale_a[ia] * scale_b[ib]);
                    let k = ia * comps_b.len() + ib;
                    s[k] += f * sx * sy * sz;
                    t[k] += f * T::of(-0.5) * (lap(0) * sy * sz + sx * lap(1) * sz + sx * sy * lap(2));
                }
            }
        }
    }

    let v = nuclear_block(&ShellPair::<T>::new(a, sa, b, sb), nuclei);
    Block { a, b, s, t, v }
}

fn nuclear_block<T: Real>(pair: &ShellPair<T>, nuclei: &[(T, [f64; 3])]) -> Vec<T> {
    let l = pair.l();
    let herm = hermite_list(l);
    let side = l + 1;
    let cube: Vec<usize> = herm.iter().map(|h| (h[0] * side + h[1]) * side + h[2]).collect();
    let nh = herm.len();
    let mut v = vec![T::zero(); pair.n_comp()];
    let mut fm = [T::zero(); 17];
    let mut ws = RScratch::default();
    let mut r = Vec::new();
    let mut rsum = vec![T::zero(); nh];
    let two_pi = T::two_pi();
    for prim in &pair.prims {
        rsum.iter_mut().for_each(|x| *x = T::zero());
        for &(z, c) in nuclei {
            let pc = [
                prim.center[0] - T::of(c[0]),
                prim.center[1] - T::of(c[1]),
                prim.center[2] - T::of(c[2]),
            ];
            let x = prim.p * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]);
            boys(l, x, &mut fm);
            hermite_r(l, prim.p, pc, &fm, &mut ws, &mut r);
            for (acc, &ci) in rsum.iter_mut().zip(&cube) {
                *acc -= z * r[ci];
            }
        }
        let pref = two_pi / prim.p;
        for (k, out) in v.iter_mut().enumerate() {
            let row = &prim.e[k * nh..(k + 1) * nh];
            let dot = row.iter().zip(&rsum).fold(T::zero(), |acc, (&e, &r)| acc + e * r);
            *out += pref * dot;
        }
    }
    v
}
