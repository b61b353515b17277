//! Shell-pair data shared by the one- and two-electron kernels: for every
//! surviving primitive pair, the Gaussian product centre and the 3D Hermite
//! expansion of all Cartesian component products (contraction and
//! normalization folded in).

use crate::basis::{cart_components, Shell};
use crate::real::Real;

use super::hermite::{hermite_list, n_hermite, Hermite1D};

/// Primitive pairs whose overlap prefactor `exp(-μ R²)` falls below this
/// are dropped.
const PRIM_PAIR_CUTOFF: f64 = 1e-18;

pub struct PrimPair<T> {
    pub p: T,
    pub center: [T; 3],
    /// `n_comp × n_herm`, row-major.
    pub e: Vec<T>,
    /// Same with (-1)^{t+u+v} applied, for use on the ket side.
    pub e_signed: Vec<T>,
}

pub struct ShellPair<T> {
    pub a: usize,
    pub b: usize,
    pub la: usize,
    pub lb: usize,
    pub n_comp_a: usize,
    pub n_comp_b: usize,
    pub prims: Vec<PrimPair<T>>,
}

impl<T: Real> ShellPair<T> {
    pub fn new(a: usize, sa: &Shell, b: usize, sb: &Shell) -> Self {
        let la = sa.l as usize;
        let lb = sb.l as usize;
        let comps_a = cart_components(sa.l);
        let comps_b = cart_components(sb.l);
        let scale_a = sa.component_scales();
        let scale_b = sb.component_scales();
        let herm = hermite_list(la + lb);
        let nh = n_hermite(la + lb);
        let ab = sa.origin - sb.origin;
        let r2 = ab.norm_squared();

        let mut prims = Vec::with_capacity(sa.exponents.len() * sb.exponents.len());
        for (&ea, &ca) in sa.exponents.iter().zip(&sa.coefficients) {
            for (&eb, &cb) in sb.exponents.iter().zip(&sb.coefficients) {
                let p = ea + eb;
                let mu = ea * eb / p;
                if (-mu * r2).exp() < PRIM_PAIR_CUTOFF {
                    continue;
                }
                let center64 = (sa.origin * ea + sb.origin * eb) / p;
                let pt = T::of(p);
                let axes: Vec<Hermite1D<T>> = (0..3)
                    .map(|d| {
                        let k = T::of((-mu * ab[d] * ab[d]).exp());
                        Hermite1D::new(
                            la,
                            lb,
                            pt,
                            T::of(center64[d] - sa.origin[d]),
                            T::of(center64[d] - sb.origin[d]),
                            k,
                        )
                    })
                    .collect();
                let coef = T::of(ca * cb);
                let mut e = vec![T::zero(); comps_a.len() * comps_b.len() * nh];
                let mut e_signed = e.clone();
                for (ia, ca3) in comps_a.iter().enumerate() {
                    for (ib, cb3) in comps_b.iter().enumerate() {
                        let row = (ia * comps_b.len() + ib) * nh;
                        let s = coef * T::of(scale_a[ia] * scale_b[ib]);
                        for (h, tuv) in herm.iter().enumerate() {
                            if tuv[0] > (ca3[0] + cb3[0]) as usize
                                || tuv[1] > (ca3[1] + cb3[1]) as usize
                                || tuv[2] > (ca3[2] + cb3[2]) as usize
                            {
                                continue;
                            }
                            let v = s
                                * axes[0].get(ca3[0] as usize, cb3[0] as usize, tuv[0])
                                * axes[1].get(ca3[1] as usize, cb3[1] as usize, tuv[1])
                                * axes[2].get(ca3[2] as usize, cb3[2] as usize, tuv[2]);
                            e[row + h] = v;
                            e_signed[row + h] = if (tuv[0] + tuv[1] + tuv[2]) % 2 == 1 { -v } else { v };
                        }
                    }
                }
                prims.push(PrimPair {
                    p: pt,
                    center: [T::of(center64.x), T::of(center64.y), T::of(center64.z)],
                    e,
                    e_signed,
                });
            }
        }
        Self {
            a,
            b,
            la,
            lb,
            n_comp_a: comps_a.len(),
            n_comp_b: comps_b.len(),
            prims,
        }
    }

    pub fn l(&self) -> usize {
        self.la + self.lb
    }

    pub fn n_comp(&self) -> usize {
        self.n_comp_a * self.n_comp_b
    }

    pub fn n_herm(&self) -> usize {
        n_hermite(self.l())
    }
}
