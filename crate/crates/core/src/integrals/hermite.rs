//! McMurchie-Davidson building blocks: Hermite expansion coefficients of a
//! Gaussian product and the Hermite Coulomb integrals R_tuv.

use crate::real::Real;

/// 1D expansion coefficients E^{ij}_t of `x_A^i x_B^j exp(-a x_A² - b x_B²)`
/// in Hermite Gaussians centred at P, including the `exp(-μ X_AB²)` factor
/// passed as `k`.
pub struct Hermite1D<T> {
    jdim: usize,
    tdim: usize,
    data: Vec<T>,
}

impl<T: Real> Hermite1D<T> {
    pub fn new(imax: usize, jmax: usize, p: T, xpa: T, xpb: T, k: T) -> Self {
        let jdim = jmax + 1;
        let tdim = imax + jmax + 2;
        let mut data = vec![T::zero(); (imax + 1) * jdim * tdim];
        let idx = |i: usize, j: usize, t: usize| (i * jdim + j) * tdim + t;
        let half_inv_p = T::of(0.5) / p;
        data[idx(0, 0, 0)] = k;
        for i in 0..imax {
            for t in 0..=i + 1 {
                let mut v = xpa * data[idx(i, 0, t)];
                if t > 0 {
                    v += half_inv_p * data[idx(i, 0, t - 1)];
                }
                v += T::of((t + 1) as f64) * data[idx(i, 0, t + 1)];
                data[idx(i + 1, 0, t)] = v;
            }
        }
        for i in 0..=imax {
            for j in 0..jmax {
                for t in 0..=i + j + 1 {
                    let mut v = xpb * data[idx(i, j, t)];
                    if t > 0 {
                        v += half_inv_p * data[idx(i, j, t - 1)];
                    }
                    v += T::of((t + 1) as f64) * data[idx(i, j, t + 1)];
                    data[idx(i, j + 1, t)] = v;
                }
            }
        }
        Self { jdim, tdim, data }
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize, t: usize) -> T {
        self.data[(i * self.jdim + j) * self.tdim + t]
    }
}

/// Hermite triples (t,u,v) with t+u+v ≤ l, grouped by total order.
pub fn hermite_list(l: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for n in 0..=l {
        for t in (0..=n).rev() {
            for u in (0..=n - t).rev() {
                out.push([t, u, n - t - u]);
            }
        }
    }
    out
}

pub fn n_hermite(l: usize) -> usize {
    (l + 1) * (l + 2) * (l + 3) / 6
}

/// Scratch buffers for [`hermite_r`].
#[derive(Default)]
pub struct RScratch<T> {
    a: Vec<T>,
    b: Vec<T>,
}

/// Computes R^0_{tuv}(α, PC) for t+u+v ≤ l into a cube of side `l+1`
/// (index `(t*(l+1)+u)*(l+1)+v`), given `boys[n] = F_n(α|PC|²)`.
pub fn hermite_r<T: Real>(l: usize, alpha: T, pc: [T; 3], boys: &[T], ws: &mut RScratch<T>, out: &mut Vec<T>) {
    let side = l + 1;
    let size = side * side * side;
    let idx = |t: usize, u: usize, v: usize| (t * side + u) * side + v;
    ws.a.clear();
    ws.a.resize(size, T::zero());
    ws.b.clear();
    ws.b.resize(size, T::zero());
    let (mut cur, mut next) = (&mut ws.a, &mut ws.b);

    let m2a = -(alpha + alpha);
    let mut pow = T::one();
    let mut scaled = [T::zero(); 17];
    for (n, s) in scaled.iter_mut().enumerate().take(l + 1) {
        *s = pow * boys[n];
        if n < l {
            pow *= m2a;
        }
    }
    // `next` holds R^{n+1}; build R^n for orders ≤ l-n.
    for n in (0..=l).rev() {
        let top = l - n;
        cur[0] = scaled[n];
        for tot in 1..=top {
            for t in (0..=tot).rev() {
                for u in (0..=tot - t).rev() {
                    let v = tot - t - u;
                    let val = if t > 0 {
                        let mut r = pc[0] * next[idx(t - 1, u, v)];
                        if t > 1 {
                            r += T::of((t - 1) as f64) * next[idx(t - 2, u, v)];
                        }
                        r
                    } else if u > 0 {
                        let mut r = pc[1] * next[idx(0, u - 1, v)];
                        if u > 1 {
                            r += T::of((u - 1) as f64) * next[idx(0, u - 2, v)];
                        }
                        r
                    } else {
                        let mut r = pc[2] * next[idx(0, 0, v - 1)];
                        if v > 1 {
                            r += T::of((v - 1) as f64) * next[idx(0, 0, v - 2)];
                        }
                        r
                    };
                    cur[idx(t, u, v)] = val;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    out.clear();
    out.extend_from_slice(next);
}
