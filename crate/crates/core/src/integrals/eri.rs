//! Two-electron repulsion integrals (ij|kl) with 8-fold permutational
//! symmetry: only canonical quadruples i≥j, k≥l, (ij)≥(kl) are stored.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::basis::AOBasis;
use crate::real::Real;

use super::boys::boys;
use super::hermite::{hermite_list, hermite_r, RScratch};
use super::pairs::ShellPair;
use super::IntegralError;

/// Composite index of an AO pair with `i ≥ j`.
#[inline(always)]
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i >= j);
    i * (i + 1) / 2 + j
}

/// Maps any index quadruple onto its canonical symmetry image.
#[inline]
pub fn canonical(i: usize, j: usize, k: usize, l: usize) -> [usize; 4] {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    let (k, l) = if k >= l { (k, l) } else { (l, k) };
    if pair_index(i, j) >= pair_index(k, l) {
        [i, j, k, l]
    } else {
        [k, l, i, j]
    }
}

/// Number of distinct symmetry images of a canonical quadruple.
#[inline]
pub fn degeneracy(q: [u16; 4]) -> u8 {
    let [i, j, k, l] = q.map(usize::from);
    let mut d = 8;
    if i == j {
        d /= 2;
    }
    if k == l {
        d /= 2;
    }
    if i == k && j == l {
        d /= 2;
    }
    d
}

/// Number of canonical quadruples for `n` AOs: M(M+1)/2 with M = n(n+1)/2.
pub fn canonical_count(n: usize) -> usize {
    let m = n * (n + 1) / 2;
    m * (m + 1) / 2
}

#[derive(Debug, Clone, Copy)]
pub struct EriOptions {
    /// Schwarz threshold: a shell quartet is skipped when
    /// sqrt((ab|ab))·sqrt((cd|cd)) falls below it, and stored entries with
    /// |value| below it are dropped.
    pub screen_eps: f64,
    pub max_n_ao: usize,
    /// Upper bound on the estimated packed size in bytes.
    pub memory_budget: usize,
}

impl Default for EriOptions {
    fn default() -> Self {
        Self {
            screen_eps: 1e-12,
            max_n_ao: 128,
            memory_budget: 4 << 30,
        }
    }
}

/// Packed ERI tensor. Entries are grouped by shell quartet in generation
/// order; each quadruple is stored in canonical orientation.
#[derive(Debug, Clone)]
pub struct PackedERI<T> {
    pub quads: Vec<[u16; 4]>,
    pub values: Vec<T>,
    pub n_ao: usize,
}

impl<T: Real> PackedERI<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degeneracy(&self, idx: usize) -> u8 {
        degeneracy(self.quads[idx])
    }

    pub fn bytes(&self) -> usize {
        self.quads.len() * std::mem::size_of::<[u16; 4]>() + self.values.len() * std::mem::size_of::<T>()
    }

    /// Expands into the dense N⁴ tensor, writing each value to all of its
    /// symmetry images.
    pub fn unpack(&self) -> DenseERI<T> {
        let mut d = DenseERI::zeros(self.n_ao);
        for (q, &v) in self.quads.iter().zip(&self.values) {
            let [i, j, k, l] = q.map(usize::from);
            for [a, b, c, e] in [
                [i, j, k, l],
                [j, i, k, l],
                [i, j, l, k],
                [j, i, l, k],
                [k, l, i, j],
                [l, k, i, j],
                [k, l, j, i],
                [l, k, j, i],
            ] {
                d.set(a, b, c, e, v);
            }
        }
        d
    }
}

/// Dense row-major (ij|kl) tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseERI<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> DenseERI<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n * n * n],
        }
    }

    #[inline(always)]
    pub fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.data[self.index(i, j, k, l)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: T) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }
}

/// Largest basis accepted by [`dense_eri`].
pub const DENSE_MAX_N_AO: usize = 32;

/// Full tensor via the packed generator with screening disabled.
pub fn dense_eri<T: Real>(ao: &AOBasis) -> Result<DenseERI<T>, IntegralError> {
    if ao.n_ao > DENSE_MAX_N_AO {
        return Err(IntegralError::DenseTooLarge {
            n_ao: ao.n_ao,
            max: DENSE_MAX_N_AO,
        });
    }
    let opts = EriOptions {
        screen_eps: 0.0,
        ..EriOptions::default()
    };
    Ok(eri_packed::<T>(ao, &opts)?.unpack())
}

/// Reusable buffers for [`quartet`].
pub struct QuartetScratch<T> {
    boys: [T; 17],
    rs: RScratch<T>,
    r: Vec<T>,
    rm: Vec<T>,
    w: Vec<T>,
    index_tables: HashMap<(usize, usize), Vec<usize>>,
}

impl<T: Real> Default for QuartetScratch<T> {
    fn default() -> Self {
        Self {
            boys: [T::zero(); 17],
            rs: RScratch::default(),
            r: Vec::new(),
            rm: Vec::new(),
            w: Vec::new(),
            index_tables: HashMap::new(),
        }
    }
}

/// (ab|cd) for all component combinations of a shell quartet, written
/// row-major into `out` as `[ab][cd]` with `ab = ia·n_b + ib`.
pub fn quartet<T: Real>(bra: &ShellPair<T>, ket: &ShellPair<T>, ws: &mut QuartetScratch<T>, out: &mut Vec<T>) {
    let (lab, lcd) = (bra.l(), ket.l());
    let l = lab + lcd;
    let (nhab, nhcd) = (bra.n_herm(), ket.n_herm());
    let (nab, ncd) = (bra.n_comp(), ket.n_comp());
    out.clear();
    out.resize(nab * ncd, T::zero());

    let side = l + 1;
    let table = ws.index_tables.entry((lab, lcd)).or_insert_with(|| {
        let hab = hermite_list(lab);
        let hcd = hermite_list(lcd);
        let mut t = Vec::with_capacity(hab.len() * hcd.len());
        for x in &hab {
            for y in &hcd {
                t.push(((x[0] + y[0]) * side + x[1] + y[1]) * side + x[2] + y[2]);
            }
        }
        t
    });

    ws.rm.resize(nhab * nhcd, T::zero());
    ws.w.resize(nhab * ncd, T::zero());
    let two_pi_52 = T::of(2.0 * std::f64::consts::PI.powf(2.5));
    for pp in &bra.prims {
        ws.w.iter_mut().for_each(|x| *x = T::zero());
        for qp in &ket.prims {
            let (p, q) = (pp.p, qp.p);
            let pq = p + q;
            let alpha = p * q / pq;
            let pref = two_pi_52 / (p * q * pq.sqrt());
            let d = [
                pp.center[0] - qp.center[0],
                pp.center[1] - qp.center[1],
                pp.center[2] - qp.center[2],
            ];
            let x = alpha * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            boys(l, x, &mut ws.boys);
            hermite_r(l, alpha, d, &ws.boys, &mut ws.rs, &mut ws.r);
            for (m, &ci) in ws.rm.iter_mut().zip(table.iter()) {
                *m = pref * ws.r[ci];
            }
            // w[hab][cd] += Σ_hcd rm[hab][hcd] · E^cd_signed[cd][hcd]
            for hab in 0..nhab {
                let rrow = &ws.rm[hab * nhcd..(hab + 1) * nhcd];
                let wrow = &mut ws.w[hab * ncd..(hab + 1) * ncd];
                for (cd, wv) in wrow.iter_mut().enumerate() {
                    let erow = &qp.e_signed[cd * nhcd..(cd + 1) * nhcd];
                    let mut acc = T::zero();
                    for (&r, &e) in rrow.iter().zip(erow) {
                        acc += r * e;
                    }
                    *wv += acc;
                }
            }
        }
        // out[ab][cd] += Σ_hab E^ab[ab][hab] · w[hab][cd]
        for ab in 0..nab {
            let erow = &pp.e[ab * nhab..(ab + 1) * nhab];
            let orow = &mut out[ab * ncd..(ab + 1) * ncd];
            for (hab, &e) in erow.iter().enumerate() {
                if e == T::zero() {
                    continue;
                }
                let wrow = &ws.w[hab * ncd..(hab + 1) * ncd];
                for (o, &w) in orow.iter_mut().zip(wrow) {
                    *o += e * w;
                }
            }
        }
    }
}

/// Shell pairs A ≥ B in composite order, with their Schwarz factors
/// sqrt(max |(ab|ab)|).
pub(crate) fn shell_pairs<T: Real>(ao: &AOBasis) -> (Vec<ShellPair<T>>, Vec<f64>) {
    let idx: Vec<(usize, usize)> = (0..ao.shells.len())
        .flat_map(|a| (0..=a).map(move |b| (a, b)))
        .collect();
    idx.par_iter()
        .map_init(QuartetScratch::default, |ws: &mut QuartetScratch<T>, &(a, b)| {
            let pair = ShellPair::new(a, &ao.shells[a], b, &ao.shells[b]);
            let mut buf = Vec::new();
            quartet(&pair, &pair, ws, &mut buf);
            let n = pair.n_comp();
            let q = (0..n).map(|k| buf[k * n + k].f64().abs()).fold(0.0, f64::max).sqrt();
            (pair, q)
        })
        .unzip()
}

/// Computes the packed ERI tensor with Schwarz screening.
pub fn eri_packed<T: Real>(ao: &AOBasis, opts: &EriOptions) -> Result<PackedERI<T>, IntegralError> {
    let n = ao.n_ao;
    if n > opts.max_n_ao || n > u16::MAX as usize + 1 {
        return Err(IntegralError::TooManyAOs {
            n_ao: n,
            max: opts.max_n_ao,
        });
    }
    let estimate = canonical_count(n) * (std::mem::size_of::<[u16; 4]>() + std::mem::size_of::<T>());
    if estimate > opts.memory_budget {
        return Err(IntegralError::MemoryBudget {
            estimated: estimate,
            budget: opts.memory_budget,
        });
    }

    let (pairs, schwarz) = shell_pairs::<T>(ao);
    let eps = opts.screen_eps;
    let rows: Vec<(Vec<[u16; 4]>, Vec<T>)> = (0..pairs.len())
        .into_par_iter()
        .map_init(QuartetScratch::default, |ws: &mut QuartetScratch<T>, ab| {
            let bra = &pairs[ab];
            let mut quads = Vec::new();
            let mut values = Vec::new();
            let mut buf = Vec::new();
            for (cd, ket) in pairs[..=ab].iter().enumerate() {
                if schwarz[ab] * schwarz[cd] < eps {
                    continue;
                }
                quartet(bra, ket, ws, &mut buf);
                emit_block(ao, bra, ket, ab == cd, &buf, eps, &mut quads, &mut values);
            }
            (quads, values)
        })
        .collect();

    let total: usize = rows.iter().map(|r| r.1.len()).sum();
    let mut quads = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for (q, v) in rows {
        quads.extend(q);
        values.extend(v);
    }
    Ok(PackedERI { quads, values, n_ao: n })
}

#[allow(clippy::too_many_arguments)]
fn emit_block<T: Real>(
    ao: &AOBasis,
    bra: &ShellPair<T>,
    ket: &ShellPair<T>,
    same_pair: bool,
    block: &[T],
    eps: f64,
    quads: &mut Vec<[u16; 4]>,
    values: &mut Vec<T>,
) {
    let (oa, ob) = (ao.shells[bra.a].ao_offset, ao.shells[bra.b].ao_offset);
    let (oc, od) = (ao.shells[ket.a].ao_offset, ao.shells[ket.b].ao_offset);
    let ncd = ket.n_comp();
    for ia in 0..bra.n_comp_a {
        let i = oa + ia;
        for ib in 0..bra.n_comp_b {
            let j = ob + ib;
            if bra.a == bra.b && j > i {
                continue;
            }
            let ab = ia * bra.n_comp_b + ib;
            for ic in 0..ket.n_comp_a {
                let k = oc + ic;
                for id in 0..ket.n_comp_b {
                    let l = od + id;
                    if ket.a == ket.b && l > k {
                        continue;
                    }
                    if same_pair && pair_index(i, j) < pair_index(k, l) {
                        continue;
                    }
                    let v = block[ab * ncd + ic * ket.n_comp_b + id];
                    if v.f64().abs() < eps {
                        continue;
                    }
                    quads.push(canonical(i, j, k, l).map(|x| x as u16));
                    values.push(v);
                }
            }
        }
    }
}
