//! Boys function F_m(T) = ∫₀¹ t^{2m} exp(-T t²) dt.
//!
//! For T below [`T_MAX`] the highest requested order is evaluated by a
//! 7-term Taylor expansion around the nearest point of a precomputed table
//! (spacing [`STEP`]) and lower orders follow by downward recursion. Above
//! [`T_MAX`] F_0 takes its asymptotic value and higher orders follow by
//! upward recursion, which is stable for large T.

use std::sync::OnceLock;

use crate::real::Real;

/// Highest order served by the table.
pub const MAX_ORDER: usize = 16;
const TAYLOR_TERMS: usize = 7;
const STEP: f64 = 0.05;
const T_MAX: f64 = 60.0;
const N_ROWS: usize = (T_MAX / STEP) as usize + 2;
const WIDTH: usize = MAX_ORDER + TAYLOR_TERMS + 1;

struct Table {
    rows: Vec<[f64; WIDTH]>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| Table {
        rows: (0..N_ROWS)
            .map(|k| {
                let t = k as f64 * STEP;
                let mut row = [0.0; WIDTH];
                row[WIDTH - 1] = boys_series(WIDTH - 1, t);
                let e = (-t).exp();
                for m in (0..WIDTH - 1).rev() {
                    row[m] = (2.0 * t * row[m + 1] + e) / (2 * m + 1) as f64;
                }
                row
            })
            .collect(),
    })
}

/// Convergent series e^{-T} Σ_i (2T)^i / ((2m+1)(2m+3)···(2m+2i+1)).
fn boys_series(m: usize, t: f64) -> f64 {
    let mut term = 1.0 / (2 * m + 1) as f64;
    let mut sum = term;
    let mut i = 1;
    while term > 1e-17 * sum {
        term *= 2.0 * t / (2 * m + 2 * i + 1) as f64;
        sum += term;
        i += 1;
    }
    sum * (-t).exp()
}

/// Fills `out[0..=m_max]` with F_0(t)..F_{m_max}(t).
#[inline]
pub fn boys<T: Real>(m_max: usize, t: T, out: &mut [T]) {
    debug_assert!(m_max <= MAX_ORDER && out.len() > m_max);
    let tf = t.f64();
    if tf >= T_MAX {
        // F_{m+1} = ((2m+1) F_m - e^{-T}) / 2T
        let inv = T::one() / t;
        let e = (-t).exp();
        let mut f = T::of(0.5) * (T::pi() * inv).sqrt();
        out[0] = f;
        for m in 1..=m_max {
            f = (T::of((2 * m - 1) as f64) * f - e) * T::of(0.5) * inv;
            out[m] = f;
        }
        return;
    }
    let k = (tf / STEP + 0.5) as usize;
    let row = &table().rows[k];
    let dt = T::of(k as f64 * STEP) - t;
    // Taylor: F_m(t0 - dt') with d/dT F_m = -F_{m+1}
    let mut fm = T::zero();
    let mut coef = T::one();
    for j in 0..TAYLOR_TERMS {
        fm += coef * T::of(row[m_max + j]);
        coef = coef * dt / T::of((j + 1) as f64);
    }
    out[m_max] = fm;
    if m_max > 0 {
        let e = (-t).exp();
        let two_t = t + t;
        for m in (0..m_max).rev() {
            out[m] = (two_t * out[m + 1] + e) / T::of((2 * m + 1) as f64);
        }
    }
}
