//! Semi-local part of B3LYP for a closed-shell density:
//! 0.08 Slater + 0.72 B88 + 0.19 VWN (RPA parametrization) + 0.81 LYP.
//! The 0.20 exact-exchange share is carried by the exchange matrix.
//!
//! Each term is written as an energy density f(n, σ) over dual numbers, so
//! vrho = ∂f/∂n and vsigma = ∂f/∂σ come out of a single evaluation.

use std::f64::consts::PI;

use crate::real::Real;

use super::dual::Dual;
use super::XcError;

/// Points with a total density below this contribute nothing.
pub const DENSITY_FLOOR: f64 = 1e-12;

pub const SLATER_WEIGHT: f64 = 0.08;
pub const B88_WEIGHT: f64 = 0.72;
pub const VWN_WEIGHT: f64 = 0.19;
pub const LYP_WEIGHT: f64 = 0.81;
/// Exact-exchange fraction.
pub const HF_EXCHANGE: f64 = 0.20;

const B88_BETA: f64 = 0.0042;

const VWN_A: f64 = 0.0310907;
const VWN_B: f64 = 13.0720;
const VWN_C: f64 = 42.7198;
const VWN_X0: f64 = -0.409286;

const LYP_A: f64 = 0.04918;
const LYP_B: f64 = 0.132;
const LYP_C: f64 = 0.2533;
const LYP_D: f64 = 0.349;

type D<T> = Dual<T>;

fn slater<T: Real>(n: D<T>) -> D<T> {
    n.powf(4.0 / 3.0) * (-0.75 * (3.0 / PI).powf(1.0 / 3.0))
}

fn b88<T: Real>(n: D<T>, sigma: D<T>) -> D<T> {
    let cx = 1.5 * (3.0 / (4.0 * PI)).powf(1.0 / 3.0);
    let ns43 = (n * 0.5).powf(4.0 / 3.0);
    // g = β x² / (1 + 6β x asinh x) with the reduced gradient x = |∇n_σ| / n_σ^{4/3}
    let x_val = sigma.v.sqrt().f64() * 0.5 / ns43.v.f64();
    let g = if x_val < 1e-2 {
        // x asinh x = y (1 - y/6 + 3y²/40 - ...), y = x²; avoids d√σ/dσ at σ → 0
        let y = (sigma * 0.25).mul_powf(n * 0.5, -8.0 / 3.0);
        let h = y * (y * (y * (3.0 / 40.0) - 1.0 / 6.0) + 1.0);
        y * B88_BETA / (h * (6.0 * B88_BETA) + 1.0)
    } else {
        // divided through by x so large x cannot overflow
        let x = (sigma.sqrt() * 0.5).mul_powf(n * 0.5, -4.0 / 3.0);
        x * B88_BETA / (x.recip() + x.asinh() * (6.0 * B88_BETA))
    };
    -(ns43 * (g + cx)) * 2.0
}

fn vwn_rpa<T: Real>(n: D<T>) -> D<T> {
    let rs = (n * (4.0 * PI / 3.0)).powf(-1.0 / 3.0);
    let x = rs.sqrt();
    let q = (4.0 * VWN_C - VWN_B * VWN_B).sqrt();
    let xx = x * x + x * VWN_B + VWN_C;
    let xx0 = VWN_X0 * VWN_X0 + VWN_B * VWN_X0 + VWN_C;
    let at = (Dual::constant(T::of(q)) / (x * 2.0 + VWN_B)).atan();
    let dx = x - VWN_X0;
    let ec = ((x * x / xx).ln() + at * (2.0 * VWN_B / q)
        - ((dx * dx / xx).ln() + at * (2.0 * (VWN_B + 2.0 * VWN_X0) / q)) * (VWN_B * VWN_X0 / xx0))
        * VWN_A;
    n * ec
}

fn lyp<T: Real>(n: D<T>, sigma: D<T>) -> D<T> {
    let cf = 0.3 * (3.0 * PI * PI).powf(2.0 / 3.0);
    let m13 = n.powf(-1.0 / 3.0);
    let den = (m13 * LYP_D + 1.0).recip();
    let delta = m13 * LYP_C + m13 * den * LYP_D;
    // exp(-c n^{-1/3}) n^{-5/3}, formed in log space to stay finite in f32
    let w53 = (m13 * (-LYP_C) - n.ln() * (5.0 / 3.0)).exp() * den;
    let w = (m13 * (-LYP_C)).exp() * den;
    let grad = w53 * sigma * (delta * (7.0 / 72.0) + 1.0 / 24.0);
    -(n * den * LYP_A) - (w * n * cf - grad) * (LYP_A * LYP_B)
}

/// Energy density n·exc of the semi-local B3LYP part.
pub fn energy_density<T: Real>(n: D<T>, sigma: D<T>) -> D<T> {
    slater(n) * SLATER_WEIGHT + b88(n, sigma) * B88_WEIGHT + vwn_rpa(n) * VWN_WEIGHT + lyp(n, sigma) * LYP_WEIGHT
}

/// (exc, vrho, vsigma) at one point. `exc` is per electron.
#[inline]
pub fn b3lyp_point<T: Real>(n: T, sigma: T) -> (T, T, T) {
    if !(n.f64() >= DENSITY_FLOOR) {
        return (T::zero(), T::zero(), T::zero());
    }
    let s = if sigma > T::zero() { sigma } else { T::zero() };
    let f = energy_density(Dual::var_n(n), Dual::var_s(s));
    (f.v / n, f.dn, f.ds)
}

/// Pointwise evaluation. Negative densities are treated as zero.
pub fn b3lyp<T: Real>(n: &[T], sigma: &[T]) -> Result<(Vec<T>, Vec<T>, Vec<T>), XcError> {
    if n.len() != sigma.len() {
        return Err(XcError::DimensionMismatch(format!(
            "{} densities vs {} gradient invariants",
            n.len(),
            sigma.len()
        )));
    }
    let mut exc = Vec::with_capacity(n.len());
    let mut vrho = Vec::with_capacity(n.len());
    let mut vsigma = Vec::with_capacity(n.len());
    for (i, (&r, &s)) in n.iter().zip(sigma).enumerate() {
        let (e, vr, vs) = b3lyp_point(r, s);
        if !(e.f64().is_finite() && vr.f64().is_finite() && vs.f64().is_finite()) {
            return Err(XcError::NonFinite { index: i });
        }
        exc.push(e);
        vrho.push(vr);
        vsigma.push(vs);
    }
    Ok((exc, vrho, vsigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_density_gives_zero() {
        assert_eq!(b3lyp_point(0.0f64, 0.0), (0.0, 0.0, 0.0));
        assert_eq!(b3lyp_point(-1e-3f64, 0.2), (0.0, 0.0, 0.0));
        assert_eq!(b3lyp_point(0.0f32, 1.0), (0.0, 0.0, 0.0));
    }

    #[test]
    fn gradient_free_limit_is_local_mixture() {
        let n = Dual::constant(1.0f64);
        let local = slater(n).v * (SLATER_WEIGHT + B88_WEIGHT)
            + vwn_rpa(n).v * VWN_WEIGHT
            + lyp(n, Dual::constant(0.0)).v * LYP_WEIGHT;
        let (exc, _, _) = b3lyp_point(1.0f64, 0.0);
        assert!((exc - local).abs() < 1e-12, "{exc} vs {local}");
    }

    #[test]
    fn float32_stays_finite_near_floor() {
        for &n in &[1.1e-12f32, 1e-9, 1e-6, 1e-3, 1.0, 1e3] {
            for &s in &[0.0f32, 1e-20, 1e-6, 1.0, 1e6] {
                let (e, vr, vs) = b3lyp_point(n, s);
                assert!(e.is_finite() && vr.is_finite() && vs.is_finite(), "n={n} s={s}");
            }
        }
    }
}
