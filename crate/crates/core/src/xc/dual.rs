//! Forward-mode dual numbers carrying the value and the two partial
//! derivatives with respect to (n, σ).

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub dn: T,
    pub ds: T,
}

impl<T: Real> Dual<T> {
    pub fn constant(v: T) -> Self {
        Self { v, dn: T::zero(), ds: T::zero() }
    }

    pub fn var_n(v: T) -> Self {
        Self { v, dn: T::one(), ds: T::zero() }
    }

    pub fn var_s(v: T) -> Self {
        Self { v, dn: T::zero(), ds: T::one() }
    }

    #[inline]
    fn chain(self, v: T, d: T) -> Self {
        Self { v, dn: d * self.dn, ds: d * self.ds }
    }

    #[inline]
    pub fn powf(self, k: f64) -> Self {
        let p = self.v.powf(T::of(k));
        self.chain(p, T::of(k) * p / self.v)
    }

    /// `self · base^k`, with the product formed before dividing by `base` so
    /// the derivative stays finite where base^(k-1) alone would overflow.
    #[inline]
    pub fn mul_powf(self, base: Self, k: f64) -> Self {
        let p = base.v.powf(T::of(k));
        let v = self.v * p;
        let q = v * T::of(k) / base.v;
        Self {
            v,
            dn: self.dn * p + q * base.dn,
            ds: self.ds * p + q * base.ds,
        }
    }

    #[inline]
    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, T::of(0.5) / s)
    }

    #[inline]
    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), T::one() / self.v)
    }

    #[inline]
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    #[inline]
    pub fn atan(self) -> Self {
        self.chain(self.v.atan(), T::one() / (T::one() + self.v * self.v))
    }

    #[inline]
    pub fn asinh(self) -> Self {
        let r = (T::one() + self.v * self.v).sqrt();
        self.chain((self.v + r).ln(), T::one() / r)
    }

    #[inline]
    pub fn recip(self) -> Self {
        let r = T::one() / self.v;
        self.chain(r, -r * r)
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, dn: self.dn + o.dn, ds: self.ds + o.ds }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, dn: self.dn - o.dn, ds: self.ds - o.ds }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            dn: self.dn * o.v + self.v * o.dn,
            ds: self.ds * o.v + self.v * o.ds,
        }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { v: -self.v, dn: -self.dn, ds: -self.ds }
    }
}

impl<T: Real> Add<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, c: f64) -> Self {
        Self { v: self.v + T::of(c), ..self }
    }
}

impl<T: Real> Sub<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, c: f64) -> Self {
        Self { v: self.v - T::of(c), ..self }
    }
}

impl<T: Real> Mul<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, c: f64) -> Self {
        let c = T::of(c);
        Self { v: self.v * c, dn: self.dn * c, ds: self.ds * c }
    }
}
