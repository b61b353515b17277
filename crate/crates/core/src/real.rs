use std::fmt;
use std::str::FromStr;

use nalgebra::RealField;
use serde::{Deserialize, Serialize};

/// Working precision of a calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    F64,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::F32 => f.write_str("f32"),
            Precision::F64 => f.write_str("f64"),
        }
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f32" | "float32" => Ok(Precision::F32),
            "f64" | "float64" => Ok(Precision::F64),
            other => Err(format!("unknown precision '{other}' (expected f32 or f64)")),
        }
    }
}

/// Scalar type the integral, grid and SCF kernels are instantiated with.
///
/// Reductions that feed energies or J/K are carried out in `f64` regardless
/// of `Self`; conversions go through [`Real::of`] and [`Real::f64`].
pub trait Real: RealField + Copy + Default + fmt::Display {
    const PRECISION: Precision;
    /// Machine epsilon of the type.
    const EPS: f64;

    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
}

impl Real for f64 {
    const PRECISION: Precision = Precision::F64;
    const EPS: f64 = f64::EPSILON;

    #[inline(always)]
    fn of(x: f64) -> Self {
        x
    }

    #[inline(always)]
    fn f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const PRECISION: Precision = Precision::F32;
    const EPS: f64 = f32::EPSILON as f64;

    #[inline(always)]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline(always)]
    fn f64(self) -> f64 {
        self as f64
    }
}
