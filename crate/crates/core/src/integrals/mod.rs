//! Gaussian integrals over Cartesian shells (McMurchie-Davidson).

pub mod boys;
pub mod dump;
pub mod eri;
pub mod hermite;
pub mod jk;
pub mod one_electron;
pub mod pairs;

pub use eri::{dense_eri, eri_packed, DenseERI, EriOptions, PackedERI};
pub use jk::{build_jk, build_jk_dense};
pub use one_electron::{one_electron, IntegralSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IntegralError {
    #[error("basis has {n_ao} functions, above the limit of {max}")]
    TooManyAOs { n_ao: usize, max: usize },
    #[error("packed ERI estimate of {estimated} bytes exceeds the budget of {budget}")]
    MemoryBudget { estimated: usize, budget: usize },
    #[error("dense ERI requested for {n_ao} functions (max {max})")]
    DenseTooLarge { n_ao: usize, max: usize },
    #[error("density is {rows}x{cols}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
}
