//! Exchange-correlation: integration grids, AO evaluation, the B3LYP
//! functional and the V_xc matrix.

pub mod ao;
pub mod dual;
pub mod functional;
pub mod grid;
pub mod lebedev;
pub mod matrix;

pub use ao::{eval_ao, AOGridValues};
pub use functional::{b3lyp, b3lyp_point, HF_EXCHANGE};
pub use grid::{build_grid, Grid, DEFAULT_GRID_LEVEL, MAX_GRID_LEVEL};
pub use matrix::{density_on_grid, xc_matrix, XCResult};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum XcError {
    #[error("unsupported grid level {level} (0..={max})")]
    UnsupportedLevel { level: u32, max: u32 },
    #[error("non-finite functional output at point {index}")]
    NonFinite { index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
