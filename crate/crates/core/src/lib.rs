//! Restricted Kohn-Sham DFT (B3LYP, Cartesian Gaussian basis) and a batch
//! generator for HOMO/LUMO/gap/energy labels over molecular conformers.
//!
//! The engine is generic over the working precision ([`Real`] is implemented
//! for `f32` and `f64`) so the same code path can be run in both precisions
//! and compared.

pub mod basis;
pub mod integrals;
pub mod molio;
pub mod pipeline;
pub mod real;
pub mod scf;
pub mod units;
pub mod xc;

pub use basis::{AOBasis, BasisSet};
pub use molio::Molecule;
pub use real::{Precision, Real};
pub use scf::{scf, SCFOptions, SCFResult};

