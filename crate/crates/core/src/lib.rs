//! Exact construction and verification of exceptional orthogonal polynomial
//! systems obtained from the Hermite, Laguerre and Jacobi operators by
//! rational Darboux transformations.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod classical;
pub mod darboux;
pub mod diffop;
pub mod numeric;
pub mod quadform;
pub mod spectral;
pub mod structure;
pub mod system;
pub mod cli;
