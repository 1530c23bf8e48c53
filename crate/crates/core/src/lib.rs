//! Arbitrary-precision trapezoidal quadrature over the real line, with
//! a-priori step and window planning for model integrands and for squared
//! Schrödinger eigenfunctions.

pub mod bigreal;
pub mod cache;
pub mod error;
pub mod models;
pub mod normalizer;
pub mod plan;
pub mod quadrature;
pub mod schrodinger;
pub mod wkb;

pub use cache::EigenCache;
pub use error::{Error, Result};
pub use normalizer::{normalize, NormalizationResult, NormalizeOptions};
pub use plan::QuadPlan;
pub use schrodinger::{EigenState, PotentialSpec, StateParity};
