//! One-dimensional nodal discontinuous Galerkin solver with a modal-decay
//! smoothness detector driving element-wise artificial viscosity.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` aliases below cover the usual double-precision case.

pub mod detector;
pub mod dg;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracles;
pub mod pde;
pub mod scalar;
pub mod solver;
pub mod timeint;
pub mod viscosity;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ReferenceElementF64 = dg::ReferenceElement<f64>;
pub type Mesh1DF64 = dg::Mesh1D<f64>;
pub type FieldStateF64 = dg::FieldState<f64>;
