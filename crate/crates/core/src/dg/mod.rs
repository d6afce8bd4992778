//! Reference element, mesh and nodal field storage.

pub mod basis;
pub mod element;
pub mod field;
pub mod mesh;

pub use basis::{gauss_legendre, gauss_lobatto_nodes, legendre_eval};
pub use element::ReferenceElement;
pub use field::FieldState;
pub use mesh::{Boundary, Mesh1D};
