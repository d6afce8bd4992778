//! Exact solutions and error metrology.

pub mod norms;
pub mod riemann;
pub mod wave;

pub use norms::{eoc_fit, error_norm, pointwise_eoc_map};
pub use riemann::{exact_riemann, RiemannSolution, WaveKind};
pub use wave::exact_wave;
