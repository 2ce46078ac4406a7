//! Classical pseudodifferential symbols on the circle.

pub mod calculus;
pub mod expansion;
pub mod matrix;
pub mod trig;

pub use calculus::{abs_and_sign, compose, is_differential, is_odd_class, ncr, parametrix, power_int, residue_density};
pub use expansion::{CoefficientMode, RayComponent, SymbolExpansion, DEFAULT_TRUNCATION};
pub use matrix::SymMatrix;
pub use trig::TrigPoly;
