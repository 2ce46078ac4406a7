//! Operators given by their spectra, and the continuation of their zeta and
//! eta functions.

pub mod meromorphic;
pub mod model;

pub use meromorphic::{
    admissible_from, evaluate, exp_i_pi, half_zeta, residues_at_admissible, spectral_functions, AdmissibleRow,
    AdmissibleTable, MeromorphicData, SpectralFunctions, SpectralOptions, Weight, FUNCTION_NAMES,
};
pub use model::{Branch, Exceptional, RealRadical, SpectralModel};
