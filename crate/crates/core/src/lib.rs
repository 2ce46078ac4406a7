//! Poles, residues and values of spectral zeta and eta functions, for operators
//! given by their spectra and for classical symbols on the circle.

pub mod asymptotics;
pub mod error;
pub mod io;
pub mod library;
pub mod numeric;
pub mod perturb;
pub mod spectral;
pub mod suite;
pub mod symbol;
pub mod zeta;

pub use rug::Rational;

pub use asymptotics::{AsymptoticSeries, Depth, SpectralMap};
pub use error::{Error, Result};
pub use numeric::{Ball, ExactScalar, GaussianRational, PositiveRadical, RatPoly, DEFAULT_PREC};
pub use perturb::PerturbationParams;
pub use spectral::{MeromorphicData, SpectralFunctions, SpectralModel, SpectralOptions};
pub use suite::{CheckVerdict, SuiteConfig};
pub use symbol::SymbolExpansion;
