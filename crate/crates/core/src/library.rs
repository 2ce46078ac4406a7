//! Built-in spectral models. The spectra and their derivations are listed in
//! the repository README.

use rug::Rational;

use crate::asymptotics::AsymptoticSeries;
use crate::error::{Error, Result};
use crate::numeric::rational::{int, parse_rational, rat};
use crate::numeric::RatPoly;
use crate::perturb::shift;
use crate::spectral::{Branch, SpectralModel};

#[derive(Clone, Debug)]
pub struct ModelLibraryEntry {
    pub name: &'static str,
    pub dimension: u32,
    pub order: u32,
    pub note: &'static str,
}

pub const LIBRARY: [ModelLibraryEntry; 5] = [
    ModelLibraryEntry {
        name: "circle_dirac",
        dimension: 1,
        order: 1,
        note: "-i d/dθ on the circle: eigenvalues k ∈ Z, each simple",
    },
    ModelLibraryEntry {
        name: "circle_dirac_shift",
        dimension: 1,
        order: 1,
        note: "-i d/dθ + a on the circle: eigenvalues k + a; parameter a (default 1/3)",
    },
    ModelLibraryEntry {
        name: "circle_laplacian",
        dimension: 1,
        order: 2,
        note: "-d²/dθ² on the circle: eigenvalues k², multiplicity 2 for k ≥ 1, kernel of dimension 1",
    },
    ModelLibraryEntry {
        name: "sphere2_dirac",
        dimension: 2,
        order: 1,
        note: "Dirac operator on the round 2-sphere: eigenvalues ±k, multiplicity 2k, k ≥ 1",
    },
    ModelLibraryEntry {
        name: "sphere3_dirac",
        dimension: 3,
        order: 1,
        note: "Dirac operator on the round 3-sphere: eigenvalues ±(k + 1/2), multiplicity k(k + 1), k ≥ 1",
    },
];

fn law(lead: i64, alpha: Rational, e: u32) -> AsymptoticSeries {
    AsymptoticSeries::shifted_power(int(lead), alpha, e).expect("valid law")
}

pub fn circle_dirac() -> SpectralModel {
    let b = |sign| Branch::new(sign, RatPoly::constant(int(1)), law(1, int(0), 1), 1);
    SpectralModel::new(1, 1, 1, vec![b(1), b(-1)], vec![]).expect("valid model")
}

pub fn circle_dirac_shift(a: &Rational) -> Result<SpectralModel> {
    shift(&circle_dirac(), a)
}

pub fn circle_laplacian() -> SpectralModel {
    let b = Branch::new(1, RatPoly::constant(int(2)), law(1, int(0), 2), 1);
    SpectralModel::new(2, 1, 1, vec![b], vec![]).expect("valid model")
}

pub fn sphere2_dirac() -> SpectralModel {
    let b = |sign| Branch::new(sign, RatPoly::new(vec![int(0), int(2)]), law(1, int(0), 1), 1);
    SpectralModel::new(1, 2, 0, vec![b(1), b(-1)], vec![]).expect("valid model")
}

pub fn sphere3_dirac() -> SpectralModel {
    let b = |sign| Branch::new(sign, RatPoly::new(vec![int(0), int(1), int(1)]), law(1, rat(1, 2), 1), 1);
    SpectralModel::new(1, 3, 0, vec![b(1), b(-1)], vec![]).expect("valid model")
}

pub fn names() -> Vec<&'static str> {
    LIBRARY.iter().map(|e| e.name).collect()
}

/// Looks up `name` or `name:param`; the parameter is a shift applied to the model.
pub fn lookup(key: &str) -> Result<SpectralModel> {
    let (name, param) = match key.split_once(':') {
        Some((n, p)) => (n, Some(parse_rational(p)?)),
        None => (key, None),
    };
    let base = match name {
        "circle_dirac" => circle_dirac(),
        "circle_dirac_shift" => return circle_dirac_shift(&param.unwrap_or_else(|| rat(1, 3))),
        "circle_laplacian" => circle_laplacian(),
        "sphere2_dirac" => sphere2_dirac(),
        "sphere3_dirac" => sphere3_dirac(),
        _ => {
            return Err(Error::InvalidModel(format!("unknown library model {name:?}; known: {}", names().join(", "))));
        }
    };
    match param {
        Some(a) => shift(&base, &a),
        None => Ok(base),
    }
}

/// Every library model with its default parameters.
pub fn all() -> Vec<(&'static str, SpectralModel)> {
    names().into_iter().map(|n| (n, lookup(n).expect("library model"))).collect()
}
