//! Files and tables: model and symbol files, pole tables and sweeps as CSV or JSON.

use std::fs;
use std::io::Write;
use std::path::Path;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::library;
use crate::numeric::rational::format_rational;
use crate::numeric::ExactScalar;
use crate::spectral::{AdmissibleTable, SpectralModel, FUNCTION_NAMES};
use crate::symbol::SymbolExpansion;

/// Header of every pole-table CSV.
pub const POLE_COLUMNS: [&str; 4] = ["sigma", "function", "residue_exact", "residue_float"];
/// Header of every sweep CSV.
pub const SWEEP_COLUMNS: [&str; 6] = ["parameter", "value", "sigma", "function", "residue_exact", "residue_float"];

/// Float rendering: `x` for reals, `x+yi` otherwise.
pub fn float_string(x: &ExactScalar) -> String {
    let (re, im) = x.to_f64_pair();
    if im == 0.0 {
        format!("{re:e}")
    } else {
        format!("{re:e}{im:+e}i")
    }
}

/// Exact rendering, empty when the value only exists as a ball.
pub fn exact_string(x: &ExactScalar) -> String {
    if x.is_exact() {
        x.to_string()
    } else {
        String::new()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleRow {
    pub sigma: String,
    pub function: String,
    pub residue_exact: String,
    pub residue_float: String,
}

impl PoleRow {
    pub fn new(sigma: &Rational, function: &str, residue: &ExactScalar) -> Self {
        PoleRow {
            sigma: format_rational(sigma),
            function: function.into(),
            residue_exact: exact_string(residue),
            residue_float: float_string(residue),
        }
    }
}

/// One row per admissible point and function, in decreasing `σ`.
pub fn pole_rows(table: &AdmissibleTable) -> Vec<PoleRow> {
    let mut rows = Vec::new();
    for r in &table.rows {
        for name in FUNCTION_NAMES {
            rows.push(PoleRow::new(&r.sigma, name, r.get(name).expect("known function")));
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: String,
    pub value: String,
    pub sigma: String,
    pub function: String,
    pub residue_exact: String,
    pub residue_float: String,
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], header: &[&str], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_json<T: Serialize, W: Write>(rows: &[T], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<SpectralModel> {
    SpectralModel::from_json(&read(path)?)
}

pub fn save_model(model: &SpectralModel, path: &Path) -> Result<()> {
    fs::write(path, model.to_json()? + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_symbol(path: &Path) -> Result<SymbolExpansion> {
    SymbolExpansion::from_json(&read(path)?)
}

pub fn save_symbol(symbol: &SymbolExpansion, path: &Path) -> Result<()> {
    fs::write(path, symbol.to_json()? + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A library name (optionally `name:param`) or the path of a model file.
pub fn resolve_model(reference: &str) -> Result<SpectralModel> {
    let path = Path::new(reference);
    if path.is_file() {
        return load_model(path);
    }
    let name = reference.split(':').next().unwrap_or(reference);
    if library::names().contains(&name) {
        return library::lookup(reference);
    }
    Err(Error::InvalidModel(format!(
        "{reference:?} is neither a model file nor a library model ({})",
        library::names().join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;
    use crate::spectral::{residues_at_admissible, SpectralOptions};

    #[test]
    fn sphere_rows() {
        let m = crate::perturb::shift(&library::sphere2_dirac(), &rat(1, 3)).unwrap();
        let t = residues_at_admissible(&m, -1, &SpectralOptions::default()).unwrap();
        let rows = pole_rows(&t);
        let eta1 = rows.iter().find(|r| r.sigma == "1" && r.function == "eta").unwrap();
        assert_eq!(eta1.residue_exact, "-4/3");
        let mut buf = Vec::new();
        write_csv(&rows, &POLE_COLUMNS, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sigma,function,residue_exact,residue_float\n"));
        assert!(text.contains("1,eta,-4/3,"));
    }

    #[test]
    fn unknown_reference() {
        assert!(matches!(resolve_model("no_such_model"), Err(Error::InvalidModel(_))));
        assert!(resolve_model("sphere2_dirac:1/4").is_ok());
    }
}
