//! Perturbations of operators: `P + a`, `P + ε|P|`, `P_ε + cF|P_ε|^(-n)`,
//! `Q = F|P|^(1/m)` and `F(Q_{ε,c} + a)|Q_{ε,c} + a|^m`.

use std::cmp::Ordering;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{series_compose_map, AsymptoticSeries, SpectralMap};
use crate::error::{Error, Result};
use crate::numeric::rational::{format_rational, pow_i, serde_rat};
use crate::numeric::{Ball, PositiveRadical};
use crate::spectral::{Branch, Exceptional, RealRadical, SpectralModel};
use crate::symbol::SymbolExpansion;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams {
    #[serde(with = "serde_rat")]
    pub a: Rational,
    #[serde(with = "serde_rat")]
    pub epsilon: Rational,
    #[serde(with = "serde_rat")]
    pub c: Rational,
}

impl PerturbationParams {
    pub fn new(a: Rational, epsilon: Rational, c: Rational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        check_c(&c)?;
        Ok(PerturbationParams { a, epsilon, c })
    }
}

fn check_epsilon(eps: &Rational) -> Result<()> {
    if *eps <= -1 || *eps >= 1 {
        return Err(Error::Parameter(format!("epsilon = {} must lie in (-1, 1)", format_rational(eps))));
    }
    Ok(())
}

fn check_c(c: &Rational) -> Result<()> {
    if *c < 0 {
        return Err(Error::Parameter(format!("c = {} must be non-negative", format_rational(c))));
    }
    Ok(())
}

/// Compares `|λ(k)|` with a non-negative rational, exactly when possible.
fn compare_law(law: &AsymptoticSeries, k: u64, x: &Rational) -> Ordering {
    if let Some(v) = law.eval_exact(&Rational::from(k)) {
        return v.cmp(x);
    }
    let d = law.eval_ball(&Rational::from(k), 256).sub(&Ball::from_rational(x, 256));
    if d.contains_zero() {
        Ordering::Equal
    } else if d.re_f64() < 0.0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn multiplicity_u64(b: &Branch, k: u64) -> Result<u64> {
    let m = b.multiplicity_at(k);
    if *m.denom() != 1 {
        return Err(Error::InvalidModel(format!("non-integer multiplicity {m} at k = {k}")));
    }
    m.numer().to_u64().ok_or_else(|| Error::InvalidModel(format!("multiplicity {m} at k = {k} out of range")))
}

fn push_exceptional(list: &mut Vec<Exceptional>, value: RealRadical, mult: u64) {
    match list.iter_mut().find(|e| e.0 == value) {
        Some(e) => e.1 += mult,
        None => list.push(Exceptional(value, mult)),
    }
}

/// Finite-rank bookkeeping of a shift: which eigenvalues changed sign.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Crossings {
    /// `(old eigenvalue, new eigenvalue, multiplicity)`; a new value of zero means the kernel.
    pub moved: Vec<(Rational, Rational, u64)>,
}

/// `P + a`.
pub fn shift(model: &SpectralModel, a: &Rational) -> Result<SpectralModel> {
    shift_with_crossings(model, a).map(|(m, _)| m)
}

pub fn shift_with_crossings(model: &SpectralModel, a: &Rational) -> Result<(SpectralModel, Crossings)> {
    if *a == 0 {
        return Ok((model.clone(), Crossings::default()));
    }
    let mut crossings = Crossings::default();
    let mut kernel_dim = 0;
    let mut exceptional = Vec::new();
    let mut branches = Vec::new();
    for b in &model.branches {
        // |λ + a| = |λ| + sign·a on this branch while the sign is kept
        let delta = Rational::from(a * b.sign as i64);
        let mut k0 = b.k0;
        if delta < 0 {
            let bound = Rational::from(-&delta);
            while compare_law(&b.law, k0, &bound) != Ordering::Greater {
                let old = b
                    .eigenvalue_exact(k0)
                    .ok_or_else(|| Error::Representation(format!("eigenvalue at k = {k0} crossing zero is not rational")))?;
                let new = Rational::from(&old + a);
                let mult = multiplicity_u64(b, k0)?;
                crossings.moved.push((old, new.clone(), mult));
                if new == 0 {
                    kernel_dim += mult;
                } else {
                    push_exceptional(&mut exceptional, RealRadical::from_rational(&new)?, mult);
                }
                k0 += 1;
            }
        }
        let law = series_compose_map(&b.law, &SpectralMap::Shift(delta))?;
        branches.push(Branch { sign: b.sign, multiplicity: b.multiplicity.clone(), law, k0 });
    }
    for e in &model.exceptional {
        let old = e.0.to_rational().ok_or_else(|| Error::Representation(format!("cannot shift irrational eigenvalue {}", e.0)))?;
        let new = Rational::from(&old + a);
        if (new < 0) != (old < 0) || new == 0 {
            crossings.moved.push((old, new.clone(), e.1));
        }
        if new == 0 {
            kernel_dim += e.1;
        } else {
            push_exceptional(&mut exceptional, RealRadical::from_rational(&new)?, e.1);
        }
    }
    if model.kernel_dim > 0 {
        crossings.moved.push((Rational::new(), a.clone(), model.kernel_dim));
        push_exceptional(&mut exceptional, RealRadical::from_rational(a)?, model.kernel_dim);
    }
    let out = SpectralModel {
        order: model.order,
        dimension: model.dimension,
        kernel_dim,
        branches,
        exceptional,
        regime_note: model.regime_note.clone(),
    };
    out.validate()?;
    Ok((out, crossings))
}

/// `P_ε = P + ε|P|`: each eigenvalue λ becomes `(1 + ε sign λ) λ`.
pub fn epsilon_scale(model: &SpectralModel, epsilon: &Rational) -> Result<SpectralModel> {
    ec_perturb(model, epsilon, &Rational::new())
}

/// `P_{ε,c} = P_ε + c F |P_ε|^(-n)`.
pub fn ec_perturb(model: &SpectralModel, epsilon: &Rational, c: &Rational) -> Result<SpectralModel> {
    check_epsilon(epsilon)?;
    check_c(c)?;
    if *epsilon == 0 && *c == 0 {
        return Ok(model.clone());
    }
    let n = model.dimension;
    let map = |sign: i8| SpectralMap::FEpsC { eps: Rational::from(epsilon * sign as i64), c: c.clone(), n };
    let mut branches = Vec::new();
    for b in &model.branches {
        // the law holds |λ|; f acts on it with the sign of the branch folded into ε
        let law = series_compose_map(&b.law, &map(b.sign))?;
        branches.push(Branch { law, ..b.clone() });
    }
    let mut exceptional = Vec::new();
    for e in &model.exceptional {
        let factor = Rational::from(1) + Rational::from(epsilon * e.0.sign as i64);
        let scaled = e.0.magnitude.mul(&PositiveRadical::from_rational(&factor)?);
        let magnitude = if *c == 0 {
            scaled
        } else {
            let r = scaled
                .to_rational()
                .ok_or_else(|| Error::Representation(format!("cannot perturb irrational eigenvalue {}", e.0)))?;
            PositiveRadical::from_rational(&(r.clone() + (c * pow_i(&r, -(n as i64)))))?
        };
        exceptional.push(Exceptional(RealRadical { sign: e.0.sign, magnitude }, e.1));
    }
    let out = SpectralModel { branches, exceptional, ..model.clone() };
    out.validate().map_err(|err| match err {
        Error::InvalidModel(msg) => Error::Parameter(format!("c = {} too large: {msg}", format_rational(c))),
        other => other,
    })?;
    Ok(out)
}

/// `Q = F |P|^(1/m)`, an operator of order 1.
pub fn root_op(model: &SpectralModel) -> Result<SpectralModel> {
    let m = model.order;
    if m == 1 {
        return Ok(model.clone());
    }
    let branches = model
        .branches
        .iter()
        .map(|b| Ok(Branch { law: series_compose_map(&b.law, &SpectralMap::SignRoot(m))?, ..b.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let root = Rational::from((1, m));
    let exceptional = model
        .exceptional
        .iter()
        .map(|e| Exceptional(RealRadical { sign: e.0.sign, magnitude: e.0.magnitude.pow(&root) }, e.1))
        .collect();
    let out = SpectralModel { order: 1, branches, exceptional, ..model.clone() };
    out.validate()?;
    Ok(out)
}

/// `F λ ↦ sign(λ)|λ|^m`, raising the order by a factor `m`.
pub fn sign_power(model: &SpectralModel, m: u32) -> Result<SpectralModel> {
    if m == 1 {
        return Ok(model.clone());
    }
    let branches = model
        .branches
        .iter()
        .map(|b| Ok(Branch { law: series_compose_map(&b.law, &SpectralMap::SignPow(m))?, ..b.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let exceptional = model
        .exceptional
        .iter()
        .map(|e| Exceptional(RealRadical { sign: e.0.sign, magnitude: e.0.magnitude.pow(&Rational::from(m)) }, e.1))
        .collect();
    let out = SpectralModel { order: model.order * m, branches, exceptional, ..model.clone() };
    out.validate()?;
    Ok(out)
}

/// Smallest `|λ|` of the nonzero spectrum of `Q = F|P|^(1/m)`.
pub fn root_gap(model: &SpectralModel) -> Result<f64> {
    Ok(root_op(model)?.min_abs_eigenvalue())
}

/// `P_{ε,c,a} = F(Q_{ε,c} + a) |Q_{ε,c} + a|^m` with `m` the order of `P`.
///
/// Requires `0 ≤ a < (1 - |ε|) μ` where `μ` is the smallest nonzero `|λ|` of `Q`.
pub fn power_op(model: &SpectralModel, params: &PerturbationParams) -> Result<SpectralModel> {
    let gap = root_gap(model)?;
    let limit = (1.0 - params.epsilon.to_f64().abs()) * gap;
    if params.a < 0 || params.a.to_f64() >= limit {
        return Err(Error::Parameter(format!(
            "a = {} outside [0, (1 - |ε|)μ) = [0, {limit})",
            format_rational(&params.a)
        )));
    }
    power_op_unchecked(model, params)
}

/// As [`power_op`] but accepts any `a`; results outside the gap regime carry a note.
pub fn power_op_permissive(model: &SpectralModel, params: &PerturbationParams) -> Result<SpectralModel> {
    match power_op(model, params) {
        Err(Error::Parameter(msg)) => {
            let mut out = power_op_unchecked(model, params)?;
            out.regime_note = Some(format!("outside the gap regime: {msg}"));
            Ok(out)
        }
        other => other,
    }
}

fn power_op_unchecked(model: &SpectralModel, params: &PerturbationParams) -> Result<SpectralModel> {
    let q = root_op(model)?;
    let qec = ec_perturb(&q, &params.epsilon, &params.c)?;
    let shifted = shift(&qec, &params.a)?;
    sign_power(&shifted, model.order)
}

/// `u(ε) = ((1+ε)^(-n) + (1-ε)^(-n))/2`, `v(ε) = ((1+ε)^(-n) - (1-ε)^(-n))/2`.
pub fn u_v(epsilon: &Rational, n: u32) -> Result<(Rational, Rational)> {
    check_epsilon(epsilon)?;
    let p = pow_i(&(Rational::from(1) + epsilon), -(n as i64));
    let q = pow_i(&(Rational::from(1) - epsilon), -(n as i64));
    let half = Rational::from((1, 2));
    Ok((Rational::from(&p + &q) * &half, (p - q) * half))
}

/// `A + a` on the symbol side: adds `a` to the degree-0 component on both rays.
pub fn symbol_shift(a: &SymbolExpansion, shift: &Rational) -> Result<SymbolExpansion> {
    a.add_scalar(shift)
}
