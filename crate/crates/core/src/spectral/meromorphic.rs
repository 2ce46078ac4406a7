//! Continuation of the Dirichlet series `Σ μ(k) |λ(k)|^(-s)` attached to a
//! spectral model, and the weighted combinations giving ζ↑, ζ↓, ζ(|P|), η.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rug::{Float, Rational};

use crate::asymptotics::AsymptoticSeries;
use crate::error::{Error, Result};
use crate::numeric::rational::{format_rational, is_integer, to_i64};
use crate::numeric::{Ball, ExactScalar, GaussianRational, PositiveRadical, DEFAULT_PREC};
use crate::zeta::{hurwitz_ball, hurwitz_nonpositive};

use super::model::SpectralModel;

/// Smallest index where the direct sum hands over to the expansion.
const MIN_SPLIT: u64 = 64;
/// The expansion of `(1 + u)^(-s)` is used where `u` stays small on a disc of this radius factor.
const SPLIT_RADIUS: f64 = 16.0;

#[derive(Clone, Debug)]
pub struct SpectralOptions {
    /// Number of correction terms used for the pole table (`None`: `n + m + 4`).
    pub depth: Option<usize>,
    pub prec: u32,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { depth: None, prec: DEFAULT_PREC }
    }
}

impl SpectralOptions {
    pub fn table_depth(&self, model: &SpectralModel) -> usize {
        self.depth.unwrap_or((model.dimension + model.order + 4) as usize)
    }
}

#[derive(Clone, Debug)]
enum Piece {
    /// `A^(-s) Σ_d c_d ζ_H(e s - d, q)`
    Hurwitz { lead: PositiveRadical, e: Rational, q: Rational, coeffs: Vec<Rational> },
    /// `Σ_{k ≥ k0} μ(k) |λ(k)|^(-s)` through the expansion of `(1 + u(k))^(-s)`.
    General { law: AsymptoticSeries, mult: Vec<Rational>, k0: u64, table_depth: usize },
}

/// One half of the spectrum (all eigenvalues of a given sign).
#[derive(Clone, Debug)]
pub struct HalfZeta {
    pieces: Vec<Piece>,
    exceptional: Vec<(PositiveRadical, u64)>,
}

fn radical_power(lead: &PositiveRadical, s: &Rational, prec: u32) -> ExactScalar {
    let p = lead.pow(&Rational::from(-s));
    match p.to_rational() {
        Some(r) => ExactScalar::from(r),
        None => ExactScalar::Approx(p.to_ball(prec)),
    }
}

/// Coefficients of `(1 + Σ_j b_j x^j)^p` up to `x^n`.
fn binomial_exact(b: &[ExactScalar], p: &ExactScalar, n: usize) -> Vec<ExactScalar> {
    let p1 = p.add(&ExactScalar::one());
    let mut w = vec![ExactScalar::one()];
    for m in 1..=n {
        let mut acc = ExactScalar::zero();
        for j in 1..=m.min(b.len()) {
            if b[j - 1].is_zero() {
                continue;
            }
            let coef = p1.mul(&ExactScalar::from(j as i64)).sub(&ExactScalar::from(m as i64));
            acc = acc.add(&coef.mul(&b[j - 1]).mul(&w[m - j]));
        }
        w.push(acc.mul_rational(&Rational::from((1, m as u32))));
    }
    w
}

fn binomial_ball_next(b: &[Ball], p1: &Ball, w: &[Ball]) -> Ball {
    let m = w.len();
    let prec = p1.prec();
    let mut acc = Ball::zero(prec);
    for j in 1..=m.min(b.len()) {
        let coef = p1.mul_rational(&Rational::from(j as u32)).sub(&Ball::from_f64(m as f64, prec));
        acc = acc.add(&coef.mul(&b[j - 1]).mul(&w[m - j]));
    }
    acc.mul_rational(&Rational::from((1, m as u32)))
}

impl Piece {
    fn floor(&self) -> Option<Rational> {
        match self {
            Piece::Hurwitz { .. } => None,
            Piece::General { law, mult, table_depth, .. } => {
                let t = law.depth_terms().map_or(*table_depth, |c| c.min(*table_depth));
                Some(Rational::from(mult.len() as i64 - 1 - t as i64) / &law.exponent)
            }
        }
    }

    fn eval_floor(&self) -> Option<Rational> {
        match self {
            Piece::General { law, mult, .. } => {
                law.depth_terms().map(|t| Rational::from(mult.len() as i64 - 1 - t as i64) / &law.exponent)
            }
            Piece::Hurwitz { .. } => None,
        }
    }

    fn candidates(&self, out: &mut BTreeSet<Rational>) {
        match self {
            Piece::Hurwitz { e, coeffs, .. } => {
                for (d, c) in coeffs.iter().enumerate() {
                    if *c != 0 {
                        out.insert(Rational::from(1 + d as i64) / e);
                    }
                }
            }
            Piece::General { law, mult, table_depth, .. } => {
                let t_max = law.depth_terms().map_or(*table_depth, |c| c.min(*table_depth));
                for (d, c) in mult.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    for t in 0..=t_max {
                        out.insert(Rational::from(1 + d as i64 - t as i64) / &law.exponent);
                    }
                }
            }
        }
    }

    fn residue_at(&self, sigma: &Rational, prec: u32) -> Result<ExactScalar> {
        match self {
            Piece::Hurwitz { lead, e, coeffs, .. } => {
                let d = Rational::from(e * sigma) - 1;
                let Some(d) = to_i64(&d).filter(|d| *d >= 0 && (*d as usize) < coeffs.len()) else {
                    return Ok(ExactScalar::zero());
                };
                let c = Rational::from(&coeffs[d as usize] / e);
                Ok(radical_power(lead, sigma, prec).mul_rational(&c))
            }
            Piece::General { law, mult, .. } => {
                let e = &law.exponent;
                let mut needed = Vec::new();
                for (d, c) in mult.iter().enumerate() {
                    let t = Rational::from(1 + d as i64) - Rational::from(e * sigma);
                    if *c != 0 && is_integer(&t) && t >= 0 {
                        needed.push((d, to_i64(&t).unwrap() as usize));
                    }
                }
                let Some(t_max) = needed.iter().map(|x| x.1).max() else {
                    return Ok(ExactScalar::zero());
                };
                if let Some(cap) = law.depth_terms() {
                    if t_max > cap {
                        return Err(Error::InsufficientDepth {
                            what: format!("residue at s = {} needs {t_max} correction terms of the law", format_rational(sigma)),
                            depth: cap,
                        });
                    }
                }
                let g = binomial_exact(&law.corrections, &ExactScalar::from(Rational::from(-sigma)), t_max);
                let mut acc = ExactScalar::zero();
                for (d, t) in needed {
                    acc = acc.add(&g[t].mul_rational(&Rational::from(&mult[d] / e)));
                }
                Ok(acc.mul(&radical_power(&law.lead, sigma, prec)))
            }
        }
    }

    fn eval_exact(&self, s: &Rational) -> Option<Rational> {
        match self {
            Piece::Hurwitz { lead, e, q, coeffs } => {
                let scale = lead.pow(&Rational::from(-s)).to_rational()?;
                let es = Rational::from(e * s);
                let mut acc = Rational::new();
                for (d, c) in coeffs.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    let w = to_i64(&(es.clone() - d as u32))?;
                    if w > 0 {
                        return None;
                    }
                    acc += Rational::from(c * &hurwitz_nonpositive((-w) as u64, q));
                }
                Some(acc * scale)
            }
            Piece::General { .. } => None,
        }
    }

    fn eval_ball(&self, s: &Ball, prec: u32) -> Result<Ball> {
        match self {
            Piece::Hurwitz { lead, e, q, coeffs } => {
                let scale = Ball::pow_neg_from_ln(&lead.ln(prec), s);
                let es = s.mul_rational(e);
                let mut acc = Ball::zero(prec);
                for (d, c) in coeffs.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    let w = es.sub(&Ball::from_f64(d as f64, prec));
                    acc = acc.add(&hurwitz_ball(&w, q, prec)?.mul_rational(c));
                }
                Ok(acc.mul(&scale))
            }
            Piece::General { law, mult, k0, .. } => eval_general(law, mult, *k0, s, prec),
        }
    }
}

fn eval_general(law: &AsymptoticSeries, mult: &[Rational], k0: u64, s: &Ball, prec: u32) -> Result<Ball> {
    let bmag: Vec<f64> = law.corrections.iter().map(|b| b.abs_upper_f64()).collect();
    let small = |n: f64| bmag.iter().enumerate().map(|(j, b)| b * (SPLIT_RADIUS / n).powi(j as i32 + 1)).sum::<f64>() <= 0.5;
    let mut split = MIN_SPLIT.max(k0);
    while !small(split as f64) {
        split *= 2;
    }
    let mult_poly = crate::numeric::RatPoly::new(mult.to_vec());
    let neg_s = s.neg();
    let mut acc = Ball::zero(prec);
    for k in k0..split {
        let mu = mult_poly.eval(&Rational::from(k));
        if mu == 0 {
            continue;
        }
        let ln = law.eval_ball(&Rational::from(k), prec).ln_positive()?;
        acc = acc.add(&neg_s.mul(&ln).exp().mul_rational(&mu));
    }
    // tail: A^(-s) Σ_t g_t(s) Σ_d c_d ζ_H(e s + t - d, split)
    let q = Rational::from(split);
    let es = s.mul_rational(&law.exponent);
    let b: Vec<Ball> = law.corrections.iter().map(|c| c.to_ball(prec)).collect();
    let p1 = Ball::one(prec).sub(s);
    let mut w = vec![Ball::one(prec)];
    let mut tail = Ball::zero(prec);
    let target = Float::with_val(64, 1) >> (prec as i32 + 4);
    let mut small_run = 0;
    let max_t = 4 * prec as usize + 64;
    for t in 0..=max_t {
        if t > 0 {
            let next = binomial_ball_next(&b, &p1, &w);
            w.push(next);
        }
        let g = &w[t];
        let mut term = Ball::zero(prec);
        if !(b.is_empty() && t > 0) {
            for (d, c) in mult.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let arg = es.add(&Ball::from_f64(t as f64 - d as f64, prec));
                term = term.add(&hurwitz_ball(&arg, &q, prec)?.mul_rational(c));
            }
            term = term.mul(g);
        }
        tail = tail.add(&term);
        let scale = Float::with_val(64, tail.mid_abs()).max(&Float::with_val(64, 1));
        if term.abs_upper() <= Float::with_val(64, &target * &scale) {
            small_run += 1;
            if small_run >= 3 || b.is_empty() {
                tail.add_error(&Float::with_val(64, term.abs_upper() * 2u32));
                let scale = Ball::pow_neg_from_ln(&law.lead.ln(prec), s);
                return Ok(acc.add(&tail.mul(&scale)));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Domain(format!("expansion of the eigenvalue law did not converge at s = {}", s.to_decimal(20))))
}

impl HalfZeta {
    /// Builds the half for eigenvalues of the given sign.
    pub fn new(model: &SpectralModel, sign: i8, opts: &SpectralOptions) -> Result<HalfZeta> {
        let table_depth = opts.table_depth(model);
        let mut pieces = Vec::new();
        for b in model.branches.iter().filter(|b| b.sign == sign) {
            let hurwitz = b.law.as_shifted_power().and_then(|(a, alpha)| {
                let q = alpha.clone() + Rational::from(b.k0);
                (q > 0).then(|| {
                    // μ(k) as a polynomial in (k + α)
                    let shifted = b.multiplicity.taylor_shift(&Rational::from(-&alpha));
                    Piece::Hurwitz {
                        lead: PositiveRadical::from_rational(&a).expect("positive lead"),
                        e: b.law.exponent.clone(),
                        q,
                        coeffs: shifted.coeffs().to_vec(),
                    }
                })
            });
            pieces.push(hurwitz.unwrap_or_else(|| Piece::General {
                law: b.law.clone(),
                mult: b.multiplicity.coeffs().to_vec(),
                k0: b.k0,
                table_depth,
            }));
        }
        let exceptional = model
            .exceptional
            .iter()
            .filter(|e| e.0.sign == sign)
            .map(|e| (e.0.magnitude.clone(), e.1))
            .collect();
        Ok(HalfZeta { pieces, exceptional })
    }

    /// Lowest `Re s` above which the pole table is complete.
    pub fn floor(&self) -> Option<Rational> {
        self.pieces.iter().filter_map(Piece::floor).max()
    }

    /// Lowest `Re s` at which the truncated laws still determine the function.
    pub fn eval_floor(&self) -> Option<Rational> {
        self.pieces.iter().filter_map(Piece::eval_floor).max()
    }

    pub fn uses_expansion(&self) -> bool {
        self.pieces.iter().any(|p| matches!(p, Piece::General { .. }))
    }

    fn candidates(&self, out: &mut BTreeSet<Rational>) {
        for p in &self.pieces {
            p.candidates(out);
        }
    }

    pub fn residue_at(&self, sigma: &Rational, prec: u32) -> Result<ExactScalar> {
        let mut acc = ExactScalar::zero();
        for p in &self.pieces {
            acc = acc.add(&p.residue_at(sigma, prec)?);
        }
        Ok(acc)
    }

    pub fn eval_exact(&self, s: &Rational) -> Option<Rational> {
        let mut acc = Rational::new();
        for p in &self.pieces {
            acc += p.eval_exact(s)?;
        }
        for (mag, mult) in &self.exceptional {
            acc += mag.pow(&Rational::from(-s)).to_rational()? * Rational::from(*mult);
        }
        Some(acc)
    }

    pub fn eval_ball(&self, s: &Ball, prec: u32) -> Result<Ball> {
        let mut acc = Ball::zero(prec);
        for p in &self.pieces {
            acc = acc.add(&p.eval_ball(s, prec)?);
        }
        for (mag, mult) in &self.exceptional {
            let v = Ball::pow_neg_from_ln(&mag.ln(prec), s);
            acc = acc.add(&v.mul_rational(&Rational::from(*mult)));
        }
        Ok(acc)
    }
}

/// Factor multiplying one half in a combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    One,
    MinusOne,
    /// `e^(iπs)`
    ExpIPi,
    /// `e^(-iπs)`
    ExpMinusIPi,
}

impl Weight {
    /// Exact value at rational `s` when `2s` is an integer, float otherwise.
    pub fn at_rational(self, s: &Rational, prec: u32) -> ExactScalar {
        let dir = match self {
            Weight::One => return ExactScalar::one(),
            Weight::MinusOne => return ExactScalar::from(-1),
            Weight::ExpIPi => 1,
            Weight::ExpMinusIPi => -1,
        };
        exp_i_pi(&(s.clone() * Rational::from(dir)), prec)
    }

    pub fn at_ball(self, s: &Ball) -> Ball {
        let prec = s.prec();
        let dir = match self {
            Weight::One => return Ball::one(prec),
            Weight::MinusOne => return Ball::from_f64(-1.0, prec),
            Weight::ExpIPi => 1.0,
            Weight::ExpMinusIPi => -1.0,
        };
        let i_pi = Ball::pi(prec).mul(&Ball::from_parts_f64(0.0, dir, prec));
        s.mul(&i_pi).exp()
    }
}

/// `e^(iπx)` for rational `x`: exact when `2x` is an integer.
pub fn exp_i_pi(x: &Rational, prec: u32) -> ExactScalar {
    let two_x = Rational::from(x * 2u32);
    if let Some(n) = to_i64(&two_x) {
        return match n.rem_euclid(4) {
            0 => ExactScalar::one(),
            1 => GaussianRational::i().into(),
            2 => ExactScalar::from(-1),
            _ => (-&GaussianRational::i()).into(),
        };
    }
    let s = Ball::from_rational(x, prec);
    ExactScalar::Approx(Weight::ExpIPi.at_ball(&s))
}

/// Residues smaller than this (relative to `2^(-prec/2)`) are treated as numerically zero.
fn negligible(r: &ExactScalar, prec: u32) -> bool {
    match r {
        ExactScalar::Approx(b) => b.abs_upper() < (Float::with_val(64, 1) >> (prec as i32 / 2)),
        other => other.is_zero(),
    }
}

/// Poles, residues and an evaluator for one meromorphic function.
#[derive(Clone, Debug)]
pub struct MeromorphicData {
    parts: Vec<(Weight, Arc<HalfZeta>)>,
    poles: BTreeMap<Rational, ExactScalar>,
    floor: Option<Rational>,
    eval_floor: Option<Rational>,
    prec: u32,
    depth: usize,
}

impl MeromorphicData {
    fn build(parts: Vec<(Weight, Arc<HalfZeta>)>, opts: &SpectralOptions, depth: usize) -> Result<Self> {
        let prec = opts.prec;
        let floor = parts.iter().filter_map(|p| p.1.floor()).max();
        let eval_floor = parts.iter().filter_map(|p| p.1.eval_floor()).max();
        let mut cands = BTreeSet::new();
        for (_, h) in &parts {
            h.candidates(&mut cands);
        }
        let mut md = MeromorphicData { parts, poles: BTreeMap::new(), floor, eval_floor, prec, depth };
        for sigma in cands {
            if md.floor.as_ref().is_some_and(|f| sigma <= *f) {
                continue;
            }
            let r = md.residue_unchecked(&sigma)?;
            if !negligible(&r, prec) {
                md.poles.insert(sigma, r);
            }
        }
        Ok(md)
    }

    /// Nonzero residues strictly above the validity floor.
    pub fn poles(&self) -> &BTreeMap<Rational, ExactScalar> {
        &self.poles
    }

    /// Lowest `Re s` above which the pole table is complete (`None`: complete everywhere).
    pub fn validity_floor(&self) -> Option<&Rational> {
        self.floor.as_ref()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Number of correction terms behind the pole table.
    pub fn depth(&self) -> usize {
        self.depth
    }

    fn residue_unchecked(&self, sigma: &Rational) -> Result<ExactScalar> {
        let mut acc = ExactScalar::zero();
        for (w, h) in &self.parts {
            let r = h.residue_at(sigma, self.prec)?;
            if !r.is_zero() {
                acc = acc.add(&w.at_rational(sigma, self.prec).mul(&r));
            }
        }
        Ok(acc)
    }

    /// Residue at `σ`; zero at regular points.
    pub fn residue_at(&self, sigma: &Rational) -> Result<ExactScalar> {
        if let Some(f) = &self.floor {
            if sigma <= f {
                return Err(Error::InsufficientDepth {
                    what: format!("s = {} is at or below the validity floor {}", format_rational(sigma), format_rational(f)),
                    depth: self.depth,
                });
            }
        }
        self.residue_unchecked(sigma)
    }

    fn check_eval_floor(&self, re: f64) -> Result<()> {
        if let Some(f) = &self.eval_floor {
            if re <= f.to_f64() {
                return Err(Error::InsufficientDepth {
                    what: format!("Re s = {re} is at or below the truncated-law floor {}", format_rational(f)),
                    depth: self.depth,
                });
            }
        }
        Ok(())
    }

    fn eval_ball_raw(&self, s: &Ball, prec: u32) -> Result<Ball> {
        let mut acc = Ball::zero(prec);
        for (w, h) in &self.parts {
            acc = acc.add(&w.at_ball(s).mul(&h.eval_ball(s, prec)?));
        }
        Ok(acc)
    }

    /// Value at a regular point.
    ///
    /// Exact inputs give exact outputs where every contribution has a closed
    /// form. At an exact rational point where individual halves have
    /// cancelling poles the value is the symmetric limit.
    pub fn evaluate(&self, s: &ExactScalar, prec: u32) -> Result<ExactScalar> {
        self.check_eval_floor(s.to_f64_pair().0)?;
        if let Some(r) = s.as_rational() {
            if let Some(v) = self.eval_exact(r, prec) {
                return Ok(v);
            }
        }
        let wp = prec + 16;
        let sb = s.to_ball(wp);
        match self.eval_ball_raw(&sb, wp) {
            Ok(v) => Ok(ExactScalar::Approx(v.with_prec(prec))),
            Err(Error::Pole(_)) if s.as_rational().is_some() => {
                let r = s.as_rational().unwrap();
                let res = self.residue_unchecked(r)?;
                if !negligible(&res, prec) {
                    return Err(Error::Pole(format_rational(r)));
                }
                self.symmetric_limit(r, prec).map(ExactScalar::Approx)
            }
            Err(e) => Err(e),
        }
    }

    fn eval_exact(&self, s: &Rational, prec: u32) -> Option<ExactScalar> {
        let mut acc = ExactScalar::zero();
        for (w, h) in &self.parts {
            let wv = w.at_rational(s, prec);
            if !wv.is_exact() {
                return None;
            }
            acc = acc.add(&wv.mul(&ExactScalar::from(h.eval_exact(s)?)));
        }
        Some(acc)
    }

    fn symmetric_limit(&self, s: &Rational, prec: u32) -> Result<Ball> {
        let wp = prec * 3 / 2 + 32;
        let delta = Ball::from_float(Float::with_val(wp, 1) >> (prec as i32 / 2 + 16));
        let center = Ball::from_rational(s, wp);
        let hi = self.eval_ball_raw(&center.add(&delta), wp)?;
        let lo = self.eval_ball_raw(&center.sub(&delta), wp)?;
        let mut v = hi.add(&lo).mul_rational(&Rational::from((1, 2)));
        // second-order remainder of the symmetric difference
        v.add_error(&(Float::with_val(64, 1) >> (prec as i32 + 16)));
        Ok(v.with_prec(prec))
    }
}

/// Continuation of `Σ_{sign·λ > 0} |λ|^(-s)` (with multiplicity).
pub fn half_zeta(model: &SpectralModel, sign: i8, opts: &SpectralOptions) -> Result<MeromorphicData> {
    let h = Arc::new(HalfZeta::new(model, sign, opts)?);
    MeromorphicData::build(vec![(Weight::One, h)], opts, opts.table_depth(model))
}

/// The four spectral functions of a model.
#[derive(Clone, Debug)]
pub struct SpectralFunctions {
    pub zeta_up: MeromorphicData,
    pub zeta_down: MeromorphicData,
    pub zeta_abs: MeromorphicData,
    pub eta: MeromorphicData,
}

/// Names used in tables and on the command line.
pub const FUNCTION_NAMES: [&str; 4] = ["zeta_up", "zeta_down", "zeta_abs", "eta"];

impl SpectralFunctions {
    pub fn get(&self, name: &str) -> Option<&MeromorphicData> {
        match name {
            "zeta_up" => Some(&self.zeta_up),
            "zeta_down" => Some(&self.zeta_down),
            "zeta_abs" => Some(&self.zeta_abs),
            "eta" => Some(&self.eta),
            _ => None,
        }
    }

    pub fn all(&self) -> [(&'static str, &MeromorphicData); 4] {
        [("zeta_up", &self.zeta_up), ("zeta_down", &self.zeta_down), ("zeta_abs", &self.zeta_abs), ("eta", &self.eta)]
    }
}

pub fn spectral_functions(model: &SpectralModel, opts: &SpectralOptions) -> Result<SpectralFunctions> {
    let plus = Arc::new(HalfZeta::new(model, 1, opts)?);
    let minus = Arc::new(HalfZeta::new(model, -1, opts)?);
    let pair = |w: Weight| vec![(Weight::One, plus.clone()), (w, minus.clone())];
    let depth = opts.table_depth(model);
    Ok(SpectralFunctions {
        zeta_up: MeromorphicData::build(pair(Weight::ExpIPi), opts, depth)?,
        zeta_down: MeromorphicData::build(pair(Weight::ExpMinusIPi), opts, depth)?,
        zeta_abs: MeromorphicData::build(pair(Weight::One), opts, depth)?,
        eta: MeromorphicData::build(pair(Weight::MinusOne), opts, depth)?,
    })
}

/// Residues of the four functions at one admissible point.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleRow {
    pub sigma: Rational,
    pub zeta_up: ExactScalar,
    pub zeta_down: ExactScalar,
    pub zeta_abs: ExactScalar,
    pub eta: ExactScalar,
}

impl AdmissibleRow {
    pub fn get(&self, name: &str) -> Option<&ExactScalar> {
        match name {
            "zeta_up" => Some(&self.zeta_up),
            "zeta_down" => Some(&self.zeta_down),
            "zeta_abs" => Some(&self.zeta_abs),
            "eta" => Some(&self.eta),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleTable {
    pub rows: Vec<AdmissibleRow>,
    /// Value of η at the origin.
    pub eta_at_zero: ExactScalar,
}

impl AdmissibleTable {
    pub fn row(&self, sigma: &Rational) -> Option<&AdmissibleRow> {
        self.rows.iter().find(|r| r.sigma == *sigma)
    }
}

/// Residues at `σ = k/m` for `floor ≤ k ≤ n`, `k ≠ 0`, in decreasing order of `σ`.
pub fn residues_at_admissible(model: &SpectralModel, floor: i64, opts: &SpectralOptions) -> Result<AdmissibleTable> {
    let fns = spectral_functions(model, opts)?;
    admissible_from(&fns, model, floor)
}

pub fn admissible_from(fns: &SpectralFunctions, model: &SpectralModel, floor: i64) -> Result<AdmissibleTable> {
    let n = model.dimension as i64;
    let m = model.order as i64;
    if floor > n {
        return Err(Error::Parameter(format!("floor {floor} exceeds the dimension {n}")));
    }
    let lowest = Rational::from((floor, m));
    for (_, f) in fns.all() {
        if let Some(v) = f.validity_floor() {
            if lowest <= *v {
                let e_max = model.branches.iter().map(|b| b.law.exponent.to_f64()).fold(1.0, f64::max);
                let needed = ((n - floor) as f64 * e_max / m as f64).ceil() as usize + 1;
                return Err(Error::InsufficientDepth {
                    what: format!(
                        "floor {floor} reaches s = {} but the pole table is only complete above {}; use --depth {} or more",
                        format_rational(&lowest),
                        format_rational(v),
                        needed
                    ),
                    depth: f.depth(),
                });
            }
        }
    }
    let mut rows = Vec::new();
    for k in (floor..=n).rev() {
        if k == 0 {
            continue;
        }
        let sigma = Rational::from((k, m));
        rows.push(AdmissibleRow {
            zeta_up: fns.zeta_up.residue_at(&sigma)?,
            zeta_down: fns.zeta_down.residue_at(&sigma)?,
            zeta_abs: fns.zeta_abs.residue_at(&sigma)?,
            eta: fns.eta.residue_at(&sigma)?,
            sigma,
        });
    }
    let eta_at_zero = fns.eta.evaluate(&ExactScalar::zero(), fns.eta.prec())?;
    Ok(AdmissibleTable { rows, eta_at_zero })
}

/// Evaluates a spectral function at `s`.
pub fn evaluate(f: &MeromorphicData, s: &ExactScalar, prec: u32) -> Result<ExactScalar> {
    f.evaluate(s, prec)
}
