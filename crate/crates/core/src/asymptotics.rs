//! Truncated asymptotic expansions `sign · A · k^e · (1 + Σ_j b_j k^(-j))` in
//! the branch index `k`, closed under the maps applied to eigenvalue laws.

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::rational::{is_integer, serde_rat, to_i64};
use crate::numeric::{Ball, ExactScalar, PositiveRadical, DEFAULT_PREC};

/// Depth used when an exact input is raised to a power whose expansion does not terminate.
pub const DEFAULT_SERIES_DEPTH: usize = 12;

/// How many correction terms of a series are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    /// The listed corrections are the whole expansion.
    Exact,
    /// Only `b_1..b_T` are known.
    Truncated(usize),
}

impl Depth {
    pub fn min(self, other: Depth) -> Depth {
        match (self, other) {
            (Depth::Exact, d) | (d, Depth::Exact) => d,
            (Depth::Truncated(a), Depth::Truncated(b)) => Depth::Truncated(a.min(b)),
        }
    }

    pub fn terms(self) -> Option<usize> {
        match self {
            Depth::Exact => None,
            Depth::Truncated(t) => Some(t),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Depth::Exact => s.serialize_str("exact"),
            Depth::Truncated(t) => s.serialize_u64(*t as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Depth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Num(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) if t == "exact" => Ok(Depth::Exact),
            Raw::Text(t) => t.parse().map(Depth::Truncated).map_err(serde::de::Error::custom),
            Raw::Num(n) => Ok(Depth::Truncated(n as usize)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub sign: i8,
    #[serde(rename = "A")]
    pub lead: PositiveRadical,
    #[serde(rename = "e", with = "serde_rat")]
    pub exponent: Rational,
    #[serde(rename = "b", default)]
    pub corrections: Vec<ExactScalar>,
    pub depth: Depth,
}

/// The closed family of maps applied to eigenvalue laws.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralMap {
    /// `λ ↦ λ + a`
    Shift(Rational),
    /// `λ ↦ f·λ` with `f > 0`
    Scale(Rational),
    /// `λ ↦ λ + c·sign(λ)·|λ|^(-n)`
    AddSignedPower { c: Rational, n: u32 },
    /// `λ ↦ |λ|`
    Abs,
    /// `λ ↦ sign(λ)|λ|^m`
    SignPow(u32),
    /// `λ ↦ sign(λ)|λ|^(1/m)`
    SignRoot(u32),
    /// `λ ↦ λ + ε|λ| + c·sign(λ)·|λ + ε|λ||^(-n)`
    FEpsC { eps: Rational, c: Rational, n: u32 },
}

/// Coefficients of a series on the ladder `k^(top - j)`, relative to `unit`.
struct Ladder {
    top: Rational,
    unit: PositiveRadical,
    terms: Vec<ExactScalar>,
    /// `None`: all omitted terms vanish. `Some(L)`: indices `< L` are known.
    known: Option<usize>,
}

impl Ladder {
    fn of(u: &AsymptoticSeries) -> Ladder {
        let s = ExactScalar::from(u.sign as i64);
        let mut terms = vec![s.clone()];
        terms.extend(u.corrections.iter().map(|b| b.mul(&s)));
        let known = u.depth.terms().map(|t| t + 1);
        if let Some(l) = known {
            terms.resize(l, ExactScalar::zero());
        }
        Ladder { top: u.exponent.clone(), unit: u.lead.clone(), terms, known }
    }

    fn into_series(self) -> Result<AsymptoticSeries> {
        let limit = self.known.unwrap_or(self.terms.len()).min(self.terms.len());
        let Some(j0) = (0..limit).find(|&j| !self.terms[j].is_zero()) else {
            return Err(match self.known {
                None => Error::Domain("eigenvalue law vanishes identically".into()),
                Some(l) => Error::InsufficientDepth { what: "all known terms of a law cancel".into(), depth: l },
            });
        };
        let t0 = self.terms[j0]
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Representation("leading coefficient is not a rational multiple of a radical".into()))?;
        let sign: i8 = if t0 > 0 { 1 } else { -1 };
        let lead = self.unit.mul(&PositiveRadical::from_rational(&Rational::from(t0.abs_ref()))?);
        let t0 = ExactScalar::from(t0);
        let mut corrections: Vec<ExactScalar> =
            self.terms[j0 + 1..limit].iter().map(|t| t.div(&t0)).collect::<Result<_>>()?;
        let depth = match self.known {
            None => {
                while corrections.last().is_some_and(|c| c.is_zero()) {
                    corrections.pop();
                }
                Depth::Exact
            }
            Some(l) => Depth::Truncated(l - j0 - 1),
        };
        Ok(AsymptoticSeries { sign, lead, exponent: Rational::from(&self.top - j0 as u32), corrections, depth })
    }
}

impl AsymptoticSeries {
    /// `A k^e` with no corrections.
    pub fn monomial(lead: Rational, exponent: Rational) -> Result<Self> {
        let sign = if lead < 0 { -1 } else { 1 };
        let lead = PositiveRadical::from_rational(&Rational::from(lead.abs_ref()))?;
        Ok(AsymptoticSeries { sign, lead, exponent, corrections: Vec::new(), depth: Depth::Exact })
    }

    /// Exact series with rational data.
    pub fn exact(sign: i8, lead: Rational, exponent: Rational, corrections: Vec<Rational>) -> Result<Self> {
        let lead = PositiveRadical::from_rational(&lead)?;
        Ladder {
            top: exponent,
            unit: lead,
            terms: std::iter::once(Rational::from(sign as i64))
                .chain(corrections.into_iter().map(|b| b * Rational::from(sign as i64)))
                .map(ExactScalar::from)
                .collect(),
            known: None,
        }
        .into_series()
    }

    /// The constant `c` as a series in `k`.
    pub fn constant(c: &Rational) -> Result<Self> {
        Self::monomial(c.clone(), Rational::new())
    }

    /// The polynomial law `A (k + α)^e` for a positive integer `e`.
    pub fn shifted_power(lead: Rational, alpha: Rational, e: u32) -> Result<Self> {
        let corrections = (1..=e)
            .map(|j| crate::numeric::rational::binom_int(e as i64, j) * crate::numeric::rational::pow_i(&alpha, j as i64))
            .collect();
        Self::exact(1, lead, Rational::from(e), corrections)
    }

    pub fn is_exact(&self) -> bool {
        self.depth == Depth::Exact
    }

    /// Number of correction terms that can be trusted (`None` for exact series).
    pub fn depth_terms(&self) -> Option<usize> {
        self.depth.terms()
    }

    pub fn correction(&self, j: usize) -> ExactScalar {
        if j == 0 {
            return ExactScalar::one();
        }
        self.corrections.get(j - 1).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn abs(&self) -> Self {
        AsymptoticSeries { sign: 1, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        AsymptoticSeries { sign: -self.sign, ..self.clone() }
    }

    pub fn scale(&self, f: &Rational) -> Result<Self> {
        if *f == 0 {
            return Err(Error::Domain("scaling a law by zero".into()));
        }
        let mag = PositiveRadical::from_rational(&Rational::from(f.abs_ref()))?;
        let sign = if *f < 0 { -self.sign } else { self.sign };
        Ok(AsymptoticSeries { sign, lead: self.lead.mul(&mag), ..self.clone() })
    }

    /// If the series is exactly `A (k + α)^e` with rational `A` and either no
    /// corrections or a positive integer `e`, returns `(A, α)`.
    pub fn as_shifted_power(&self) -> Option<(Rational, Rational)> {
        if self.depth != Depth::Exact || self.sign != 1 {
            return None;
        }
        let a = self.lead.to_rational()?;
        if self.corrections.is_empty() {
            return Some((a, Rational::new()));
        }
        let e = to_i64(&self.exponent).filter(|e| *e > 0)? as u32;
        let b1 = self.corrections[0].as_rational()?;
        let alpha = Rational::from(b1 / e);
        let candidate = Self::shifted_power(a.clone(), alpha.clone(), e).ok()?;
        (candidate == *self).then_some((a, alpha))
    }

    /// Exact value at integer `k` when the series is exact with rational data and integer exponent.
    pub fn eval_exact(&self, k: &Rational) -> Option<Rational> {
        if self.depth != Depth::Exact || !is_integer(&self.exponent) {
            return None;
        }
        let e = to_i64(&self.exponent)?;
        let mut acc = Rational::from(1);
        let kinv = if *k == 0 { None } else { Some(Rational::from(k.recip_ref())) };
        for (j, b) in self.corrections.iter().enumerate() {
            let b = b.as_rational()?;
            if *b != 0 {
                acc += b * crate::numeric::rational::pow_i(kinv.as_ref()?, j as i64 + 1);
            }
        }
        let lead = self.lead.to_rational()?;
        let kpow = if e < 0 { crate::numeric::rational::pow_i(kinv.as_ref()?, -e) } else { crate::numeric::rational::pow_i(k, e) };
        Some(acc * lead * kpow * Rational::from(self.sign as i64))
    }

    /// Value of the (possibly truncated) series at `k > 0`.
    pub fn eval_ball(&self, k: &Rational, prec: u32) -> Ball {
        let kb = Ball::from_rational(k, prec);
        let kinv = kb.recip().expect("k > 0");
        let mut acc = Ball::one(prec);
        let mut kp = Ball::one(prec);
        for b in &self.corrections {
            kp = kp.mul(&kinv);
            acc = acc.add(&b.to_ball(prec).mul(&kp));
        }
        let ln_k = Ball::ln_rational(k, prec).expect("k > 0");
        let kpow = Ball::pow_neg_from_ln(&ln_k, &Ball::from_rational(&Rational::from(-&self.exponent), prec));
        let v = acc.mul(&kpow).mul(&self.lead.to_ball(prec));
        if self.sign < 0 {
            v.neg()
        } else {
            v
        }
    }

    pub fn eval_f64(&self, k: f64) -> f64 {
        let mut acc = 1.0;
        let mut kp = 1.0;
        for b in &self.corrections {
            kp /= k;
            acc += b.to_f64_pair().0 * kp;
        }
        self.sign as f64 * self.lead.to_f64() * k.powf(self.exponent.to_f64()) * acc
    }
}

/// Termwise sum; the exponent difference must be an integer.
pub fn series_add(u: &AsymptoticSeries, v: &AsymptoticSeries) -> Result<AsymptoticSeries> {
    let diff = Rational::from(&u.exponent - &v.exponent);
    if !is_integer(&diff) {
        return Err(Error::LadderMisalignment(u.exponent.to_string(), v.exponent.to_string()));
    }
    let (hi, lo) = if diff >= 0 { (u, v) } else { (v, u) };
    let offset = to_i64(&Rational::from(diff.abs_ref())).ok_or_else(|| Error::Domain("exponent gap too large".into()))? as usize;
    let hi_l = Ladder::of(hi);
    let lo_l = Ladder::of(lo);
    // express the lower series in units of the upper leading coefficient
    let ratio = lo_l.unit.div(&hi_l.unit);
    let ratio = match ratio.to_rational() {
        Some(r) => ExactScalar::from(r),
        None => ExactScalar::Approx(ratio.to_ball(DEFAULT_PREC)),
    };
    let known = match (hi_l.known, lo_l.known) {
        (None, None) => None,
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b + offset),
        (Some(a), Some(b)) => Some(a.min(b + offset)),
    };
    let len = known.unwrap_or(hi_l.terms.len().max(lo_l.terms.len() + offset));
    let mut terms = vec![ExactScalar::zero(); len];
    for (j, t) in hi_l.terms.iter().enumerate().take(len) {
        terms[j] = terms[j].add(t);
    }
    for (j, t) in lo_l.terms.iter().enumerate() {
        if j + offset < len {
            terms[j + offset] = terms[j + offset].add(&t.mul(&ratio));
        }
    }
    Ladder { top: hi_l.top, unit: hi_l.unit, terms, known }.into_series()
}

/// `|u|^p`; the sign field is dropped. Non-terminating expansions of exact
/// inputs are cut at [`DEFAULT_SERIES_DEPTH`].
pub fn series_pow(u: &AsymptoticSeries, p: &Rational) -> AsymptoticSeries {
    let depth = match u.depth {
        Depth::Truncated(t) => t,
        Depth::Exact => DEFAULT_SERIES_DEPTH.max(u.corrections.len()),
    };
    series_pow_to(u, p, depth)
}

/// As [`series_pow`] with an explicit depth for non-terminating expansions of exact inputs.
pub fn series_pow_to(u: &AsymptoticSeries, p: &Rational, depth: usize) -> AsymptoticSeries {
    let lead = u.lead.pow(p);
    let exponent = Rational::from(&u.exponent * p);
    if u.corrections.is_empty() {
        return AsymptoticSeries { sign: 1, lead, exponent, corrections: Vec::new(), depth: u.depth };
    }
    let terminating = u.depth == Depth::Exact && is_integer(p) && *p >= 0;
    let (n_terms, out_depth) = match (u.depth, terminating) {
        (Depth::Exact, true) => {
            let deg = to_i64(p).unwrap_or(0) as usize * u.corrections.len();
            (deg, Depth::Exact)
        }
        (Depth::Exact, false) => (depth, Depth::Truncated(depth)),
        (Depth::Truncated(t), _) => (t, Depth::Truncated(t)),
    };
    // Miller's recurrence for (1 + Σ b_j x^j)^p
    let p1 = ExactScalar::from(Rational::from(p + 1));
    let mut w = vec![ExactScalar::one()];
    for n in 1..=n_terms {
        let mut acc = ExactScalar::zero();
        for j in 1..=n.min(u.corrections.len()) {
            let coef = p1.mul(&ExactScalar::from(j as i64)).sub(&ExactScalar::from(n as i64));
            acc = acc.add(&coef.mul(&u.corrections[j - 1]).mul(&w[n - j]));
        }
        w.push(acc.mul_rational(&Rational::from((1, n as u32))));
    }
    let mut corrections: Vec<ExactScalar> = w.into_iter().skip(1).collect();
    if out_depth == Depth::Exact {
        while corrections.last().is_some_and(|c| c.is_zero()) {
            corrections.pop();
        }
    }
    AsymptoticSeries { sign: 1, lead, exponent, corrections, depth: out_depth }
}

/// Applies a map from the closed family to an eigenvalue law.
pub fn series_compose_map(u: &AsymptoticSeries, map: &SpectralMap) -> Result<AsymptoticSeries> {
    match map {
        SpectralMap::Shift(a) => {
            if *a == 0 {
                Ok(u.clone())
            } else {
                series_add(u, &AsymptoticSeries::constant(a)?)
            }
        }
        SpectralMap::Scale(f) => {
            if *f <= 0 {
                return Err(Error::Parameter(format!("scale factor must be positive, got {f}")));
            }
            u.scale(f)
        }
        SpectralMap::AddSignedPower { c, n } => {
            if *c == 0 {
                return Ok(u.clone());
            }
            let depth = u.depth_terms().unwrap_or(DEFAULT_SERIES_DEPTH);
            let tail = series_pow_to(u, &Rational::from(-(*n as i64)), depth).scale(&Rational::from(c * u.sign as i64))?;
            series_add(u, &tail)
        }
        SpectralMap::Abs => Ok(u.abs()),
        SpectralMap::SignPow(m) => {
            let mut r = series_pow(u, &Rational::from(*m));
            r.sign = u.sign;
            Ok(r)
        }
        SpectralMap::SignRoot(m) => {
            if *m == 0 {
                return Err(Error::Parameter("root of order zero".into()));
            }
            let mut r = series_pow(u, &Rational::from((1, *m)));
            r.sign = u.sign;
            Ok(r)
        }
        SpectralMap::FEpsC { eps, c, n } => {
            let factor = Rational::from(1) + Rational::from(eps * u.sign as i64);
            if factor <= 0 {
                return Err(Error::Parameter(format!("epsilon {eps} outside (-1, 1)")));
            }
            let scaled = u.scale(&factor)?;
            series_compose_map(&scaled, &SpectralMap::AddSignedPower { c: c.clone(), n: *n })
        }
    }
}

impl fmt::Display for AsymptoticSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{}*k^({})", self.lead, self.exponent)?;
        if !self.corrections.is_empty() {
            write!(f, "*(1")?;
            for (j, b) in self.corrections.iter().enumerate() {
                if !b.is_zero() {
                    let text = match b {
                        ExactScalar::Approx(ball) => ball.to_decimal(12),
                        other => other.to_string(),
                    };
                    write!(f, " + ({text})k^-{}", j + 1)?;
                }
            }
            write!(f, ")")?;
        }
        if let Depth::Truncated(t) = self.depth {
            write!(f, " + O(k^-{})", t + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    fn k_law() -> AsymptoticSeries {
        AsymptoticSeries::monomial(int(1), int(1)).unwrap()
    }

    fn rats(s: &AsymptoticSeries) -> Vec<Rational> {
        s.corrections.iter().map(|c| c.as_rational().unwrap().clone()).collect()
    }

    #[test]
    fn add_examples() {
        let two_k = series_add(&k_law(), &k_law()).unwrap();
        assert_eq!(two_k, AsymptoticSeries::monomial(int(2), int(1)).unwrap());

        let alpha = rat(1, 3);
        let a = rat(1, 4);
        let shifted = AsymptoticSeries::exact(1, int(1), int(1), vec![alpha.clone()]).unwrap();
        let r = series_add(&shifted, &AsymptoticSeries::constant(&a).unwrap()).unwrap();
        assert_eq!(rats(&r), vec![alpha + a]);

        // (1+ε)k + c(1+ε)^(-n) k^(-n)
        let (eps, c, n) = (rat(1, 2), rat(1, 5), 2u32);
        let one_eps = int(1) + eps.clone();
        let lhs = AsymptoticSeries::monomial(one_eps.clone(), int(1)).unwrap();
        let coef = c.clone() * crate::numeric::rational::pow_i(&one_eps, -(n as i64));
        let rhs = AsymptoticSeries::monomial(coef, int(-(n as i64))).unwrap();
        let sum = series_add(&lhs, &rhs).unwrap();
        let mut expected = vec![int(0); n as usize + 1];
        expected[n as usize] = c * crate::numeric::rational::pow_i(&one_eps, -(n as i64) - 1);
        assert_eq!(rats(&sum), expected);
        assert_eq!(sum.lead.to_rational(), Some(one_eps));
    }

    #[test]
    fn misaligned_ladders_are_rejected() {
        let half = AsymptoticSeries::monomial(int(1), rat(1, 2)).unwrap();
        assert!(matches!(series_add(&k_law(), &half), Err(Error::LadderMisalignment(..))));
    }

    #[test]
    fn pow_examples() {
        let k2 = AsymptoticSeries::monomial(int(1), int(2)).unwrap();
        assert_eq!(series_pow(&k2, &rat(1, 2)), k_law());

        let alpha = rat(2, 7);
        let square = AsymptoticSeries::shifted_power(int(1), alpha.clone(), 2).unwrap();
        let root = series_pow(&square, &rat(1, 2));
        assert_eq!(root.exponent, int(1));
        assert_eq!(root.correction(1), ExactScalar::from(alpha));
        for j in 2..=DEFAULT_SERIES_DEPTH {
            assert!(root.correction(j).is_zero());
        }

        let eps = rat(1, 3);
        let scaled = AsymptoticSeries::monomial(int(1) + eps.clone(), int(1)).unwrap();
        let p = series_pow(&scaled, &int(-2));
        assert_eq!(p.lead.to_rational(), Some(crate::numeric::rational::pow_i(&(int(1) + eps), -2)));
        assert_eq!(p.exponent, int(-2));
    }

    #[test]
    fn compose_examples() {
        let law = AsymptoticSeries::exact(1, int(1), int(1), vec![int(1)]).unwrap();
        let a = rat(2, 5);
        let r = series_compose_map(&law, &SpectralMap::Shift(a.clone())).unwrap();
        assert_eq!(rats(&r), vec![int(1) + a]);

        let (eps, c) = (rat(1, 4), rat(1, 3));
        let f = series_compose_map(&k_law(), &SpectralMap::FEpsC { eps: eps.clone(), c: c.clone(), n: 1 }).unwrap();
        let one_eps = int(1) + eps;
        let expected = series_add(
            &AsymptoticSeries::monomial(one_eps.clone(), int(1)).unwrap(),
            &AsymptoticSeries::monomial(c / one_eps, int(-1)).unwrap(),
        )
        .unwrap();
        assert_eq!(f, expected);

        let id = series_compose_map(&law, &SpectralMap::FEpsC { eps: int(0), c: int(0), n: 3 }).unwrap();
        assert_eq!(id, law);
    }

    #[test]
    fn truncated_error_decays_at_expected_rate() {
        // sqrt(k^2 + 3k + 5) truncated at T = 4
        let base = AsymptoticSeries::exact(1, int(1), int(2), vec![int(3), int(5)]).unwrap();
        let t = 4;
        let root = series_pow_to(&base, &rat(1, 2), t);
        let prec = 256;
        let errs: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&k| {
                let kk = int(k);
                let exact = base.eval_exact(&kk).unwrap();
                let exact = rug::Float::with_val(prec, &exact).sqrt();
                let approx = root.eval_ball(&kk, prec);
                (rug::Float::with_val(prec, approx.re() - &exact)).abs().to_f64()
            })
            .collect();
        let expected = -(t as f64 + 1.0 - 1.0);
        for w in errs.windows(2) {
            let slope = (w[1] / w[0]).log2();
            assert!((slope - expected).abs() <= 0.1 * expected.abs(), "slope {slope}");
        }
    }

    #[test]
    fn serde_round_trip() {
        let s = series_pow_to(&AsymptoticSeries::exact(1, int(2), int(2), vec![rat(1, 3)]).unwrap(), &rat(1, 2), 5);
        let text = serde_json::to_string(&s).unwrap();
        let back: AsymptoticSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
