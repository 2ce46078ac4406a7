use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::asymptotics::AsymptoticSeries;
use crate::error::{Error, Result};
use crate::numeric::rational::{format_rational, serde_rat};
use crate::numeric::{Ball, PositiveRadical, RatPoly};

/// Number of indices past `k0` on which positivity and monotonicity are checked.
const CHECK_SPAN: u64 = 64;

/// A nonzero real number `sign · magnitude`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealRadical {
    pub sign: i8,
    pub magnitude: PositiveRadical,
}

impl RealRadical {
    pub fn from_rational(r: &Rational) -> Result<Self> {
        if *r == 0 {
            return Err(Error::InvalidModel("exceptional eigenvalue is zero".into()));
        }
        let sign = if *r < 0 { -1 } else { 1 };
        Ok(RealRadical { sign, magnitude: PositiveRadical::from_rational(&Rational::from(r.abs_ref()))? })
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.magnitude.to_rational().map(|m| m * Rational::from(self.sign as i64))
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.magnitude.to_f64()
    }
}

impl fmt::Display for RealRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{}", self.magnitude)
    }
}

impl FromStr for RealRadical {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('-') {
            if !rest.contains('^') && !rest.contains('*') {
                return Self::from_rational(&crate::numeric::rational::parse_rational(t)?);
            }
            return Ok(RealRadical { sign: -1, magnitude: rest.parse()? });
        }
        let magnitude: PositiveRadical = t.parse()?;
        Ok(RealRadical { sign: 1, magnitude })
    }
}

impl Serialize for RealRadical {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RealRadical {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A family of eigenvalues `sign · |λ(k)|`, `k ≥ k0`, each with multiplicity `μ(k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub sign: i8,
    #[serde(with = "poly_serde")]
    pub multiplicity: RatPoly,
    pub law: AsymptoticSeries,
    pub k0: u64,
}

mod poly_serde {
    use super::*;

    pub fn serialize<S: Serializer>(p: &RatPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::vec::serialize(p.coeffs(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatPoly, D::Error> {
        Ok(RatPoly::new(serde_rat::vec::deserialize(d)?))
    }
}

impl Branch {
    pub fn new(sign: i8, multiplicity: RatPoly, law: AsymptoticSeries, k0: u64) -> Self {
        Branch { sign, multiplicity, law, k0 }
    }

    /// `|λ(k)|` as a ball.
    pub fn abs_eigenvalue(&self, k: u64, prec: u32) -> Ball {
        self.law.eval_ball(&Rational::from(k), prec)
    }

    /// `λ(k)` exactly, when the law allows it.
    pub fn eigenvalue_exact(&self, k: u64) -> Option<Rational> {
        self.law.eval_exact(&Rational::from(k)).map(|v| v * Rational::from(self.sign as i64))
    }

    pub fn multiplicity_at(&self, k: u64) -> Rational {
        self.multiplicity.eval(&Rational::from(k))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exceptional(pub RealRadical, pub u64);

/// An operator described by its spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub order: u32,
    pub dimension: u32,
    pub kernel_dim: u64,
    pub branches: Vec<Branch>,
    #[serde(default)]
    pub exceptional: Vec<Exceptional>,
    /// Set when a construction was applied outside the parameter range where
    /// its guarantees are known to hold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime_note: Option<String>,
}

impl SpectralModel {
    pub fn new(order: u32, dimension: u32, kernel_dim: u64, branches: Vec<Branch>, exceptional: Vec<Exceptional>) -> Result<Self> {
        let m = SpectralModel { order, dimension, kernel_dim, branches, exceptional, regime_note: None };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.order == 0 || self.dimension == 0 {
            return bad("order and dimension must be positive".into());
        }
        let weyl = Rational::from((self.dimension, self.order));
        for (i, b) in self.branches.iter().enumerate() {
            if b.sign != 1 && b.sign != -1 {
                return bad(format!("branch {i}: sign must be +1 or -1"));
            }
            if b.law.sign != 1 {
                return bad(format!("branch {i}: law must describe |λ| and have sign +1"));
            }
            if b.law.exponent <= 0 {
                return bad(format!("branch {i}: law exponent must be positive"));
            }
            if b.k0 == 0 {
                return bad(format!("branch {i}: k0 must be at least 1"));
            }
            let Some(deg) = b.multiplicity.degree() else {
                return bad(format!("branch {i}: multiplicity is zero"));
            };
            if b.multiplicity.leading() <= 0 {
                return bad(format!("branch {i}: multiplicity has negative leading coefficient"));
            }
            let ratio = Rational::from(deg as u32 + 1) / &b.law.exponent;
            if ratio != weyl {
                return bad(format!(
                    "branch {i}: counting exponent {} does not match dimension/order = {}",
                    format_rational(&ratio),
                    format_rational(&weyl)
                ));
            }
            let mut prev = Ball::zero(64);
            for k in b.k0..b.k0 + CHECK_SPAN {
                if b.multiplicity_at(k) <= 0 {
                    return bad(format!("branch {i}: multiplicity not positive at k = {k}"));
                }
                let v = b.abs_eigenvalue(k, 128);
                if v.re_f64() <= 0.0 || v.sub(&prev).re_f64() <= 0.0 {
                    return bad(format!("branch {i}: |λ(k)| not positive and increasing at k = {k}"));
                }
                prev = v;
            }
        }
        for e in &self.exceptional {
            if e.1 == 0 {
                return bad("exceptional eigenvalue with zero multiplicity".into());
            }
        }
        Ok(())
    }

    /// Number of eigenvalues with `|λ| ≤ cutoff`, counted with multiplicity, as f64.
    pub fn count_below(&self, cutoff: f64) -> f64 {
        let mut total = 0.0;
        for b in &self.branches {
            let mut k = b.k0;
            while b.law.eval_f64(k as f64) <= cutoff {
                total += b.multiplicity_at(k).to_f64();
                k += 1;
            }
        }
        total + self.exceptional.iter().filter(|e| e.0.magnitude.to_f64() <= cutoff).map(|e| e.1 as f64).sum::<f64>()
    }

    /// Smallest `|λ|` over the nonzero spectrum.
    pub fn min_abs_eigenvalue(&self) -> f64 {
        let branch_min = self.branches.iter().map(|b| b.law.eval_f64(b.k0 as f64));
        let exc_min = self.exceptional.iter().map(|e| e.0.magnitude.to_f64());
        branch_min.chain(exc_min).fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: SpectralModel = serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
        m.validate()?;
        Ok(m)
    }
}
