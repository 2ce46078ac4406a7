use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ball::Ball;
use super::gaussian::GaussianRational;
use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

/// A coefficient: exact rational, exact Gaussian rational, or a complex ball.
///
/// Exact values are kept in canonical form (a Gaussian value with zero
/// imaginary part is always stored as `Rational`). Combining two exact values
/// never produces a float; combining with a float yields a float at the
/// float operand's precision.
#[derive(Clone, Debug)]
pub enum ExactScalar {
    Rational(Rational),
    Gaussian(GaussianRational),
    Approx(Ball),
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(Rational::new())
    }

    pub fn one() -> Self {
        ExactScalar::Rational(Rational::from(1))
    }

    pub fn from_gaussian(z: GaussianRational) -> Self {
        if z.is_real() {
            ExactScalar::Rational(z.re)
        } else {
            ExactScalar::Gaussian(z)
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactScalar::Approx(_))
    }

    /// Exact zero test; a float is never considered exactly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => *r == 0,
            ExactScalar::Gaussian(z) => z.is_zero(),
            ExactScalar::Approx(_) => false,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self {
            ExactScalar::Rational(r) => Some(GaussianRational::real(r.clone())),
            ExactScalar::Gaussian(z) => Some(z.clone()),
            ExactScalar::Approx(_) => None,
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            ExactScalar::Rational(r) => Ball::from_rational(r, prec),
            ExactScalar::Gaussian(z) => Ball::from_complex_rational(&z.re, &z.im, prec),
            ExactScalar::Approx(b) => b.clone(),
        }
    }

    /// Precision of the float variant, if any.
    pub fn float_prec(&self) -> Option<u32> {
        match self {
            ExactScalar::Approx(b) => Some(b.prec()),
            _ => None,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            ExactScalar::Rational(r) => (r.to_f64(), 0.0),
            ExactScalar::Gaussian(z) => (z.re.to_f64(), z.im.to_f64()),
            ExactScalar::Approx(b) => (b.re_f64(), b.im_f64()),
        }
    }

    /// Magnitude bound: exact magnitude for exact values, midpoint plus radius otherwise.
    pub fn abs_upper_f64(&self) -> f64 {
        match self {
            ExactScalar::Approx(b) => b.abs_upper().to_f64(),
            _ => {
                let (re, im) = self.to_f64_pair();
                re.hypot(im)
            }
        }
    }

    fn float_pair(&self, o: &Self) -> (Ball, Ball) {
        let prec = self.float_prec().into_iter().chain(o.float_prec()).max().unwrap_or(super::DEFAULT_PREC);
        (self.to_ball(prec), o.to_ball(prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(Rational::from(a + b)),
            _ => match (self.as_gaussian(), o.as_gaussian()) {
                (Some(a), Some(b)) => Self::from_gaussian(&a + &b),
                _ => {
                    let (a, b) = self.float_pair(o);
                    ExactScalar::Approx(a.add(&b))
                }
            },
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactScalar::Rational(a) => ExactScalar::Rational(Rational::from(-a)),
            ExactScalar::Gaussian(z) => ExactScalar::Gaussian(-z),
            ExactScalar::Approx(b) => ExactScalar::Approx(b.neg()),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            ExactScalar::Rational(_) => self.clone(),
            ExactScalar::Gaussian(z) => ExactScalar::Gaussian(z.conj()),
            ExactScalar::Approx(b) => ExactScalar::Approx(b.conj()),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(Rational::from(a * b)),
            _ => match (self.as_gaussian(), o.as_gaussian()) {
                (Some(a), Some(b)) => Self::from_gaussian(&a * &b),
                _ => {
                    let (a, b) = self.float_pair(o);
                    ExactScalar::Approx(a.mul(&b))
                }
            },
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        match self {
            ExactScalar::Rational(a) => ExactScalar::Rational(Rational::from(a * r)),
            ExactScalar::Gaussian(z) => Self::from_gaussian(z.scale(r)),
            ExactScalar::Approx(b) => ExactScalar::Approx(b.mul_rational(r)),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::Domain("division by exact zero".into()));
        }
        match (self, o) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => Ok(ExactScalar::Rational(Rational::from(a / b))),
            _ => match (self.as_gaussian(), o.as_gaussian()) {
                (Some(a), Some(b)) => Ok(Self::from_gaussian(&a * &b.inv().expect("nonzero"))),
                _ => {
                    let (a, b) = self.float_pair(o);
                    Ok(ExactScalar::Approx(a.div(&b)?))
                }
            },
        }
    }

    /// Exact integer power; exact inputs stay exact.
    pub fn exact_pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::Domain("zero raised to a negative power".into()));
        }
        match self {
            ExactScalar::Rational(r) => Ok(ExactScalar::Rational(super::rational::pow_i(r, exp))),
            ExactScalar::Gaussian(z) => Ok(Self::from_gaussian(z.pow_i(exp)?)),
            ExactScalar::Approx(b) => {
                let p = b.powi(exp.unsigned_abs() as u32);
                if exp < 0 {
                    Ok(ExactScalar::Approx(p.recip()?))
                } else {
                    Ok(ExactScalar::Approx(p))
                }
            }
        }
    }

    /// Equality of exact values; floats compare by bit pattern.
    pub fn exact_eq(&self, o: &Self) -> bool {
        match (self, o) {
            (ExactScalar::Approx(a), ExactScalar::Approx(b)) => a.bitwise_eq(b),
            (ExactScalar::Approx(_), _) | (_, ExactScalar::Approx(_)) => false,
            _ => self.as_gaussian() == o.as_gaussian(),
        }
    }

    /// `|self - o|` upper bound, in f64.
    pub fn distance(&self, o: &Self) -> f64 {
        match (self.as_gaussian(), o.as_gaussian()) {
            (Some(a), Some(b)) => {
                let d = &a - &b;
                d.re.to_f64().hypot(d.im.to_f64())
            }
            _ => {
                let (a, b) = self.float_pair(o);
                a.distance_upper(&b).to_f64()
            }
        }
    }

    /// Human-readable decimal rendering.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.to_ball(super::DEFAULT_PREC.max(4 * digits as u32)).to_decimal(digits)
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        self.exact_eq(o)
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::Rational(Rational::from(n))
    }
}

impl From<GaussianRational> for ExactScalar {
    fn from(z: GaussianRational) -> Self {
        Self::from_gaussian(z)
    }
}

impl From<Ball> for ExactScalar {
    fn from(b: Ball) -> Self {
        ExactScalar::Approx(b)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{}", format_rational(r)),
            ExactScalar::Gaussian(z) => write!(f, "{z}"),
            ExactScalar::Approx(b) => write!(f, "{}", b.to_hex()),
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('f') {
            return Ok(ExactScalar::Approx(Ball::parse_hex(t)?));
        }
        if t.ends_with('i') {
            return Ok(Self::from_gaussian(GaussianRational::parse(t)?));
        }
        Ok(ExactScalar::Rational(parse_rational(t)?))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn g(a: i64, b: i64, c: i64, d: i64) -> ExactScalar {
        GaussianRational::new(rat(a, b), rat(c, d)).into()
    }

    #[test]
    fn exact_pow_examples() {
        let x = ExactScalar::from(rat(2, 3));
        assert_eq!(x.exact_pow(-2).unwrap(), ExactScalar::from(rat(9, 4)));
        assert_eq!(x.exact_pow(0).unwrap(), ExactScalar::one());
        assert_eq!(g(1, 1, 1, 1).exact_pow(2).unwrap(), g(0, 1, 2, 1));
        assert!(ExactScalar::zero().exact_pow(-1).is_err());
    }

    #[test]
    fn gaussian_collapses_to_rational() {
        let z = g(1, 2, 1, 1).mul(&g(1, 2, -1, 1));
        assert!(matches!(z, ExactScalar::Rational(_)));
        assert_eq!(z, ExactScalar::from(rat(5, 4)));
    }

    #[test]
    fn mixed_arithmetic_goes_float() {
        let b = ExactScalar::Approx(Ball::pi(128));
        let r = b.add(&ExactScalar::from(rat(1, 3)));
        assert_eq!(r.float_prec(), Some(128));
        assert!((r.to_f64_pair().0 - (std::f64::consts::PI + 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip() {
        for v in [
            ExactScalar::from(rat(-3, 7)),
            g(1, 2, -5, 3),
            ExactScalar::Approx(Ball::pi(256).mul(&Ball::from_parts_f64(0.25, -1.5, 256))),
        ] {
            let back: ExactScalar = v.to_string().parse().unwrap();
            assert_eq!(back, v);
        }
    }
}
