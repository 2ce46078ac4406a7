//! Positive real numbers of the form `Π p_i^(q_i)` with integer bases and
//! rational exponents. Used for leading coefficients whose rational powers
//! are not rational, so that ratios and products stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ball::Ball;
use super::poly::factor;
use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PositiveRadical {
    /// base -> exponent, no zero exponents, bases > 1.
    factors: BTreeMap<Integer, Rational>,
}

fn factor_lenient(n: &Integer) -> Vec<(Integer, u32)> {
    factor(n).unwrap_or_else(|| vec![(n.clone(), 1)])
}

impl PositiveRadical {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_rational(r: &Rational) -> Result<Self> {
        if *r <= 0 {
            return Err(Error::Domain(format!("leading coefficient must be positive, got {r}")));
        }
        let mut out = PositiveRadical::one();
        for (p, e) in factor_lenient(r.numer()) {
            out.insert(p, Rational::from(e));
        }
        for (p, e) in factor_lenient(r.denom()) {
            out.insert(p, Rational::from(-(e as i64)));
        }
        Ok(out)
    }

    fn insert(&mut self, base: Integer, exp: Rational) {
        if base == 1 || exp == 0 {
            return;
        }
        let entry = self.factors.entry(base.clone()).or_default();
        *entry += exp;
        if *entry == 0 {
            self.factors.remove(&base);
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &o.factors {
            out.insert(p.clone(), e.clone());
        }
        out
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.pow(&Rational::from(-1)))
    }

    pub fn pow(&self, q: &Rational) -> Self {
        let mut out = PositiveRadical::one();
        for (p, e) in &self.factors {
            out.insert(p.clone(), Rational::from(e * q));
        }
        out
    }

    /// The exact value when every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        let mut acc = Rational::from(1);
        for (p, e) in &self.factors {
            if *e.denom() != 1 {
                return None;
            }
            let k = e.numer().to_i64()?;
            acc *= super::rational::pow_i(&Rational::from(p), k);
        }
        Some(acc)
    }

    pub fn ln(&self, prec: u32) -> Ball {
        let mut acc = Ball::zero(prec);
        for (p, e) in &self.factors {
            let l = Ball::ln_rational(&Rational::from(p), prec).expect("base > 1");
            acc = acc.add(&l.mul_rational(e));
        }
        acc
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self.to_rational() {
            Some(r) => Ball::from_rational(&r, prec),
            None => self.ln(prec).exp(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.factors.iter().map(|(p, e)| p.to_f64().powf(e.to_f64())).product()
    }
}

impl fmt::Display for PositiveRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^({})", format_rational(e)) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for PositiveRadical {
    type Err = Error;

    /// Accepts a rational (`"3/2"`) or a product like `"2^(1/2)*3^(-1/3)*5"`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if !t.contains('^') && !t.contains('*') {
            return Self::from_rational(&parse_rational(t)?);
        }
        let mut out = PositiveRadical::one();
        for part in t.split('*') {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim().trim_start_matches('(').trim_end_matches(')');
                    (b.trim(), parse_rational(e)?)
                }
                None => (part, Rational::from(1)),
            };
            let base = Self::from_rational(&parse_rational(base)?)?;
            out = out.mul(&base.pow(&exp));
        }
        Ok(out)
    }
}

impl Serialize for PositiveRadical {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PositiveRadical {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    #[test]
    fn roots_and_products() {
        let two = PositiveRadical::from_rational(&int(2)).unwrap();
        let r = two.pow(&rat(1, 2));
        assert_eq!(r.to_rational(), None);
        assert_eq!(r.mul(&r).to_rational(), Some(int(2)));
        let nine_quarters = PositiveRadical::from_rational(&rat(9, 4)).unwrap();
        assert_eq!(nine_quarters.pow(&rat(-1, 2)).to_rational(), Some(rat(2, 3)));
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip() {
        let x = PositiveRadical::from_rational(&rat(12, 5)).unwrap().pow(&rat(1, 3));
        let back: PositiveRadical = x.to_string().parse().unwrap();
        assert_eq!(back, x);
        let y: PositiveRadical = "3/2".parse().unwrap();
        assert_eq!(y.to_rational(), Some(rat(3, 2)));
    }
}
