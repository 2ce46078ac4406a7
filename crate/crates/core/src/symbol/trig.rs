use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::GaussianRational;

/// A trigonometric polynomial `Σ c_n e^{inx}` with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::constant(GaussianRational::real(r.clone()))
    }

    pub fn monomial(freq: i64, c: GaussianRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(freq, c);
        }
        TrigPoly { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let mut p = TrigPoly::zero();
        for (n, c) in terms {
            p.add_term(n, &c);
        }
        p
    }

    fn add_term(&mut self, n: i64, c: &GaussianRational) {
        let e = self.coeffs.entry(n).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn coeff(&self, n: i64) -> GaussianRational {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|n| *n == 0)
    }

    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (n, c) in o.terms() {
            r.add_term(n, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TrigPoly { coeffs: self.coeffs.iter().map(|(n, c)| (*n, -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = TrigPoly::zero();
        for (n, c) in self.terms() {
            for (m, d) in o.terms() {
                r.add_term(n + m, &(c * d));
            }
        }
        r
    }

    pub fn scale(&self, g: &GaussianRational) -> Self {
        if g.is_zero() {
            return TrigPoly::zero();
        }
        TrigPoly { coeffs: self.coeffs.iter().map(|(n, c)| (*n, c * g)).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    /// `D_x^j` with `D_x = -i d/dx`: multiplies the frequency-`n` coefficient by `n^j`.
    pub fn d_pow(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        let mut r = TrigPoly::zero();
        for (n, c) in self.terms() {
            r.add_term(n, &c.scale(&Rational::from(rug::Integer::from(n).pow(j))));
        }
        r
    }

    /// Pointwise complex conjugate: `c_n ↦ conj(c_{-n})`.
    pub fn conj(&self) -> Self {
        TrigPoly { coeffs: self.coeffs.iter().map(|(n, c)| (-*n, c.conj())).collect() }
    }

    /// `(n, c)` when the polynomial is the single term `c e^{inx}`.
    pub fn as_monomial(&self) -> Option<(i64, &GaussianRational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(n, c)| (*n, c))
        } else {
            None
        }
    }

    /// Pointwise inverse, available only for unit-times-monomial polynomials.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotElliptic("coefficient vanishes identically".into()));
        }
        match self.as_monomial() {
            Some((n, c)) => Ok(TrigPoly::monomial(-n, c.inv().expect("nonzero"))),
            None => Err(Error::Representation(format!(
                "1/({self}) is not a trigonometric polynomial; only c·e^(inx) coefficients can be inverted"
            ))),
        }
    }

    pub fn eval_f64(&self, x: f64) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (n, c) in self.terms() {
            let (s, co) = (n as f64 * x).sin_cos();
            let (a, b) = (c.re.to_f64(), c.im.to_f64());
            re += a * co - b * s;
            im += a * s + b * co;
        }
        (re, im)
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(n, c)| if n == 0 { format!("({c})") } else { format!("({c})e^({n}ix)") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, String)> = self.terms().map(|(n, c)| (n, c.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(v.len());
        for (n, text) in v {
            terms.push((n, GaussianRational::parse(&text).map_err(serde::de::Error::custom)?));
        }
        Ok(TrigPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(int(re), int(im))
    }

    #[test]
    fn derivative_of_exponential() {
        // -i d/dx e^{2ix} = 2 e^{2ix}
        let p = TrigPoly::monomial(2, g(1, 0));
        assert_eq!(p.d_pow(1), TrigPoly::monomial(2, g(2, 0)));
        assert_eq!(TrigPoly::one().d_pow(3), TrigPoly::zero());
    }

    #[test]
    fn cos_squared() {
        let half = GaussianRational::real(Rational::from((1, 2)));
        let cos = TrigPoly::from_terms([(1, half.clone()), (-1, half)]);
        let sq = cos.mul(&cos);
        assert_eq!(sq.constant_term(), GaussianRational::real(Rational::from((1, 2))));
        assert_eq!(sq.coeff(2), GaussianRational::real(Rational::from((1, 4))));
        assert!(cos.inverse().is_err());
        let u = TrigPoly::monomial(3, g(0, 2));
        assert_eq!(u.mul(&u.inverse().unwrap()), TrigPoly::one());
    }

    #[test]
    fn json_round_trip() {
        let p = TrigPoly::from_terms([(0, g(1, 0)), (-2, g(0, -3))]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<TrigPoly>(&text).unwrap(), p);
    }
}
