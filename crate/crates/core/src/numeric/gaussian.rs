use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::Rational;

use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::new() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::from(1))
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::new(), im: Rational::from(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: Rational::from(&self.re / &n),
            im: Rational::from(-&self.im) / n,
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: Rational::from(&self.re * r), im: Rational::from(&self.im * r) }
    }

    pub fn pow_i(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 {
            self.inv().ok_or_else(|| Error::Domain("zero raised to a negative power".into()))?
        } else {
            self.clone()
        };
        let mut acc = GaussianRational::one();
        let mut b = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(t)?));
        };
        let body = body.trim_end();
        // split at the last sign that is not leading and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'/' {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re = parse_rational(&body[..idx])?;
                let im_text = body[idx..].trim_start_matches('+');
                let im = if im_text == "-" { Rational::from(-1) } else { parse_rational(im_text)? };
                Ok(GaussianRational { re, im })
            }
            None => {
                let im = if body.is_empty() { Rational::from(1) } else { parse_rational(body)? };
                Ok(GaussianRational { re: Rational::new(), im })
            }
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            return write!(f, "{}", format_rational(&self.re));
        }
        let sign = if self.im < 0 { '-' } else { '+' };
        write!(f, "{}{}{} i", format_rational(&self.re), sign, format_rational(&Rational::from(self.im.abs_ref())))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: Rational::from(&self.re - &o.re), im: Rational::from(&self.im - &o.im) }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussianRational { re, im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}
