//! Arbitrary-precision complex numbers carrying an error radius.
//!
//! The radius is an estimate propagated through every operation (first-order
//! perturbation bounds plus the rounding error of the result). It is not a
//! certified enclosure.

use std::fmt;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

const RAD_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct Ball {
    re: Float,
    im: Float,
    rad: Float,
}

fn rad_of(x: f64) -> Float {
    Float::with_val(RAD_PREC, x)
}

/// Inflates a radius slightly so the low-precision radius arithmetic errs upward.
fn inflate(x: Float) -> Float {
    x * Float::with_val(RAD_PREC, 1.0 + 1e-12)
}

fn rounding(prec: u32, re: &Float, im: &Float) -> Float {
    let mag = Float::with_val(RAD_PREC, re.abs_ref()) + Float::with_val(RAD_PREC, im.abs_ref());
    let ulp = Float::with_val(RAD_PREC, 1) >> (prec as i32 - 1);
    mag * ulp
}

impl Ball {
    pub fn new(re: Float, im: Float, rad: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let re = Float::with_val(prec, re);
        let im = Float::with_val(prec, im);
        Ball { re, im, rad: Float::with_val(RAD_PREC, rad.abs()) }
    }

    pub fn zero(prec: u32) -> Self {
        Ball { re: Float::new(prec), im: Float::new(prec), rad: rad_of(0.0) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Ball { re: Float::with_val(prec, x), im: Float::new(prec), rad: rad_of(0.0) }
    }

    pub fn from_parts_f64(re: f64, im: f64, prec: u32) -> Self {
        Ball { re: Float::with_val(prec, re), im: Float::with_val(prec, im), rad: rad_of(0.0) }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let re = Float::with_val(prec, r);
        let rad = if re == *r { rad_of(0.0) } else { rounding(prec, &re, &Float::new(prec)) };
        Ball { re, im: Float::new(prec), rad }
    }

    pub fn from_complex_rational(re: &Rational, im: &Rational, prec: u32) -> Self {
        let a = Self::from_rational(re, prec);
        let b = Self::from_rational(im, prec);
        Ball { re: a.re, im: b.re, rad: a.rad + b.rad }
    }

    pub fn from_float(x: Float) -> Self {
        let prec = x.prec();
        Ball { re: x, im: Float::new(prec), rad: rad_of(0.0) }
    }

    pub fn pi(prec: u32) -> Self {
        let re = Float::with_val(prec, Constant::Pi);
        let rad = rounding(prec, &re, &Float::new(prec));
        Ball { re, im: Float::new(prec), rad }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn radius(&self) -> &Float {
        &self.rad
    }

    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Magnitude of the midpoint, at radius precision.
    pub fn mid_abs(&self) -> Float {
        let re = Float::with_val(RAD_PREC, &self.re);
        let im = Float::with_val(RAD_PREC, &self.im);
        re.hypot(&im)
    }

    pub fn abs_upper(&self) -> Float {
        self.mid_abs() + &self.rad
    }

    pub fn abs_f64(&self) -> f64 {
        self.mid_abs().to_f64()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let re = Float::with_val(prec, &self.re);
        let im = Float::with_val(prec, &self.im);
        let extra = if prec < self.prec() { rounding(prec, &re, &im) } else { rad_of(0.0) };
        Ball { re, im, rad: Float::with_val(RAD_PREC, &self.rad + extra) }
    }

    pub fn add_error(&mut self, err: &Float) {
        self.rad += Float::with_val(RAD_PREC, err.abs_ref());
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_abs() <= self.rad
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let re = Float::with_val(prec, &self.re + &o.re);
        let im = Float::with_val(prec, &self.im + &o.im);
        let rad = inflate(Float::with_val(RAD_PREC, &self.rad + &o.rad) + rounding(prec, &re, &im));
        Ball { re, im, rad }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Ball {
        Ball { re: Float::with_val(self.prec(), -&self.re), im: Float::with_val(self.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn conj(&self) -> Ball {
        Ball { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let re = Float::with_val(prec, &self.re * &o.re) - Float::with_val(prec, &self.im * &o.im);
        let im = Float::with_val(prec, &self.re * &o.im) + Float::with_val(prec, &self.im * &o.re);
        let a = self.mid_abs();
        let b = o.mid_abs();
        let prop = a * &o.rad + b * &self.rad + Float::with_val(RAD_PREC, &self.rad * &o.rad);
        let rad = inflate(prop + rounding(prec, &re, &im));
        Ball { re, im, rad }
    }

    pub fn mul_rational(&self, r: &Rational) -> Ball {
        let prec = self.prec();
        let rf = Float::with_val(prec, r);
        let re = Float::with_val(prec, &self.re * &rf);
        let im = Float::with_val(prec, &self.im * &rf);
        let scale = Float::with_val(RAD_PREC, rf.abs_ref());
        let rad = inflate(scale * &self.rad + rounding(prec, &re, &im));
        Ball { re, im, rad }
    }

    pub fn mul_real(&self, x: &Float) -> Ball {
        self.mul(&Ball::from_float(Float::with_val(self.prec().max(x.prec()), x)))
    }

    pub fn div(&self, o: &Ball) -> Result<Ball> {
        let b = o.mid_abs();
        if b <= o.rad || o.re.is_zero() && o.im.is_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        let prec = self.prec().max(o.prec());
        let d = Float::with_val(prec, &o.re * &o.re) + Float::with_val(prec, &o.im * &o.im);
        let nre = Float::with_val(prec, &self.re * &o.re) + Float::with_val(prec, &self.im * &o.im);
        let nim = Float::with_val(prec, &self.im * &o.re) - Float::with_val(prec, &self.re * &o.im);
        let re = nre / &d;
        let im = nim / &d;
        let a = self.mid_abs();
        let num = a * &o.rad + Float::with_val(RAD_PREC, &b * &self.rad);
        let den = Float::with_val(RAD_PREC, &b * Float::with_val(RAD_PREC, &b - &o.rad));
        let rad = inflate(num / den + rounding(prec, &re, &im));
        Ok(Ball { re, im, rad })
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec()).div(self)
    }

    pub fn exp(&self) -> Ball {
        let prec = self.prec();
        let mag = Float::with_val(prec, self.re.exp_ref());
        let (s, c) = Float::with_val(prec, &self.im).sin_cos(Float::new(prec));
        let re = Float::with_val(prec, &mag * &c);
        let im = Float::with_val(prec, &mag * &s);
        let magr = Float::with_val(RAD_PREC, &mag);
        let grow = Float::with_val(RAD_PREC, self.rad.exp_m1_ref());
        let rad = inflate(magr * grow + rounding(prec, &re, &im));
        Ball { re, im, rad }
    }

    /// Natural logarithm of a positive real number given exactly.
    pub fn ln_rational(x: &Rational, prec: u32) -> Result<Ball> {
        if *x <= 0 {
            return Err(Error::Domain(format!("logarithm of non-positive {x}")));
        }
        let re = Float::with_val(prec, x).ln();
        let rad = rounding(prec, &re, &Float::new(prec)) + (Float::with_val(RAD_PREC, 1) >> (prec as i32));
        Ok(Ball { re, im: Float::new(prec), rad })
    }

    /// Natural logarithm of a ball that is real and positive.
    pub fn ln_positive(&self) -> Result<Ball> {
        if !self.im.is_zero() || self.re <= 0 || Float::with_val(RAD_PREC, &self.re) <= self.rad {
            return Err(Error::Domain("logarithm of a ball that is not positive real".into()));
        }
        let prec = self.prec();
        let re = Float::with_val(prec, self.re.ln_ref());
        let rel = Float::with_val(RAD_PREC, &self.rad / Float::with_val(RAD_PREC, &self.re));
        let rad = inflate(rel * 2u32 + rounding(prec, &re, &Float::new(prec)) + (Float::with_val(RAD_PREC, 1) >> (prec as i32)));
        Ok(Ball { re, im: Float::new(prec), rad })
    }

    /// `x^(-s) = exp(-s ln x)` for a real positive `x` given through its logarithm.
    pub fn pow_neg_from_ln(ln_x: &Ball, s: &Ball) -> Ball {
        s.mul(ln_x).neg().exp()
    }

    pub fn powi(&self, n: u32) -> Ball {
        let mut acc = Ball::one(self.prec());
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// `|self - other|` upper bound including both radii.
    pub fn distance_upper(&self, other: &Ball) -> Float {
        let d = self.sub(other);
        d.mid_abs() + &self.rad + &other.rad
    }

    /// Hexadecimal-significand encoding: `f<prec>:<re>:<im>:<rad>`.
    pub fn to_hex(&self) -> String {
        format!("f{}:{}:{}:{}", self.prec(), hex_float(&self.re), hex_float(&self.im), hex_float(&self.rad))
    }

    pub fn parse_hex(text: &str) -> Result<Ball> {
        let err = || Error::Parse(format!("invalid float encoding {text:?}"));
        let rest = text.trim().strip_prefix('f').ok_or_else(err)?;
        let mut parts = rest.split(':');
        let prec: u32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
        if !(2..=1 << 20).contains(&prec) {
            return Err(err());
        }
        let re = parse_hex_float(parts.next().ok_or_else(err)?, prec).ok_or_else(err)?;
        let im = parse_hex_float(parts.next().ok_or_else(err)?, prec).ok_or_else(err)?;
        let rad = parse_hex_float(parts.next().ok_or_else(err)?, RAD_PREC).ok_or_else(err)?;
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(Ball { re, im, rad })
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            re
        } else {
            let im = self.im.to_string_radix(10, Some(digits));
            if im.starts_with('-') {
                format!("{re}{im}i")
            } else {
                format!("{re}+{im}i")
            }
        }
    }

    pub fn bitwise_eq(&self, o: &Ball) -> bool {
        self.prec() == o.prec()
            && self.re == o.re
            && self.im == o.im
            && self.rad == o.rad
            && self.re.is_sign_negative() == o.re.is_sign_negative()
    }
}

fn hex_float(x: &Float) -> String {
    match x.to_integer_exp() {
        Some((m, e)) if m != 0 => {
            let sign = if m < 0 { "-" } else { "" };
            format!("{sign}0x{:x}p{e}", m.abs())
        }
        _ => "0x0p0".to_string(),
    }
}

fn parse_hex_float(text: &str, prec: u32) -> Option<Float> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text),
    };
    let body = body.strip_prefix("0x")?;
    let (mant, exp) = body.split_once('p')?;
    let m = Integer::from_str_radix(mant, 16).ok()?;
    let e: i32 = exp.parse().ok()?;
    let bits = m.significant_bits().max(1);
    if bits > prec {
        return None;
    }
    let mut f = Float::with_val(prec, m);
    f <<= e;
    if neg {
        f = -f;
    }
    Some(f)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.to_decimal(30), self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = Ball::pi(256).mul(&Ball::new(Float::new(256), Float::with_val(256, 1), Float::new(64)));
        let w = z.exp();
        assert!((w.re_f64() + 1.0).abs() < 1e-70);
        assert!(w.im_f64().abs() < 1e-70);
        assert!(w.radius_f64() < 1e-70);
    }

    #[test]
    fn hex_round_trip_is_bit_exact() {
        let x = Ball::pi(256).mul(&Ball::from_parts_f64(-0.5, 3.25, 256));
        let y = Ball::parse_hex(&x.to_hex()).unwrap();
        assert!(x.bitwise_eq(&y));
    }

    #[test]
    fn radius_shrinks_with_precision() {
        let expr = |prec| {
            let third = Ball::from_rational(&Rational::from((1, 3)), prec);
            let s = Ball::from_parts_f64(0.5, 2.0, prec);
            Ball::pow_neg_from_ln(&Ball::ln_rational(&Rational::from(7), prec).unwrap(), &s)
                .mul(&third)
                .div(&Ball::pi(prec))
                .unwrap()
        };
        let r1 = expr(128).radius_f64();
        let r2 = expr(256).radius_f64();
        let r3 = expr(512).radius_f64();
        assert!(r1 > r2 && r2 > r3, "{r1} {r2} {r3}");
        assert!(r2 < 1e-70);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(Ball::one(64).div(&Ball::zero(64)).is_err());
    }
}
