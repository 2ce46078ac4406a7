//! Hurwitz zeta function: exact residue, exact values at non-positive
//! integers, Euler–Maclaurin evaluation elsewhere.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numeric::rational::{format_rational, to_i64};
use crate::numeric::{bernoulli, bernoulli_poly, Ball, ExactScalar};

#[derive(Clone, Debug, PartialEq)]
pub struct HurwitzValue {
    pub s: ExactScalar,
    pub q: Rational,
    pub value: ExactScalar,
    pub exact: bool,
}

/// Residue of `ζ_H(s, α)` at `s = 1`; it is 1 for every admissible `α`.
pub fn hurwitz_residue(alpha: &Rational) -> Result<ExactScalar> {
    if *alpha <= 0 {
        return Err(Error::Domain(format!("Hurwitz parameter must be positive, got {alpha}")));
    }
    Ok(ExactScalar::one())
}

/// `ζ_H(s, α)` for `0 < α ≤ 1`.
pub fn hurwitz_value(s: &ExactScalar, alpha: &Rational, prec: u32) -> Result<HurwitzValue> {
    if *alpha <= 0 || *alpha > 1 {
        return Err(Error::Domain(format!("Hurwitz parameter {alpha} outside (0, 1]")));
    }
    hurwitz(s, alpha, prec)
}

/// `Σ_{k ≥ k0} k^(-s)`.
pub fn truncated_zeta(s: &ExactScalar, k0: u64, prec: u32) -> Result<HurwitzValue> {
    if k0 == 0 {
        return Err(Error::Domain("truncated zeta needs k0 >= 1".into()));
    }
    hurwitz(s, &Rational::from(k0), prec)
}

/// `ζ_H(s, q) = Σ_{k ≥ 0} (q + k)^(-s)` for any rational `q > 0`.
pub fn hurwitz(s: &ExactScalar, q: &Rational, prec: u32) -> Result<HurwitzValue> {
    if *q <= 0 {
        return Err(Error::Domain(format!("Hurwitz parameter must be positive, got {q}")));
    }
    if let Some(r) = s.as_rational() {
        if *r == 1 {
            return Err(Error::Pole("1".into()));
        }
        if let Some(n) = to_i64(r).filter(|n| *n <= 0) {
            let value = hurwitz_nonpositive(-n as u64, q);
            return Ok(HurwitzValue { s: s.clone(), q: q.clone(), value: value.into(), exact: true });
        }
    }
    let w = s.to_ball(prec);
    let value = hurwitz_ball(&w, q, prec)?;
    Ok(HurwitzValue { s: s.clone(), q: q.clone(), value: value.into(), exact: false })
}

/// `ζ_H(-n, q) = -B_{n+1}(q) / (n + 1)`.
pub fn hurwitz_nonpositive(n: u64, q: &Rational) -> Rational {
    let b = bernoulli_poly(n as usize + 1).eval(q);
    -b / Rational::from(n + 1)
}

/// Euler–Maclaurin evaluation of `ζ_H(w, q)` for complex `w ≠ 1`, `q > 0`.
///
/// The radius of the result covers the propagated input radius and the
/// truncation bound; the tail target is `2^(-prec)` relative to the larger of
/// 1 and the partial sum.
pub fn hurwitz_ball(w: &Ball, q: &Rational, prec: u32) -> Result<Ball> {
    if *q <= 0 {
        return Err(Error::Domain(format!("Hurwitz parameter must be positive, got {q}")));
    }
    let wr = w.re_f64();
    let wabs = w.abs_f64();
    let one = Ball::one(w.prec());
    if w.sub(&one).contains_zero() {
        return Err(Error::Pole(w.to_decimal(20)));
    }
    let qf = q.to_f64();
    let mut n_terms = ((0.4 * prec as f64 + wabs + 10.0) - qf).ceil().max(0.0) as u64;
    loop {
        let x = q.clone() + Rational::from(n_terms);
        let xf = x.to_f64();
        // bits lost to cancellation when the terms grow
        let growth = ((1.0 - wr).max(0.0) * xf.log2()).ceil() as u32;
        let wp = prec + 32 + growth;
        match euler_maclaurin(&w.with_prec(wp), q, n_terms, wp, prec) {
            Some(v) => return Ok(v.with_prec(prec.max(w.prec()))),
            None => n_terms = n_terms * 2 + 16,
        }
        if n_terms > 1 << 22 {
            return Err(Error::Domain(format!("Hurwitz evaluation did not converge at s = {}", w.to_decimal(20))));
        }
    }
}

fn euler_maclaurin(w: &Ball, q: &Rational, n_terms: u64, wp: u32, prec: u32) -> Option<Ball> {
    let neg_w = w.neg();
    let mut sum = Ball::zero(wp);
    for k in 0..n_terms {
        let base = q.clone() + Rational::from(k);
        let ln = Ball::ln_rational(&base, wp).ok()?;
        sum = sum.add(&neg_w.mul(&ln).exp());
    }
    let x = q.clone() + Rational::from(n_terms);
    let ln_x = Ball::ln_rational(&x, wp).ok()?;
    let x_pow_neg_w = neg_w.mul(&ln_x).exp();
    let x_ball = Ball::from_rational(&x, wp);
    let one = Ball::one(wp);
    // x^(1-w)/(w-1) + x^(-w)/2
    sum = sum.add(&x_pow_neg_w.mul(&x_ball).div(&w.sub(&one)).ok()?);
    sum = sum.add(&x_pow_neg_w.mul_rational(&Rational::from((1, 2))));

    let sigma = w.re_f64();
    let xf = x.to_f64();
    let target = {
        let scale = sum.abs_f64().max(1.0);
        Float::with_val(64, scale) >> (prec as i32)
    };
    let x_inv = x_ball.recip().ok()?;
    let x_inv2 = x_inv.mul(&x_inv);
    // term_j = B_{2j}/(2j)! (w)_{2j-1} x^(-w-2j+1)
    let mut poch = w.clone(); // (w)_{2j-1}
    let mut xpow = x_pow_neg_w.mul(&x_inv); // x^(-w-2j+1)
    let mut fact = Rational::from(2); // (2j)!
    let max_m = 40 + prec as usize;
    for j in 1..=max_m {
        let b = bernoulli(2 * j);
        let coef = Rational::from(&b / &fact);
        sum = sum.add(&poch.mul(&xpow).mul_rational(&coef));
        // advance to (w)_{2j+1} and x^(-w-2j-1)
        let w_plus = |t: u64| w.add(&Ball::from_f64(t as f64, wp));
        let poch_2j = poch.mul(&w_plus(2 * j as u64 - 1));
        // remainder bound with M = j: 4 |(w)_{2M}| / (2π)^{2M} · x^{1-σ-2M} / (σ+2M-1)
        let denom = sigma + 2.0 * j as f64 - 1.0;
        if denom > 0.5 {
            let two_pi = Float::with_val(64, std::f64::consts::TAU);
            let bound = Float::with_val(64, poch_2j.abs_upper()) * 4u32 / two_pi.pow(2 * j as u32)
                * Float::with_val(64, xf).pow(Float::with_val(64, 1.0 - sigma - 2.0 * j as f64))
                / Float::with_val(64, denom);
            if bound.is_finite() && bound < target {
                sum.add_error(&bound);
                return Some(sum);
            }
        }
        poch = poch_2j.mul(&w_plus(2 * j as u64));
        xpow = xpow.mul(&x_inv2);
        fact *= Rational::from((2 * j + 1) * (2 * j + 2));
    }
    None
}

/// Text form of a Hurwitz value for reports.
pub fn describe(v: &HurwitzValue) -> String {
    format!("zeta_H({}, {}) = {}", v.s, format_rational(&v.q), v.value)
}
