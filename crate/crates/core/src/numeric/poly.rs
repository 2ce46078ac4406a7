//! Dense univariate polynomials with rational coefficients.

use std::collections::BTreeSet;
use std::fmt;

use rug::{Integer, Rational};

use super::rational::{binom_int, format_rational};

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::new(), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        self.add(&o.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, r: &Rational) -> RatPoly {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * r)).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> RatPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect())
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> RatPoly {
        let n = self.coeffs.len();
        let mut out = vec![Rational::new(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            // c (x + a)^i = c Σ_j binom(i, j) a^(i-j) x^j
            let mut apow = Rational::from(1);
            for j in (0..=i).rev() {
                out[j] += Rational::from(c * &apow) * binom_int(i as i64, j as u32);
                apow *= a;
            }
        }
        Self::new(out)
    }

    /// Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(points: &[(Rational, Rational)]) -> RatPoly {
        let mut acc = RatPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = RatPoly::constant(Rational::from(1));
            let mut denom = Rational::from(1);
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&RatPoly::new(vec![Rational::from(-xj), Rational::from(1)]));
                    denom *= Rational::from(xi - xj);
                }
            }
            acc = acc.add(&basis.scale(&Rational::from(yi / &denom)));
        }
        acc
    }

    /// Rational roots (without multiplicity), found through the rational root
    /// theorem. Returns `None` if the coefficients are too large to factor by
    /// trial division.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.is_zero() {
            return None;
        }
        let mut roots = BTreeSet::new();
        let lead_zeros = self.coeffs.iter().take_while(|c| **c == 0).count();
        if lead_zeros > 0 {
            roots.insert(Rational::new());
        }
        let reduced = RatPoly::new(self.coeffs[lead_zeros..].to_vec());
        if reduced.degree().unwrap_or(0) == 0 {
            return Some(roots.into_iter().collect());
        }
        let ints = reduced.integer_coeffs();
        let p_divs = divisors(&ints[0])?;
        let q_divs = divisors(ints.last().unwrap())?;
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1, -1] {
                    let cand = Rational::from((Integer::from(p * sign), q.clone()));
                    if reduced.eval(&cand) == 0 {
                        roots.insert(cand);
                    }
                }
            }
        }
        Some(roots.into_iter().collect())
    }

    fn integer_coeffs(&self) -> Vec<Integer> {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        self.coeffs.iter().map(|c| Rational::from(c * &l).into_numer_denom().0).collect()
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Positive divisors of a nonzero integer, if it factors by trial division.
fn divisors(n: &Integer) -> Option<Vec<Integer>> {
    let factors = factor(&Integer::from(n.abs_ref()))?;
    let mut divs = vec![Integer::from(1)];
    for (p, e) in factors {
        let current = divs.clone();
        let mut pk = Integer::from(1);
        for _ in 0..e {
            pk *= &p;
            divs.extend(current.iter().map(|d| Integer::from(d * &pk)));
        }
    }
    Some(divs)
}

/// Prime factorization by trial division up to a fixed bound.
pub(crate) fn factor(n: &Integer) -> Option<Vec<(Integer, u32)>> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while rest > 1 && p <= TRIAL_LIMIT {
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest.is_divisible_u(p as u32) {
            rest /= p as u32;
            e += 1;
        }
        if e > 0 {
            out.push((Integer::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if p * p <= rest {
            return None;
        }
        out.push((rest, 1));
    }
    Some(out)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let mag = Rational::from(c.abs_ref());
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = mag != 1 || i == 0;
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    #[test]
    fn shift_and_eval() {
        let p = RatPoly::new(vec![int(1), int(2), int(3)]);
        let q = p.taylor_shift(&rat(1, 2));
        for x in [int(0), rat(-3, 5), int(4)] {
            assert_eq!(q.eval(&x), p.eval(&(x.clone() + rat(1, 2))));
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = RatPoly::new(vec![rat(1, 3), int(0), rat(-2, 7), int(5)]);
        let pts: Vec<_> = [int(-1), int(0), rat(1, 2), int(3)].into_iter().map(|x| (x.clone(), p.eval(&x))).collect();
        assert_eq!(RatPoly::interpolate(&pts), p);
    }

    #[test]
    fn roots_of_product() {
        let p = RatPoly::new(vec![rat(-1, 2), int(1)]).mul(&RatPoly::new(vec![int(3), int(2)])).mul(&RatPoly::x());
        assert_eq!(p.rational_roots().unwrap(), vec![rat(-3, 2), int(0), rat(1, 2)]);
        assert!(RatPoly::new(vec![int(1), int(0), int(1)]).rational_roots().unwrap().is_empty());
    }
}
