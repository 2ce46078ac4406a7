//! Helpers around `rug::Rational`: construction, parsing and a few
//! combinatorial functions used throughout the crate.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::from((n, d))
}

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-2.25"` into a canonical rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((int_part, frac)) = t.split_once('.') {
        let bad = || Error::Parse(format!("invalid decimal {text:?}"));
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let whole: Integer = match int_part.trim_start_matches(['-', '+']) {
            "" => Integer::new(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        let frac: Integer = frac.parse().map_err(|_| bad())?;
        let r = Rational::from((whole * &scale + frac, scale));
        return Ok(if negative { -r } else { r });
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: Integer = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator in {text:?}")))?;
    let den: Integer = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational denominator in {text:?}")))?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::from((num, den)))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Generalized binomial coefficient `binom(x, j) = x (x-1) ... (x-j+1) / j!`.
pub fn binom(x: &Rational, j: u32) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..j {
        acc *= x - Rational::from(i);
        acc /= Rational::from(i + 1);
    }
    acc
}

/// Integer binomial for (possibly negative) integer top argument.
pub fn binom_int(top: i64, j: u32) -> Rational {
    binom(&Rational::from(top), j)
}

pub fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

/// Returns the integer value if `r` is integral and fits in an `i64`.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn floor(r: &Rational) -> Integer {
    let (_, f) = r.clone().fract_floor(Integer::new());
    f
}

/// Exact `r^(p/q)` when it is rational (`r > 0`), otherwise `None`.
pub fn rational_root_pow(r: &Rational, exponent: &Rational) -> Option<Rational> {
    if *r <= 0 {
        return None;
    }
    let q = exponent.denom().to_u32()?;
    let p = exponent.numer().to_i32()?;
    let num = exact_root(r.numer(), q)?;
    let den = exact_root(r.denom(), q)?;
    let base = Rational::from((num, den));
    Some(pow_i(&base, p as i64))
}

fn exact_root(n: &Integer, q: u32) -> Option<Integer> {
    if q == 1 {
        return Some(n.clone());
    }
    let (root, rem) = n.clone().root_rem(Integer::new(), q);
    if rem == 0 {
        Some(root)
    } else {
        None
    }
}

/// Integer power of a rational; `base` must be nonzero when `exp < 0`.
pub fn pow_i(base: &Rational, exp: i64) -> Rational {
    let mag = exp.unsigned_abs();
    let mut acc = Rational::from(1);
    let mut b = base.clone();
    let mut e = mag;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = Rational::from(&b * &b);
        e >>= 1;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Serde helpers storing rationals as `"p/q"` strings.
pub mod serde_rat {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        super::parse_rational(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use rug::Rational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&super::super::format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| super::super::parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimals() {
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom_int(-1, 1), int(-1));
        assert_eq!(binom_int(-2, 1), int(-2));
        assert_eq!(binom_int(-1, 2), int(1));
        assert_eq!(binom_int(-3, 2), int(6));
        assert_eq!(binom(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binom_int(3, 5), int(0));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_root_pow(&rat(9, 4), &rat(-1, 2)), Some(rat(2, 3)));
        assert_eq!(rational_root_pow(&int(2), &rat(1, 2)), None);
        assert_eq!(pow_i(&rat(2, 3), -2), rat(9, 4));
    }
}
