use std::sync::{OnceLock, RwLock};

use rug::Rational;

use super::poly::RatPoly;
use super::rational::binom_int;

/// Bernoulli polynomial with exact rational coefficients (ascending order).
pub type BernoulliPolynomial = RatPoly;

fn cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = cache().read().expect("bernoulli cache poisoned").get(n) {
        return b.clone();
    }
    let mut table = cache().write().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        // Σ_{k=0}^{m} binom(m+1, k) B_k = 0
        let mut acc = Rational::new();
        for (k, b) in table.iter().enumerate() {
            if *b != 0 {
                acc += binom_int(m as i64 + 1, k as u32) * b;
            }
        }
        table.push(-acc / Rational::from(m as u32 + 1));
    }
    table[n].clone()
}

/// `B_n(x) = Σ_k binom(n, k) B_k x^(n-k)`.
pub fn bernoulli_poly(n: usize) -> BernoulliPolynomial {
    let mut coeffs = vec![Rational::new(); n + 1];
    for k in 0..=n {
        coeffs[n - k] = binom_int(n as i64, k as u32) * bernoulli(k);
    }
    RatPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    #[test]
    fn first_numbers() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn low_degree_polynomials() {
        assert_eq!(bernoulli_poly(0), RatPoly::constant(int(1)));
        assert_eq!(bernoulli_poly(1), RatPoly::new(vec![rat(-1, 2), int(1)]));
        assert_eq!(bernoulli_poly(2), RatPoly::new(vec![rat(1, 6), int(-1), int(1)]));
    }

    /// Independent oracle: B_n is fixed by B_n' = n B_{n-1} and a vanishing mean on [0, 1].
    #[test]
    fn derivative_and_mean_recurrence() {
        let mut prev = RatPoly::constant(int(1));
        for n in 1..=14usize {
            let integral = RatPoly::new(
                std::iter::once(Rational::new())
                    .chain(prev.coeffs().iter().enumerate().map(|(i, c)| Rational::from(c * n as u32) / (i as u32 + 1)))
                    .collect(),
            );
            let mean: Rational = integral
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| Rational::from(c / (i as u32 + 1)))
                .sum();
            let expected = integral.sub(&RatPoly::constant(mean));
            assert_eq!(bernoulli_poly(n), expected, "n = {n}");
            assert_eq!(bernoulli_poly(n).derivative(), bernoulli_poly(n - 1).scale(&int(n as i64)));
            prev = expected;
        }
    }

    #[test]
    fn concurrent_readers_agree() {
        let handles: Vec<_> = (0..8).map(|i| std::thread::spawn(move || bernoulli(40 + i))).collect();
        let vals: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(*v, bernoulli(40 + i));
        }
    }
}
