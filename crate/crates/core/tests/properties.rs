use polelab_core::asymptotics::{series_pow, AsymptoticSeries};
use polelab_core::library;
use polelab_core::numeric::rational::{binom_int, int, pow_i};
use polelab_core::perturb::{ec_perturb, epsilon_scale, shift_with_crossings};
use polelab_core::spectral::SpectralModel;
use polelab_core::symbol::{
    abs_and_sign, compose, is_odd_class, ncr, parametrix, power_int, RayComponent, SymMatrix, SymbolExpansion,
};
use polelab_core::zeta::{hurwitz, hurwitz_nonpositive, hurwitz_residue};
use polelab_core::{Ball, ExactScalar, GaussianRational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::from((n, d)))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_ring_laws(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn ball_radius_shrinks(x in rational(), y in 1i64..40) {
        let eval = |prec| {
            let b = Ball::from_rational(&x, prec).mul(&Ball::pi(prec)).exp();
            let l = Ball::ln_rational(&Rational::from(y), prec).unwrap();
            b.add(&l).radius_f64()
        };
        let r1 = eval(128);
        let r2 = eval(256);
        prop_assert!(r2 <= r1);
    }

    #[test]
    fn pow_then_root(alpha in rational(), m in 2u32..4) {
        prop_assume!(alpha > -1);
        let u = AsymptoticSeries::shifted_power(int(1), alpha, 1).unwrap();
        let up = series_pow(&u, &Rational::from(m));
        let back = series_pow(&up, &Rational::from((1, m)));
        let depth = back.depth_terms().unwrap_or(8).min(8);
        for j in 0..=depth {
            prop_assert_eq!(back.correction(j), u.correction(j));
        }
        prop_assert_eq!(back.exponent, u.exponent);
    }

    #[test]
    fn hurwitz_shift_exact(n in 0u64..8, alpha in (1i64..30, 1i64..30)) {
        let a = Rational::from(alpha);
        let lhs = hurwitz_nonpositive(n, &a);
        let rhs = hurwitz_nonpositive(n, &(a.clone() + 1u32)) + pow_i(&a, n as i64);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hurwitz_shift_complex(re in -3.0f64..4.0, im in 0.5f64..6.0, alpha in (1i64..9, 2i64..9)) {
        let a = Rational::from(alpha);
        let s = ExactScalar::from(Ball::from_parts_f64(re, im, 256));
        let lhs = hurwitz(&s, &a, 256).unwrap().value.to_ball(256);
        let rhs = hurwitz(&s, &(a.clone() + 1u32), 256).unwrap().value.to_ball(256);
        let ln_a = Ball::ln_rational(&a, 256).unwrap();
        let term = Ball::pow_neg_from_ln(&ln_a, &s.to_ball(256));
        prop_assert!(lhs.distance_upper(&rhs.add(&term)).to_f64() < 1e-30);
    }

    #[test]
    fn trace_property(seed in 0u64..10_000, oa in -2i64..2, ob in -2i64..2, rank in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = SymbolExpansion::random(&mut rng, oa, 6, rank, 3);
        let b = SymbolExpansion::random(&mut rng, ob, 6, rank, 3);
        let ab = ncr(&compose(&a, &b).unwrap()).unwrap();
        let ba = ncr(&compose(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn odd_class_closure(seed in 0u64..10_000, oa in -1i64..3, ob in -1i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let odd = |s: SymbolExpansion| {
            let comps = s.components().iter().enumerate().map(|(i, c)| {
                RayComponent::xi_power(&c.plus, s.order() - i as i64)
            }).collect();
            SymbolExpansion::new(s.order(), s.truncation(), comps).unwrap()
        };
        let a = odd(SymbolExpansion::random(&mut rng, oa, 6, 1, 2));
        let b = odd(SymbolExpansion::random(&mut rng, ob, 6, 1, 2));
        prop_assert!(is_odd_class(&a) && is_odd_class(&b));
        prop_assert!(is_odd_class(&compose(&a, &b).unwrap()));
        // an invertible principal part: c·ξ^oa with a constant c
        let mut comps = a.components().to_vec();
        comps[0] = RayComponent::xi_power(&SymMatrix::from_rational(&int(3), 1), oa);
        let e = SymbolExpansion::new(oa, 6, comps).unwrap();
        let q = parametrix(&e).unwrap();
        prop_assert!(is_odd_class(&q));
        prop_assert!(ncr(&power_int(&e, -1).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn binomial_lemma(k in 1i64..4, a in rational()) {
        let shifted = SymbolExpansion::xi(6).add_scalar(&a).unwrap();
        let lhs = power_int(&shifted, -k).unwrap();
        for j in 0..=4i64 {
            let d = -k - j;
            let c = binom_int(-k, j as u32) * pow_i(&a, j);
            let want = RayComponent::xi_power(&SymMatrix::from_rational(&c, 1), d);
            prop_assert_eq!(lhs.component(d).unwrap(), want);
        }
    }

    #[test]
    fn abs_inverse_residue_positive(c in rational(), b in rational(), seed in 0u64..1000) {
        prop_assume!(c != 0);
        // order -1 tail with real constant coefficients on each ray
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tail: Vec<Rational> = (0..2).map(|_| Rational::from((rand::Rng::gen_range(&mut rng, -4i64..5), 3))).collect();
        let mut comps = SymbolExpansion::xi_pow(1, &c, 6).add_scalar(&b).unwrap().components().to_vec();
        comps[2] = RayComponent::new(SymMatrix::from_rational(&tail[0], 1), SymMatrix::from_rational(&tail[1], 1));
        let p = SymbolExpansion::new(1, 6, comps).unwrap();
        let (abs, sign) = abs_and_sign(&p).unwrap();
        let r = ncr(&power_int(&abs, -1).unwrap()).unwrap();
        let r = r.as_rational().cloned().unwrap();
        prop_assert!(r > 0);
        prop_assert!(compose(&sign, &sign).unwrap().agrees_down_to(&SymbolExpansion::identity(1, 6), -6));
    }

    #[test]
    fn sign_stability(eps in (-9i64..10, 10i64..11), c in (0i64..4, 20i64..21), a in (-7i64..8, 2i64..5)) {
        let eps = Rational::from(eps);
        let c = Rational::from(c);
        let a = Rational::from(a);
        let signs = |m: &SpectralModel| m.branches.iter().map(|b| b.sign).collect::<Vec<_>>();
        for base in [library::circle_dirac(), library::sphere2_dirac(), library::sphere3_dirac()] {
            let e = epsilon_scale(&base, &eps).unwrap();
            prop_assert_eq!(signs(&e), signs(&base));
            prop_assert_eq!(&e.exceptional, &base.exceptional);
            // large c against a small (1 - |ε|) breaks monotonicity and is rejected
            if let Ok(ec) = ec_perturb(&base, &eps, &c) {
                prop_assert_eq!(signs(&ec), signs(&base));
                prop_assert_eq!(ec.kernel_dim, base.kernel_dim);
            }
            let (sh, crossings) = shift_with_crossings(&base, &a).unwrap();
            prop_assert_eq!(signs(&sh), signs(&base));
            let moved: u64 = crossings.moved.iter().map(|m| m.2).sum();
            let before = base.kernel_dim + base.exceptional.iter().map(|e| e.1).sum::<u64>();
            let after = sh.kernel_dim + sh.exceptional.iter().map(|e| e.1).sum::<u64>();
            prop_assert!(after <= before + moved);
        }
    }
}

#[test]
fn hurwitz_residue_by_limit() {
    for alpha in [Rational::from((1, 3)), Rational::from(1), Rational::from((5, 2))] {
        let r = hurwitz_residue(&alpha).unwrap().to_f64_pair().0;
        for h in [1e-6, -1e-6] {
            let s = ExactScalar::from(Ball::from_f64(1.0 + h, 256));
            let v = hurwitz(&s, &alpha, 256).unwrap().value.to_f64_pair().0;
            assert!((h * v - r).abs() < 1e-5, "{alpha}: {}", h * v);
        }
    }
}

#[test]
fn law_error_decay() {
    // 1/|λ| for |λ| = k + 1/2 + k^{-1}/3, expanded to depth 4; error should fall like k^-(T+1-e), e = -1
    let t = 4usize;
    let u = AsymptoticSeries::exact(1, int(1), int(1), vec![Rational::from((1, 2)), Rational::from((1, 3))]).unwrap();
    let sq = polelab_core::asymptotics::series_pow_to(&u, &int(-1), t);
    let errs: Vec<f64> = [10.0f64, 20.0, 40.0]
        .iter()
        .map(|&k| {
            let exact = 1.0 / (k + 0.5 + 1.0 / (3.0 * k));
            (sq.eval_f64(k) - exact).abs()
        })
        .collect();
    let slope1 = (errs[1] / errs[0]).log2();
    let slope2 = (errs[2] / errs[1]).log2();
    let want = -((t + 1) as f64 - sq.exponent.to_f64());
    for s in [slope1, slope2] {
        assert!((s - want).abs() <= 0.1 * want.abs(), "slope {s} vs {want}");
    }
}
