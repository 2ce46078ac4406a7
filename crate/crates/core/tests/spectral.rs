use polelab_core::library;
use polelab_core::numeric::rational::{int, rat};
use polelab_core::perturb::{ec_perturb, epsilon_scale, shift};
use polelab_core::spectral::{residues_at_admissible, spectral_functions, SpectralModel, SpectralOptions};
use polelab_core::{Ball, ExactScalar};
use rug::Rational;

fn opts() -> SpectralOptions {
    SpectralOptions::default()
}

fn res(m: &SpectralModel, f: &str, sigma: Rational) -> ExactScalar {
    let fns = spectral_functions(m, &opts()).unwrap();
    fns.get(f).unwrap().residue_at(&sigma).unwrap()
}

fn val(m: &SpectralModel, f: &str, s: ExactScalar) -> ExactScalar {
    let fns = spectral_functions(m, &opts()).unwrap();
    let g = fns.get(f).unwrap();
    g.evaluate(&s, g.prec()).unwrap()
}

fn close(x: &ExactScalar, re: f64, im: f64, tol: f64) -> bool {
    let (a, b) = x.to_f64_pair();
    (a - re).abs() <= tol && (b - im).abs() <= tol
}

#[test]
fn circle_abs_residue() {
    let m = library::circle_dirac();
    assert_eq!(res(&m, "zeta_abs", int(1)), ExactScalar::from(int(2)));
    assert_eq!(res(&m, "zeta_up", int(1)), ExactScalar::from(int(0)));
}

#[test]
fn circle_eta_vanishes() {
    let m = library::circle_dirac();
    let fns = spectral_functions(&m, &opts()).unwrap();
    assert!(fns.eta.poles().is_empty());
    assert!(val(&m, "eta", ExactScalar::zero()).is_zero());
    assert!(close(&val(&m, "eta", ExactScalar::from(rat(1, 3))), 0.0, 0.0, 1e-60));
}

#[test]
fn circle_abs_at_two() {
    let m = library::circle_dirac();
    let v = val(&m, "zeta_abs", ExactScalar::from(int(2)));
    let pi2 = std::f64::consts::PI.powi(2) / 3.0;
    assert!(close(&v, pi2, 0.0, 1e-14), "{v}");
}

#[test]
fn shifted_circle_eta_at_zero() {
    let m = library::circle_dirac_shift(&rat(1, 3)).unwrap();
    assert_eq!(m.kernel_dim, 0);
    assert_eq!(val(&m, "eta", ExactScalar::zero()), ExactScalar::from(rat(1, 3)));
}

#[test]
fn sphere2_tables() {
    let m = library::sphere2_dirac();
    let fns = spectral_functions(&m, &opts()).unwrap();
    let abs: Vec<_> = fns.zeta_abs.poles().iter().collect();
    assert_eq!(abs.len(), 1);
    assert_eq!(*abs[0].0, int(2));
    assert_eq!(*abs[0].1, ExactScalar::from(int(4)));
    assert!(fns.eta.poles().is_empty());
}

#[test]
fn shifted_sphere2() {
    let a = rat(1, 3);
    let m = shift(&library::sphere2_dirac(), &a).unwrap();
    assert_eq!(res(&m, "zeta_abs", int(2)), ExactScalar::from(int(4)));
    assert_eq!(res(&m, "eta", int(1)), ExactScalar::from(rat(-4, 3)));
    let up = res(&m, "zeta_up", int(1));
    // res₊ + e^{iπ} res₋ = η residue
    assert_eq!(up, ExactScalar::from(rat(-4, 3)));
}

#[test]
fn sphere3_residues() {
    let a = rat(1, 5);
    let m = shift(&library::sphere3_dirac(), &a).unwrap();
    let expect = (2 * a.clone() * &a) - rat(1, 2);
    assert_eq!(res(&m, "zeta_abs", int(1)), ExactScalar::from(expect));
    assert_eq!(res(&m, "eta", int(2)), ExactScalar::from(-4 * a));
    assert_eq!(res(&m, "zeta_abs", int(3)), ExactScalar::from(int(2)));
}

#[test]
fn laplacian_half_residue() {
    let m = library::circle_laplacian();
    assert_eq!(res(&m, "zeta_abs", rat(1, 2)), ExactScalar::from(int(1)));
}

#[test]
fn epsilon_eta_residue() {
    let eps = rat(1, 4);
    let m = epsilon_scale(&library::circle_dirac(), &eps).unwrap();
    let expect = (-2 * eps.clone()) / (Rational::from(1) - Rational::from(&eps * &eps));
    assert_eq!(res(&m, "eta", int(1)), ExactScalar::from(expect));
}

#[test]
fn admissible_table_rows() {
    let m = library::sphere2_dirac();
    let t = residues_at_admissible(&m, -2, &opts()).unwrap();
    let sigmas: Vec<_> = t.rows.iter().map(|r| r.sigma.clone()).collect();
    assert_eq!(sigmas, vec![int(2), int(1), int(-1), int(-2)]);
    assert!(t.eta_at_zero.is_zero());
    assert!(residues_at_admissible(&m, 3, &opts()).is_err());
}

#[test]
fn up_down_decomposition() {
    let m = shift(&library::sphere2_dirac(), &rat(1, 7)).unwrap();
    let s = ExactScalar::from(Ball::from_parts_f64(2.5, 0.75, 200));
    let up = val(&m, "zeta_up", s.clone());
    let down = val(&m, "zeta_down", s.clone());
    let abs = val(&m, "zeta_abs", s.clone());
    let eta = val(&m, "eta", s.clone());
    // ζ₊ = (ζ_abs + η)/2, ζ₋ = (ζ_abs - η)/2
    let half = rat(1, 2);
    let plus = abs.add(&eta).mul_rational(&half);
    let minus = abs.sub(&eta).mul_rational(&half);
    let ipi = Ball::pi(200).mul(&Ball::from_parts_f64(0.0, 1.0, 200));
    let w = ipi.mul(&s.to_ball(200)).exp();
    let rebuilt = plus.to_ball(200).add(&w.mul(&minus.to_ball(200)));
    assert!(rebuilt.distance_upper(&up.to_ball(200)).to_f64() < 1e-40);
    let wd = ipi.neg().mul(&s.to_ball(200)).exp();
    let rebuilt_d = plus.to_ball(200).add(&wd.mul(&minus.to_ball(200)));
    assert!(rebuilt_d.distance_upper(&down.to_ball(200)).to_f64() < 1e-40);
}

fn direct_sum(m: &SpectralModel, s: f64, sign: i8, terms: u64) -> f64 {
    let mut total = 0.0;
    for b in m.branches.iter().filter(|b| b.sign == sign) {
        for k in b.k0..b.k0 + terms {
            total += b.multiplicity_at(k).to_f64() * b.law.eval_f64(k as f64).powf(-s);
        }
    }
    total
}

#[test]
fn direct_sum_oracle() {
    // the series converges for s > n/m; compare far enough out that the truncated tail is tiny
    let m = ec_perturb(&library::sphere2_dirac(), &rat(1, 5), &rat(1, 10)).unwrap();
    let s = 6.0;
    let fns = spectral_functions(&m, &opts()).unwrap();
    let abs = fns.zeta_abs.evaluate(&ExactScalar::from(int(6)), 128).unwrap();
    let oracle = direct_sum(&m, s, 1, 200_000) + direct_sum(&m, s, -1, 200_000);
    assert!(close(&abs, oracle, 0.0, 1e-12), "{abs} vs {oracle}");
}

#[test]
fn eta_real_on_real_axis() {
    let m = ec_perturb(&library::sphere3_dirac(), &rat(-1, 3), &rat(1, 2)).unwrap();
    let v = val(&m, "eta", ExactScalar::from(rat(1, 2)));
    assert!(v.to_f64_pair().1.abs() < 1e-60);
}
