use polelab_core::library;
use polelab_core::numeric::rational::{int, rat};
use polelab_core::perturb::{
    ec_perturb, epsilon_scale, power_op, power_op_permissive, root_op, shift, shift_with_crossings, sign_power, u_v,
    PerturbationParams,
};
use polelab_core::spectral::{spectral_functions, Exceptional, RealRadical, SpectralOptions};
use polelab_core::{Error, ExactScalar};
use rug::Rational;

#[test]
fn shift_by_zero_is_identity() {
    let m = library::circle_dirac();
    assert_eq!(shift(&m, &int(0)).unwrap(), m);
}

#[test]
fn shift_across_zero() {
    let (m, crossings) = shift_with_crossings(&library::circle_dirac(), &rat(3, 2)).unwrap();
    // kernel 0 -> 3/2, -1 -> 1/2
    assert_eq!(m.kernel_dim, 0);
    assert!(m.exceptional.contains(&Exceptional(RealRadical::from_rational(&rat(1, 2)).unwrap(), 1)));
    assert!(m.exceptional.contains(&Exceptional(RealRadical::from_rational(&rat(3, 2)).unwrap(), 1)));
    assert_eq!(crossings.moved.len(), 2);
    let neg = m.branches.iter().find(|b| b.sign == -1).unwrap();
    assert_eq!(neg.k0, 2);
    assert_eq!(neg.eigenvalue_exact(2), Some(rat(-1, 2)));
}

#[test]
fn shift_onto_kernel() {
    let m = shift(&library::circle_dirac(), &int(1)).unwrap();
    assert_eq!(m.kernel_dim, 1);
    assert_eq!(m.exceptional, vec![Exceptional(RealRadical::from_rational(&int(1)).unwrap(), 1)]);
}

#[test]
fn epsilon_scale_keeps_signs() {
    let base = library::sphere2_dirac();
    let m = epsilon_scale(&base, &rat(1, 2)).unwrap();
    let signs: Vec<_> = m.branches.iter().map(|b| b.sign).collect();
    assert_eq!(signs, base.branches.iter().map(|b| b.sign).collect::<Vec<_>>());
    assert_eq!(epsilon_scale(&base, &int(0)).unwrap(), base);
    assert!(matches!(epsilon_scale(&base, &int(1)), Err(Error::Parameter(_))));
}

#[test]
fn circle_epsilon_residue() {
    let m = epsilon_scale(&library::circle_dirac(), &rat(1, 2)).unwrap();
    let fns = spectral_functions(&m, &SpectralOptions::default()).unwrap();
    assert_eq!(fns.eta.residue_at(&int(1)).unwrap(), ExactScalar::from(rat(-4, 3)));
}

#[test]
fn ec_law_on_circle() {
    let m = ec_perturb(&library::circle_dirac(), &int(0), &rat(1, 5)).unwrap();
    let pos = m.branches.iter().find(|b| b.sign == 1).unwrap();
    assert_eq!(pos.law.correction(1), ExactScalar::zero());
    assert_eq!(pos.law.correction(2), ExactScalar::from(rat(1, 5)));
    assert_eq!(ec_perturb(&library::sphere2_dirac(), &rat(1, 3), &int(0)).unwrap(), epsilon_scale(&library::sphere2_dirac(), &rat(1, 3)).unwrap());
    assert!(matches!(ec_perturb(&library::circle_dirac(), &int(0), &int(-1)), Err(Error::Parameter(_))));
}

#[test]
fn root_of_laplacian() {
    let q = root_op(&library::circle_laplacian()).unwrap();
    assert_eq!(q.order, 1);
    let b = &q.branches[0];
    assert_eq!(b.law.eval_exact(&int(7)), Some(int(7)));
    let back = sign_power(&q, 2).unwrap();
    assert_eq!(back.branches[0].law.eval_exact(&int(5)), Some(int(25)));
}

#[test]
fn power_op_kernel_term() {
    // kernel of dimension 1, a = 1/2, m = 3: a^3 becomes an exceptional eigenvalue
    let cube = sign_power(&library::circle_dirac(), 3).unwrap();
    let params = PerturbationParams::new(rat(1, 2), int(0), int(0)).unwrap();
    let out = power_op(&cube, &params).unwrap();
    assert_eq!(out.order, 3);
    assert_eq!(out.kernel_dim, 0);
    assert_eq!(out.exceptional, vec![Exceptional(RealRadical::from_rational(&rat(1, 8)).unwrap(), 1)]);
}

#[test]
fn power_op_m1_is_composite() {
    let m = library::circle_dirac();
    let params = PerturbationParams::new(rat(1, 4), rat(1, 10), rat(1, 20)).unwrap();
    let direct = shift(&ec_perturb(&m, &params.epsilon, &params.c).unwrap(), &params.a).unwrap();
    assert_eq!(power_op(&m, &params).unwrap(), direct);
    let zero = PerturbationParams::new(int(0), int(0), int(0)).unwrap();
    let s2 = library::sphere2_dirac();
    assert_eq!(power_op(&s2, &zero).unwrap(), s2);
}

#[test]
fn power_op_gap_guard() {
    let m = library::sphere2_dirac();
    let params = PerturbationParams::new(rat(3, 2), int(0), int(0)).unwrap();
    assert!(matches!(power_op(&m, &params), Err(Error::Parameter(_))));
    let forced = power_op_permissive(&m, &params).unwrap();
    assert!(forced.regime_note.is_some());
}

#[test]
fn u_v_values() {
    assert_eq!(u_v(&int(0), 3).unwrap(), (int(1), int(0)));
    let (u, v) = u_v(&rat(1, 10), 2).unwrap();
    let p = rat(100, 121);
    let q = rat(100, 81);
    assert_eq!(u, (p.clone() + &q) / 2);
    assert_eq!(v, (p - q) / 2);
    for k in 1..10 {
        let eps = rat(k, 20);
        for n in 1..4u32 {
            let (u, v) = u_v(&eps, n).unwrap();
            let one_plus = polelab_core::numeric::rational::pow_i(&(Rational::from(1) + &eps), -(n as i64));
            assert_eq!(Rational::from(&u + &v), one_plus);
            let bound = 2.0 * (n as f64).powi(3) * eps.to_f64().powi(3);
            assert!((v.to_f64() + n as f64 * eps.to_f64()).abs() <= bound);
        }
    }
}
