//! Named, machine-checked assertions over the built-in models and symbols.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::library;
use crate::numeric::rational::{binom_int, format_rational, pow_i};
use crate::numeric::{Ball, ExactScalar, GaussianRational, RatPoly, DEFAULT_PREC};
use crate::perturb::{
    ec_perturb, epsilon_scale, power_op, root_op, shift, shift_with_crossings, sign_power, symbol_shift, u_v,
    PerturbationParams,
};
use crate::spectral::{admissible_from, exp_i_pi, spectral_functions, SpectralFunctions, SpectralModel, SpectralOptions};
use crate::symbol::{
    abs_and_sign, compose, is_odd_class, ncr, parametrix, power_int, RayComponent, SymMatrix, SymbolExpansion, TrigPoly,
};

/// Tolerance for identities evaluated through Euler-Maclaurin at 256 bits.
pub const NUMERIC_TOL: f64 = 1e-25;
/// Tolerance for truncated direct sums against the continuation.
pub const ORACLE_TOL: f64 = 1e-6;
/// Cutoff on `|λ|` for the direct-sum oracle.
pub const ORACLE_CUTOFF: f64 = 1e4;
pub const DEFAULT_SEED: u64 = 20_240_917;

/// `(id, exact)`: exact checks carry tolerance "0".
pub const CHECKS: [(&str, bool); 16] = [
    ("residue_trace", true),
    ("binomial_lemma", true),
    ("res_abs_positive", true),
    ("odd_class_closure", true),
    ("sign_square", true),
    ("parity", true),
    ("shift_polynomial", true),
    ("sign_stability", true),
    ("epsilon_identity", true),
    ("root_equivalence", true),
    ("zeta_up_decomposition", false),
    ("up_down_identity", false),
    ("eta_regular_origin", true),
    ("cross_engine", true),
    ("power_op", true),
    ("oracle_convergence", false),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckValue {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub float: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckVerdict {
    pub id: String,
    /// The mathematical statement being checked, in words.
    pub statement: String,
    pub inputs: String,
    pub values: Vec<CheckValue>,
    pub pass: bool,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

/// A model supplied from outside the library, for checks that take one.
#[derive(Clone, Debug)]
pub struct NamedModel {
    pub name: String,
    pub model: SpectralModel,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Check ids to run; empty means all.
    pub ids: Vec<String>,
    pub exact_only: bool,
    pub prec: u32,
    pub depth: Option<usize>,
    pub seed: u64,
    pub model: Option<NamedModel>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { ids: Vec::new(), exact_only: false, prec: DEFAULT_PREC, depth: None, seed: DEFAULT_SEED, model: None }
    }
}

impl SuiteConfig {
    fn opts(&self) -> SpectralOptions {
        SpectralOptions { depth: self.depth, prec: self.prec }
    }

    /// Validated, ordered selection of check ids.
    pub fn selection(&self) -> Result<Vec<&'static str>> {
        let valid = check_ids();
        for id in &self.ids {
            if id != "all" && !valid.contains(&id.as_str()) {
                return Err(Error::UnknownCheck { id: id.clone(), valid: valid.join(", ") });
            }
        }
        let all = self.ids.is_empty() || self.ids.iter().any(|i| i == "all");
        Ok(CHECKS
            .iter()
            .filter(|(id, exact)| (all || self.ids.iter().any(|i| i == id)) && (!self.exact_only || *exact))
            .map(|c| c.0)
            .collect())
    }
}

fn render(x: &ExactScalar) -> (Option<String>, String) {
    let (re, im) = x.to_f64_pair();
    let float = if im == 0.0 { format!("{re:.12e}") } else { format!("{re:.12e}{im:+.12e}i") };
    let exact = x.is_exact().then(|| x.to_string());
    (exact, float)
}

struct Builder {
    v: CheckVerdict,
}

impl Builder {
    fn new(id: &str, statement: &str, inputs: impl Into<String>, tolerance: &str) -> Self {
        Builder {
            v: CheckVerdict {
                id: id.into(),
                statement: statement.into(),
                inputs: inputs.into(),
                values: Vec::new(),
                pass: true,
                tolerance: tolerance.into(),
                failures: Vec::new(),
            },
        }
    }

    fn value(&mut self, label: impl Into<String>, x: &ExactScalar) {
        let (exact, float) = render(x);
        self.v.values.push(CheckValue { label: label.into(), exact, float });
    }

    fn float(&mut self, label: impl Into<String>, x: f64) {
        self.v.values.push(CheckValue { label: label.into(), exact: None, float: format!("{x:.6e}") });
    }

    fn text(&mut self, label: impl Into<String>, x: impl Into<String>) {
        let x = x.into();
        self.v.values.push(CheckValue { label: label.into(), exact: Some(x.clone()), float: x });
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.v.pass = false;
            self.v.failures.push(what());
        }
    }

    fn require_eq(&mut self, label: &str, got: &ExactScalar, want: &ExactScalar) {
        self.value(label, got);
        self.require(got.exact_eq(want), || format!("{label}: got {got}, expected {want}"));
    }

    fn finish(self) -> CheckVerdict {
        self.v
    }
}

fn sx(r: Rational) -> ExactScalar {
    ExactScalar::from(r)
}

fn fns(model: &SpectralModel, config: &SuiteConfig) -> Result<SpectralFunctions> {
    spectral_functions(model, &config.opts())
}

/// `m · Res_{s=σ} f`.
fn m_res(f: &SpectralFunctions, name: &str, model: &SpectralModel, sigma: &Rational) -> Result<ExactScalar> {
    let g = f.get(name).ok_or_else(|| Error::Parameter(format!("unknown function {name}")))?;
    Ok(g.residue_at(sigma)?.mul_rational(&Rational::from(model.order)))
}

fn as_rational(x: &ExactScalar, what: &str) -> Result<Rational> {
    x.as_rational().cloned().ok_or_else(|| Error::Representation(format!("{what} = {x} is not an exact rational")))
}

fn xi_plus(a: &Rational) -> SymbolExpansion {
    symbol_shift(&SymbolExpansion::xi(6), a).expect("degree 0 present")
}

/// The rank-2 Dirac-type symbol `[[0, ξ], [ξ, 0]] + diag(d1, d2)`.
fn dirac_pair(d1: &Rational, d2: &Rational) -> SymbolExpansion {
    let one = TrigPoly::one();
    let off = SymMatrix::from_rows(vec![vec![TrigPoly::zero(), one.clone()], vec![one, TrigPoly::zero()]]).expect("square");
    let mut diag = SymMatrix::zero(2);
    diag.set(0, 0, TrigPoly::from_rational(d1));
    diag.set(1, 1, TrigPoly::from_rational(d2));
    SymbolExpansion::new(1, 6, vec![RayComponent::xi_power(&off, 1), RayComponent::even(&diag)]).expect("valid")
}

fn trig(terms: &[(i64, i64)]) -> TrigPoly {
    TrigPoly::from_terms(terms.iter().map(|&(n, c)| (n, GaussianRational::real(Rational::from(c)))))
}

pub fn check_residue_trace(config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "residue_trace",
        "the noncommutative residue is a trace: Res(AB) = Res(BA), and it vanishes on differential operators",
        format!("20 random trig-Fourier symbol pairs (seed {}), a fixed hand-expanded pair, a differential pair", config.seed),
        "0",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut mismatches = 0;
    for i in 0..20 {
        let rank = 1 + (i % 2);
        let oa = rng.gen_range(-2i64..=1);
        let ob = rng.gen_range(-2i64..=1);
        let a = SymbolExpansion::random(&mut rng, oa, 6, rank, 3);
        let bb = SymbolExpansion::random(&mut rng, ob, 6, rank, 3);
        let d = ncr(&compose(&a, &bb)?)?.sub(&ncr(&compose(&bb, &a)?)?);
        if !d.is_zero() {
            mismatches += 1;
            b.require(false, || format!("pair {i}: Res(AB) - Res(BA) = {d}"));
        }
    }
    b.text("random pairs with nonzero difference", mismatches.to_string());
    // a(x)ξ ∘ ξ^{-2}: the degree -2 part of ξ^{-2} ∘ a ξ is -2 (D_x a) |ξ|^{-2}
    let a_coef = trig(&[(0, 1), (1, 2), (-2, 3)]);
    let a = SymbolExpansion::new(1, 4, vec![RayComponent::xi_power(&SymMatrix::scalar(&a_coef, 1), 1)])?;
    let inv2 = SymbolExpansion::xi_pow(-2, &Rational::from(1), 4);
    let ab = compose(&a, &inv2)?;
    let ba = compose(&inv2, &a)?;
    let want = RayComponent::even(&SymMatrix::scalar(&a_coef.d_pow(1).scale_rational(&Rational::from(-2)), 1));
    b.require(ba.component(-2) == Some(want), || "ξ^-2 ∘ aξ degree -2 component differs from -2 D_x a".into());
    b.require_eq("Res(aξ ∘ ξ^-2)", &ncr(&ab)?, &ExactScalar::zero());
    b.require_eq("Res(ξ^-2 ∘ aξ)", &ncr(&ba)?, &ExactScalar::zero());
    let d1 = SymbolExpansion::differential(&[trig(&[]), trig(&[(1, 1)]), trig(&[(0, 1)])], 6)?;
    let d2 = SymbolExpansion::differential(&[trig(&[(0, 2), (-1, 1)]), trig(&[(0, 1)])], 6)?;
    b.require_eq("Res(D1 D2)", &ncr(&compose(&d1, &d2)?)?, &ExactScalar::zero());
    b.require_eq("Res(D2 D1)", &ncr(&compose(&d2, &d1)?)?, &ExactScalar::zero());
    Ok(b.finish())
}

pub fn check_binomial_lemma(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "binomial_lemma",
        "(P + a)^(-k) = Σ_j binom(-k, j) a^j P^(-(k+j)) modulo lower order, for P = -i d/dx",
        "k ∈ {1, 2, 3}, a ∈ {1/2, -1/3, 2}, components down to degree -k-4",
        "0",
    );
    for k in 1..=3i64 {
        for a in [Rational::from((1, 2)), Rational::from((-1, 3)), Rational::from(2)] {
            let lhs = power_int(&xi_plus(&a), -k)?;
            let mut rhs = SymbolExpansion::zero(-k, 6, 1);
            for j in 0..=4i64 {
                let c = binom_int(-k, j as u32) * pow_i(&a, j);
                rhs = rhs.add(&power_int(&SymbolExpansion::xi(6), -(k + j))?.scale_rational(&c))?;
            }
            let ok = lhs.agrees_down_to(&rhs, -k - 4);
            b.require(ok, || format!("k = {k}, a = {}: components differ", format_rational(&a)));
        }
    }
    b.text("cases", "9");
    Ok(b.finish())
}

pub fn check_res_abs_positive(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "res_abs_positive",
        "Res |P|^(-1) > 0 for elliptic first-order selfadjoint P on the circle",
        "ξ + a (a ∈ {0, 1/2, -2}), 3ξ - 1/4, -2ξ + 1 with an order -1 tail, 2x2 Dirac-type symbol",
        "0",
    );
    let mut cases: Vec<(String, SymbolExpansion)> = [Rational::new(), Rational::from((1, 2)), Rational::from(-2)]
        .into_iter()
        .map(|a| (format!("ξ + {}", format_rational(&a)), xi_plus(&a)))
        .collect();
    cases.push(("3ξ - 1/4".into(), symbol_shift(&SymbolExpansion::xi_pow(1, &Rational::from(3), 6), &Rational::from((-1, 4)))?));
    let mut comps = symbol_shift(&SymbolExpansion::xi_pow(1, &Rational::from(-2), 6), &Rational::from(1))?.components().to_vec();
    comps[2] = RayComponent::new(SymMatrix::from_rational(&Rational::from((1, 3)), 1), SymMatrix::from_rational(&Rational::from(-1), 1));
    cases.push(("-2ξ + 1 + tail".into(), SymbolExpansion::new(1, 6, comps)?));
    cases.push(("Dirac-type 2x2".into(), dirac_pair(&Rational::from((1, 2)), &Rational::from((-1, 3)))));
    for (name, p) in cases {
        let (abs, _) = abs_and_sign(&p)?;
        let r = ncr(&power_int(&abs, -1)?)?;
        b.value(format!("Res |{name}|^-1"), &r);
        let positive = r.as_rational().map(|q| *q > 0).unwrap_or(false);
        b.require(positive, || format!("{name}: Res |P|^-1 = {r} is not a positive rational"));
    }
    Ok(b.finish())
}

pub fn check_odd_class_closure(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "odd_class_closure",
        "odd-class symbols are closed under composition and parametrix, and have zero residue in odd dimension",
        "ξ, ξ + 1/2, ξ² + e^(ix)ξ, 2x2 Dirac-type; negative control |ξ|",
        "0",
    );
    let syms = vec![
        ("ξ", SymbolExpansion::xi(6)),
        ("ξ + 1/2", xi_plus(&Rational::from((1, 2)))),
        ("ξ² + e^(ix)ξ", SymbolExpansion::differential(&[trig(&[]), trig(&[(1, 1)]), trig(&[(0, 1)])], 6)?),
        ("Dirac-type", dirac_pair(&Rational::from(1), &Rational::from(-1))),
    ];
    for (na, a) in &syms {
        b.require(is_odd_class(a), || format!("{na} not recognised as odd-class"));
        b.require(is_odd_class(&parametrix(a)?), || format!("parametrix of {na} is not odd-class"));
        for k in 1..=3 {
            let r = ncr(&power_int(a, -k)?)?;
            b.require(r.is_zero(), || format!("Res ({na})^-{k} = {r}"));
        }
        for (nb, s) in &syms {
            if a.rank() == s.rank() {
                b.require(is_odd_class(&compose(a, s)?), || format!("{na} ∘ {nb} is not odd-class"));
            }
        }
    }
    b.require(!is_odd_class(&SymbolExpansion::abs_xi_pow(1, 6)), || "|ξ| reported as odd-class".into());
    b.text("symbols", syms.len().to_string());
    Ok(b.finish())
}

pub fn check_sign_square(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "sign_square",
        "F = P|P|^(-1) satisfies F² = 1 modulo smoothing; F(ξ) = sign ξ",
        "ξ, -ξ, ξ + 1/3, 2x2 Dirac-type, truncation 6",
        "0",
    );
    let cases = vec![
        ("ξ", SymbolExpansion::xi(6)),
        ("-ξ", SymbolExpansion::xi_pow(1, &Rational::from(-1), 6)),
        ("ξ + 1/3", xi_plus(&Rational::from((1, 3)))),
        ("Dirac-type", dirac_pair(&Rational::from((1, 2)), &Rational::from((1, 5)))),
    ];
    for (name, p) in cases {
        let (_, f) = abs_and_sign(&p)?;
        let f2 = compose(&f, &f)?;
        let id = SymbolExpansion::identity(p.rank(), 6);
        b.require(f2.agrees_down_to(&id, -6), || format!("{name}: F∘F differs from 1 above degree -7"));
    }
    let (_, f) = abs_and_sign(&SymbolExpansion::xi(6))?;
    let sign = RayComponent::xi_power(&SymMatrix::identity(1), 1);
    b.require(*f.principal() == sign, || "F(ξ) principal part is not sign ξ".into());
    b.text("symbols", "4");
    Ok(b.finish())
}

fn parity_defaults() -> Result<Vec<(String, SpectralModel)>> {
    Ok(vec![
        ("circle_dirac+1/3".into(), library::circle_dirac_shift(&Rational::from((1, 3)))?),
        ("sphere2_dirac+1/4".into(), shift(&library::sphere2_dirac(), &Rational::from((1, 4)))?),
        ("sphere3_dirac+1/5".into(), shift(&library::sphere3_dirac(), &Rational::from((1, 5)))?),
    ])
}

fn chosen_models(config: &SuiteConfig, defaults: Vec<(String, SpectralModel)>) -> Vec<(String, SpectralModel)> {
    match &config.model {
        Some(m) => vec![(m.name.clone(), m.model.clone())],
        None => defaults,
    }
}

/// Residues forbidden by parity for a first-order differential-type operator in dimension `n`.
pub fn check_parity_tables(config: &SuiteConfig) -> Result<CheckVerdict> {
    let models = chosen_models(config, parity_defaults()?);
    let names: Vec<_> = models.iter().map(|m| m.0.clone()).collect();
    let mut b = Builder::new(
        "parity",
        "even n: η is singular only at odd and ζ(|P|) only at even positive integers; odd n: ζ↑ and ζ↓ are entire",
        format!("{} on the admissible set down to -2", names.join(", ")),
        "0",
    );
    for (name, model) in &models {
        if model.order != 1 {
            return Err(Error::Parameter(format!("parity check needs a first-order model, {name} has order {}", model.order)));
        }
        let n = model.dimension as i64;
        let f = fns(model, config)?;
        let table = admissible_from(&f, model, -2)?;
        for row in &table.rows {
            let k = crate::numeric::rational::to_i64(&row.sigma).expect("integer for m = 1");
            let forbidden: Vec<&str> = if n % 2 == 0 {
                let mut v = Vec::new();
                if k < 0 || k % 2 == 0 {
                    v.push("eta");
                }
                if k < 0 || k % 2 != 0 {
                    v.push("zeta_abs");
                }
                v
            } else {
                vec!["zeta_up", "zeta_down"]
            };
            for fname in ["zeta_up", "zeta_down", "zeta_abs", "eta"] {
                let r = row.get(fname).expect("known");
                if forbidden.contains(&fname) {
                    b.require(r.is_zero(), || format!("{name}: Res_{{s={k}}} {fname} = {r}, expected 0"));
                } else if !r.is_zero() {
                    b.value(format!("{name}: Res_{{s={k}}} {fname}"), r);
                }
            }
        }
    }
    if config.model.is_none() {
        // symbol side on the circle: Res P^(-k) = 0 for the odd-class P = ξ + 1/3
        let p = xi_plus(&Rational::from((1, 3)));
        for k in 1..=3 {
            let r = ncr(&power_int(&p, -k)?)?;
            b.require(r.is_zero(), || format!("Res (ξ + 1/3)^-{k} = {r}"));
        }
    }
    Ok(b.finish())
}

/// `m · Res_{s=k}` of the function selected by parity, as a polynomial in the shift `a`.
pub fn residue_polynomial(model: &SpectralModel, k: i64, config: &SuiteConfig) -> Result<(String, RatPoly)> {
    let n = model.dimension as i64;
    let fname = if (n - k) % 2 == 0 { "zeta_abs" } else { "eta" };
    let samples = (n - k + 2) as usize;
    let mut points = Vec::with_capacity(samples);
    for j in 1..=samples as i64 {
        let a = Rational::from((j, 7));
        let shifted = shift(model, &a)?;
        let r = m_res(&fns(&shifted, config)?, fname, &shifted, &Rational::from(k))?;
        points.push((a, as_rational(&r, &format!("Res_{{s={k}}} {fname}"))?));
    }
    Ok((fname.to_string(), RatPoly::interpolate(&points)))
}

pub fn check_shift_polynomial(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults = vec![
        ("circle_dirac".to_string(), library::circle_dirac()),
        ("sphere2_dirac".to_string(), library::sphere2_dirac()),
        ("sphere3_dirac".to_string(), library::sphere3_dirac()),
    ];
    let models = chosen_models(config, defaults);
    let names: Vec<_> = models.iter().map(|m| m.0.clone()).collect();
    let mut b = Builder::new(
        "shift_polynomial",
        "for 0 < k ≤ n, a ↦ m Res_{s=k} (ζ(|P+a|) if n-k even, else η(P+a)) is a polynomial of degree n-k \
         with leading coefficient binom(-k, n-k) Res |P|^(-n) ≠ 0, so it vanishes for finitely many a",
        format!("{}; shifts a = j/7", names.join(", ")),
        "0",
    );
    for (name, model) in &models {
        let n = model.dimension as i64;
        let f = fns(model, config)?;
        let res_n = as_rational(&m_res(&f, "zeta_abs", model, &Rational::from(n))?, "Res |P|^-n")?;
        b.value(format!("{name}: Res |P|^-{n}"), &sx(res_n.clone()));
        b.require(res_n > 0, || format!("{name}: Res |P|^-n = {} is not positive", format_rational(&res_n)));
        for k in 1..=n {
            let (fname, poly) = residue_polynomial(model, k, config)?;
            let deg = poly.degree();
            let want_lead = binom_int(-k, (n - k) as u32) * &res_n;
            b.text(format!("{name}: k = {k}, m Res {fname}(a)"), poly.to_string());
            b.require(deg == Some((n - k) as usize), || {
                format!("{name}, k = {k}: degree {deg:?}, expected {}", n - k)
            });
            if deg == Some((n - k) as usize) {
                let lead = poly.leading();
                b.require(lead == want_lead, || {
                    format!("{name}, k = {k}: leading coefficient {}, expected {}", format_rational(&lead), format_rational(&want_lead))
                });
            }
            let roots = poly.rational_roots().unwrap_or_default();
            b.text(
                format!("{name}: k = {k}, rational a with vanishing residue"),
                roots.iter().map(format_rational).collect::<Vec<_>>().join(" "),
            );
            // exhibit a point outside the root set where the residue is nonzero
            let probe = (1..).map(|j| Rational::from((2 * j + 1, 11))).find(|a| !roots.contains(a)).expect("infinite");
            let direct = shift(model, &probe)?;
            let r = m_res(&fns(&direct, config)?, &fname, &direct, &Rational::from(k))?;
            b.require(!r.is_zero() && r.exact_eq(&sx(poly.eval(&probe))), || {
                format!("{name}, k = {k}: residue at a = {} is {r}, polynomial gives {}", format_rational(&probe), format_rational(&poly.eval(&probe)))
            });
        }
    }
    Ok(b.finish())
}

pub fn check_sign_stability(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "sign_stability",
        "P_ε and P_ε,c have the sign operator of P; P + a changes the sign of finitely many eigenvalues",
        "circle, sphere2, sphere3 Dirac; ε = 1/3, c = 1/10, a = 3/2",
        "0",
    );
    let eps = Rational::from((1, 3));
    let c = Rational::from((1, 10));
    let a = Rational::from((3, 2));
    for (name, model) in [
        ("circle_dirac", library::circle_dirac()),
        ("sphere2_dirac", library::sphere2_dirac()),
        ("sphere3_dirac", library::sphere3_dirac()),
    ] {
        let signs = |m: &SpectralModel| m.branches.iter().map(|b| (b.sign, b.k0)).collect::<Vec<_>>();
        for (label, p) in [("P_ε", epsilon_scale(&model, &eps)?), ("P_ε,c", ec_perturb(&model, &eps, &c)?)] {
            b.require(signs(&p) == signs(&model) && p.exceptional == model.exceptional && p.kernel_dim == model.kernel_dim, || {
                format!("{name}: {label} changed the sign assignment")
            });
        }
        let (_, crossings) = shift_with_crossings(&model, &a)?;
        let moved: u64 = crossings.moved.iter().map(|m| m.2).sum();
        b.text(
            format!("{name}: eigenvalues changing sign under P + 3/2"),
            crossings
                .moved
                .iter()
                .map(|(o, n, k)| format!("{}→{}(×{k})", format_rational(o), format_rational(n)))
                .collect::<Vec<_>>()
                .join(" "),
        );
        let bound = model.count_below(a.to_f64()) as u64 + model.kernel_dim;
        b.require(moved <= bound, || format!("{name}: {moved} sign changes exceed the {bound} eigenvalues with |λ| ≤ a"));
    }
    Ok(b.finish())
}

pub fn check_epsilon_identity(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults = vec![
        ("circle_dirac".to_string(), library::circle_dirac()),
        ("sphere2_dirac".to_string(), library::sphere2_dirac()),
        ("sphere3_dirac".to_string(), library::sphere3_dirac()),
    ];
    let models = chosen_models(config, defaults);
    let names: Vec<_> = models.iter().map(|m| m.0.clone()).collect();
    let mut b = Builder::new(
        "epsilon_identity",
        "m Res_{s=n} η(P_ε) = u(ε) m Res_{s=n} η(P) + v(ε) m Res_{s=n} ζ(|P|); for P_ε,c the residues of η at n \
         and of ζ↑, ζ(|P|) at -1 are nonzero",
        format!("{}; ε ∈ {{1/10, 1/2}}; c ∈ {{1/10, 1/5}} at ε = 1/10", names.join(", ")),
        "0",
    );
    for (name, model) in &models {
        let n = model.dimension;
        let sn = Rational::from(n);
        let f = fns(model, config)?;
        let eta_n = m_res(&f, "eta", model, &sn)?;
        let abs_n = m_res(&f, "zeta_abs", model, &sn)?;
        for eps in [Rational::from((1, 10)), Rational::from((1, 2))] {
            let (u, v) = u_v(&eps, n)?;
            let one_plus = pow_i(&(Rational::from(1) + &eps), -(n as i64));
            b.require(Rational::from(&u + &v) == one_plus, || "u + v ≠ (1+ε)^-n".into());
            let pe = epsilon_scale(model, &eps)?;
            let lhs = m_res(&fns(&pe, config)?, "eta", &pe, &sn)?;
            let rhs = eta_n.mul_rational(&u).add(&abs_n.mul_rational(&v));
            b.require_eq(&format!("{name}: ε = {}: m Res η(P_ε)", format_rational(&eps)), &lhs, &rhs);
            if model.dimension == 1 && model.order == 1 && *model == library::circle_dirac() {
                let closed = (-2 * eps.clone()) / (Rational::from(1) - Rational::from(&eps * &eps));
                b.require_eq("circle closed form -2ε/(1-ε²)", &lhs, &sx(closed));
            }
        }
        let eps = Rational::from((1, 10));
        for c in [Rational::from((1, 10)), Rational::from((1, 5))] {
            let p = ec_perturb(model, &eps, &c)?;
            let g = fns(&p, config)?;
            let minus_one = Rational::from(-1);
            let tag = format!("{name}: c = {}", format_rational(&c));
            for (fname, s) in [("eta", &sn), ("zeta_up", &minus_one), ("zeta_abs", &minus_one)] {
                let r = m_res(&g, fname, &p, s)?;
                b.value(format!("{tag}: m Res_{{s={}}} {fname}", format_rational(s)), &r);
                b.require(!r.is_zero(), || format!("{tag}: Res_{{s={}}} {fname} vanishes", format_rational(s)));
            }
        }
    }
    if config.model.is_none() {
        // Σ_k 2 (k + c/k)^(-s) = 2ζ(s) - 2cs ζ(s+2) + …, so Res_{s=-1} = 2c
        let c = Rational::from((1, 5));
        let p = ec_perturb(&library::circle_dirac(), &Rational::new(), &c)?;
        let r = m_res(&fns(&p, config)?, "zeta_abs", &p, &Rational::from(-1))?;
        b.require_eq("circle ε = 0, c = 1/5: Res_{s=-1} ζ(|P|)", &r, &sx(2 * c));
    }
    Ok(b.finish())
}

fn all_singular(f: &SpectralFunctions, model: &SpectralModel, sigma: &Rational) -> Result<bool> {
    for name in ["eta", "zeta_up", "zeta_down", "zeta_abs"] {
        if m_res(f, name, model, sigma)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_root_equivalence(config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "root_equivalence",
        "for Q = F|P|^(1/m): η, ζ↑↓, ζ(|P|) are all singular at k/m iff those of Q are all singular at k; \
         m Res_{k/m} ζ(|P|) = Res_k ζ(|Q|)",
        "circle Laplacian (m = 2); F|D|² on the 2-sphere perturbed by (a, ε, c) = (1/4, 1/10, 1/10); floor -2",
        "0",
    );
    let lap = library::circle_laplacian();
    let q = root_op(&lap)?;
    let fl = fns(&lap, config)?;
    let fq = fns(&q, config)?;
    let r_p = m_res(&fl, "zeta_abs", &lap, &Rational::from((1, 2)))?.mul_rational(&Rational::from((1, 2)));
    let r_q = m_res(&fq, "zeta_abs", &q, &Rational::from(1))?;
    b.require_eq("Res_{s=1/2} ζ(|Δ|)", &r_p, &sx(Rational::from(1)));
    b.require_eq("Res_{s=1} ζ(|D|)", &r_q, &sx(Rational::from(2)));
    let sq = sign_power(&library::sphere2_dirac(), 2)?;
    let params = PerturbationParams::new(Rational::from((1, 4)), Rational::from((1, 10)), Rational::from((1, 10)))?;
    let pert = power_op(&sq, &params)?;
    let qpert = shift(&ec_perturb(&root_op(&sq)?, &params.epsilon, &params.c)?, &params.a)?;
    for (name, p, q) in [("Laplacian", lap.clone(), q), ("P_ε,c,a", pert, qpert)] {
        let m = Rational::from(p.order);
        let fp = fns(&p, config)?;
        let fq = fns(&q, config)?;
        for k in (-2..=p.dimension as i64).rev().filter(|k| *k != 0) {
            let sp = Rational::from(k) / &m;
            let sk = Rational::from(k);
            let ip = all_singular(&fp, &p, &sp)?;
            let iq = all_singular(&fq, &q, &sk)?;
            b.text(format!("{name}: k = {k}: all singular (P, Q)"), format!("{ip}, {iq}"));
            b.require(ip == iq, || format!("{name}, k = {k}: P all singular = {ip}, Q all singular = {iq}"));
            for fname in ["zeta_abs", "eta"] {
                let a = m_res(&fp, fname, &p, &sp)?;
                let c = m_res(&fq, fname, &q, &sk)?;
                b.require(a.exact_eq(&c) || a.distance(&c) < NUMERIC_TOL, || {
                    format!("{name}, k = {k}: m Res {fname}(P) = {a}, Res {fname}(Q) = {c}")
                });
            }
        }
    }
    Ok(b.finish())
}

pub fn check_zeta_up_decomposition(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults = vec![
        ("circle_dirac+1/3".to_string(), library::circle_dirac_shift(&Rational::from((1, 3)))?),
        ("sphere2_dirac+1/4".to_string(), shift(&library::sphere2_dirac(), &Rational::from((1, 4)))?),
        ("sphere3_dirac+1/5".to_string(), shift(&library::sphere3_dirac(), &Rational::from((1, 5)))?),
        ("circle_laplacian".to_string(), library::circle_laplacian()),
        ("sphere2_dirac ε=1/10,c=1/5".to_string(), ec_perturb(&library::sphere2_dirac(), &Rational::from((1, 10)), &Rational::from((1, 5)))?),
    ];
    let models = chosen_models(config, defaults);
    let names: Vec<_> = models.iter().map(|m| m.0.clone()).collect();
    let mut b = Builder::new(
        "zeta_up_decomposition",
        "Res ζ↑↓ = ½(1 + e^(±iπσ)) Res ζ(|P|) + ½(1 - e^(±iπσ)) Res η at every admissible σ; \
         residues of ζ(|P|) and η are real",
        format!("{} on the admissible set down to -2", names.join(", ")),
        "0 where e^(iπσ) is exact, 1e-25 otherwise",
    );
    let half = Rational::from((1, 2));
    let mut checked = 0;
    for (name, model) in &models {
        let f = fns(model, config)?;
        let table = admissible_from(&f, model, -2)?;
        for row in &table.rows {
            for (up, dir) in [(&row.zeta_up, 1), (&row.zeta_down, -1)] {
                let w = exp_i_pi(&(row.sigma.clone() * Rational::from(dir)), config.prec);
                let one = ExactScalar::one();
                let want = one
                    .add(&w)
                    .mul(&row.zeta_abs)
                    .add(&one.sub(&w).mul(&row.eta))
                    .mul_rational(&half);
                let ok = if want.is_exact() && up.is_exact() { up.exact_eq(&want) } else { up.distance(&want) < NUMERIC_TOL };
                checked += 1;
                b.require(ok, || format!("{name}, σ = {}: residue {up} vs {want}", format_rational(&row.sigma)));
            }
            for (fname, r) in [("zeta_abs", &row.zeta_abs), ("eta", &row.eta)] {
                let im = r.to_f64_pair().1;
                let real = match r.as_gaussian() {
                    Some(g) => g.im == 0,
                    None => im.abs() < NUMERIC_TOL,
                };
                b.require(real, || format!("{name}, σ = {}: {fname} residue {r} is not real", format_rational(&row.sigma)));
            }
        }
    }
    b.text("identities checked", checked.to_string());
    Ok(b.finish())
}

pub fn check_up_down_identity(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults = vec![
        ("circle_dirac+1/3".to_string(), library::circle_dirac_shift(&Rational::from((1, 3)))?),
        ("sphere2_dirac+1/4".to_string(), shift(&library::sphere2_dirac(), &Rational::from((1, 4)))?),
    ];
    let models = chosen_models(config, defaults);
    let names: Vec<_> = models.iter().map(|m| m.0.clone()).collect();
    let mut b = Builder::new(
        "up_down_identity",
        "ζ↑ - ζ↓ = (1 - e^(-iπs))(ζ↑ - η); for odd-class P, η is regular at even integers and \
         m lim_{s→k}(ζ↑ - ζ↓) = iπ Res P^(-k) - iπ m Res_{s=k} η",
        format!("{}; 20 seeded points per model (seed {})", names.join(", "), config.seed),
        "1e-25 (identity, limit relation); 0 (residues)",
    );
    let prec = config.prec;
    let mut worst = 0.0f64;
    for (name, model) in &models {
        let f = fns(model, config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ model.dimension as u64);
        for _ in 0..20 {
            let re: f64 = rng.gen_range(-3.0..4.0);
            let im: f64 = rng.gen_range(0.25..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let s = ExactScalar::from(Ball::from_parts_f64(re, im, prec));
            let up = f.zeta_up.evaluate(&s, prec)?.to_ball(prec);
            let down = f.zeta_down.evaluate(&s, prec)?.to_ball(prec);
            let eta = f.eta.evaluate(&s, prec)?.to_ball(prec);
            let w = Ball::pi(prec).mul(&Ball::from_parts_f64(0.0, -1.0, prec)).mul(&s.to_ball(prec)).exp();
            let rhs = Ball::one(prec).sub(&w).mul(&up.sub(&eta));
            let resid = up.sub(&down).distance_upper(&rhs).to_f64();
            worst = worst.max(resid);
            b.require(resid <= NUMERIC_TOL, || format!("{name}: residual {resid:e} at s = {re}{im:+}i"));
        }
    }
    b.float("largest identity residual", worst);
    if config.model.is_none() {
        for (name, a) in [("circle_dirac", Rational::new()), ("circle_dirac+1/3", Rational::from((1, 3)))] {
            let model = shift(&library::circle_dirac(), &a)?;
            let f = fns(&model, config)?;
            // P^6 has order 6, so keep enough components to reach degree -1
            let sym = symbol_shift(&SymbolExpansion::xi(8), &a)?;
            for k in [-2i64, -4, -6] {
                let sk = Rational::from(k);
                let r = m_res(&f, "eta", &model, &sk)?;
                b.require(r.is_zero(), || format!("{name}: Res_{{s={k}}} η = {r}"));
                let s = sx(sk.clone());
                let diff = f.zeta_up.evaluate(&s, prec)?.sub(&f.zeta_down.evaluate(&s, prec)?);
                let res_pk = ncr(&power_int(&sym, -k)?)?;
                let i_pi = Ball::pi(prec).mul(&Ball::from_parts_f64(0.0, 1.0, prec));
                let rhs = i_pi.mul(&res_pk.sub(&r).to_ball(prec));
                let gap = diff.to_ball(prec).distance_upper(&rhs).to_f64();
                b.require(gap <= NUMERIC_TOL, || format!("{name}, k = {k}: limit relation off by {gap:e}"));
            }
        }
    }
    Ok(b.finish())
}

pub fn check_eta_regular_origin(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults: Vec<(String, SpectralModel)> = library::all().into_iter().map(|(n, m)| (n.to_string(), m)).collect();
    let models = chosen_models(config, defaults);
    let mut b = Builder::new(
        "eta_regular_origin",
        "η(P; s) is regular at s = 0",
        format!("{} ; circle_dirac_shift uses a = 1/3", models.iter().map(|m| m.0.clone()).collect::<Vec<_>>().join(", ")),
        "0",
    );
    for (name, model) in &models {
        let f = fns(model, config)?;
        match f.eta.evaluate(&ExactScalar::zero(), config.prec) {
            Ok(v) => {
                b.value(format!("{name}: η(0)"), &v);
                if name == "circle_dirac_shift" {
                    b.require(v.exact_eq(&sx(Rational::from((1, 3)))), || format!("circle + 1/3: η(0) = {v}, expected 1/3"));
                }
            }
            Err(e) => b.require(false, || format!("{name}: η(0) failed: {e}")),
        }
    }
    Ok(b.finish())
}

pub fn check_cross_engine(config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "cross_engine",
        "m Res_{s=σ} ζ(|P|; s) = Res |P|^(-σ): spectral residue against the symbol-side residue",
        "P = -i d/dθ + a on the circle, a ∈ {0, 1/3}, σ = 1",
        "0",
    );
    for a in [Rational::new(), Rational::from((1, 3))] {
        let model = shift(&library::circle_dirac(), &a)?;
        let spectral = m_res(&fns(&model, config)?, "zeta_abs", &model, &Rational::from(1))?;
        let (abs, _) = abs_and_sign(&xi_plus(&a))?;
        let symbolic = ncr(&power_int(&abs, -1)?)?;
        let tag = format!("a = {}", format_rational(&a));
        b.require_eq(&format!("{tag}: spectral"), &spectral, &sx(Rational::from(2)));
        b.require_eq(&format!("{tag}: symbol"), &symbolic, &spectral);
    }
    Ok(b.finish())
}

pub fn check_power_op(_config: &SuiteConfig) -> Result<CheckVerdict> {
    let mut b = Builder::new(
        "power_op",
        "P_ε,c,a = F(Q_ε,c + a)|Q_ε,c + a|^m turns the kernel into the eigenvalue a^m and reduces to (P_ε,c) + a for m = 1",
        "F|D|³ on the circle with a = 1/2; circle with (a, ε, c) = (1/4, 1/10, 1/20); sphere2 with zero parameters",
        "0",
    );
    let cube = sign_power(&library::circle_dirac(), 3)?;
    let out = power_op(&cube, &PerturbationParams::new(Rational::from((1, 2)), Rational::new(), Rational::new())?)?;
    let kernel_term = out.exceptional.iter().find(|e| e.0.to_rational() == Some(Rational::from((1, 8))));
    b.require(out.kernel_dim == 0 && kernel_term.map(|e| e.1) == Some(1), || "kernel did not become (1/8, 1)".into());
    b.text("kernel image", out.exceptional.iter().map(|e| format!("({}, {})", e.0, e.1)).collect::<Vec<_>>().join(" "));
    let circle = library::circle_dirac();
    let params = PerturbationParams::new(Rational::from((1, 4)), Rational::from((1, 10)), Rational::from((1, 20)))?;
    let composite = shift(&ec_perturb(&circle, &params.epsilon, &params.c)?, &params.a)?;
    b.require(power_op(&circle, &params)? == composite, || "m = 1 does not reduce to shift ∘ ec_perturb".into());
    let s2 = library::sphere2_dirac();
    let zero = PerturbationParams::new(Rational::new(), Rational::new(), Rational::new())?;
    b.require(power_op(&s2, &zero)? == s2, || "zero parameters changed the model".into());
    let outside = PerturbationParams::new(Rational::from(2), Rational::new(), Rational::new())?;
    b.require(matches!(power_op(&s2, &outside), Err(Error::Parameter(_))), || "a beyond the gap accepted".into());
    Ok(b.finish())
}

/// Truncated sums `Σ_{|λ| ≤ cutoff} μ |λ|^(-s)` over each sign.
pub fn direct_sums(model: &SpectralModel, s: f64, cutoff: f64) -> (f64, f64) {
    let (mut plus, mut minus) = (0.0, 0.0);
    for b in &model.branches {
        let mut k = b.k0;
        let mut acc = 0.0;
        loop {
            let l = b.law.eval_f64(k as f64);
            if l > cutoff {
                break;
            }
            acc += b.multiplicity_at(k).to_f64() * l.powf(-s);
            k += 1;
        }
        if b.sign > 0 {
            plus += acc;
        } else {
            minus += acc;
        }
    }
    for e in &model.exceptional {
        let v = e.1 as f64 * e.0.magnitude.to_f64().powf(-s);
        if e.0.sign > 0 {
            plus += v;
        } else {
            minus += v;
        }
    }
    (plus, minus)
}

pub fn check_oracle_convergence(config: &SuiteConfig) -> Result<CheckVerdict> {
    let defaults: Vec<(String, SpectralModel)> = library::all().into_iter().map(|(n, m)| (n.to_string(), m)).collect();
    let models = chosen_models(config, defaults);
    let mut b = Builder::new(
        "oracle_convergence",
        "the continuation agrees with the defining series on its half-plane of convergence",
        format!("all listed models at s = n/m + 2, direct sums over |λ| ≤ {ORACLE_CUTOFF}"),
        "1e-6",
    );
    for (name, model) in &models {
        let s = Rational::from((model.dimension, model.order)) + Rational::from(2);
        let f = fns(model, config)?;
        let (plus, minus) = direct_sums(model, s.to_f64(), ORACLE_CUTOFF);
        for (fname, want) in [("zeta_abs", plus + minus), ("eta", plus - minus)] {
            let got = f.get(fname).expect("known").evaluate(&sx(s.clone()), config.prec)?;
            let err = (got.to_f64_pair().0 - want).abs();
            b.float(format!("{name}: |{fname} - direct sum|"), err);
            b.require(err <= ORACLE_TOL, || format!("{name}: {fname} off by {err:e}"));
        }
    }
    Ok(b.finish())
}

pub fn run_check(id: &str, config: &SuiteConfig) -> Result<CheckVerdict> {
    match id {
        "residue_trace" => check_residue_trace(config),
        "binomial_lemma" => check_binomial_lemma(config),
        "res_abs_positive" => check_res_abs_positive(config),
        "odd_class_closure" => check_odd_class_closure(config),
        "sign_square" => check_sign_square(config),
        "parity" => check_parity_tables(config),
        "shift_polynomial" => check_shift_polynomial(config),
        "sign_stability" => check_sign_stability(config),
        "epsilon_identity" => check_epsilon_identity(config),
        "root_equivalence" => check_root_equivalence(config),
        "zeta_up_decomposition" => check_zeta_up_decomposition(config),
        "up_down_identity" => check_up_down_identity(config),
        "eta_regular_origin" => check_eta_regular_origin(config),
        "cross_engine" => check_cross_engine(config),
        "power_op" => check_power_op(config),
        "oracle_convergence" => check_oracle_convergence(config),
        other => Err(Error::UnknownCheck { id: other.into(), valid: check_ids().join(", ") }),
    }
}

/// Runs the selected checks in parallel; the report keeps the order of [`CHECKS`].
pub fn run_all(config: &SuiteConfig) -> Result<Vec<CheckVerdict>> {
    let ids = config.selection()?;
    ids.par_iter().map(|id| run_check(id, config)).collect()
}

pub fn all_pass(verdicts: &[CheckVerdict]) -> bool {
    verdicts.iter().all(|v| v.pass)
}

pub fn report_json(verdicts: &[CheckVerdict]) -> Result<String> {
    #[derive(Serialize)]
    struct Report<'a> {
        pass: bool,
        checks: &'a [CheckVerdict],
    }
    Ok(serde_json::to_string_pretty(&Report { pass: all_pass(verdicts), checks: verdicts })?)
}

pub fn report_text(verdicts: &[CheckVerdict]) -> String {
    let width = verdicts.iter().map(|v| v.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for v in verdicts {
        let flag = if v.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{flag}  {:width$}  tol {:<8}  {}", v.id, v.tolerance, v.statement);
        for f in &v.failures {
            let _ = writeln!(out, "      {:width$}  ! {f}", "");
        }
    }
    let passed = verdicts.iter().filter(|v| v.pass).count();
    let _ = writeln!(out, "{passed}/{} checks passed", verdicts.len());
    out
}
