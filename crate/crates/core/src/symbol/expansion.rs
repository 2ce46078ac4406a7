use std::fmt;

use rand::Rng;
use rug::Rational;
use serde::{Deserialize, Serialize};

use super::matrix::SymMatrix;
use super::trig::TrigPoly;
use crate::error::{Error, Result};
use crate::numeric::GaussianRational;

/// Number of components below the principal one kept by default.
pub const DEFAULT_TRUNCATION: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientMode {
    #[serde(rename = "constant-coefficient-exact")]
    ConstantExact,
    #[serde(rename = "trig-fourier")]
    TrigFourier,
}

/// A homogeneous component `p_d(x, ξ) = p_d^±(x)|ξ|^d` on the rays `±ξ > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayComponent {
    pub plus: SymMatrix,
    pub minus: SymMatrix,
}

impl RayComponent {
    pub fn new(plus: SymMatrix, minus: SymMatrix) -> Self {
        assert_eq!(plus.rank(), minus.rank(), "ray ranks differ");
        RayComponent { plus, minus }
    }

    pub fn zero(rank: usize) -> Self {
        RayComponent::new(SymMatrix::zero(rank), SymMatrix::zero(rank))
    }

    /// `c·ξ^d`: coefficient `c` on `ξ > 0` and `(-1)^d c` on `ξ < 0`.
    pub fn xi_power(c: &SymMatrix, d: i64) -> Self {
        let minus = if d.rem_euclid(2) == 0 { c.clone() } else { c.neg() };
        RayComponent::new(c.clone(), minus)
    }

    /// `c·|ξ|^d`.
    pub fn even(c: &SymMatrix) -> Self {
        RayComponent::new(c.clone(), c.clone())
    }

    pub fn rank(&self) -> usize {
        self.plus.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.plus.is_constant() && self.minus.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        RayComponent::new(self.plus.add(&o.plus), self.minus.add(&o.minus))
    }

    pub fn sub(&self, o: &Self) -> Self {
        RayComponent::new(self.plus.sub(&o.plus), self.minus.sub(&o.minus))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        RayComponent::new(self.plus.scale_rational(r), self.minus.scale_rational(r))
    }

    pub fn ray(&self, sign: i8) -> &SymMatrix {
        if sign > 0 {
            &self.plus
        } else {
            &self.minus
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentFile {
    degree: i64,
    ray_plus: SymMatrix,
    ray_minus: SymMatrix,
}

#[derive(Serialize, Deserialize)]
struct SymbolFile {
    order: i64,
    truncation: usize,
    mode: CoefficientMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    components: Vec<ComponentFile>,
}

/// A classical symbol on the circle, `p ~ Σ_{i ≤ N} p_{m-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolExpansion {
    order: i64,
    truncation: usize,
    mode: CoefficientMode,
    components: Vec<RayComponent>,
}

impl SymbolExpansion {
    /// `components[i]` is the component of degree `order - i`; missing ones are zero.
    pub fn new(order: i64, truncation: usize, mut components: Vec<RayComponent>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Parameter("symbol needs at least one component".into()));
        };
        let rank = first.rank();
        if components.iter().any(|c| c.rank() != rank) {
            return Err(Error::Parameter("components have different matrix sizes".into()));
        }
        if components.len() > truncation + 1 {
            return Err(Error::Parameter(format!(
                "{} components exceed truncation {truncation}",
                components.len()
            )));
        }
        components.resize(truncation + 1, RayComponent::zero(rank));
        let mode = mode_of(&components);
        Ok(SymbolExpansion { order, truncation, mode, components })
    }

    pub fn zero(order: i64, truncation: usize, rank: usize) -> Self {
        SymbolExpansion::new(order, truncation, vec![RayComponent::zero(rank)]).expect("valid")
    }

    pub fn identity(rank: usize, truncation: usize) -> Self {
        SymbolExpansion::new(0, truncation, vec![RayComponent::even(&SymMatrix::identity(rank))]).expect("valid")
    }

    /// The scalar symbol `c·ξ^d`.
    pub fn xi_pow(d: i64, c: &Rational, truncation: usize) -> Self {
        SymbolExpansion::new(d, truncation, vec![RayComponent::xi_power(&SymMatrix::from_rational(c, 1), d)]).expect("valid")
    }

    /// The scalar symbol `ξ` of `-i d/dx`.
    pub fn xi(truncation: usize) -> Self {
        Self::xi_pow(1, &Rational::from(1), truncation)
    }

    /// The scalar symbol `|ξ|^d`.
    pub fn abs_xi_pow(d: i64, truncation: usize) -> Self {
        SymbolExpansion::new(d, truncation, vec![RayComponent::even(&SymMatrix::identity(1))]).expect("valid")
    }

    /// The scalar symbol of the differential operator `Σ_d c_d(x) D_x^d`, with `coeffs[d] = c_d`.
    pub fn differential(coeffs: &[TrigPoly], truncation: usize) -> Result<Self> {
        let order = coeffs.len() as i64 - 1;
        if order < 0 {
            return Err(Error::Parameter("differential operator needs a coefficient".into()));
        }
        let comps = (0..coeffs.len().min(truncation + 1))
            .map(|i| {
                let d = order - i as i64;
                RayComponent::xi_power(&SymMatrix::scalar(&coeffs[d as usize], 1), d)
            })
            .collect();
        SymbolExpansion::new(order, truncation, comps)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn rank(&self) -> usize {
        self.components[0].rank()
    }

    pub fn components(&self) -> &[RayComponent] {
        &self.components
    }

    /// Lowest degree represented.
    pub fn lowest_degree(&self) -> i64 {
        self.order - self.truncation as i64
    }

    /// The component of degree `d`; zero above the order, `None` below the truncation.
    pub fn component(&self, d: i64) -> Option<RayComponent> {
        if d > self.order {
            return Some(RayComponent::zero(self.rank()));
        }
        self.components.get((self.order - d) as usize).cloned()
    }

    pub fn principal(&self) -> &RayComponent {
        &self.components[0]
    }

    /// Re-expresses the symbol with a larger nominal order (zero leading components).
    pub fn with_order(&self, order: i64) -> Self {
        if order <= self.order {
            return self.clone();
        }
        let pad = (order - self.order) as usize;
        let mut comps = vec![RayComponent::zero(self.rank()); pad];
        comps.extend(self.components.iter().cloned());
        SymbolExpansion::new(order, self.truncation + pad, comps).expect("valid")
    }

    /// Drops components below degree `order - n`.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.truncation);
        SymbolExpansion::new(self.order, n, self.components[..=n].to_vec()).expect("valid")
    }

    fn combine(&self, o: &Self, f: impl Fn(&RayComponent, &RayComponent) -> RayComponent) -> Result<Self> {
        if self.rank() != o.rank() {
            return Err(Error::Parameter("symbols have different matrix sizes".into()));
        }
        let order = self.order.max(o.order);
        let lowest = self.lowest_degree().max(o.lowest_degree());
        if lowest > order {
            return Err(Error::TruncationTooShallow("no common degrees between the two symbols".into()));
        }
        let comps = (lowest..=order)
            .rev()
            .map(|d| f(&self.component(d).expect("in range"), &o.component(d).expect("in range")))
            .collect();
        SymbolExpansion::new(order, (order - lowest) as usize, comps)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, RayComponent::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, RayComponent::sub)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let comps = self.components.iter().map(|c| c.scale_rational(r)).collect();
        SymbolExpansion::new(self.order, self.truncation, comps).expect("valid")
    }

    /// Adds `a·I` to the degree-0 component on both rays.
    pub fn add_scalar(&self, a: &Rational) -> Result<Self> {
        let base = self.with_order(0);
        if base.lowest_degree() > 0 {
            return Err(Error::TruncationTooShallow(format!(
                "degree 0 lies below the truncation (lowest degree {})",
                base.lowest_degree()
            )));
        }
        let mut comps = base.components.clone();
        let i = base.order as usize;
        comps[i] = comps[i].add(&RayComponent::even(&SymMatrix::from_rational(a, base.rank())));
        SymbolExpansion::new(base.order, base.truncation, comps)
    }

    /// Exact equality of all components with degree at least `lowest`.
    pub fn agrees_down_to(&self, o: &Self, lowest: i64) -> bool {
        if lowest < self.lowest_degree() || lowest < o.lowest_degree() {
            return false;
        }
        let top = self.order.max(o.order);
        (lowest..=top).all(|d| self.component(d) == o.component(d))
    }

    /// A random symbol with small-integer Fourier coefficients, for property tests.
    pub fn random<R: Rng>(rng: &mut R, order: i64, truncation: usize, rank: usize, max_freq: i64) -> Self {
        let entry = |rng: &mut R| {
            let terms: Vec<(i64, GaussianRational)> = (0..rng.gen_range(0..=3))
                .map(|_| {
                    let n = rng.gen_range(-max_freq..=max_freq);
                    let re = Rational::from((rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3)));
                    let im = Rational::from(rng.gen_range(-2i64..=2));
                    (n, GaussianRational::new(re, im))
                })
                .collect();
            TrigPoly::from_terms(terms)
        };
        let matrix = |rng: &mut R| {
            let rows = (0..rank).map(|_| (0..rank).map(|_| entry(rng)).collect()).collect();
            SymMatrix::from_rows(rows).expect("square")
        };
        let comps = (0..=truncation).map(|_| RayComponent::new(matrix(rng), matrix(rng))).collect();
        SymbolExpansion::new(order, truncation, comps).expect("valid")
    }

    pub fn to_json(&self) -> Result<String> {
        let file = SymbolFile {
            order: self.order,
            truncation: self.truncation,
            mode: self.mode,
            rank: (self.rank() != 1).then_some(self.rank()),
            components: self
                .components
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ComponentFile {
                    degree: self.order - i as i64,
                    ray_plus: c.plus.clone(),
                    ray_minus: c.minus.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SymbolFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("symbol file: {e}")))?;
        let rank = file.rank.or_else(|| file.components.first().map(|c| c.ray_plus.rank())).unwrap_or(1);
        let mut comps = vec![RayComponent::zero(rank); file.truncation + 1];
        for c in file.components {
            let i = file.order - c.degree;
            if i < 0 || i as usize > file.truncation {
                return Err(Error::Parse(format!(
                    "component of degree {} outside [{}, {}]",
                    c.degree,
                    file.order - file.truncation as i64,
                    file.order
                )));
            }
            if c.ray_plus.rank() != rank || c.ray_minus.rank() != rank {
                return Err(Error::Parse(format!("component of degree {} is not {rank}x{rank}", c.degree)));
            }
            comps[i as usize] = RayComponent::new(c.ray_plus, c.ray_minus);
        }
        let sym = SymbolExpansion::new(file.order, file.truncation, comps)?;
        if file.mode == CoefficientMode::ConstantExact && sym.mode != CoefficientMode::ConstantExact {
            return Err(Error::Parse("mode is constant-coefficient-exact but some coefficients depend on x".into()));
        }
        Ok(sym)
    }
}

fn mode_of(components: &[RayComponent]) -> CoefficientMode {
    if components.iter().all(RayComponent::is_constant) {
        CoefficientMode::ConstantExact
    } else {
        CoefficientMode::TrigFourier
    }
}

impl fmt::Display for SymbolExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "deg {}: +: {}  -: {}", self.order - i as i64, c.plus, c.minus)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
