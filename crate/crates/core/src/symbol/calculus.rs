use rug::Rational;

use super::expansion::{RayComponent, SymbolExpansion};
use super::matrix::SymMatrix;
use crate::error::{Error, Result};
use crate::numeric::rational::{binom_int, rational_root_pow};
use crate::numeric::ExactScalar;

/// Relative index `t` of `a ∘ b`, i.e. the component of degree `m_a + m_b - t`:
/// `Σ_{i + i' + j = t} (1/j!) ∂_ξ^j a_{m_a - i} · D_x^j b_{m_b - i'}`.
fn product_component(a: &SymbolExpansion, b: &[RayComponent], t: usize) -> RayComponent {
    let mut acc = RayComponent::zero(a.rank());
    for i in 0..=t.min(a.truncation()) {
        let ac = &a.components()[i];
        if ac.is_zero() {
            continue;
        }
        let da = a.order() - i as i64;
        for i2 in 0..=(t - i).min(b.len().saturating_sub(1)) {
            let bc = &b[i2];
            if bc.is_zero() {
                continue;
            }
            let j = t - i - i2;
            if j > 0 && bc.is_constant() {
                continue;
            }
            let c = binom_int(da, j as u32);
            if c == 0 {
                continue;
            }
            let plus = ac.plus.mul(&bc.plus.d_pow(j as u32)).scale_rational(&c);
            // on ξ < 0, ∂_ξ^j |ξ|^d = (-1)^j d(d-1)…(d-j+1)|ξ|^(d-j)
            let cm = if j.is_multiple_of(2) { c } else { -c };
            let minus = ac.minus.mul(&bc.minus.d_pow(j as u32)).scale_rational(&cm);
            acc = acc.add(&RayComponent::new(plus, minus));
        }
    }
    acc
}

fn check_rank(a: &SymbolExpansion, b: &SymbolExpansion) -> Result<()> {
    if a.rank() != b.rank() {
        return Err(Error::Parameter(format!("cannot compose {0}x{0} with {1}x{1} symbols", a.rank(), b.rank())));
    }
    Ok(())
}

/// Symbol of the composition `AB`, kept to the shallower of the two truncations.
pub fn compose(a: &SymbolExpansion, b: &SymbolExpansion) -> Result<SymbolExpansion> {
    check_rank(a, b)?;
    let n = a.truncation().min(b.truncation());
    let comps = (0..=n).map(|t| product_component(a, b.components(), t)).collect();
    SymbolExpansion::new(a.order() + b.order(), n, comps)
}

/// Right parametrix `Q` with `A ∘ Q = 1` down to the truncation of `A`.
pub fn parametrix(a: &SymbolExpansion) -> Result<SymbolExpansion> {
    let n = a.truncation();
    let p = a.principal();
    let inv = RayComponent::new(p.plus.inverse()?, p.minus.inverse()?);
    let order = -a.order();
    let mut q = vec![inv.clone()];
    for t in 1..=n {
        q.push(RayComponent::zero(a.rank()));
        let r = product_component(a, &q, t);
        q[t] = RayComponent::new(inv.plus.mul(&r.plus).neg(), inv.minus.mul(&r.minus).neg());
    }
    SymbolExpansion::new(order, n, q)
}

/// `A^k` for any integer `k`; negative powers go through the parametrix.
pub fn power_int(a: &SymbolExpansion, k: i64) -> Result<SymbolExpansion> {
    if k == 0 {
        return Ok(SymbolExpansion::identity(a.rank(), a.truncation()));
    }
    let base = if k < 0 { parametrix(a)? } else { a.clone() };
    let mut out = base.clone();
    for _ in 1..k.unsigned_abs() {
        out = compose(&out, &base)?;
    }
    Ok(out)
}

/// `|a|` for a hermitian principal coefficient, returned with its (positive) diagonal.
fn principal_abs(a0: &SymMatrix) -> Result<(SymMatrix, Vec<Rational>)> {
    if !a0.is_hermitian() {
        return Err(Error::Parameter("principal symbol is not selfadjoint".into()));
    }
    let rank = a0.rank();
    if let Some(diag) = a0.real_diagonal() {
        if diag.iter().any(|d| *d == 0) {
            return Err(Error::NotElliptic("principal symbol has a zero eigenvalue".into()));
        }
        let betas: Vec<Rational> = diag.iter().map(|d| Rational::from(d.abs_ref())).collect();
        let mut b = SymMatrix::zero(rank);
        for (i, beta) in betas.iter().enumerate() {
            b.set(i, i, super::trig::TrigPoly::from_rational(beta));
        }
        return Ok((b, betas));
    }
    let sq = a0.mul(a0);
    if let Some(c) = sq.as_scalar_constant() {
        if c.is_real() && c.re > 0 {
            return match rational_root_pow(&c.re, &Rational::from((1, 2))) {
                Some(beta) => Ok((SymMatrix::from_rational(&beta, rank), vec![beta; rank])),
                None => Err(Error::Representation(format!(
                    "square root of {} is irrational; |A| would leave the exact coefficient family",
                    c.re
                ))),
            };
        }
        if c.is_zero() {
            return Err(Error::NotElliptic("principal symbol squares to zero".into()));
        }
    }
    Err(Error::Representation(
        "|A| is available for constant diagonal principal symbols or those squaring to a positive scalar".into(),
    ))
}

/// Solves `diag(β) X + X diag(β) = R` entrywise.
fn sylvester(r: &SymMatrix, betas: &[Rational]) -> SymMatrix {
    let n = r.rank();
    let mut x = SymMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let s = Rational::from(&betas[i] + &betas[j]);
            x.set(i, j, r.get(i, j).scale_rational(&s.recip()));
        }
    }
    x
}

/// `(|A|, F)` with `|A| ∘ |A| = A ∘ A`, positive principal part, and `F = A |A|^(-1)`.
pub fn abs_and_sign(a: &SymbolExpansion) -> Result<(SymbolExpansion, SymbolExpansion)> {
    if a.order() < 1 {
        return Err(Error::Parameter(format!("|A| needs order at least 1, got {}", a.order())));
    }
    let c = compose(a, a)?;
    let n = a.truncation();
    let (bp, beta_p) = principal_abs(&a.principal().plus)?;
    let (bm, beta_m) = principal_abs(&a.principal().minus)?;
    let mut b = vec![RayComponent::new(bp, bm)];
    let bsym = |comps: &[RayComponent]| SymbolExpansion::new(a.order(), comps.len() - 1, comps.to_vec()).expect("valid");
    for t in 1..=n {
        b.push(RayComponent::zero(a.rank()));
        let partial = bsym(&b);
        let lhs = product_component(&partial, &b, t);
        let r = c.components()[t].sub(&lhs);
        b[t] = RayComponent::new(sylvester(&r.plus, &beta_p), sylvester(&r.minus, &beta_m));
    }
    let abs = bsym(&b);
    let sign = compose(a, &parametrix(&abs)?)?;
    Ok((abs, sign))
}

/// Residue density `c_A(x) = (2π)^(-1) [p_{-1}(x, +1) + p_{-1}(x, -1)]`, returned
/// without the factor `(2π)^(-1)`.
pub fn residue_density(a: &SymbolExpansion) -> Result<SymMatrix> {
    match a.component(-1) {
        Some(c) => Ok(c.plus.add(&c.minus)),
        None => Err(Error::TruncationTooShallow(format!(
            "degree -1 is below the lowest stored degree {}",
            a.lowest_degree()
        ))),
    }
}

/// Noncommutative residue `∫ tr c_A(x) dx`: the constant Fourier mode of `tr(p⁺₋₁ + p⁻₋₁)`.
pub fn ncr(a: &SymbolExpansion) -> Result<ExactScalar> {
    Ok(ExactScalar::from_gaussian(residue_density(a)?.trace().constant_term()))
}

/// Whether every stored component satisfies `p_d^-(x) = (-1)^d p_d^+(x)`.
pub fn is_odd_class(a: &SymbolExpansion) -> bool {
    a.components().iter().enumerate().all(|(i, c)| {
        let d = a.order() - i as i64;
        if d.rem_euclid(2) == 0 {
            c.minus == c.plus
        } else {
            c.minus == c.plus.neg()
        }
    })
}

/// Whether the symbol is polynomial in `ξ`: odd-class with no negative-degree part.
pub fn is_differential(a: &SymbolExpansion) -> bool {
    is_odd_class(a) && a.components().iter().enumerate().all(|(i, c)| a.order() - i as i64 >= 0 || c.is_zero())
}
