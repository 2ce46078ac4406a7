use std::fmt;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::trig::TrigPoly;
use crate::error::{Error, Result};
use crate::numeric::GaussianRational;

/// Square matrix with trigonometric-polynomial entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    rank: usize,
    entries: Vec<TrigPoly>,
}

impl SymMatrix {
    pub fn zero(rank: usize) -> Self {
        SymMatrix { rank, entries: vec![TrigPoly::zero(); rank * rank] }
    }

    pub fn identity(rank: usize) -> Self {
        Self::scalar(&TrigPoly::one(), rank)
    }

    pub fn scalar(p: &TrigPoly, rank: usize) -> Self {
        let mut m = Self::zero(rank);
        for i in 0..rank {
            m.entries[i * rank + i] = p.clone();
        }
        m
    }

    pub fn from_rational(r: &Rational, rank: usize) -> Self {
        Self::scalar(&TrigPoly::from_rational(r), rank)
    }

    pub fn from_rows(rows: Vec<Vec<TrigPoly>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 || rows.iter().any(|r| r.len() != rank) {
            return Err(Error::Parse("symbol matrix must be square and non-empty".into()));
        }
        Ok(SymMatrix { rank, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: TrigPoly) {
        self.entries[i * self.rank + j] = p;
    }

    pub fn rows(&self) -> Vec<Vec<TrigPoly>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TrigPoly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(TrigPoly::is_constant)
    }

    fn map(&self, f: impl Fn(&TrigPoly) -> TrigPoly) -> Self {
        SymMatrix { rank: self.rank, entries: self.entries.iter().map(f).collect() }
    }

    fn zip(&self, o: &Self, f: impl Fn(&TrigPoly, &TrigPoly) -> TrigPoly) -> Self {
        assert_eq!(self.rank, o.rank, "matrix ranks differ");
        SymMatrix { rank: self.rank, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, TrigPoly::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, TrigPoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(TrigPoly::neg)
    }

    pub fn scale(&self, g: &GaussianRational) -> Self {
        self.map(|p| p.scale(g))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map(|p| p.scale_rational(r))
    }

    pub fn d_pow(&self, j: u32) -> Self {
        self.map(|p| p.d_pow(j))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.rank, o.rank, "matrix ranks differ");
        let r = self.rank;
        let mut out = Self::zero(r);
        for i in 0..r {
            for k in 0..r {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..r {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * r + j] = out.entries[i * r + j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> TrigPoly {
        (0..self.rank).fold(TrigPoly::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let r = self.rank;
        let mut out = Self::zero(r);
        for i in 0..r {
            for j in 0..r {
                out.entries[j * r + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// Constant entries, when every entry is constant.
    pub fn constants(&self) -> Option<Vec<GaussianRational>> {
        self.is_constant().then(|| self.entries.iter().map(TrigPoly::constant_term).collect())
    }

    /// Real diagonal entries when the matrix is constant, real and diagonal.
    pub fn real_diagonal(&self) -> Option<Vec<Rational>> {
        let c = self.constants()?;
        let r = self.rank;
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            for j in 0..r {
                let z = &c[i * r + j];
                if i == j {
                    if !z.is_real() {
                        return None;
                    }
                    out.push(z.re.clone());
                } else if !z.is_zero() {
                    return None;
                }
            }
        }
        Some(out)
    }

    /// `c` when the matrix is `c·I` with `c` a constant.
    pub fn as_scalar_constant(&self) -> Option<GaussianRational> {
        let c = self.constants()?;
        let r = self.rank;
        let d = c[0].clone();
        for i in 0..r {
            for j in 0..r {
                let want = if i == j { d.clone() } else { GaussianRational::zero() };
                if c[i * r + j] != want {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// Pointwise inverse. Supported when the matrix is `e^{ikx}·C` with `C`
    /// constant; a singular `C` is reported as a failure of ellipticity.
    pub fn inverse(&self) -> Result<Self> {
        if self.rank == 1 {
            return Ok(SymMatrix { rank: 1, entries: vec![self.entries[0].inverse()?] });
        }
        let mut freq = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            match p.as_monomial() {
                Some((n, _)) if freq.is_none() || freq == Some(n) => freq = Some(n),
                _ => {
                    return Err(Error::Representation(
                        "principal matrix is not a constant matrix times e^(ikx); its inverse leaves the coefficient family".into(),
                    ))
                }
            }
        }
        let Some(k) = freq else {
            return Err(Error::NotElliptic("principal matrix vanishes".into()));
        };
        let c: Vec<GaussianRational> = self.entries.iter().map(|p| p.coeff(k)).collect();
        let inv = invert_constant(&c, self.rank)?;
        Ok(SymMatrix { rank: self.rank, entries: inv.into_iter().map(|z| TrigPoly::monomial(-k, z)).collect() })
    }
}

/// Gauss-Jordan elimination over the Gaussian rationals.
fn invert_constant(c: &[GaussianRational], r: usize) -> Result<Vec<GaussianRational>> {
    let mut a: Vec<Vec<GaussianRational>> = (0..r).map(|i| c[i * r..(i + 1) * r].to_vec()).collect();
    let mut inv: Vec<Vec<GaussianRational>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect())
        .collect();
    for col in 0..r {
        let Some(pivot) = (col..r).find(|&i| !a[i][col].is_zero()) else {
            return Err(Error::NotElliptic("principal matrix is singular".into()));
        };
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv().expect("nonzero pivot");
        for j in 0..r {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for i in 0..r {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..r {
                let t = &f * &a[col][j];
                a[i][j] -= &t;
                let t = &f * &inv[col][j];
                inv[i][j] -= &t;
            }
        }
    }
    Ok(inv.into_iter().flatten().collect())
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 1 {
            return write!(f, "{}", self.entries[0]);
        }
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<TrigPoly>> = Vec::deserialize(d)?;
        SymMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
