//! Discriminant quadratic forms `q(λ+L) = (p/2)(λ|λ) mod p` on
//! `p`-elementary discriminant groups.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integer, Rat};
use crate::lattice::Lattice;

const TABLE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuadraticType {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl std::fmt::Display for QuadraticType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QuadraticType::Plus => "+",
            QuadraticType::Minus => "-",
            QuadraticType::Degenerate => "degenerate",
        })
    }
}

/// A quadratic form on `F_p^k` given by `q(e_i)` and the polar form
/// `b(e_i, e_j)`, where `b(x, x) = 2q(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpaceFp {
    p: u64,
    diag: Vec<u64>,
    polar: Vec<Vec<u64>>,
    /// Representatives in `L*` of the basis, when built from a lattice.
    generators: Vec<Vec<Rat>>,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Legendre symbol as `1`, `−1` or `0`.
pub fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn to_fp(r: &Rat, p: u64) -> Option<u64> {
    if !is_integer(r) {
        return None;
    }
    let m = r.to_integer() % p as i64;
    let m = m.to_i64()?;
    Some(m.rem_euclid(p as i64) as u64)
}

impl QuadraticSpaceFp {
    /// `q` on `D(L) ≅ ℤ_p^k`, basis given by the discriminant generators.
    pub fn from_lattice(l: &Lattice, p: u64) -> Result<Self> {
        if p == 2 || !crate::isometry::is_prime(p) {
            return Err(Error::NotElementary(format!("{p} is not an odd prime")));
        }
        if !l.is_even() {
            return Err(Error::NotEven);
        }
        let d = l.discriminant_group()?;
        if !d.is_elementary(p) {
            return Err(Error::NotElementary(format!(
                "discriminant group {} is not elementary abelian of exponent {p}",
                d.label()
            )));
        }
        let gens = d.generators.clone();
        let pr = Rat::from_integer(p.into());
        let k = gens.len();
        let mut diag = Vec::with_capacity(k);
        let mut polar = vec![vec![0u64; k]; k];
        let inv2 = (p + 1) / 2;
        for i in 0..k {
            for j in i..k {
                let v = l.inner(&gens[i], &gens[j]) * &pr;
                let b = to_fp(&v, p).ok_or_else(|| Error::NotElementary("p·(λ|μ) is not integral".into()))?;
                polar[i][j] = b;
                polar[j][i] = b;
                if i == j {
                    // p(λ|λ) is even for p odd, so q = p(λ|λ)/2 exactly.
                    let half = v / Rat::from_integer(2.into());
                    let q = to_fp(&half, p).ok_or_else(|| Error::NotElementary("(p/2)(λ|λ) is not integral".into()))?;
                    debug_assert_eq!(q, b * inv2 % p);
                    diag.push(q);
                }
            }
        }
        Ok(QuadraticSpaceFp {
            p,
            diag,
            polar,
            generators: gens,
        })
    }

    /// Abstract form from its polar matrix (`b(e_i, e_i) = 2q(e_i)`).
    pub fn from_polar(p: u64, polar: Vec<Vec<u64>>) -> Result<Self> {
        if p == 2 || !crate::isometry::is_prime(p) {
            return Err(Error::NotElementary(format!("{p} is not an odd prime")));
        }
        let k = polar.len();
        if polar.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch("polar matrix is not square".into()));
        }
        let polar: Vec<Vec<u64>> = polar.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
        for i in 0..k {
            for j in 0..k {
                if polar[i][j] != polar[j][i] {
                    return Err(Error::Precondition("polar matrix is not symmetric".into()));
                }
            }
        }
        let inv2 = (p + 1) / 2;
        let diag = (0..k).map(|i| polar[i][i] * inv2 % p).collect();
        Ok(QuadraticSpaceFp {
            p,
            diag,
            polar,
            generators: Vec::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn polar(&self) -> &[Vec<u64>] {
        &self.polar
    }

    pub fn value(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut s = 0u64;
        for i in 0..self.dim() {
            if x[i] == 0 {
                continue;
            }
            s = (s + x[i] * x[i] % p * self.diag[i]) % p;
            for j in i + 1..self.dim() {
                s = (s + x[i] * x[j] % p * self.polar[i][j]) % p;
            }
        }
        s
    }

    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> u64 {
        let p = self.p;
        let mut s = 0u64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s = (s + x[i] * y[j] % p * self.polar[i][j]) % p;
            }
        }
        s
    }

    /// Scalar multiple `c·q`.
    pub fn scaled(&self, c: u64) -> Self {
        let p = self.p;
        QuadraticSpaceFp {
            p,
            diag: self.diag.iter().map(|x| x * c % p).collect(),
            polar: self
                .polar
                .iter()
                .map(|r| r.iter().map(|x| x * c % p).collect())
                .collect(),
            generators: self.generators.clone(),
        }
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch("forms over different fields".into()));
        }
        let (a, b) = (self.dim(), other.dim());
        let mut polar = vec![vec![0u64; a + b]; a + b];
        for i in 0..a {
            polar[i][..a].copy_from_slice(&self.polar[i]);
        }
        for i in 0..b {
            polar[a + i][a..].copy_from_slice(&other.polar[i]);
        }
        let mut diag = self.diag.clone();
        diag.extend(&other.diag);
        Ok(QuadraticSpaceFp {
            p: self.p,
            diag,
            polar,
            generators: Vec::new(),
        })
    }

    /// All `p^k` vectors in odometer order with their values.
    pub fn values(&self) -> Result<BTreeMap<Vec<u64>, u64>> {
        let mut out = BTreeMap::new();
        self.for_each(|x, q| {
            out.insert(x.to_vec(), q);
        })?;
        Ok(out)
    }

    fn for_each(&self, mut f: impl FnMut(&[u64], u64)) -> Result<()> {
        let k = self.dim();
        let total = (0..k).try_fold(1u64, |a, _| a.checked_mul(self.p));
        if total.map_or(true, |t| t > TABLE_LIMIT) {
            return Err(Error::BudgetExceeded(format!(
                "quadratic space of dimension {k} over F_{} is too large to tabulate",
                self.p
            )));
        }
        let mut x = vec![0u64; k];
        loop {
            f(&x, self.value(&x));
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(());
                }
                x[i] += 1;
                if x[i] < self.p {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }

    /// Nonzero `x` with `q(x) = 0`.
    pub fn singular_vectors(&self) -> Result<Vec<Vec<u64>>> {
        let mut out = Vec::new();
        self.for_each(|x, q| {
            if q == 0 && x.iter().any(|&c| c != 0) {
                out.push(x.to_vec());
            }
        })?;
        Ok(out)
    }

    /// Whether some vector takes the value `v`.
    pub fn represents(&self, v: u64) -> Result<Option<Vec<u64>>> {
        let mut hit = None;
        self.for_each(|x, q| {
            if hit.is_none() && q == v % self.p {
                hit = Some(x.to_vec());
            }
        })?;
        Ok(hit)
    }

    /// Determinant of the Gram matrix of `q` (half the polar matrix).
    pub fn determinant(&self) -> u64 {
        let p = self.p;
        let inv2 = (p + 1) / 2;
        let k = self.dim();
        let mut m: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| self.polar[i][j] * inv2 % p).collect())
            .collect();
        let mut det = 1u64;
        for c in 0..k {
            let Some(r) = (c..k).find(|&r| m[r][c] != 0) else {
                return 0;
            };
            if r != c {
                m.swap(r, c);
                det = (p - det) % p;
            }
            det = det * m[c][c] % p;
            let inv = pow_mod(m[c][c], p - 2, p);
            for r in c + 1..k {
                let f = m[r][c] * inv % p;
                for j in c..k {
                    m[r][j] = (m[r][j] + p * p - f * m[c][j]) % p;
                }
            }
        }
        det
    }

    /// `(+)` or `(−)` from the square class of `(−1)^{⌊k/2⌋}·det`; in
    /// dimension 2 this is cross-checked against the singular-vector count.
    pub fn quadratic_type(&self) -> Result<QuadraticType> {
        let p = self.p;
        let det = self.determinant();
        if det == 0 {
            return Ok(QuadraticType::Degenerate);
        }
        let sign = if (self.dim() / 2) % 2 == 1 { p - 1 } else { 1 };
        let by_disc = if legendre(sign * det % p, p) == 1 {
            QuadraticType::Plus
        } else {
            QuadraticType::Minus
        };
        if self.dim() == 2 {
            let n = self.singular_vectors()?.len() as u64;
            let by_count = match n {
                0 => QuadraticType::Minus,
                x if x == 2 * (p - 1) => QuadraticType::Plus,
                _ => QuadraticType::Degenerate,
            };
            if by_count != by_disc {
                return Err(Error::InvariantMismatch(format!(
                    "plane has {n} singular vectors but discriminant says {by_disc}"
                )));
            }
        }
        Ok(by_disc)
    }
}
