//! Exact Fincke–Pohst enumeration.
//!
//! The positive definite integer form `A` is written fraction-free: with
//! leading minors `Δ_i` and Bareiss rows `Ã`, the quadratic form splits as
//! `Σ_i w_i² / (Δ_i Δ_{i+1})` where `w_i = Σ_{j≥i} Ã_ij y_j`. The partial sums
//! `E_i = Δ_i · Σ_{l≥i} w_l² / (Δ_l Δ_{l+1})` are integers and satisfy
//! `E_i = (w_i² + Δ_i E_{i+1}) / Δ_{i+1}`, so every step is an exact integer
//! operation. Word-sized `i128` arithmetic is used when a bit-size estimate
//! allows it, `BigInt` otherwise.

use std::fmt::Debug;

use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, Rat};

/// What the enumeration should do after a vector has been visited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
    /// Replace the bound (in the same units as the original one).
    Shrink(Rat),
}

trait Arith: Clone + Ord + Debug {
    fn from_big(x: &Int) -> Option<Self>;
    fn to_big(&self) -> Int;
    fn from_i64(x: i64) -> Self;
    fn to_i64(&self) -> Option<i64>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn div_floor(&self, o: &Self) -> Self;
    fn div_ceil(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn is_negative(&self) -> bool;
}

impl Arith for i128 {
    fn from_big(x: &Int) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> Int {
        Int::from(*self)
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl Arith for Int {
    fn from_big(x: &Int) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> Int {
        self.clone()
    }
    fn from_i64(x: i64) -> Self {
        Int::from(x)
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Fraction-free triangular data of a positive definite integer matrix.
#[derive(Clone, Debug)]
pub struct Triangular {
    n: usize,
    /// `delta[i]` is the leading principal minor of size `i`.
    delta: Vec<Int>,
    /// Bareiss rows; `atil[(i, j)]` for `j ≥ i`, with `atil[(i, i)] = delta[i + 1]`.
    atil: IntMatrix,
    /// Exact inverse diagonal of the form, used for coordinate bounds.
    inv_diag: Vec<Rat>,
}

impl Triangular {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        let n = a.nrows();
        let mut m = a.clone();
        let mut delta = vec![Int::one(); n + 1];
        let mut atil = IntMatrix::zeros(n, n);
        for k in 0..n {
            if !m[(k, k)].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            delta[k + 1] = m[(k, k)].clone();
            for j in k..n {
                atil[(k, j)] = m[(k, j)].clone();
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &delta[k];
                    m[(i, j)] = v;
                }
            }
        }
        let inv = a.to_rat().inverse()?;
        let inv_diag = (0..n).map(|i| inv[(i, i)].clone()).collect();
        Ok(Triangular {
            n,
            delta,
            atil,
            inv_diag,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }
}

struct Search<'a, T, V> {
    n: usize,
    delta: Vec<T>,
    atil: Vec<Vec<T>>,
    f: T,
    phi: Vec<T>,
    bn: T,
    bd: T,
    y: Vec<T>,
    z: Vec<i64>,
    stopped: bool,
    bound_scale: Rat,
    visit: &'a mut V,
}

impl<'a, T: Arith, V: FnMut(&[i64], &Int) -> Visit> Search<'a, T, V> {
    fn level(&mut self, i: usize, e_next: &T) -> Result<()> {
        let ov = || Error::EnumerationOverflow;
        let mut c = T::from_i64(0);
        for j in i + 1..self.n {
            c = c.add(&self.atil[i][j].mul(&self.y[j]).ok_or_else(ov)?).ok_or_else(ov)?;
        }
        let di = self.delta[i].clone();
        let di1 = self.delta[i + 1].clone();
        let slack = self
            .bn
            .mul(&di1)
            .ok_or_else(ov)?
            .sub(&self.bd.mul(e_next).ok_or_else(ov)?)
            .ok_or_else(ov)?;
        if slack.is_negative() {
            return Ok(());
        }
        let r = di.mul(&slack).ok_or_else(ov)?;
        let w = r.div_floor(&self.bd).isqrt();
        let neg_w = T::from_i64(0).sub(&w).ok_or_else(ov)?;
        let ylo = neg_w.sub(&c).ok_or_else(ov)?.div_ceil(&di1);
        let yhi = w.sub(&c).ok_or_else(ov)?.div_floor(&di1);
        let phi = self.phi[i].clone();
        let zlo = ylo.sub(&phi).ok_or_else(ov)?.div_ceil(&self.f);
        let zhi = yhi.sub(&phi).ok_or_else(ov)?.div_floor(&self.f);
        let (Some(zlo), Some(zhi)) = (zlo.to_i64(), zhi.to_i64()) else {
            return Err(ov());
        };
        let mut zi = zlo;
        while zi <= zhi {
            let yi = T::from_i64(zi).mul(&self.f).ok_or_else(ov)?.add(&phi).ok_or_else(ov)?;
            let wi = di1.mul(&yi).ok_or_else(ov)?.add(&c).ok_or_else(ov)?;
            let e = wi
                .mul(&wi)
                .ok_or_else(ov)?
                .add(&di.mul(e_next).ok_or_else(ov)?)
                .ok_or_else(ov)?
                .div_exact(&di1);
            // Re-check against the current (possibly shrunk) bound.
            let within = self.bd.mul(&e).ok_or_else(ov)? <= self.bn.mul(&di).ok_or_else(ov)?;
            if within {
                self.y[i] = yi;
                self.z[i] = zi;
                if i == 0 {
                    let action = (self.visit)(&self.z, &e.to_big());
                    match action {
                        Visit::Continue => {}
                        Visit::Stop => {
                            self.stopped = true;
                            return Ok(());
                        }
                        Visit::Shrink(b) => {
                            let scaled = b * &self.bound_scale;
                            self.bn = T::from_big(scaled.numer()).ok_or_else(ov)?;
                            self.bd = T::from_big(scaled.denom()).ok_or_else(ov)?;
                        }
                    }
                } else {
                    self.level(i - 1, &e)?;
                    if self.stopped {
                        return Ok(());
                    }
                }
            }
            zi += 1;
        }
        Ok(())
    }
}

fn bits(x: &Int) -> u64 {
    x.bits()
}

/// Enumerates all `y = F·z + φ` (`z` integral) with `yᵀ A y ≤ bound · scale`.
///
/// `scale` converts the caller's bound into units of `A`; the visitor receives
/// `z` and the exact value `yᵀ A y`.
pub fn enumerate<V>(tri: &Triangular, f: &Int, phi: &[Int], bound: &Rat, scale: &Rat, mut visit: V) -> Result<()>
where
    V: FnMut(&[i64], &Int) -> Visit,
{
    let n = tri.n;
    if bound.is_negative() {
        return Ok(());
    }
    if n == 0 {
        visit(&[], &Int::zero());
        return Ok(());
    }
    let b = bound * scale;
    let (bn, bd) = (b.numer().clone(), b.denom().clone());

    // Bit-size estimate deciding between i128 and BigInt.
    let ymax = tri
        .inv_diag
        .iter()
        .map(|d| {
            let v = (d * &b).floor().to_integer();
            num_integer::Roots::sqrt(&v) + f + Int::one()
        })
        .max()
        .unwrap_or_else(Int::one);
    let dbits = tri.delta.iter().map(bits).max().unwrap_or(1);
    let abits = tri.atil.rows_iter().flatten().map(bits).max().unwrap_or(1);
    let nbits = 64 - (n as u64).leading_zeros() as u64;
    let need = [
        2 * dbits + bits(&bn) + bits(&bd) + 4,
        abits + bits(&ymax) + nbits + 4,
        dbits + bits(&ymax) + bits(f) + 4,
    ]
    .into_iter()
    .max()
    .unwrap();

    if need <= 120 {
        run::<i128, V>(tri, f, phi, &bn, &bd, scale, &mut visit)
    } else {
        run::<Int, V>(tri, f, phi, &bn, &bd, scale, &mut visit)
    }
}

fn run<T: Arith, V: FnMut(&[i64], &Int) -> Visit>(
    tri: &Triangular,
    f: &Int,
    phi: &[Int],
    bn: &Int,
    bd: &Int,
    scale: &Rat,
    visit: &mut V,
) -> Result<()> {
    let conv = |x: &Int| T::from_big(x).ok_or(Error::EnumerationOverflow);
    let n = tri.n;
    let delta = tri.delta.iter().map(conv).collect::<Result<Vec<_>>>()?;
    let atil = (0..n)
        .map(|i| tri.atil.row(i).iter().map(conv).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut s = Search {
        n,
        delta,
        atil,
        f: conv(f)?,
        phi: phi.iter().map(conv).collect::<Result<Vec<_>>>()?,
        bn: conv(bn)?,
        bd: conv(bd)?,
        y: vec![T::from_i64(0); n],
        z: vec![0; n],
        stopped: false,
        bound_scale: scale.clone(),
        visit,
    };
    s.level(n - 1, &T::from_i64(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn collect(a: &IntMatrix, bound: Rat) -> Vec<(Vec<i64>, Int)> {
        let tri = Triangular::new(a).unwrap();
        let mut out = Vec::new();
        let phi = vec![Int::zero(); a.nrows()];
        enumerate(&tri, &Int::one(), &phi, &bound, &rat(1, 1), |z, e| {
            out.push((z.to_vec(), e.clone()));
            Visit::Continue
        })
        .unwrap();
        out
    }

    #[test]
    fn a2_roots() {
        let a = IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
        let v = collect(&a, rat(2, 1));
        assert_eq!(v.len(), 7);
        assert_eq!(v.iter().filter(|(_, e)| *e == Int::from(2)).count(), 6);
    }

    #[test]
    fn values_are_exact_norms() {
        let a = IntMatrix::from_i64_rows(&[vec![4, 1, 0], vec![1, 6, 2], vec![0, 2, 8]]);
        for (z, e) in collect(&a, rat(30, 1)) {
            let zi: Vec<Int> = z.iter().map(|&x| Int::from(x)).collect();
            let av = a.mul_vec(&zi);
            let q: Int = zi.iter().zip(&av).map(|(x, y)| x * y).sum();
            assert_eq!(q, e);
        }
    }

    #[test]
    fn big_arithmetic_path() {
        // Huge bound forces the BigInt path; answer is a small count anyway.
        let big = Int::from(1u64 << 62);
        let a = IntMatrix::from_rows(vec![vec![big.clone()]], 1).unwrap();
        let tri = Triangular::new(&a).unwrap();
        let mut count = 0;
        let bound = Rat::from_integer(&big * Int::from(100));
        enumerate(&tri, &Int::one(), &[Int::zero()], &bound, &rat(1, 1), |_, _| {
            count += 1;
            Visit::Continue
        })
        .unwrap();
        // |z|² ≤ 100
        assert_eq!(count, 21);
    }
}
