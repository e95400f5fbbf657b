//! Exact arithmetic in ℚ(ζ_k) = ℚ[x]/(Φ_k).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{format_rat, Rat};
use crate::error::{Error, Result};

/// Dense polynomial over ℚ, lowest degree first, no trailing zeros.
type Poly = Vec<Rat>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Poly {
    let n = a.len().max(b.len());
    let zero = Rat::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

/// Quotient and remainder of `a / b` for nonzero `b`.
fn poly_divrem(a: &[Rat], b: &[Rat]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("division by zero polynomial").clone();
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    (trim(q), r)
}

/// The `k`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(k: u32) -> Vec<Rat> {
    assert!(k >= 1);
    // x^k - 1 divided by Φ_d for every proper divisor d.
    let mut p: Poly = vec![Rat::zero(); k as usize + 1];
    p[0] = -Rat::one();
    p[k as usize] = Rat::one();
    for d in 1..k {
        if k % d == 0 {
            let (q, r) = poly_divrem(&p, &cyclotomic_poly(d));
            debug_assert!(r.is_empty());
            p = q;
        }
    }
    p
}

/// The field ℚ(ζ_k), shared between its elements.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    k: u32,
    modulus: Poly,
    /// `x^i mod Φ_k` for `i` in `0..k`.
    powers: Vec<Poly>,
}

impl CyclotomicField {
    pub fn new(k: u32) -> Arc<Self> {
        assert!(k >= 1, "conductor must be positive");
        let modulus = cyclotomic_poly(k);
        let powers = (0..k as usize)
            .map(|i| {
                let mut mono = vec![Rat::zero(); i + 1];
                mono[i] = Rat::one();
                poly_divrem(&mono, &modulus).1
            })
            .collect();
        Arc::new(CyclotomicField { k, modulus, powers })
    }

    pub fn conductor(&self) -> u32 {
        self.k
    }

    /// φ(k), the degree of the field.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// An element of ℚ(ζ_k), stored as the residue of a polynomial mod Φ_k.
#[derive(Clone)]
pub struct CycloElem {
    field: Arc<CyclotomicField>,
    coeffs: Poly,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.k == other.field.k && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rat(c),
                _ => format!("{}·ζ^{}", format_rat(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl CycloElem {
    fn reduce(field: &Arc<CyclotomicField>, p: Poly) -> Self {
        let coeffs = if p.len() > field.degree() {
            poly_divrem(&p, &field.modulus).1
        } else {
            trim(p)
        };
        CycloElem {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycloElem {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    pub fn from_rat(field: &Arc<CyclotomicField>, r: Rat) -> Self {
        CycloElem {
            field: Arc::clone(field),
            coeffs: trim(vec![r]),
        }
    }

    /// ζ^e for any integer exponent.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let i = e.rem_euclid(field.k as i64) as usize;
        CycloElem {
            field: Arc::clone(field),
            coeffs: field.powers[i].clone(),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.k
    }

    /// Coefficients padded to length φ(k).
    pub fn coefficients(&self) -> Vec<Rat> {
        let mut c = self.coeffs.clone();
        c.resize(self.field.degree(), Rat::zero());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloElem {
            field: Arc::clone(&self.field),
            coeffs: trim(self.coeffs.iter().map(|c| c * r).collect()),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycloElem::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.k == other.field.k {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(self.field.k, other.field.k))
        }
    }
}

/// Product in ℚ(ζ_k); both operands must share the conductor.
pub fn cyclo_mul(a: &CycloElem, b: &CycloElem) -> Result<CycloElem> {
    a.check(b)?;
    Ok(CycloElem::reduce(&a.field, poly_mul(&a.coeffs, &b.coeffs)))
}

/// Multiplicative inverse via the extended Euclidean algorithm against Φ_k.
pub fn cyclo_inv(a: &CycloElem) -> Result<CycloElem> {
    if a.is_zero() {
        return Err(Error::CyclotomicDivisionByZero);
    }
    // Invariant: s_i·a ≡ r_i (mod Φ_k).
    let (mut r0, mut r1) = (a.field.modulus.clone(), a.coeffs.clone());
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rat::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // Φ_k is irreducible, so the last nonzero remainder is a constant.
    let c = r1.first().cloned().ok_or(Error::CyclotomicDivisionByZero)?;
    let inv = CycloElem::reduce(&a.field, s1).scale(&c.recip());
    Ok(inv)
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        self.check(rhs).expect("cyclotomic conductors differ");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rat::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        CycloElem {
            field: Arc::clone(&self.field),
            coeffs: trim(coeffs),
        }
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        self + &(-rhs)
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        cyclo_mul(self, rhs).expect("cyclotomic conductors differ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |k| -> Vec<i64> {
            cyclotomic_poly(k)
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect()
        };
        assert_eq!(ints(1), vec![-1, 1]);
        assert_eq!(ints(3), vec![1, 1, 1]);
        assert_eq!(ints(4), vec![1, 0, 1]);
        assert_eq!(ints(6), vec![1, -1, 1]);
        assert_eq!(ints(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn minimal_polynomial_k3() {
        let f = CyclotomicField::new(3);
        let z = CycloElem::zeta_pow(&f, 1);
        let s = &(&(&z * &z) + &z) + &CycloElem::one(&f);
        assert!(s.is_zero());
    }

    #[test]
    fn i_squared_k4() {
        let f = CyclotomicField::new(4);
        let z = CycloElem::zeta_pow(&f, 1);
        assert_eq!(&z * &z, -&CycloElem::one(&f));
    }

    #[test]
    fn inverse_k5() {
        let f = CyclotomicField::new(5);
        let z = CycloElem::zeta_pow(&f, 1);
        let z4 = CycloElem::zeta_pow(&f, 4);
        assert!((&z * &z4).is_one());
        assert_eq!(cyclo_inv(&z).unwrap(), z4);
    }

    #[test]
    fn inverse_of_general_element() {
        let f = CyclotomicField::new(7);
        let a = &CycloElem::zeta_pow(&f, 2).scale(&rat(3, 2)) + &CycloElem::one(&f);
        let inv = cyclo_inv(&a).unwrap();
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = CyclotomicField::new(5);
        let err = cyclo_inv(&CycloElem::zero(&f)).unwrap_err();
        assert_eq!(err.to_string(), "division by zero in cyclotomic field");
    }

    #[test]
    fn conductor_mismatch() {
        let a = CycloElem::one(&CyclotomicField::new(3));
        let b = CycloElem::one(&CyclotomicField::new(5));
        assert_eq!(cyclo_mul(&a, &b), Err(Error::ConductorMismatch(3, 5)));
    }

    #[test]
    fn roots_of_unity_sum_and_order() {
        for k in 2..=12 {
            let f = CyclotomicField::new(k);
            let z = CycloElem::zeta_pow(&f, 1);
            assert!(z.pow(k as u64).is_one(), "k = {k}");
            let sum = (0..k as i64).fold(CycloElem::zero(&f), |acc, i| &acc + &CycloElem::zeta_pow(&f, i));
            assert!(sum.is_zero(), "k = {k}");
            assert_eq!(z.coefficients().len(), f.degree());
        }
    }
}
