//! The matrices `F`, `G` and `Z` on `ℂ^k` over `ℚ(ζ_k)` and the
//! relations among the inner automorphisms of `sl_k` they induce.
//!
//! `Z = Z₀/√k` is never formed: conjugation by `Z` equals conjugation by
//! `Z₀`, and powers of `Z` are compared through `Z₀^n = k^{n/2}·Z^n`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, CycloElem, CyclotomicField, Rat};
use crate::roots::{apply_coxeter, simple_root};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    k: usize,
    field: Arc<CyclotomicField>,
    entries: Vec<CycloElem>,
}

impl CycloMatrix {
    pub fn from_fn(field: &Arc<CyclotomicField>, k: usize, f: impl Fn(usize, usize) -> CycloElem) -> Self {
        let entries = (0..k * k).map(|x| f(x / k, x % k)).collect();
        CycloMatrix {
            k,
            field: Arc::clone(field),
            entries,
        }
    }

    pub fn zero(field: &Arc<CyclotomicField>, k: usize) -> Self {
        Self::from_fn(field, k, |_, _| CycloElem::zero(field))
    }

    pub fn identity(field: &Arc<CyclotomicField>, k: usize) -> Self {
        Self::from_fn(field, k, |i, j| {
            if i == j {
                CycloElem::one(field)
            } else {
                CycloElem::zero(field)
            }
        })
    }

    /// The matrix unit `E_{ij}` (0-based).
    pub fn unit(field: &Arc<CyclotomicField>, k: usize, i: usize, j: usize) -> Self {
        Self::from_fn(field, k, |a, b| {
            if (a, b) == (i, j) {
                CycloElem::one(field)
            } else {
                CycloElem::zero(field)
            }
        })
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElem {
        &self.entries[i * self.k + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.k;
        Self::from_fn(&self.field, k, |i, j| {
            (0..k).fold(CycloElem::zero(&self.field), |acc, l| {
                let a = self.get(i, l);
                let b = other.get(l, j);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        })
    }

    pub fn scale(&self, c: &CycloElem) -> Self {
        Self::from_fn(&self.field, self.k, |i, j| self.get(i, j) * c)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_fn(&self.field, self.k, |i, j| self.get(i, j).scale(r))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(&self.field, self.k, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(&self.field, self.k, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(&self.field, self.k);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_scalar(&self, c: &CycloElem) -> bool {
        (0..self.k).all(|i| {
            (0..self.k).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x == c
                } else {
                    x.is_zero()
                }
            })
        })
    }
}

/// `F`, `G`, `Z₀` and the inverses used for conjugation.
#[derive(Clone, Debug)]
pub struct Triality {
    pub k: usize,
    pub field: Arc<CyclotomicField>,
    pub f: CycloMatrix,
    pub f_inv: CycloMatrix,
    pub g: CycloMatrix,
    pub g_inv: CycloMatrix,
    pub z0: CycloMatrix,
    pub z0_inv: CycloMatrix,
}

/// `F = diag(ω, ω², …, ω^{k−1}, 1)`, `G` the cyclic shift with
/// `G_{a,a+1} = 1`, and `Z₀ = (ω^{ab})_{a,b=1..k}`.
pub fn build_fgz(k: usize) -> Result<Triality> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("need k ≥ 2, got {k}")));
    }
    let field = CyclotomicField::new(k as u32);
    let w = |e: i64| CycloElem::zeta_pow(&field, e);
    let zero = CycloElem::zero(&field);
    let one = CycloElem::one(&field);
    let ki = k as i64;
    let f = CycloMatrix::from_fn(&field, k, |i, j| if i == j { w(i as i64 + 1) } else { zero.clone() });
    let f_inv = CycloMatrix::from_fn(&field, k, |i, j| if i == j { w(-(i as i64 + 1)) } else { zero.clone() });
    let g = CycloMatrix::from_fn(
        &field,
        k,
        |i, j| if (i + 1) % k == j { one.clone() } else { zero.clone() },
    );
    let g_inv = CycloMatrix::from_fn(
        &field,
        k,
        |i, j| if (j + 1) % k == i { one.clone() } else { zero.clone() },
    );
    let z0 = CycloMatrix::from_fn(&field, k, |a, b| w(((a as i64 + 1) * (b as i64 + 1)) % ki));
    let inv_k = rat(1, ki);
    let z0_inv = CycloMatrix::from_fn(&field, k, |a, b| {
        w((-(a as i64 + 1) * (b as i64 + 1)).rem_euclid(ki)).scale(&inv_k)
    });
    let t = Triality {
        k,
        field,
        f,
        f_inv,
        g,
        g_inv,
        z0,
        z0_inv,
    };
    let id = CycloMatrix::identity(&t.field, k);
    if t.z0.mul(&t.z0_inv) != id || t.g.mul(&t.g_inv) != id || t.f.mul(&t.f_inv) != id {
        return Err(Error::InvariantMismatch("triality inverses are wrong".into()));
    }
    Ok(t)
}

impl Triality {
    /// `X ↦ F⁻¹XF`.
    pub fn phi(&self, x: &CycloMatrix) -> CycloMatrix {
        self.f_inv.mul(x).mul(&self.f)
    }

    pub fn phi_inv(&self, x: &CycloMatrix) -> CycloMatrix {
        self.f.mul(x).mul(&self.f_inv)
    }

    /// `X ↦ G⁻¹XG`.
    pub fn g_hat(&self, x: &CycloMatrix) -> CycloMatrix {
        self.g_inv.mul(x).mul(&self.g)
    }

    pub fn g_hat_inv(&self, x: &CycloMatrix) -> CycloMatrix {
        self.g.mul(x).mul(&self.g_inv)
    }

    /// `X ↦ Z⁻¹XZ = Z₀⁻¹XZ₀`.
    pub fn zeta(&self, x: &CycloMatrix) -> CycloMatrix {
        self.z0_inv.mul(x).mul(&self.z0)
    }

    pub fn zeta_inv(&self, x: &CycloMatrix) -> CycloMatrix {
        self.z0.mul(x).mul(&self.z0_inv)
    }

    /// A basis of the traceless matrices: `E_{ij}` for `i ≠ j` and
    /// `E_{ii} − E_{i+1,i+1}`.
    pub fn sl_basis(&self) -> Vec<CycloMatrix> {
        let k = self.k;
        let mut out = Vec::with_capacity(k * k - 1);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    out.push(CycloMatrix::unit(&self.field, k, i, j));
                }
            }
        }
        for i in 0..k - 1 {
            let a = CycloMatrix::unit(&self.field, k, i, i);
            let b = CycloMatrix::unit(&self.field, k, i + 1, i + 1);
            out.push(a.sub(&b));
        }
        out
    }

    /// `Z₀²` equals `k` times the permutation matrix of `a ↦ −a mod k`
    /// on indices `1..k`.
    pub fn z_squared_is_reversal(&self) -> bool {
        let k = self.k;
        let kk = CycloElem::from_rat(&self.field, rat(k as i64, 1));
        let z2 = self.z0.pow(2);
        (0..k).all(|a| {
            (0..k).all(|b| {
                let hit = (a + 1 + b + 1) % k == 0;
                let x = z2.get(a, b);
                if hit {
                    *x == kk
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// `Z² = I` for `k = 2` and `Z⁴ = I` otherwise, as `Z₀² = 2I` and
    /// `Z₀⁴ = k²I`.
    pub fn z_order_holds(&self) -> bool {
        let k = self.k as i64;
        if k == 2 {
            self.z0.pow(2).is_scalar(&CycloElem::from_rat(&self.field, rat(2, 1)))
        } else {
            self.z0
                .pow(4)
                .is_scalar(&CycloElem::from_rat(&self.field, rat(k * k, 1)))
        }
    }
}

/// `Z⁻¹GZ = F`, `G⁻¹FG = ω⁻¹F` and `Z⁻²GZ² = G⁻¹`, together with
/// `F^k = G^k = I` and the order of `Z`.
pub fn verify_sfg(k: usize) -> Result<bool> {
    let t = build_fgz(k)?;
    let id = CycloMatrix::identity(&t.field, k);
    let w_inv = CycloElem::zeta_pow(&t.field, -1);
    let z2 = t.z0.pow(2);
    let z2_inv = t.z0_inv.pow(2);
    Ok(t.z0_inv.mul(&t.g).mul(&t.z0) == t.f
        && t.g_inv.mul(&t.f).mul(&t.g) == t.f.scale(&w_inv)
        && z2_inv.mul(&t.g).mul(&z2) == t.g_inv
        && t.f.pow(k as u64) == id
        && t.g.pow(k as u64) == id
        && t.z_squared_is_reversal()
        && t.z_order_holds())
}

fn order_on(basis: &[CycloMatrix], op: impl Fn(&CycloMatrix) -> CycloMatrix, cap: usize) -> Option<usize> {
    let mut cur: Vec<CycloMatrix> = basis.to_vec();
    for n in 1..=cap {
        cur = cur.iter().map(&op).collect();
        if cur.iter().zip(basis).all(|(a, b)| a == b) {
            return Some(n);
        }
    }
    None
}

/// On `sl_k`, with composites applied right to left:
/// `ζ∘ĝ∘ζ⁻¹ = φ`, `ζ∘φ∘ζ⁻¹ = ĝ⁻¹`, `φ∘ĝ = ĝ∘φ`, and both `φ` and `ĝ` have
/// order exactly `k`. Also checks that `ĝ` moves the root space of each
/// affine simple root to that of its image under the Coxeter element.
pub fn verify_conjugation_relations(k: usize) -> Result<bool> {
    let t = build_fgz(k)?;
    let basis = t.sl_basis();
    let relations = basis.iter().all(|x| {
        t.zeta(&t.g_hat(&t.zeta_inv(x))) == t.phi(x)
            && t.zeta(&t.phi(&t.zeta_inv(x))) == t.g_hat_inv(x)
            && t.phi(&t.g_hat(x)) == t.g_hat(&t.phi(x))
    });
    let orders = order_on(&basis, |x| t.phi(x), k) == Some(k) && order_on(&basis, |x| t.g_hat(x), k) == Some(k);
    Ok(relations && orders && root_spaces_follow_coxeter(&t))
}

/// `ĝ(E_{ij})` is the root vector of `g_Δ(v_i − v_j)` for the simple roots
/// and the negated highest root.
fn root_spaces_follow_coxeter(t: &Triality) -> bool {
    let k = t.k;
    let mut roots: Vec<Vec<Rat>> = (1..k).map(|i| simple_root(k, i)).collect();
    let mut alpha0 = vec![Rat::from_integer(0.into()); k];
    alpha0[k - 1] = rat(1, 1);
    alpha0[0] = rat(-1, 1);
    roots.push(alpha0);
    let space = |r: &[Rat]| -> Option<(usize, usize)> {
        let i = r.iter().position(|x| *x == rat(1, 1))?;
        let j = r.iter().position(|x| *x == rat(-1, 1))?;
        Some((i, j))
    };
    roots.iter().all(|r| {
        let Some((i, j)) = space(r) else { return false };
        let Some((a, b)) = space(&apply_coxeter(r, 1)) else {
            return false;
        };
        t.g_hat(&CycloMatrix::unit(&t.field, k, i, j)) == CycloMatrix::unit(&t.field, k, a, b)
    })
}

/// `F⁻¹E_{ij}F = ω^{j−i}E_{ij}` for `i ≠ j` and `F⁻¹HF = H` on the
/// diagonal basis.
pub fn verify_weight_grading(k: usize) -> Result<bool> {
    let t = build_fgz(k)?;
    let mut ok = true;
    for i in 0..k {
        for j in 0..k {
            let e = CycloMatrix::unit(&t.field, k, i, j);
            let want = if i == j {
                e.clone()
            } else {
                e.scale(&CycloElem::zeta_pow(&t.field, j as i64 - i as i64))
            };
            ok &= t.phi(&e) == want;
        }
    }
    ok &= t.sl_basis()[k * (k - 1)..].iter().all(|h| t.phi(h) == *h);
    Ok(ok)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialityReport {
    pub k: usize,
    pub sfg: bool,
    pub conjugation: bool,
    pub weight_grading: bool,
}

impl TrialityReport {
    pub fn run(k: usize) -> Result<Self> {
        Ok(TrialityReport {
            k,
            sfg: verify_sfg(k)?,
            conjugation: verify_conjugation_relations(k)?,
            weight_grading: verify_weight_grading(k)?,
        })
    }

    pub fn passed(&self) -> bool {
        self.sfg && self.conjugation && self.weight_grading
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_f_and_g() {
        let t = build_fgz(5).unwrap();
        let id = CycloMatrix::identity(&t.field, 5);
        assert_eq!(t.f.pow(5), id);
        assert_eq!(t.g.pow(5), id);
        assert_ne!(t.g.pow(4), id);
    }

    #[test]
    fn z_powers() {
        let t2 = build_fgz(2).unwrap();
        assert!(t2.z0.pow(2).is_scalar(&CycloElem::from_rat(&t2.field, rat(2, 1))));
        let t4 = build_fgz(4).unwrap();
        assert!(t4.z0.pow(4).is_scalar(&CycloElem::from_rat(&t4.field, rat(16, 1))));
        assert!(!t4.z0.pow(2).is_scalar(&CycloElem::from_rat(&t4.field, rat(4, 1))));
    }

    #[test]
    fn small_cases() {
        for k in [2, 3, 7] {
            assert!(verify_sfg(k).unwrap(), "k = {k}");
        }
        assert!(verify_conjugation_relations(3).unwrap());
        assert!(verify_weight_grading(5).unwrap());
    }

    #[test]
    fn grading_eigenvalue_k3() {
        let t = build_fgz(3).unwrap();
        let e = CycloMatrix::unit(&t.field, 3, 0, 2);
        assert_eq!(t.phi(&e), e.scale(&CycloElem::zeta_pow(&t.field, 2)));
    }

    #[test]
    fn opposite_composition_fails() {
        // With ζ applied first the relation gives φ⁻¹, not φ.
        let t = build_fgz(3).unwrap();
        let x = CycloMatrix::unit(&t.field, 3, 0, 1);
        assert_ne!(t.zeta_inv(&t.g_hat(&t.zeta(&x))), t.phi(&x));
        assert_eq!(t.zeta_inv(&t.g_hat(&t.zeta(&x))), t.phi_inv(&x));
    }
}
