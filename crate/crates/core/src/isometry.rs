//! Finite-order isometries acting on lattice coordinates.
//!
//! A matrix `M` acts on basis coordinates as column vectors:
//! `g(b_j) = Σ_i M_ij b_i`, so `Mᵀ G M = G` for the Gram matrix `G`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{integer_left_kernel, rat_int, Int, IntMatrix, Rat, RatMatrix};
use crate::lattice::{Coset, Lattice, LatticeJson};

pub const ORDER_CAP: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIsometry {
    lattice: Lattice,
    matrix: IntMatrix,
    order: u64,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

impl LatticeIsometry {
    pub fn new(lattice: Lattice, matrix: IntMatrix) -> Result<Self> {
        let r = lattice.rank();
        if matrix.nrows() != r || matrix.ncols() != r {
            return Err(Error::DimensionMismatch(format!("isometry matrix must be {r}x{r}")));
        }
        let g = lattice.gram();
        let m = matrix.to_rat();
        if m.transpose().mul(&g).mul(&m) != g {
            return Err(Error::NotAnIsometry);
        }
        let order = compute_order(&matrix)?;
        Ok(LatticeIsometry { lattice, matrix, order })
    }

    /// Isometry induced by an ambient map acting on row vectors (`v ↦ v·P`).
    pub fn from_ambient(lattice: Lattice, p: &RatMatrix) -> Result<Self> {
        let images = lattice.basis().mul(p);
        let mut cols = Vec::with_capacity(lattice.rank());
        for row in images.rows_iter() {
            cols.push(lattice.int_coordinates(row).ok_or(Error::NotAnIsometry)?);
        }
        let mt = IntMatrix::from_rows(cols, lattice.rank())?;
        Self::new(lattice, mt.transpose())
    }

    pub fn identity(lattice: Lattice) -> Self {
        let r = lattice.rank();
        LatticeIsometry {
            lattice,
            matrix: IntMatrix::identity(r),
            order: 1,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `det(I − M) ≠ 0`.
    pub fn is_fixed_point_free(&self) -> bool {
        let r = self.lattice.rank();
        r > 0 && !IntMatrix::identity(r).sub(&self.matrix).det().is_zero()
    }

    /// Image of a vector in the rational span of the lattice.
    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        let x = self.lattice.coordinates(v).ok_or(Error::NotInSpan)?;
        let y = self.matrix.to_rat().mul_vec(&x);
        Ok(self.lattice.vector(&y))
    }

    pub fn power(&self, s: u64) -> LatticeIsometry {
        let e = s % self.order;
        let matrix = self.matrix.pow(e);
        let order = if e == 0 { 1 } else { self.order / self.order.gcd(&e) };
        LatticeIsometry {
            lattice: self.lattice.clone(),
            matrix,
            order,
        }
    }

    pub fn inverse(&self) -> LatticeIsometry {
        self.power(self.order - 1)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LatticeIsometry) -> Result<LatticeIsometry> {
        if self.lattice != other.lattice {
            return Err(Error::DimensionMismatch("isometries on different lattices".into()));
        }
        Self::new(self.lattice.clone(), self.matrix.mul(&other.matrix))
    }

    /// `L^g`, the sublattice of fixed vectors.
    pub fn fixed_sublattice(&self) -> Lattice {
        let r = self.lattice.rank();
        let a = self.matrix.sub(&IntMatrix::identity(r)).transpose();
        let k = integer_left_kernel(&a);
        let vecs = k.to_rat().mul(self.lattice.basis());
        Lattice::span(&vecs, self.lattice.inner_scale().clone())
    }

    /// `L_g`, the orthogonal complement of `L^g` in `L`.
    pub fn coinvariant_lattice(&self) -> Lattice {
        self.lattice
            .orthogonal_complement(&self.fixed_sublattice())
            .expect("same ambient space")
    }

    /// Restriction to a `g`-invariant sublattice.
    pub fn restrict(&self, sub: &Lattice) -> Result<LatticeIsometry> {
        if !sub.is_sublattice_of(&self.lattice) && sub.rank() > 0 {
            // Sublattices of the rational span (e.g. L*) are allowed too.
            for row in sub.basis().rows_iter() {
                if !self.lattice.in_span(row) {
                    return Err(Error::NotInSpan);
                }
            }
        }
        let mut cols = Vec::with_capacity(sub.rank());
        for row in sub.basis().rows_iter() {
            let img = self.apply(row)?;
            cols.push(
                sub.int_coordinates(&img)
                    .ok_or_else(|| Error::Precondition("sublattice is not invariant under the isometry".into()))?,
            );
        }
        let mt = IntMatrix::from_rows(cols, sub.rank())?;
        LatticeIsometry::new(sub.clone(), mt.transpose())
    }

    /// `(1 − g)⁻¹ = (−1/n) Σ_{i=1}^{n−1} i·gⁱ` for fixed-point free `g`.
    pub fn one_minus_g_inverse(&self) -> Result<RatMatrix> {
        if !self.is_fixed_point_free() {
            return Err(Error::NotFixedPointFree);
        }
        let n = self.order;
        let r = self.lattice.rank();
        let mut acc = IntMatrix::zeros(r, r);
        let mut gi = IntMatrix::identity(r);
        for i in 1..n {
            gi = gi.mul(&self.matrix);
            acc = acc.add(&gi.scale(&Int::from(i)));
        }
        Ok(acc.to_rat().scale(&Rat::new(Int::from(-1), Int::from(n))))
    }

    /// `(1 − g^s)·target` for a lattice in the rational span of `L`.
    pub fn one_minus_g_image(&self, target: &Lattice, s: u64) -> Result<Lattice> {
        let gs = self.power(s);
        let mut rows = Vec::with_capacity(target.rank());
        for v in target.basis().rows_iter() {
            let gv = gs.apply(v)?;
            rows.push(v.iter().zip(&gv).map(|(a, b)| a - b).collect());
        }
        let m = RatMatrix::from_rows(rows, target.ambient_dim())?;
        Ok(Lattice::span(&m, target.inner_scale().clone()))
    }

    /// `R_L^{g^s} = ((1 − g^s)L*) ∩ L`.
    pub fn r_lattice(&self, s: u64) -> Result<Lattice> {
        let img = self.one_minus_g_image(&self.lattice.dual(), s)?;
        if img.rank() != self.lattice.rank() {
            return Err(Error::NotFixedPointFree);
        }
        img.intersection(&self.lattice)
    }

    /// `g(λ + L) = λ + L`, i.e. `(1 − g)λ ∈ L`.
    pub fn stabilizes_coset(&self, coset: &Coset) -> Result<bool> {
        let gv = self.apply(&coset.rep)?;
        let d: Vec<Rat> = coset.rep.iter().zip(&gv).map(|(a, b)| a - b).collect();
        Ok(self.lattice.contains(&d))
    }

    /// Matrix of the isometry on ambient row vectors restricted to the span,
    /// as the images of the basis vectors.
    pub fn basis_images(&self) -> Vec<Vec<Rat>> {
        let mt = self.matrix.transpose();
        mt.rows_iter()
            .map(|col| {
                let c: Vec<Rat> = col.iter().map(rat_int).collect();
                self.lattice.vector(&c)
            })
            .collect()
    }

    pub fn to_json(&self) -> IsometryJson {
        IsometryJson {
            lattice: self.lattice.to_json(),
            matrix: self
                .matrix
                .rows_iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.to_i64().expect("isometry entries fit in i64"))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &IsometryJson) -> Result<Self> {
        let lattice = Lattice::from_json(&j.lattice)?;
        let r = lattice.rank();
        if j.matrix.len() != r || j.matrix.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch(format!("isometry matrix must be {r}x{r}")));
        }
        let m = IntMatrix::from_i64_rows(&j.matrix);
        Self::new(lattice, m)
    }
}

/// Serialized isometry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IsometryJson {
    pub lattice: LatticeJson,
    pub matrix: Vec<Vec<i64>>,
}

fn compute_order(m: &IntMatrix) -> Result<u64> {
    let mut p = m.clone();
    let mut n = 1;
    while !p.is_identity() {
        n += 1;
        if n > ORDER_CAP {
            return Err(Error::OrderTooLarge(ORDER_CAP));
        }
        p = p.mul(m);
    }
    // Minimality sanity check on every maximal proper divisor.
    for q in prime_factors(n) {
        if m.pow(n / q).is_identity() {
            return Err(Error::InvariantMismatch("isometry order is not minimal".into()));
        }
    }
    Ok(n)
}

/// Elementary divisors of `A/B` for lattices `B ⊆ A` of equal rank.
pub fn quotient_invariants(sup: &Lattice, sub: &Lattice) -> Result<Vec<Int>> {
    sub.check_contained_in(sup)?;
    let coords: Vec<Vec<Int>> = sub
        .basis()
        .rows_iter()
        .map(|r| sup.int_coordinates(r).expect("contained"))
        .collect();
    let m = IntMatrix::from_rows(coords, sup.rank())?;
    Ok(crate::exact::snf(&m)
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn a2() -> Lattice {
        Lattice::from_int_rows(&[vec![1, -1, 0], vec![0, 1, -1]], rat(1, 1)).unwrap()
    }

    fn shift3() -> RatMatrix {
        // (x1, x2, x3) ↦ (x3, x1, x2) on row vectors.
        IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).to_rat()
    }

    #[test]
    fn identity_and_negation() {
        let l = a2();
        let id = LatticeIsometry::identity(l.clone());
        assert_eq!(id.order(), 1);
        assert!(!id.is_fixed_point_free());
        let neg = LatticeIsometry::new(l, IntMatrix::identity(2).scale(&Int::from(-1))).unwrap();
        assert_eq!(neg.order(), 2);
        assert!(neg.is_fixed_point_free());
        let inv = neg.one_minus_g_inverse().unwrap();
        assert_eq!(inv, RatMatrix::identity(2).scale(&rat(1, 2)));
    }

    #[test]
    fn coxeter_on_a2() {
        let g = LatticeIsometry::from_ambient(a2(), &shift3()).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_fixed_point_free());
        let direct = IntMatrix::identity(2).sub(g.matrix()).to_rat().inverse().unwrap();
        assert_eq!(g.one_minus_g_inverse().unwrap(), direct);
        let lam1 = vec![rat(2, 3), rat(-1, 3), rat(-1, 3)];
        let c = Coset::new(a2(), lam1).unwrap();
        assert!(g.stabilizes_coset(&c).unwrap());
    }

    #[test]
    fn not_an_isometry() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(LatticeIsometry::new(a2(), m).unwrap_err(), Error::NotAnIsometry);
    }

    #[test]
    fn fixed_and_coinvariant_of_permutation() {
        let z3 = Lattice::standard(3);
        let g = LatticeIsometry::from_ambient(z3, &shift3()).unwrap();
        let f = g.fixed_sublattice();
        let c = g.coinvariant_lattice();
        assert_eq!(f.rank(), 1);
        assert_eq!(c, a2());
        let gc = g.restrict(&c).unwrap();
        assert!(gc.is_fixed_point_free());
    }

    #[test]
    fn one_minus_g_images_on_a2() {
        let g = LatticeIsometry::from_ambient(a2(), &shift3()).unwrap();
        let l = a2();
        let a = g.one_minus_g_image(&l, 1).unwrap();
        let b = g.inverse().one_minus_g_image(&l, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(quotient_invariants(&l, &a).unwrap(), vec![Int::from(3)]);
        // ((1−g)L)* = (1−g)⁻¹ L*
        let lhs = a.dual();
        let inv = g.one_minus_g_inverse().unwrap();
        let rows: Vec<Vec<Rat>> = l
            .dual()
            .basis()
            .rows_iter()
            .map(|v| {
                let x = l.coordinates(v).unwrap();
                l.vector(&inv.mul_vec(&x))
            })
            .collect();
        let rhs = Lattice::span(&RatMatrix::from_rows(rows, 3).unwrap(), rat(1, 1));
        assert_eq!(lhs, rhs);
        // (1−g)L* = L for the Coxeter element of A_2.
        assert_eq!(g.one_minus_g_image(&l.dual(), 1).unwrap(), l);
        assert_eq!(g.r_lattice(1).unwrap(), l);
    }

    #[test]
    fn json_roundtrip() {
        let g = LatticeIsometry::from_ambient(a2(), &shift3()).unwrap();
        let j = g.to_json();
        assert_eq!(LatticeIsometry::from_json(&j).unwrap(), g);
    }
}
