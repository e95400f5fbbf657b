//! Lattices given by an exact rational basis in a scaled ambient space.

pub mod enumerate;
pub mod reduce;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    common_denominator, format_rat, integer_left_kernel, parse_rat, rat_int, row_basis, snf, Int, IntMatrix, Rat,
    RatMatrix,
};
use enumerate::{Triangular, Visit};

/// A lattice: the ℤ-span of the rows of `basis` inside ℚ^n, with inner
/// product `s·(x·y)` for `s = inner_scale`.
///
/// The basis is always stored in Hermite normal form, so two lattices are
/// equal exactly when their stored bases are.
#[derive(Clone)]
pub struct Lattice {
    ambient_dim: usize,
    inner_scale: Rat,
    basis: RatMatrix,
    cache: Arc<Cache>,
}

#[derive(Default)]
struct Cache {
    coord_map: OnceLock<RatMatrix>,
    reduction: OnceLock<Result<Reduction>>,
}

/// LLL data used by enumeration.
struct Reduction {
    /// `reduced basis = h · basis`.
    h: IntMatrix,
    h_inv: IntMatrix,
    /// Common denominator making the Gram matrix integral.
    denom: Int,
    /// Diagonal of the scaled reduced Gram matrix.
    diag: Vec<Int>,
    tri: Triangular,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.inner_scale == other.inner_scale && self.basis == other.basis
    }
}

impl Eq for Lattice {}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice")
            .field("ambient_dim", &self.ambient_dim)
            .field("rank", &self.rank())
            .field("inner_scale", &format_rat(&self.inner_scale))
            .finish()
    }
}

fn canonical_basis(gens: &RatMatrix) -> RatMatrix {
    let (d, m) = gens.to_int_scaled();
    let h = row_basis(&m);
    let dr = rat_int(&d);
    h.map(|x| rat_int(x) / &dr)
}

impl Lattice {
    fn build(ambient_dim: usize, inner_scale: Rat, basis: RatMatrix) -> Self {
        Lattice {
            ambient_dim,
            inner_scale,
            basis,
            cache: Arc::new(Cache::default()),
        }
    }

    /// Lattice with the given independent basis rows.
    pub fn new(basis: RatMatrix, inner_scale: Rat) -> Result<Self> {
        if !inner_scale.is_positive() {
            return Err(Error::Precondition("inner_scale must be positive".into()));
        }
        if basis.rank() != basis.nrows() {
            return Err(Error::DependentBasis);
        }
        let n = basis.ncols();
        Ok(Self::build(n, inner_scale, canonical_basis(&basis)))
    }

    /// ℤ-span of arbitrary (possibly dependent) generators.
    pub fn span(gens: &RatMatrix, inner_scale: Rat) -> Self {
        let n = gens.ncols();
        let basis = if gens.nrows() == 0 {
            RatMatrix::zeros(0, n)
        } else {
            canonical_basis(gens)
        };
        Self::build(n, inner_scale, basis)
    }

    pub fn from_int_rows(rows: &[Vec<i64>], inner_scale: Rat) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows).to_rat(), inner_scale)
    }

    /// ℤ^n with the standard inner product.
    pub fn standard(n: usize) -> Self {
        Self::build(n, Rat::one(), RatMatrix::identity(n))
    }

    pub fn zero(ambient_dim: usize, inner_scale: Rat) -> Self {
        Self::build(ambient_dim, inner_scale, RatMatrix::zeros(0, ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn inner_scale(&self) -> &Rat {
        &self.inner_scale
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        crate::exact::dot(x, y) * &self.inner_scale
    }

    pub fn norm(&self, x: &[Rat]) -> Rat {
        self.inner(x, x)
    }

    pub fn gram(&self) -> RatMatrix {
        self.basis.mul(&self.basis.transpose()).scale(&self.inner_scale)
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> Rat {
        self.gram().det()
    }

    pub fn is_integral(&self) -> bool {
        self.gram().to_int().is_some()
    }

    pub fn is_even(&self) -> bool {
        match self.gram().to_int() {
            Some(g) => (0..g.nrows()).all(|i| num_integer::Integer::is_even(&g[(i, i)])),
            None => false,
        }
    }

    fn coord_map(&self) -> &RatMatrix {
        self.cache.coord_map.get_or_init(|| {
            if self.rank() == 0 {
                return RatMatrix::zeros(self.ambient_dim, 0);
            }
            let bbt = self.basis.mul(&self.basis.transpose());
            let inv = bbt.inverse().expect("basis rows are independent");
            self.basis.transpose().mul(&inv)
        })
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let x = self.coord_map().vec_mul(v);
        if self.basis.vec_mul(&x) == v {
            Some(x)
        } else {
            None
        }
    }

    pub fn in_span(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v)
            .is_some_and(|x| x.iter().all(crate::exact::is_integer))
    }

    /// Integer coordinates of a lattice vector.
    pub fn int_coordinates(&self, v: &[Rat]) -> Option<Vec<Int>> {
        let x = self.coordinates(v)?;
        x.iter()
            .map(|c| crate::exact::is_integer(c).then(|| c.to_integer()))
            .collect()
    }

    /// Vector with the given basis coordinates.
    pub fn vector(&self, coords: &[Rat]) -> Vec<Rat> {
        self.basis.vec_mul(coords)
    }

    pub fn vector_int(&self, coords: &[Int]) -> Vec<Rat> {
        let c: Vec<Rat> = coords.iter().map(rat_int).collect();
        self.basis.vec_mul(&c)
    }

    /// Errors with the first basis vector of `self` not contained in `other`.
    pub fn check_contained_in(&self, other: &Lattice) -> Result<()> {
        for (i, row) in self.basis.rows_iter().enumerate() {
            if !other.contains(row) {
                return Err(Error::NotContained { index: i });
            }
        }
        Ok(())
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.check_contained_in(other).is_ok()
    }

    fn same_ambient(&self, other: &Lattice) -> Result<()> {
        if self.ambient_dim != other.ambient_dim || self.inner_scale != other.inner_scale {
            return Err(Error::DimensionMismatch(
                "lattices live in different ambient spaces".into(),
            ));
        }
        Ok(())
    }

    /// The dual lattice `{x ∈ ℚL : (x|L) ⊆ ℤ}`.
    pub fn dual(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let ginv = self.gram().inverse().expect("Gram matrix is nonsingular");
        Self::build(
            self.ambient_dim,
            self.inner_scale.clone(),
            canonical_basis(&ginv.mul(&self.basis)),
        )
    }

    /// ℤ-span of `self` and the extra vectors.
    pub fn glue(&self, vectors: &[Vec<Rat>]) -> Result<Lattice> {
        for v in vectors {
            if v.len() != self.ambient_dim {
                return Err(Error::DimensionMismatch("glue vector length".into()));
            }
            if !self.in_span(v) {
                return Err(Error::NotInSpan);
            }
        }
        let extra = RatMatrix::from_rows(vectors.to_vec(), self.ambient_dim)?;
        Ok(Self::span(&self.basis.vstack(&extra)?, self.inner_scale.clone()))
    }

    /// Like [`Lattice::glue`] but insists that the result is integral.
    pub fn glue_integral(&self, vectors: &[Vec<Rat>]) -> Result<Lattice> {
        let l = self.glue(vectors)?;
        if !l.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(l)
    }

    /// `self + other` (no span restriction).
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.same_ambient(other)?;
        Ok(Self::span(&self.basis.vstack(&other.basis)?, self.inner_scale.clone()))
    }

    /// `self ∩ other` for lattices spanning the same subspace.
    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        self.same_ambient(other)?;
        if self.rank() != other.rank() || other.basis.rows_iter().any(|r| !self.in_span(r)) {
            return Err(Error::DimensionMismatch(
                "intersection requires a common rational span".into(),
            ));
        }
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// `{α ∈ self : (α|S) = 0}`.
    pub fn orthogonal_complement(&self, s: &Lattice) -> Result<Lattice> {
        self.same_ambient(s)?;
        if s.rank() == 0 {
            return Ok(self.clone());
        }
        let pairing = self.basis.mul(&s.basis.transpose());
        let (_, m) = pairing.to_int_scaled();
        let k = integer_left_kernel(&m);
        let vecs = k.to_rat().mul(&self.basis);
        Ok(Self::span(&vecs, self.inner_scale.clone()))
    }

    /// Image of the lattice under an ambient linear map acting on row vectors.
    pub fn map_ambient(&self, m: &RatMatrix) -> Result<Lattice> {
        if m.nrows() != self.ambient_dim {
            return Err(Error::DimensionMismatch("ambient map".into()));
        }
        Ok(Self::span(&self.basis.mul(m), self.inner_scale.clone()))
    }

    /// Orthogonal sum in the direct sum of the ambient spaces.
    pub fn orthogonal_sum(parts: &[&Lattice]) -> Result<Lattice> {
        let Some(first) = parts.first() else {
            return Ok(Lattice::zero(0, Rat::one()));
        };
        if parts.iter().any(|p| p.inner_scale != first.inner_scale) {
            return Err(Error::DimensionMismatch("inner scales differ".into()));
        }
        let n: usize = parts.iter().map(|p| p.ambient_dim).sum();
        let mut rows = Vec::new();
        let mut offset = 0;
        for p in parts {
            for r in p.basis.rows_iter() {
                let mut v = vec![Rat::zero(); n];
                v[offset..offset + p.ambient_dim].clone_from_slice(r);
                rows.push(v);
            }
            offset += p.ambient_dim;
        }
        let b = RatMatrix::from_rows(rows, n)?;
        Ok(Self::build(n, first.inner_scale.clone(), canonical_basis(&b)))
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        DiscriminantGroup::new(self)
    }

    fn reduction(&self) -> Result<&Reduction> {
        self.cache
            .reduction
            .get_or_init(|| {
                let (denom, gram) = self.gram().to_int_scaled();
                let lll = reduce::lll_gram(&gram)?;
                let tri = Triangular::new(&lll.reduced)?;
                let diag = (0..lll.reduced.nrows()).map(|i| lll.reduced[(i, i)].clone()).collect();
                let h_inv = lll.h.to_rat().inverse()?.to_int().ok_or(Error::Singular)?;
                Ok(Reduction {
                    h: lll.h,
                    h_inv,
                    denom,
                    diag,
                    tri,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// LLL-reduced basis of the lattice.
    pub fn reduced_basis(&self) -> Result<RatMatrix> {
        let r = self.reduction()?;
        Ok(r.h.to_rat().mul(&self.basis))
    }

    /// Visits every vector `v ∈ rep + L` with `(v|v) ≤ bound`.
    ///
    /// The visitor receives the vector's coordinates in the basis of `self`
    /// (shifted by the coordinates of `rep`) and its exact norm.
    pub fn visit_short_vectors<F>(&self, bound: &Rat, rep: Option<&[Rat]>, mut visit: F) -> Result<()>
    where
        F: FnMut(&ShortVector) -> Visit,
    {
        let n = self.rank();
        let red = self.reduction()?;
        let (f, phi, shift) = match rep {
            None => (Int::one(), vec![Int::zero(); n], vec![Rat::zero(); n]),
            Some(r) => {
                let c = self.coordinates(r).ok_or(Error::NotInSpan)?;
                // Coordinates of rep in the reduced basis.
                let cr = red.h_inv.to_rat().vec_mul(&c);
                let f = common_denominator(cr.iter());
                let phi = cr.iter().map(|x| (x * rat_int(&f)).to_integer()).collect();
                (f, phi, c)
            }
        };
        // Norm = yᵀ A y / (denom · F²) with y = F·z + φ.
        let scale = rat_int(&red.denom) * rat_int(&(&f * &f));
        let h = &red.h;
        enumerate::enumerate(&red.tri, &f, &phi, bound, &scale, |z, e| {
            let norm = rat_int(e) / &scale;
            let sv = ShortVector {
                z,
                h,
                shift: &shift,
                norm,
            };
            visit(&sv)
        })
    }

    /// All vectors of `rep + L` (or `L`) with norm at most `bound`, sorted
    /// lexicographically by ambient coordinates.
    pub fn enumerate_up_to_norm(&self, bound: &Rat, rep: Option<&[Rat]>) -> Result<Vec<Vec<Rat>>> {
        let mut out = Vec::new();
        let base = rep.map(|r| r.to_vec());
        self.visit_short_vectors(bound, rep, |sv| {
            let coords = sv.lattice_offset();
            let mut v = self.vector_int(&coords);
            if let Some(b) = &base {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += y;
                }
            }
            out.push(v);
            Visit::Continue
        })?;
        out.sort();
        Ok(out)
    }

    /// Number of vectors of each norm up to `bound`.
    pub fn count_by_norm(&self, bound: &Rat, rep: Option<&[Rat]>) -> Result<BTreeMap<Rat, u64>> {
        let mut counts = BTreeMap::new();
        self.visit_short_vectors(bound, rep, |sv| {
            *counts.entry(sv.norm.clone()).or_insert(0) += 1;
            Visit::Continue
        })?;
        Ok(counts)
    }

    /// Minimum norm of `rep + L` together with the number of vectors attaining it.
    pub fn coset_minimum(&self, rep: &[Rat]) -> Result<(Rat, u64)> {
        // Any coset vector gives an upper bound; use the rep reduced in the
        // LLL basis.
        let c = self.coordinates(rep).ok_or(Error::NotInSpan)?;
        let red = self.reduction()?;
        let cr = red.h_inv.to_rat().vec_mul(&c);
        let rounded: Vec<Rat> = cr.iter().map(|x| x - rat_int(&crate::exact::round_rat(x))).collect();
        let start = self.norm(&red.h.to_rat().mul(&self.basis).vec_mul(&rounded));
        let mut best: Option<Rat> = None;
        let mut count = 0u64;
        self.visit_short_vectors(&start, Some(rep), |sv| match &best {
            Some(b) if sv.norm == *b => {
                count += 1;
                Visit::Continue
            }
            Some(b) if sv.norm > *b => Visit::Continue,
            _ => {
                best = Some(sv.norm.clone());
                count = 1;
                Visit::Shrink(sv.norm.clone())
            }
        })?;
        Ok((best.expect("coset is nonempty"), count))
    }

    pub fn minimum_norm(&self) -> Result<Option<Rat>> {
        if self.rank() == 0 {
            return Ok(None);
        }
        let red = self.reduction()?;
        let start = (0..self.rank())
            .map(|i| rat_int(&red.diag[i]) / rat_int(&red.denom))
            .min()
            .expect("rank > 0");
        let mut best: Option<Rat> = None;
        self.visit_short_vectors(&start, None, |sv| {
            if sv.norm.is_zero() {
                return Visit::Continue;
            }
            if best.as_ref().map_or(true, |b| sv.norm < *b) {
                best = Some(sv.norm.clone());
                return Visit::Shrink(sv.norm.clone());
            }
            Visit::Continue
        })?;
        Ok(best)
    }

    /// Number of norm-2 vectors.
    pub fn root_count(&self) -> Result<u64> {
        let two = Rat::from_integer(Int::from(2));
        let counts = self.count_by_norm(&two, None)?;
        Ok(counts.get(&two).copied().unwrap_or(0))
    }

    pub fn is_rootless(&self) -> Result<bool> {
        Ok(self.root_count()? == 0)
    }

    /// Vectors of norm exactly 2.
    pub fn roots(&self) -> Result<Vec<Vec<Rat>>> {
        let two = Rat::from_integer(Int::from(2));
        Ok(self
            .enumerate_up_to_norm(&two, None)?
            .into_iter()
            .filter(|v| self.norm(v) == two)
            .collect())
    }

    /// Counts of vectors of each even norm `0, 2, …, max_norm`.
    pub fn theta_prefix(&self, max_norm: u64) -> Result<Vec<(u64, u64)>> {
        if !self.is_even() && self.rank() > 0 {
            return Err(Error::NotEven);
        }
        let counts = self.count_by_norm(&Rat::from_integer(Int::from(max_norm)), None)?;
        Ok((0..=max_norm)
            .step_by(2)
            .map(|k| {
                let c = counts.get(&Rat::from_integer(Int::from(k))).copied().unwrap_or(0);
                (k, c)
            })
            .collect())
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            ambient_dim: self.ambient_dim,
            inner_scale: format_rat(&self.inner_scale),
            basis: self
                .basis
                .rows_iter()
                .map(|r| r.iter().map(format_rat).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self> {
        let rows = j
            .basis
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != j.ambient_dim) {
            return Err(Error::DimensionMismatch(
                "basis row length differs from ambient_dim".into(),
            ));
        }
        let b = RatMatrix::from_rows(rows, j.ambient_dim)?;
        Self::new(b, parse_rat(&j.inner_scale)?)
    }
}

/// One vector produced by [`Lattice::visit_short_vectors`].
pub struct ShortVector<'a> {
    z: &'a [i64],
    h: &'a IntMatrix,
    shift: &'a [Rat],
    pub norm: Rat,
}

impl ShortVector<'_> {
    /// Integer coordinates (in the basis of the lattice) of `v − rep`.
    pub fn lattice_offset(&self) -> Vec<Int> {
        // Reduced coordinates of v are z + φ/F and those of rep are φ/F.
        let z: Vec<Int> = self.z.iter().map(|&x| Int::from(x)).collect();
        self.h.vec_mul(&z)
    }

    /// Coordinates of `v` in the basis of the lattice.
    pub fn coordinates(&self) -> Vec<Rat> {
        self.lattice_offset()
            .iter()
            .zip(self.shift)
            .map(|(a, b)| rat_int(a) + b)
            .collect()
    }

    /// Coordinates of `v − rep` in the LLL-reduced basis.
    pub fn reduced_coordinates(&self) -> &[i64] {
        self.z
    }
}

/// Serialized form of a lattice.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeJson {
    pub ambient_dim: usize,
    pub inner_scale: String,
    pub basis: Vec<Vec<String>>,
}

/// A coset `rep + L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub lattice: Lattice,
    pub rep: Vec<Rat>,
}

impl Coset {
    pub fn new(lattice: Lattice, rep: Vec<Rat>) -> Result<Self> {
        if !lattice.in_span(&rep) {
            return Err(Error::NotInSpan);
        }
        Ok(Coset { lattice, rep })
    }

    pub fn minimum(&self) -> Result<(Rat, u64)> {
        self.lattice.coset_minimum(&self.rep)
    }

    /// Vectors of the coset with norm at most `bound`.
    pub fn vectors_up_to(&self, bound: &Rat) -> Result<Vec<Vec<Rat>>> {
        self.lattice.enumerate_up_to_norm(bound, Some(&self.rep))
    }
}

/// `D(L) = L*/L` with invariant factors `d_1 | … | d_k` (all ≥ 2) and
/// generators in `L*`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<Int>,
    pub generators: Vec<Vec<Rat>>,
    lattice: Lattice,
    /// Basis of `L*` adapted to `L`; the last `k` rows are the generators.
    adapted: Lattice,
    adapted_rows: RatMatrix,
    adapted_factors: Vec<Int>,
}

impl DiscriminantGroup {
    fn new(l: &Lattice) -> Result<Self> {
        let gram = l.gram().to_int().ok_or(Error::NotIntegral)?;
        let n = l.rank();
        // Coordinates of L's basis in the basis G⁻¹B of L*.
        let ginv = gram.to_rat().inverse()?;
        let dual_rows = ginv.mul(&l.basis);
        let r = snf(&gram);
        let v_inv = r.v.to_rat().inverse()?;
        let adapted_rows = v_inv.mul(&dual_rows);
        let diag = r.diagonal();
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        for i in 0..n {
            if diag[i] > Int::one() {
                invariant_factors.push(diag[i].clone());
                generators.push(adapted_rows.row(i).to_vec());
            }
        }
        let adapted = Lattice {
            ambient_dim: l.ambient_dim,
            inner_scale: l.inner_scale.clone(),
            basis: adapted_rows.clone(),
            cache: Arc::new(Cache::default()),
        };
        Ok(DiscriminantGroup {
            invariant_factors,
            generators,
            lattice: l.clone(),
            adapted,
            adapted_rows,
            adapted_factors: diag,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Sum `Σ a_i g_i` over the generators.
    pub fn element(&self, coeffs: &[Int]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.lattice.ambient_dim];
        for (a, g) in coeffs.iter().zip(&self.generators) {
            if a.is_zero() {
                continue;
            }
            let ar = rat_int(a);
            for (x, y) in v.iter_mut().zip(g) {
                *x += &ar * y;
            }
        }
        v
    }

    /// Coordinates of `v + L` in terms of the generators, reduced mod `d_i`.
    pub fn coords(&self, v: &[Rat]) -> Result<Vec<Int>> {
        let x = self.adapted.coordinates(v).ok_or(Error::NotInSpan)?;
        let k = self.adapted_factors.len() - self.invariant_factors.len();
        let mut out = Vec::with_capacity(self.invariant_factors.len());
        for (i, c) in x.iter().enumerate() {
            if !crate::exact::is_integer(c) {
                return Err(Error::Precondition("vector is not in the dual lattice".into()));
            }
            if i >= k {
                let d = &self.adapted_factors[i];
                out.push(num_integer::Integer::mod_floor(&c.to_integer(), d));
            }
        }
        Ok(out)
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = Int::from(p);
        self.invariant_factors
            .iter()
            .filter(|d| num_integer::Integer::is_multiple_of(*d, &p))
            .count()
    }

    /// `D(L) ≅ ℤ_p^k` for some `k ≥ 0`.
    pub fn is_elementary(&self, p: u64) -> bool {
        let p = Int::from(p);
        self.invariant_factors.iter().all(|d| *d == p)
    }

    /// Generators `(d_i/p)·g_i` of the `p`-torsion subgroup `{x : p·x = 0}`.
    pub fn p_torsion_generators(&self, p: u64) -> Vec<Vec<Rat>> {
        let pi = Int::from(p);
        self.invariant_factors
            .iter()
            .zip(&self.generators)
            .filter(|(d, _)| num_integer::Integer::is_multiple_of(*d, &pi))
            .map(|(d, g)| {
                let f = rat_int(&(d / &pi));
                g.iter().map(|x| x * &f).collect()
            })
            .collect()
    }

    /// Invariant factors as plain integers.
    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    /// Label such as `Z_3^6` or `Z_2 x Z_4`.
    pub fn label(&self) -> String {
        abelian_label(&self.factors_u64())
    }

    /// The adapted basis of `L*` (rows), whose last rows are the generators.
    pub fn adapted_dual_basis(&self) -> &RatMatrix {
        &self.adapted_rows
    }
}

/// Human-readable label for `⊕ ℤ_{d_i}`.
pub fn abelian_label(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "trivial".into();
    }
    let mut runs: Vec<(u64, usize)> = Vec::new();
    for &d in factors {
        match runs.last_mut() {
            Some((x, c)) if *x == d => *c += 1,
            _ => runs.push((d, 1)),
        }
    }
    runs.iter()
        .map(|&(d, c)| if c == 1 { format!("Z_{d}") } else { format!("Z_{d}^{c}") })
        .collect::<Vec<_>>()
        .join(" x ")
}

/// `|sup : sub|` for lattices of equal rank with `sub ⊆ sup`.
pub fn index(sub: &Lattice, sup: &Lattice) -> Result<Int> {
    sub.check_contained_in(sup)?;
    if sub.rank() != sup.rank() {
        return Err(Error::DimensionMismatch("index requires equal rank".into()));
    }
    if sub.rank() == 0 {
        return Ok(Int::one());
    }
    let coords: Vec<Vec<Int>> = sub
        .basis
        .rows_iter()
        .map(|r| sup.int_coordinates(r).expect("contained"))
        .collect();
    let m = IntMatrix::from_rows(coords, sup.rank())?;
    Ok(m.det().abs())
}
