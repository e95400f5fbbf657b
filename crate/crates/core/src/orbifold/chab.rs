//! Recovering a code, a base and an exponent vector from a rootless lattice
//! whose overlattice `Span{λ, L}` has `pm` roots.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::codes::{weight, CodeJson, CodeZp};
use crate::construction::ZpContext;
use crate::error::{Error, Result};
use crate::exact::{format_rat, is_integer, rat, Rat, RatMatrix};
use crate::isometry::LatticeIsometry;
use crate::lattice::{index, Lattice};
use crate::roots::{decompose_root_set, RootComponent};

/// Output of [`chab_extract`].
#[derive(Clone, Debug)]
pub struct ChabExtraction {
    pub p: u64,
    pub t: usize,
    pub code: CodeZp,
    pub e: Vec<u64>,
    /// One affine diagram per component: `α_1, …, α_{p−1}, α_0`.
    pub diagrams: Vec<Vec<Vec<Rat>>>,
    /// `Span{λ, L}`.
    pub overlattice: Lattice,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChabWitness {
    pub code: CodeJson,
    pub e: Vec<u64>,
    pub base: Vec<Vec<Vec<String>>>,
}

impl ChabExtraction {
    pub fn witness(&self) -> ChabWitness {
        ChabWitness {
            code: self.code.to_json(),
            e: self.e.clone(),
            base: self
                .diagrams
                .iter()
                .map(|d| {
                    d[..d.len() - 1]
                        .iter()
                        .map(|v| v.iter().map(format_rat).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

const ROTATION_BUDGET: u64 = 1_000_000;

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn scaled(v: &[Rat], k: i64) -> Vec<Rat> {
    let k = rat(k, 1);
    v.iter().map(|x| x * &k).collect()
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Norm-2 vectors of `λ + L`.
pub fn coset_roots(l: &Lattice, lambda: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let two = rat(2, 1);
    Ok(l.enumerate_up_to_norm(&two, Some(lambda))?
        .into_iter()
        .filter(|v| l.norm(v) == two)
        .collect())
}

/// `|N(2)|` for `N = Span{λ, L}` when `L` is rootless and `pλ ∈ L`.
pub fn overlattice_root_count(l: &Lattice, lambda: &[Rat], p: u64) -> Result<u64> {
    let two = rat(2, 1);
    let mut total = 0;
    for j in 1..p as i64 {
        let counts = l.count_by_norm(&two, Some(&scaled(lambda, j)))?;
        total += counts.get(&two).copied().unwrap_or(0);
    }
    Ok(total)
}

/// Checks the standing assumptions on `(L, g)`: `g` acts on `L`, has odd
/// prime order `p` and no fixed points, and `L` is even and rootless.
pub(crate) fn check_pair(l: &Lattice, g: &LatticeIsometry) -> Result<u64> {
    if g.lattice() != l {
        return Err(Error::DimensionMismatch("isometry acts on a different lattice".into()));
    }
    let p = g.order();
    if !crate::isometry::is_prime(p) {
        return Err(Error::OrderNotPrime(p));
    }
    if !g.is_fixed_point_free() {
        return Err(Error::NotFixedPointFree);
    }
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    if !l.is_rootless()? {
        return Err(Error::HasRoots);
    }
    Ok(p)
}

/// Reads off `(C, e, Δ)` with `Span{λ, L} ≅ L_A(C)`, `L ≅ L_B(C)` and
/// `g ↔ g_{Δ,e}`, and verifies all three identifications.
pub fn chab_extract(l: &Lattice, g: &LatticeIsometry, lambda: &[Rat]) -> Result<ChabExtraction> {
    let p = check_pair(l, g)?;
    if p == 2 {
        return Err(precondition("the code extractor needs an odd prime order"));
    }
    let m = l.rank();
    let pu = p as usize;
    if lambda.len() != l.ambient_dim() || !l.in_span(lambda) {
        return Err(Error::NotInSpan);
    }
    if l.contains(lambda) {
        return Err(precondition("λ lies in L"));
    }
    if !l.contains(&scaled(lambda, p as i64)) {
        return Err(precondition("pλ is not in L"));
    }
    if !l.contains(&sub(lambda, &g.apply(lambda)?)) {
        return Err(precondition("g does not stabilize λ + L"));
    }
    let n2 = overlattice_root_count(l, lambda, p)?;
    if n2 != p * m as u64 {
        return Err(precondition(format!("|N(2)| = {n2} but pm = {}", p * m as u64)));
    }
    let t = m / (pu - 1);
    let x = coset_roots(l, lambda)?;
    let dec = decompose_root_set(&x, pu, |a, b| l.inner(a, b))?;
    if !dec.leftover.is_empty() || dec.components.len() != t || t * (pu - 1) != m {
        return Err(Error::NotTypeAConfiguration(format!(
            "{} affine diagrams and {} stray roots for rank {m}",
            dec.components.len(),
            dec.leftover.len()
        )));
    }
    let mut diagrams: Vec<Vec<Vec<Rat>>> = dec
        .components
        .iter()
        .map(|RootComponent { base, negated_highest }| {
            let mut d = base.clone();
            d.push(negated_highest.clone());
            d
        })
        .collect();

    let n = l.glue(&[lambda.to_vec()])?;
    let shifts = align_rotations(l, &n, lambda, &diagrams, p)?;
    for (d, s) in diagrams.iter_mut().zip(shifts) {
        d.rotate_left(s);
    }
    let simple: Vec<Vec<Rat>> = diagrams.iter().flat_map(|d| d[..pu - 1].to_vec()).collect();
    let r = Lattice::span(
        &RatMatrix::from_rows(simple.clone(), l.ambient_dim())?,
        l.inner_scale().clone(),
    );
    if r.rank() != m {
        return Err(Error::NotTypeAConfiguration("roots do not span".into()));
    }

    // Code coordinate x(v)_i = Σ_j j·(v|α^i_j) mod p.
    let coord = |v: &[Rat]| -> Result<Vec<i64>> {
        diagrams
            .iter()
            .map(|d| {
                let s: Rat = (1..pu).map(|j| rat(j as i64, 1) * l.inner(v, &d[j - 1])).sum();
                if !is_integer(&s) {
                    return Err(Error::NotTypeAConfiguration(
                        "overlattice does not pair integrally with the roots".into(),
                    ));
                }
                let z = (s.to_integer() % p as i64).to_i64().unwrap_or(0);
                Ok(z.rem_euclid(p as i64))
            })
            .collect()
    };
    let rows = n.basis().rows_iter().map(|b| coord(b)).collect::<Result<Vec<_>>>()?;
    let code = CodeZp::new(p, t, &rows)?;
    let nr = index(&r, &n)?;
    if nr != num_traits::pow(crate::exact::int(p as i64), code.dim()) {
        return Err(Error::InvariantMismatch(format!(
            "|N : R| = {nr} does not match a code of dimension {}",
            code.dim()
        )));
    }

    let mut e = Vec::with_capacity(t);
    for (i, d) in diagrams.iter().enumerate() {
        let img = g.apply(&d[0])?;
        let ei = d
            .iter()
            .position(|v| *v == img)
            .ok_or_else(|| Error::NotTypeAConfiguration(format!("g moves diagram {i} onto another diagram")))?;
        for w in 0..pu {
            if g.apply(&d[w])? != d[(w + ei) % pu] {
                return Err(Error::NotTypeAConfiguration(format!(
                    "g is not a rotation of diagram {i}"
                )));
            }
        }
        e.push(ei as u64);
    }

    let out = ChabExtraction {
        p,
        t,
        code,
        e,
        diagrams,
        overlattice: n,
    };
    certify(l, g, &out, &simple)?;
    Ok(out)
}

/// Chooses for each diagram the starting root so that the induced
/// `χ_Δ`-integral part of `N` is exactly `L`.
///
/// `p(v|χ_Δ) = Σ_i Σ_k k(p−k)/2 · (v|α^i_k)`, and `L` is the kernel of the
/// functional `v ↦ a` where `v ∈ aλ + L`.
fn align_rotations(l: &Lattice, n: &Lattice, lambda: &[Rat], diagrams: &[Vec<Vec<Rat>>], p: u64) -> Result<Vec<usize>> {
    let pu = p as usize;
    let t = diagrams.len();
    if (pu as f64).powi(t as i32) > ROTATION_BUDGET as f64 {
        return Err(Error::BudgetExceeded(format!(
            "{pu}^{t} diagram rotations exceed {ROTATION_BUDGET}"
        )));
    }
    let basis: Vec<&[Rat]> = n.basis().rows_iter().collect();
    let target = basis
        .iter()
        .map(|b| {
            (0..p as i64)
                .find(|&a| l.contains(&sub(b, &scaled(lambda, a))))
                .ok_or_else(|| precondition("N is not generated by λ over L"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mod_p = |r: Rat| -> Result<i64> {
        if !is_integer(&r) {
            return Err(Error::NotTypeAConfiguration(
                "overlattice does not pair integrally with the roots".into(),
            ));
        }
        Ok((r.to_integer() % p as i64).to_i64().unwrap_or(0).rem_euclid(p as i64))
    };
    // table[i][s][b]
    let mut table = vec![vec![vec![0i64; basis.len()]; pu]; t];
    for (i, d) in diagrams.iter().enumerate() {
        for s in 0..pu {
            for (bi, b) in basis.iter().enumerate() {
                let v: Rat = (1..pu)
                    .map(|k| rat((k * (pu - k) / 2) as i64, 1) * l.inner(b, &d[(k - 1 + s) % pu]))
                    .sum();
                table[i][s][bi] = mod_p(v)?;
            }
        }
    }
    let mut shifts = vec![0usize; t];
    loop {
        let ok = (0..basis.len()).all(|bi| {
            let v: i64 = (0..t).map(|i| table[i][shifts[i]][bi]).sum();
            v.rem_euclid(p as i64) == target[bi]
        });
        if ok {
            return Ok(shifts);
        }
        let mut i = t;
        loop {
            if i == 0 {
                return Err(Error::NotTypeAConfiguration(
                    "no choice of bases realizes L as the χ-integral part".into(),
                ));
            }
            i -= 1;
            shifts[i] += 1;
            if shifts[i] < pu {
                break;
            }
            shifts[i] = 0;
        }
    }
}

/// Transports `N`, `L` and `g` to the standard model and compares them with
/// `L_A(C)`, `L_B(C)` and `g_{Δ,e}`.
fn certify(l: &Lattice, g: &LatticeIsometry, x: &ChabExtraction, simple: &[Vec<Rat>]) -> Result<()> {
    let pu = x.p as usize;
    let ctx = ZpContext::new(x.p, x.t)?;
    let dim = pu * x.t;
    let a = RatMatrix::from_rows(simple.to_vec(), l.ambient_dim())?;
    let s = RatMatrix::from_fn(simple.len(), dim, |row, col| {
        let (i, j) = (row / (pu - 1), row % (pu - 1));
        if col == i * pu + j {
            rat(1, 1)
        } else if col == i * pu + j + 1 {
            rat(-1, 1)
        } else {
            Rat::zero()
        }
    });
    let phi = |v: &[Rat]| -> Result<Vec<Rat>> {
        let c = a.solve_left(v).ok_or(Error::NotInSpan)?;
        Ok(s.vec_mul(&c))
    };
    let scale = ctx.context().root_lattice().inner_scale().clone();
    let image = |lat: &Lattice| -> Result<Lattice> {
        let rows = lat.basis().rows_iter().map(|b| phi(b)).collect::<Result<Vec<_>>>()?;
        Ok(Lattice::span(&RatMatrix::from_rows(rows, dim)?, scale.clone()))
    };
    let mismatch = |what: &str| Error::InvariantMismatch(format!("extracted data: {what}"));
    if image(&x.overlattice)? != ctx.construct_a(&x.code)? {
        return Err(mismatch("overlattice is not L_A(C)"));
    }
    if image(l)? != ctx.construct_b(&x.code)? {
        return Err(mismatch("lattice is not L_B(C)"));
    }
    let ge = ctx.context().g_delta_e_ambient(&x.e)?;
    for b in l.basis().rows_iter() {
        if phi(&g.apply(b)?)? != ge.vec_mul(&phi(b)?) {
            return Err(mismatch("isometry is not g_{Δ,e}"));
        }
    }
    if weight(&x.e) != x.t || !x.code.dual_code().contains(&x.e) {
        return Err(mismatch("e is not a full-weight word of the dual code"));
    }
    Ok(())
}
