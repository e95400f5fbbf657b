//! Deciding whether a rootless even lattice with a prime-order fixed-point
//! free isometry carries an extra automorphism in the orbifold.

use num_traits::Zero;
use serde::Serialize;

use super::chab::{chab_extract, check_pair, coset_roots, overlattice_root_count, ChabWitness};
use super::quadratic::{QuadraticSpaceFp, QuadraticType};
use crate::codes::weight;
use crate::error::{Error, Result};
use crate::exact::{rat, Int, Rat};
use crate::isometry::LatticeIsometry;
use crate::lattice::Lattice;

/// Largest number of discriminant elements scanned by the coset branches.
pub const COSET_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "B-construction(p=2)")]
    BinaryConstruction,
    #[serde(rename = "B-construction(p odd)")]
    OddConstruction,
    #[serde(rename = "Leech-11A")]
    Leech11A,
    #[serde(rename = "Leech-23A")]
    Leech23A,
    #[serde(rename = "none")]
    None,
}

impl Branch {
    pub fn is_construction(self) -> bool {
        matches!(self, Branch::BinaryConstruction | Branch::OddConstruction)
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::BinaryConstruction => "B-construction(p=2)",
            Branch::OddConstruction => "B-construction(p odd)",
            Branch::Leech11A => "Leech-11A",
            Branch::Leech23A => "Leech-23A",
            Branch::None => "none",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Invariants used to recognize the order-11 and order-23 coinvariant
/// lattices of the Leech lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeFingerprint {
    pub rank: usize,
    pub discriminant: String,
    pub quadratic_type: Option<QuadraticType>,
    pub rootless: bool,
    pub one_minus_g_dual_is_lattice: bool,
    /// Counts of norms `0, 2, 4, 6`, filled in only when the cheaper
    /// invariants already match a stored fingerprint.
    pub theta: Option<Vec<(u64, u64)>>,
}

/// Stored fingerprint of `Λ_{11A}`.
pub fn leech_11a_fingerprint() -> LatticeFingerprint {
    LatticeFingerprint {
        rank: 20,
        discriminant: "Z_11^2".into(),
        quadratic_type: Some(QuadraticType::Minus),
        rootless: true,
        one_minus_g_dual_is_lattice: true,
        theta: Some(vec![(0, 1), (2, 0), (4, 12540), (6, 471240)]),
    }
}

/// Stored fingerprint of `Λ_{23A}`.
pub fn leech_23a_fingerprint() -> LatticeFingerprint {
    LatticeFingerprint {
        rank: 22,
        discriminant: "Z_23".into(),
        quadratic_type: Some(QuadraticType::Minus),
        rootless: true,
        one_minus_g_dual_is_lattice: true,
        theta: Some(vec![(0, 1), (2, 0), (4, 35926), (6, 2040192)]),
    }
}

/// Fingerprint of `(L, g)` without the theta prefix.
pub fn lattice_fingerprint(l: &Lattice, g: &LatticeIsometry) -> Result<LatticeFingerprint> {
    let p = g.order();
    let d = l.discriminant_group()?;
    let quadratic_type = if p > 2 && d.is_elementary(p) && !d.is_trivial() && l.is_even() {
        Some(QuadraticSpaceFp::from_lattice(l, p)?.quadratic_type()?)
    } else {
        None
    };
    let one_minus = g.one_minus_g_image(&l.dual(), 1)?;
    Ok(LatticeFingerprint {
        rank: l.rank(),
        discriminant: d.label(),
        quadratic_type,
        rootless: l.is_rootless()?,
        one_minus_g_dual_is_lattice: one_minus == *l,
        theta: None,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `λ` in coordinates over the 2-torsion generators of `D(L)`.
    BinaryCoset {
        lambda: Vec<i64>,
        coset_roots: u64,
    },
    /// `λ` over the `p`-torsion generators, and the extracted data.
    Code {
        lambda: Vec<i64>,
        #[serde(flatten)]
        data: ChabWitness,
    },
    Invariants {
        matched: LatticeFingerprint,
    },
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtraAutVerdict {
    pub has_extra: bool,
    pub branch: Branch,
    pub witness: Witness,
    pub fingerprints: LatticeFingerprint,
}

/// Elements `Σ a_i h_i` of the `p`-torsion of `D(L)` in lexicographic order
/// of `(a_1, …, a_k)`, skipping zero; for odd `p` only those whose first
/// nonzero coefficient is 1, since `λ` and `sλ` span the same overlattice.
fn torsion_candidates(l: &Lattice, p: u64, mut visit: impl FnMut(&[u64], &[Rat]) -> Result<bool>) -> Result<()> {
    let d = l.discriminant_group()?;
    let gens = d.p_torsion_generators(p);
    let k = gens.len();
    let total = (0..k).try_fold(1u64, |a, _| a.checked_mul(p));
    if total.map_or(true, |n| n > COSET_BUDGET) {
        return Err(Error::BudgetExceeded(format!(
            "{p}-torsion of rank {k} exceeds {COSET_BUDGET} elements"
        )));
    }
    let mut a = vec![0u64; k];
    loop {
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            a[i] += 1;
            if a[i] < p {
                break;
            }
            a[i] = 0;
        }
        if a.iter().find(|&&x| x != 0) != Some(&1) && p != 2 {
            continue;
        }
        let mut v = vec![Rat::zero(); l.ambient_dim()];
        for (c, g) in a.iter().zip(&gens) {
            if *c == 0 {
                continue;
            }
            let cr = rat(*c as i64, 1);
            for (x, y) in v.iter_mut().zip(g) {
                *x += &cr * y;
            }
        }
        if visit(&a, &v)? {
            return Ok(());
        }
    }
}

fn as_i64(a: &[u64]) -> Vec<i64> {
    a.iter().map(|&x| x as i64).collect()
}

/// Runs the three criteria in order: binary cosets, odd-prime cosets with
/// code extraction, then Leech fingerprints for orders 11 and 23.
pub fn decide_extra(l: &Lattice, g: &LatticeIsometry) -> Result<ExtraAutVerdict> {
    let p = if g.order() == 2 {
        // The p = 2 branch does not go through the odd-prime extractor.
        if g.lattice() != l {
            return Err(Error::DimensionMismatch("isometry acts on a different lattice".into()));
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
        2
    } else {
        check_pair(l, g)?
    };
    let m = l.rank() as u64;
    let mut fingerprints = lattice_fingerprint(l, g)?;
    let two = rat(2, 1);

    if p == 2 {
        let mut found = None;
        torsion_candidates(l, 2, |a, v| {
            let n = l.count_by_norm(&two, Some(v))?.get(&two).copied().unwrap_or(0);
            if n == 2 * m {
                found = Some(Witness::BinaryCoset {
                    lambda: as_i64(a),
                    coset_roots: n,
                });
            }
            Ok(found.is_some())
        })?;
        if let Some(witness) = found {
            return Ok(ExtraAutVerdict {
                has_extra: true,
                branch: Branch::BinaryConstruction,
                witness,
                fingerprints,
            });
        }
    } else {
        let t = m / (p - 1);
        let mut found = None;
        torsion_candidates(l, p, |a, v| {
            let gv = g.apply(v)?;
            let diff: Vec<Rat> = v.iter().zip(&gv).map(|(x, y)| x - y).collect();
            if !l.contains(&diff) {
                return Ok(false);
            }
            // Each nonzero multiple of λ carries t affine diagrams of p roots.
            if coset_roots(l, v)?.len() as u64 != p * t {
                return Ok(false);
            }
            if overlattice_root_count(l, v, p)? != p * m {
                return Ok(false);
            }
            let x = chab_extract(l, g, v)?;
            if weight(&x.e) as u64 != t || !x.code.dual_code().contains(&x.e) {
                return Err(Error::InvariantMismatch(
                    "extracted exponent vector is not a full-weight dual codeword".into(),
                ));
            }
            found = Some(Witness::Code {
                lambda: as_i64(a),
                data: x.witness(),
            });
            Ok(true)
        })?;
        if let Some(witness) = found {
            return Ok(ExtraAutVerdict {
                has_extra: true,
                branch: Branch::OddConstruction,
                witness,
                fingerprints,
            });
        }
    }

    let stored = match p {
        11 => Some((leech_11a_fingerprint(), Branch::Leech11A)),
        23 => Some((leech_23a_fingerprint(), Branch::Leech23A)),
        _ => None,
    };
    if let Some((want, branch)) = stored {
        let cheap = LatticeFingerprint {
            theta: None,
            ..want.clone()
        };
        if fingerprints == cheap {
            fingerprints.theta = Some(l.theta_prefix(6)?);
            if fingerprints == want {
                return Ok(ExtraAutVerdict {
                    has_extra: true,
                    branch,
                    witness: Witness::Invariants { matched: want },
                    fingerprints,
                });
            }
        }
    }
    Ok(ExtraAutVerdict {
        has_extra: false,
        branch: Branch::None,
        witness: Witness::None,
        fingerprints,
    })
}

/// Number of nonzero `p`-torsion elements of `D(L)` whose coset contains a
/// norm-2 vector, by direct enumeration of every element; used as an
/// independent oracle for the coset search.
pub fn cosets_with_roots(l: &Lattice, p: u64) -> Result<u64> {
    let d = l.discriminant_group()?;
    let gens = d.p_torsion_generators(p);
    let k = gens.len() as u32;
    let two = rat(2, 1);
    let total = p
        .checked_pow(k)
        .filter(|&n| n <= COSET_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}-torsion of rank {k}")))?;
    let mut count = 0;
    for idx in 1..total {
        let mut x = idx;
        let mut v = vec![Rat::zero(); l.ambient_dim()];
        for g in &gens {
            let c = x % p;
            x /= p;
            let cr = Rat::from_integer(Int::from(c));
            for (a, b) in v.iter_mut().zip(g) {
                *a += &cr * b;
            }
        }
        if l.count_by_norm(&two, Some(&v))?.get(&two).copied().unwrap_or(0) > 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// The `g`-invariant sublattices of index `p` in `L` that contain
/// `(1 − g)L`, one per normalized functional on `L/(1 − g)L`, in
/// lexicographic order of the functional's values on the basis of `L`.
pub fn invariant_sublattices(l: &Lattice, g: &LatticeIsometry) -> Result<Vec<Lattice>> {
    let p = g.order();
    if !crate::isometry::is_prime(p) {
        return Err(Error::OrderNotPrime(p));
    }
    let q = g.one_minus_g_image(l, 1)?;
    let rows = q
        .basis()
        .rows_iter()
        .map(|r| {
            let c = l.int_coordinates(r).ok_or(Error::NotInSpan)?;
            Ok(c.iter()
                .map(|x| {
                    let m = x % Int::from(p);
                    num_traits::ToPrimitive::to_i64(&m).unwrap_or(0)
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let image = crate::codes::CodeZp::new(p, l.rank(), &rows)?;
    let functionals = image.dual_code();
    let mut ws: Vec<Vec<u64>> = functionals
        .codewords()?
        .into_iter()
        .filter(|w| w.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    ws.sort();
    let basis: Vec<&[Rat]> = l.basis().rows_iter().collect();
    let pr = rat(p as i64, 1);
    ws.iter()
        .map(|w| {
            let j0 = w.iter().position(|&x| x != 0).expect("nonzero functional");
            let mut gens: Vec<Vec<Rat>> = vec![basis[j0].iter().map(|x| x * &pr).collect()];
            for (k, b) in basis.iter().enumerate() {
                if k == j0 {
                    continue;
                }
                let c = rat(w[k] as i64, 1);
                gens.push(b.iter().zip(basis[j0]).map(|(x, y)| x - &c * y).collect());
            }
            let m = crate::exact::RatMatrix::from_rows(gens, l.ambient_dim())?;
            Ok(Lattice::span(&m, l.inner_scale().clone()))
        })
        .collect()
}
