//! Numeric orbifold invariants, discriminant forms and the decision
//! procedure for extra automorphisms.

pub mod chab;
pub mod decide;
pub mod quadratic;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rat, int, rat, Int, Rat};
use crate::isometry::LatticeIsometry;
use crate::lattice::{index, Lattice};

pub use chab::{chab_extract, ChabExtraction};
pub use decide::{decide_extra, Branch, ExtraAutVerdict};
pub use quadratic::{legendre, QuadraticSpaceFp, QuadraticType};

/// `ε = m(p+1)/(24p)`.
pub fn epsilon(p: u64, m: u64) -> Result<Rat> {
    if !crate::isometry::is_prime(p) || m == 0 {
        return Err(Error::OutOfRange(format!("need a prime p and m ≥ 1, got ({p}, {m})")));
    }
    Ok(rat((m * (p + 1)) as i64, (24 * p) as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParamCase {
    /// `ε = 1 − 1/p`.
    #[serde(rename = "1-1/p")]
    EpsilonBelowOne,
    /// `ε = 1`.
    #[serde(rename = "1")]
    EpsilonOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbifoldParams {
    pub p: u64,
    pub m: u64,
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: Rat,
    pub t: u64,
    /// Predicted `|D(L)|`.
    pub discriminant_order: u64,
    /// `log_p |D(L)|`.
    pub discriminant_rank: u32,
    pub case: ParamCase,
    /// Dimension of the code `C` with `L ≅ L_B(C)`, when such a code can
    /// exist.
    pub code_dim: Option<u32>,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

/// Witt index of `x_1² + … + x_t²` over `F_p`.
pub fn witt_index_sum_of_squares(p: u64, t: u64) -> u64 {
    if t % 2 == 1 {
        return (t - 1) / 2;
    }
    let disc = if (t / 2) % 2 == 1 { p - 1 } else { 1 };
    if legendre(disc, p) == 1 {
        t / 2
    } else {
        t / 2 - 1
    }
}

/// Rows `(m, |D(L)|)` allowed for an odd prime `p` in the case where the
/// twisted module carries the extra automorphism.
pub fn case2_parameter_table(p: u64) -> Result<Vec<OrbifoldParams>> {
    if p == 2 || !crate::isometry::is_prime(p) {
        return Err(Error::OutOfRange(format!("{p} is not an odd prime")));
    }
    let mut out = Vec::new();
    if 24 % (p + 1) != 0 {
        return Ok(out);
    }
    let candidates = [
        (24 * (p - 1) / (p + 1), ParamCase::EpsilonBelowOne),
        (24 * p / (p + 1), ParamCase::EpsilonOne),
    ];
    for (m, case) in candidates {
        if m % (p - 1) != 0 {
            continue;
        }
        let t = m / (p - 1);
        let (order, rank) = match case {
            ParamCase::EpsilonBelowOne => (p.pow(t as u32), t as u32),
            ParamCase::EpsilonOne => {
                let full = p.pow(t as u32);
                if full % (t * t) != 0 {
                    continue;
                }
                let d = full / (t * t);
                let mut r = 0;
                let mut x = d;
                while x % p == 0 {
                    x /= p;
                    r += 1;
                }
                if x != 1 {
                    continue;
                }
                (d, r)
            }
        };
        let code_dim = (t + 2)
            .checked_sub(rank as u64)
            .filter(|d| d % 2 == 0)
            .map(|d| d / 2)
            .filter(|&d| d <= witt_index_sum_of_squares(p, t))
            .map(|d| d as u32);
        out.push(OrbifoldParams {
            p,
            m,
            epsilon: epsilon(p, m)?,
            t,
            discriminant_order: order,
            discriminant_rank: rank,
            case,
            code_dim,
        });
    }
    Ok(out)
}

fn check_prime_fpf(l: &Lattice, g: &LatticeIsometry, s: u64) -> Result<u64> {
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
    if s == 0 || s >= p {
        return Err(Error::OutOfRange(format!("s = {s} must lie in 1..{p}")));
    }
    Ok(p)
}

/// `(dim T)² = [L : R_L^{g^s}]`.
pub fn dim_t_squared(l: &Lattice, g: &LatticeIsometry, s: u64) -> Result<Int> {
    check_prime_fpf(l, g, s)?;
    index(&g.r_lattice(s)?, l)
}

/// Exact integer square root, if any.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.sign() == num_bigint::Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `p^{−m/(p−1)}·|D(L)|·[L : R_L^{g^s}]`.
pub fn qdim_squared(l: &Lattice, g: &LatticeIsometry, s: u64) -> Result<Rat> {
    let p = check_prime_fpf(l, g, s)?;
    let m = l.rank() as u64;
    if m % (p - 1) != 0 {
        return Err(Error::InvariantMismatch(format!(
            "rank {m} is not divisible by {}",
            p - 1
        )));
    }
    let d = l.discriminant_group()?.order();
    let r = dim_t_squared(l, g, s)?;
    let denom = num_traits::pow(int(p as i64), (m / (p - 1)) as usize);
    Ok(Rat::new(d * r, denom))
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetWeight {
    pub coords: Vec<i64>,
    #[serde(serialize_with = "ser_rat")]
    pub weight: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConformalWeightReport {
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: Rat,
    /// Half the minimum norm of each coset of `D(L)`.
    pub untwisted: Vec<CosetWeight>,
    /// `ε + i/p` for `0 ≤ i ≤ p−1`.
    #[serde(serialize_with = "ser_rats")]
    pub ladder: Vec<Rat>,
    /// Every nonzero coset weight lies on the ladder.
    pub weights_on_ladder: bool,
    /// Some nonzero coset has a vector of even norm.
    pub has_singular_coset: bool,
}

fn ser_rats<S: serde::Serializer>(r: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(format_rat))
}

/// Untwisted weights of the `V_{λ+L}` and the twisted weight ladder.
pub fn conformal_weight_data(l: &Lattice, g: &LatticeIsometry) -> Result<ConformalWeightReport> {
    let p = check_prime_fpf(l, g, 1)?;
    if !g.one_minus_g_image(&l.dual(), 1)?.is_sublattice_of(l) {
        return Err(Error::Precondition("(1 - g)L* is not contained in L".into()));
    }
    let eps = epsilon(p, l.rank() as u64)?;
    let ladder: Vec<Rat> = (0..p).map(|i| &eps + rat(i as i64, p as i64)).collect();
    let on_ladder: BTreeSet<&Rat> = ladder.iter().collect();
    let d = l.discriminant_group()?;
    let factors = d.factors_u64();
    let total: u64 = factors.iter().product();
    if total > 1_000_000 {
        return Err(Error::BudgetExceeded(format!("|D(L)| = {total} cosets")));
    }
    let mut untwisted = Vec::with_capacity(total as usize);
    let mut coords = vec![0u64; factors.len()];
    let two = rat(2, 1);
    let mut all_on = true;
    let mut singular = false;
    loop {
        let c: Vec<Int> = coords.iter().map(|&x| Int::from(x)).collect();
        let rep = d.element(&c);
        let (min, _) = if coords.iter().all(|&x| x == 0) {
            (Rat::zero(), 1)
        } else {
            l.coset_minimum(&rep)?
        };
        let w = &min / &two;
        if !min.is_zero() {
            all_on &= on_ladder.contains(&w);
            singular |= (&min / &two).is_integer();
        }
        untwisted.push(CosetWeight {
            coords: coords.iter().map(|&x| x as i64).collect(),
            weight: w,
        });
        let mut i = factors.len();
        loop {
            if i == 0 {
                return Ok(ConformalWeightReport {
                    epsilon: eps,
                    untwisted,
                    ladder,
                    weights_on_ladder: all_on,
                    has_singular_coset: singular,
                });
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < factors[i] {
                break;
            }
            coords[i] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightOneDim {
    pub value: u64,
    pub equals_24: bool,
}

/// `rank Λ^h + (p−1)·rank Λ_h/(p−1)`.
pub fn orbifold_weight_one_dim(rank_fixed: u64, rank_coinv: u64, p: u64) -> Result<WeightOneDim> {
    if p < 2 || rank_coinv % (p - 1) != 0 {
        return Err(Error::Precondition(format!(
            "coinvariant rank {rank_coinv} is not divisible by p - 1"
        )));
    }
    let value = rank_fixed + (p - 1) * (rank_coinv / (p - 1));
    Ok(WeightOneDim {
        value,
        equals_24: value == 24,
    })
}

impl ConformalWeightReport {
    /// Whether `D(L)` is trivial, leaving only the vacuum weight.
    pub fn is_trivial(&self) -> bool {
        self.untwisted.len() == 1 && self.untwisted[0].weight.is_zero()
    }
}
