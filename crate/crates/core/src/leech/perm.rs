//! Permutations of the 24 Golay coordinates and the seeded search for
//! automorphisms with a prescribed cycle type.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GolayCode;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const SEARCH_BUDGET: u64 = 1_000_000;

const GENS_JSON: &str = include_str!("../../fixtures/golay_aut_gens.json");

#[derive(Deserialize)]
struct GenFixture {
    generators: Vec<NamedPerm>,
}

#[derive(Deserialize)]
struct NamedPerm {
    name: String,
    images: Vec<usize>,
}

/// Cycle type as `length → multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType(pub BTreeMap<usize, usize>);

impl CycleType {
    /// Parses `"1^6 3^6"`, `"1 23"` or `"1^2 11^2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut m = BTreeMap::new();
        for tok in s.split_whitespace() {
            let (len, mult) = match tok.split_once('^') {
                Some((a, b)) => (a, b),
                None => (tok, "1"),
            };
            let bad = || Error::Parse(format!("bad cycle type {s:?}"));
            let len: usize = len.parse().map_err(|_| bad())?;
            let mult: usize = mult.parse().map_err(|_| bad())?;
            if len == 0 || mult == 0 {
                return Err(bad());
            }
            *m.entry(len).or_insert(0) += mult;
        }
        Ok(CycleType(m))
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(l, c)| l * c).sum()
    }

    pub fn order(&self) -> usize {
        self.0.keys().fold(1, |acc, &l| acc.lcm(&l))
    }

    pub fn fixed_points(&self) -> usize {
        self.0.get(&1).copied().unwrap_or(0)
    }

    /// Number of cycles, i.e. the dimension of the fixed space on ℝ^n.
    pub fn cycles(&self) -> usize {
        self.0.values().sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, c)| if *c == 1 { l.to_string() } else { format!("{l}^{c}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn cycle_type(images: &[usize]) -> CycleType {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut m = BTreeMap::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        *m.entry(len).or_insert(0) += 1;
    }
    CycleType(m)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // First a, then b.
    a.iter().map(|&i| b[i]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn power(a: &[usize], mut e: usize) -> Vec<usize> {
    let mut acc: Vec<usize> = (0..a.len()).collect();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base);
        }
        base = compose(&base, &base);
        e >>= 1;
    }
    acc
}

/// A coordinate permutation preserving the Golay code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolayPermutation {
    /// `images[i]` is the image of coordinate `i`.
    pub images: Vec<usize>,
}

impl GolayPermutation {
    pub fn new(images: Vec<usize>, golay: &GolayCode) -> Result<Self> {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if images.len() != 24 || sorted != (0..24).collect::<Vec<_>>() {
            return Err(Error::Precondition("not a permutation of 24 points".into()));
        }
        if !golay.preserved_by(&images) {
            return Err(Error::Precondition(
                "permutation does not preserve the Golay code".into(),
            ));
        }
        Ok(GolayPermutation { images })
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(&self.images)
    }

    pub fn order(&self) -> usize {
        self.cycle_type().order()
    }
}

/// Fixture generators of the automorphism group, each re-verified.
pub fn golay_generators(golay: &GolayCode) -> Result<Vec<(String, GolayPermutation)>> {
    let fx: GenFixture =
        serde_json::from_str(GENS_JSON).map_err(|e| Error::CorruptFixture(format!("golay_aut_gens.json: {e}")))?;
    fx.generators
        .into_iter()
        .map(|g| {
            GolayPermutation::new(g.images, golay)
                .map(|p| (g.name.clone(), p))
                .map_err(|e| Error::CorruptFixture(format!("generator {:?}: {e}", g.name)))
        })
        .collect()
}

/// Seeded random walk over the group generated by the fixture permutations,
/// returning the first element (or suitable power of one) of the wanted
/// cycle type.
pub fn find_golay_automorphism(golay: &GolayCode, target: &CycleType, seed: u64) -> Result<GolayPermutation> {
    if target.degree() != 24 {
        return Err(Error::Precondition(format!(
            "cycle type {target} does not have degree 24"
        )));
    }
    let gens: Vec<Vec<usize>> = golay_generators(golay)?
        .into_iter()
        .flat_map(|(_, p)| {
            let inv = inverse(&p.images);
            [p.images, inv]
        })
        .collect();
    let order = target.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h: Vec<usize> = (0..24).collect();
    for _ in 0..SEARCH_BUDGET {
        let g = &gens[rng.gen_range(0..gens.len())];
        h = compose(&h, g);
        let n = cycle_type(&h).order();
        if n % order != 0 {
            continue;
        }
        let cand = power(&h, n / order);
        if cycle_type(&cand) == *target {
            return GolayPermutation::new(cand, golay);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no permutation of cycle type {target} within {SEARCH_BUDGET} products"
    )))
}
