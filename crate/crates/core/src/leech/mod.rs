//! The binary Golay code and the Leech lattice.

pub mod coinvariant;
mod perm;

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix, Rat};
use crate::lattice::Lattice;

pub use coinvariant::{
    coinvariant_class, reconstruct_unimodular, reduce_binary_form, ClassTag, CoinvariantClass, PermutationIsometry,
};
pub use perm::{cycle_type, find_golay_automorphism, CycleType, GolayPermutation, DEFAULT_SEED, SEARCH_BUDGET};

const GOLAY_JSON: &str = include_str!("../../fixtures/golay.json");

#[derive(Deserialize)]
struct GolayFixture {
    length: usize,
    generators: Vec<Vec<u8>>,
}

/// The extended binary Golay code of length 24, as 24-bit masks.
#[derive(Clone, Debug)]
pub struct GolayCode {
    generators: Vec<u32>,
    words: Vec<u32>,
}

fn mask(row: &[u8]) -> u32 {
    row.iter()
        .enumerate()
        .fold(0, |m, (i, &b)| if b & 1 == 1 { m | (1 << i) } else { m })
}

impl GolayCode {
    /// Loads the fixture and re-verifies its defining properties.
    pub fn load() -> Result<Self> {
        let fx: GolayFixture =
            serde_json::from_str(GOLAY_JSON).map_err(|e| Error::CorruptFixture(format!("golay.json: {e}")))?;
        if fx.length != 24 || fx.generators.len() != 12 {
            return Err(Error::CorruptFixture("golay.json: wrong shape".into()));
        }
        if fx.generators.iter().any(|r| r.len() != 24 || r.iter().any(|&b| b > 1)) {
            return Err(Error::CorruptFixture("golay.json: entries must be 0/1".into()));
        }
        let generators: Vec<u32> = fx.generators.iter().map(|r| mask(r)).collect();
        let words = (0u32..1 << 12)
            .map(|s| {
                (0..12)
                    .filter(|i| s >> i & 1 == 1)
                    .fold(0, |acc, i| acc ^ generators[i])
            })
            .collect();
        let code = GolayCode { generators, words };
        code.verify()?;
        Ok(code)
    }

    fn verify(&self) -> Result<()> {
        let dist = self.weight_distribution();
        let expected: BTreeMap<u32, usize> = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)].into_iter().collect();
        if dist != expected {
            return Err(Error::CorruptFixture(format!(
                "golay.json: weight distribution {dist:?}"
            )));
        }
        if !self.is_self_dual() {
            return Err(Error::CorruptFixture("golay.json: not self-dual".into()));
        }
        if self.generators.iter().any(|g| g.count_ones() % 4 != 0) {
            return Err(Error::CorruptFixture("golay.json: not doubly even".into()));
        }
        Ok(())
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// All 4096 codewords.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn contains(&self, w: u32) -> bool {
        // Syndrome test against the self-dual generator set.
        self.generators.iter().all(|g| (g & w).count_ones() % 2 == 0)
    }

    pub fn weight_distribution(&self) -> BTreeMap<u32, usize> {
        let mut d = BTreeMap::new();
        for w in &self.words {
            *d.entry(w.count_ones()).or_insert(0) += 1;
        }
        d
    }

    /// `G·Gᵀ = 0 (mod 2)` and the generators are independent.
    pub fn is_self_dual(&self) -> bool {
        let orth = self
            .generators
            .iter()
            .all(|a| self.generators.iter().all(|b| (a & b).count_ones() % 2 == 0));
        let mut distinct = self.words.clone();
        distinct.sort_unstable();
        distinct.dedup();
        orth && distinct.len() == 4096
    }

    /// Whether the coordinate permutation `images` maps the code onto itself.
    pub fn preserved_by(&self, images: &[usize]) -> bool {
        self.generators.iter().all(|&g| {
            let img = (0..24)
                .filter(|&i| g >> i & 1 == 1)
                .fold(0u32, |m, i| m | 1 << images[i]);
            self.contains(img)
        })
    }
}

/// The Leech lattice in integer coordinates with inner product `x·y/8`.
pub fn build_leech(golay: &GolayCode) -> Result<Lattice> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &g in golay.generators() {
        rows.push((0..24).map(|i| if g >> i & 1 == 1 { 2 } else { 0 }).collect());
    }
    for i in 1..24 {
        let mut r = vec![0; 24];
        r[0] = 4;
        r[i] = 4;
        rows.push(r);
    }
    let mut r = vec![0; 24];
    r[0] = 4;
    r[1] = -4;
    rows.push(r);
    let mut r = vec![1; 24];
    r[0] = -3;
    rows.push(r);
    let gens = IntMatrix::from_i64_rows(&rows).to_rat();
    let leech = Lattice::span(&gens, rat(1, 8));
    if leech.rank() != 24 || leech.det() != Rat::from_integer(1.into()) || !leech.is_even() {
        return Err(Error::InvariantMismatch(
            "Leech lattice is not even unimodular of rank 24".into(),
        ));
    }
    Ok(leech)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golay_fixture_verifies() {
        let g = GolayCode::load().unwrap();
        assert_eq!(g.weight_distribution()[&8], 759);
        assert!(g.is_self_dual());
        assert!(g.generators().iter().all(|w| w.count_ones() % 4 == 0));
    }

    #[test]
    fn leech_is_even_unimodular() {
        let l = build_leech(&GolayCode::load().unwrap()).unwrap();
        assert_eq!(l.rank(), 24);
        assert_eq!(l.det(), rat(1, 1));
        assert!(l.is_even());
    }
}
