#![allow(dead_code)]

use orbilat::exact::{rat, Int, Rat};
use orbilat::isometry::LatticeIsometry;
use orbilat::lattice::Lattice;

/// Exhaustive scan of D(L): classes λ + L with pλ ∈ L, stable under g, whose
/// overlattice Span{λ, L} has p·rank roots, counted coset by coset.
pub fn qualifying_cosets(l: &Lattice, g: &LatticeIsometry, p: u64) -> Vec<Vec<Rat>> {
    let d = l.discriminant_group().unwrap();
    let factors = d.factors_u64();
    let two = rat(2, 1);
    let m = l.rank() as u64;
    let total: u64 = factors.iter().product();
    let mut hits = Vec::new();
    for idx in 1..total {
        let mut x = idx;
        let coeffs: Vec<Int> = factors
            .iter()
            .map(|&f| {
                let c = x % f;
                x /= f;
                Int::from(c)
            })
            .collect();
        let v = d.element(&coeffs);
        let pv: Vec<Rat> = v.iter().map(|a| a * rat(p as i64, 1)).collect();
        if !l.contains(&pv) {
            continue;
        }
        let gv = g.apply(&v).unwrap();
        let diff: Vec<Rat> = v.iter().zip(&gv).map(|(a, b)| a - b).collect();
        if !l.contains(&diff) {
            continue;
        }
        let roots: u64 = (0..p)
            .map(|k| {
                let kv: Vec<Rat> = v.iter().map(|a| a * rat(k as i64, 1)).collect();
                l.count_by_norm(&two, Some(&kv))
                    .unwrap()
                    .get(&two)
                    .copied()
                    .unwrap_or(0)
            })
            .sum();
        if roots == p * m {
            hits.push(v);
        }
    }
    hits
}
