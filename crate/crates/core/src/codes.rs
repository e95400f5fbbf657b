//! Linear codes over ℤ_p, signed-permutation equivalence and exhaustive
//! classification of small self-orthogonal codes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::is_prime;

/// Largest codeword count enumerated by `weight_distribution` and friends.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// Candidate generator matrices examined by `classify_codes`.
pub const CLASSIFICATION_BUDGET: u64 = 2_000_000;

/// Matrices over ℤ_p, entries in `0..p`.
fn reduce(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduced row-echelon form over ℤ_p with zero rows removed.
fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64, cols: usize) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..cols {
                    rows[k][j] = (rows[k][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A linear code of length `t` over ℤ_p, kept in reduced row-echelon form so
/// that equal codes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeZp {
    p: u64,
    length: usize,
    gen: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub p: u64,
    pub length: usize,
    pub generators: Vec<Vec<i64>>,
}

impl CodeZp {
    pub fn new(p: u64, length: usize, rows: &[Vec<i64>]) -> Result<Self> {
        if !is_prime(p) || p > 1 << 20 {
            return Err(Error::OutOfRange(format!("code alphabet ℤ_{p} needs a small prime")));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != length) {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in a code of length {length}",
                r.len()
            )));
        }
        let rows = rows.iter().map(|r| r.iter().map(|&a| reduce(a, p)).collect()).collect();
        Ok(Self::from_reduced(p, length, rows))
    }

    fn from_reduced(p: u64, length: usize, rows: Vec<Vec<u64>>) -> Self {
        let (gen, pivots) = rref_mod(rows, p, length);
        CodeZp { p, length, gen, pivots }
    }

    pub fn zero(p: u64, length: usize) -> Result<Self> {
        Self::new(p, length, &[])
    }

    pub fn full(p: u64, length: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (0..length)
            .map(|i| (0..length).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(p, length, &rows)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.gen.len()
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.gen
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `p^dim`, saturating.
    pub fn size(&self) -> u64 {
        (0..self.dim()).fold(1u64, |a, _| a.saturating_mul(self.p))
    }

    /// `⟨a|b⟩ = Σ a_i b_i (mod p)`.
    pub fn pairing(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter().zip(b).fold(0, |s, (x, y)| (s + x * y) % self.p)
    }

    pub fn contains(&self, w: &[u64]) -> bool {
        if w.len() != self.length {
            return false;
        }
        // The RREF coefficients of w are its pivot entries.
        let mut r: Vec<u64> = w.iter().map(|x| x % self.p).collect();
        for (g, &c) in self.gen.iter().zip(&self.pivots) {
            let f = r[c];
            for (x, y) in r.iter_mut().zip(g) {
                *x = (*x + self.p * self.p - f * y) % self.p;
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn is_subcode_of(&self, other: &CodeZp) -> bool {
        self.p == other.p && self.length == other.length && self.gen.iter().all(|g| other.contains(g))
    }

    /// `C^⊥ = {d : ⟨c|d⟩ = 0 for all c ∈ C}`.
    pub fn dual_code(&self) -> CodeZp {
        let p = self.p;
        let free: Vec<usize> = (0..self.length).filter(|c| !self.pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; self.length];
                v[f] = 1;
                for (g, &c) in self.gen.iter().zip(&self.pivots) {
                    v[c] = (p - g[f]) % p;
                }
                v
            })
            .collect();
        Self::from_reduced(p, self.length, rows)
    }

    /// Every pair of generators, including each with itself, pairs to zero.
    pub fn is_self_orthogonal(&self) -> bool {
        self.gen
            .iter()
            .enumerate()
            .all(|(i, a)| self.gen[i..].iter().all(|b| self.pairing(a, b) == 0))
    }

    /// Binary codes only: every generator weight is divisible by 4 and the
    /// code is self-orthogonal, which together make every weight divisible by 4.
    pub fn is_doubly_even(&self) -> bool {
        self.p == 2 && self.is_self_orthogonal() && self.gen.iter().all(|g| weight(g) % 4 == 0)
    }

    /// Calls `f` on every codeword.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&[u64])) -> Result<()> {
        let size = self.size();
        if size > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "code has {size} codewords, limit {ENUMERATION_BUDGET}"
            )));
        }
        let k = self.dim();
        let mut coeffs = vec![0u64; k];
        let mut word = vec![0u64; self.length];
        loop {
            f(&word);
            // Odometer step, updating the word incrementally.
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(());
                }
                coeffs[i] += 1;
                for (x, g) in word.iter_mut().zip(&self.gen[i]) {
                    *x = (*x + g) % self.p;
                }
                if coeffs[i] < self.p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    pub fn codewords(&self) -> Result<Vec<Vec<u64>>> {
        let mut out = Vec::with_capacity(self.size() as usize);
        self.for_each_codeword(|w| out.push(w.to_vec()))?;
        Ok(out)
    }

    pub fn weight_distribution(&self) -> Result<BTreeMap<usize, u64>> {
        let mut d = BTreeMap::new();
        self.for_each_codeword(|w| *d.entry(weight(w)).or_insert(0) += 1)?;
        Ok(d)
    }

    pub fn max_weight_in_dual(&self) -> Result<usize> {
        let d = self.dual_code().weight_distribution()?;
        Ok(*d.keys().next_back().unwrap_or(&0))
    }

    /// A codeword of the largest weight, the lexicographically first among
    /// those.
    pub fn max_weight_word(&self) -> Result<Vec<u64>> {
        let mut best: Option<Vec<u64>> = None;
        self.for_each_codeword(|w| {
            let better = match &best {
                None => true,
                Some(b) => {
                    let (wa, wb) = (weight(w), weight(b));
                    wa > wb || (wa == wb && w < b.as_slice())
                }
            };
            if better {
                best = Some(w.to_vec());
            }
        })?;
        Ok(best.unwrap_or_else(|| vec![0; self.length]))
    }

    /// For each coordinate, how many codewords of each weight are nonzero
    /// there. Invariant under signed permutations up to reordering.
    pub fn coordinate_profiles(&self) -> Result<Vec<BTreeMap<usize, u64>>> {
        let mut prof = vec![BTreeMap::new(); self.length];
        self.for_each_codeword(|w| {
            let wt = weight(w);
            for (i, &x) in w.iter().enumerate() {
                if x != 0 {
                    *prof[i].entry(wt).or_insert(0) += 1;
                }
            }
        })?;
        Ok(prof)
    }

    pub fn apply(&self, f: &MonomialMap) -> Result<CodeZp> {
        if f.perm.len() != self.length {
            return Err(Error::DimensionMismatch("monomial map of wrong length".into()));
        }
        let rows = self.gen.iter().map(|g| f.apply_word(g, self.p)).collect();
        Ok(Self::from_reduced(self.p, self.length, rows))
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            p: self.p,
            length: self.length,
            generators: self.gen.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<Self> {
        Self::new(j.p, j.length, &j.generators)
    }
}

pub fn weight(w: &[u64]) -> usize {
    w.iter().filter(|&&x| x != 0).count()
}

/// A signed permutation: coordinate `i` is multiplied by `signs[i]` and then
/// moved to position `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMap {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl MonomialMap {
    pub fn identity(t: usize) -> Self {
        MonomialMap {
            perm: (0..t).collect(),
            signs: vec![1; t],
        }
    }

    pub fn apply_word(&self, w: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; w.len()];
        for (i, &x) in w.iter().enumerate() {
            out[self.perm[i]] = if self.signs[i] < 0 { (p - x) % p } else { x };
        }
        out
    }
}

/// Fingerprint used to bucket codes before exact equivalence testing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodeFingerprint {
    pub weights: BTreeMap<usize, u64>,
    pub profiles: Vec<BTreeMap<usize, u64>>,
}

pub fn fingerprint(c: &CodeZp) -> Result<CodeFingerprint> {
    let mut profiles = c.coordinate_profiles()?;
    profiles.sort();
    Ok(CodeFingerprint {
        weights: c.weight_distribution()?,
        profiles,
    })
}

/// `v` or `−v`, whichever is lexicographically smaller, and the sign used.
fn sign_class(v: &[u64], p: u64) -> (Vec<u64>, i8) {
    let neg: Vec<u64> = v.iter().map(|&x| (p - x) % p).collect();
    if neg.as_slice() < v {
        (neg, -1)
    } else {
        (v.to_vec(), 1)
    }
}

/// Searches for `f ∈ {±1}^t ⋊ S_t` with `f(c1) = c2`.
///
/// The images of the pivot coordinates of `c1` are chosen by backtracking,
/// restricted to coordinates with matching weight profile. Once they are
/// fixed, `c2` has a unique generator matrix that is diagonal there, and the
/// remaining columns must match up to sign.
pub fn monomial_equivalent(c1: &CodeZp, c2: &CodeZp) -> Result<Option<MonomialMap>> {
    if c1.p != c2.p || c1.length != c2.length || c1.dim() != c2.dim() {
        return Ok(None);
    }
    let (p, t, k) = (c1.p, c1.length, c1.dim());
    if k == 0 {
        return Ok(Some(MonomialMap::identity(t)));
    }
    let allowed: Vec<Vec<bool>> = if c1.size() <= ENUMERATION_BUDGET {
        if c1.weight_distribution()? != c2.weight_distribution()? {
            return Ok(None);
        }
        let (pa, pb) = (c1.coordinate_profiles()?, c2.coordinate_profiles()?);
        let (mut sa, mut sb) = (pa.clone(), pb.clone());
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(None);
        }
        pa.iter().map(|a| pb.iter().map(|b| a == b).collect()).collect()
    } else {
        vec![vec![true; t]; t]
    };

    let free1: Vec<usize> = (0..t).filter(|c| !c1.pivots.contains(c)).collect();
    let col1 = |i: usize| -> Vec<u64> { c1.gen.iter().map(|g| g[i]).collect() };
    let mut search = Search {
        c1,
        c2,
        allowed: &allowed,
        free1: &free1,
        free_cols: free1.iter().map(|&i| sign_class(&col1(i), p)).collect(),
        chosen: Vec::with_capacity(k),
        signs: Vec::with_capacity(k),
    };
    let Some(map) = search.run() else {
        return Ok(None);
    };
    if c1.apply(&map)? != *c2 {
        return Err(Error::InvariantMismatch("equivalence witness fails re-encoding".into()));
    }
    Ok(Some(map))
}

struct Search<'a> {
    c1: &'a CodeZp,
    c2: &'a CodeZp,
    allowed: &'a [Vec<bool>],
    free1: &'a [usize],
    free_cols: Vec<(Vec<u64>, i8)>,
    chosen: Vec<usize>,
    signs: Vec<i8>,
}

impl Search<'_> {
    fn run(&mut self) -> Option<MonomialMap> {
        let r = self.chosen.len();
        if r == self.c1.dim() {
            return self.complete();
        }
        let src = self.c1.pivots[r];
        for j in 0..self.c1.length {
            if self.chosen.contains(&j) || !self.allowed[src][j] {
                continue;
            }
            // The global sign −1 preserves every linear code.
            let sign_choices: &[i8] = if r == 0 { &[1] } else { &[1, -1] };
            for &s in sign_choices {
                self.chosen.push(j);
                self.signs.push(s);
                if self.chosen_columns_independent() {
                    if let Some(m) = self.run() {
                        return Some(m);
                    }
                }
                self.chosen.pop();
                self.signs.pop();
            }
        }
        None
    }

    fn chosen_columns_independent(&self) -> bool {
        let p = self.c2.p;
        let rows: Vec<Vec<u64>> = self
            .chosen
            .iter()
            .map(|&j| self.c2.gen.iter().map(|g| g[j]).collect())
            .collect();
        rref_mod(rows, p, self.c2.dim()).0.len() == self.chosen.len()
    }

    fn complete(&self) -> Option<MonomialMap> {
        let (p, t, k) = (self.c2.p, self.c2.length, self.c2.dim());
        // Normalize c2's generator to the identity on the chosen columns.
        let rows: Vec<Vec<u64>> = (0..k)
            .map(|r| {
                let mut row: Vec<u64> = self.chosen.iter().map(|&j| self.c2.gen[r][j]).collect();
                row.extend(self.c2.gen[r].iter().copied());
                row
            })
            .collect();
        let (red, _) = rref_mod(rows, p, k + t);
        let g2: Vec<&[u64]> = red.iter().map(|r| &r[k..]).collect();
        let mut targets: BTreeMap<Vec<u64>, Vec<(usize, i8)>> = BTreeMap::new();
        for j in (0..t).filter(|j| !self.chosen.contains(j)) {
            let v: Vec<u64> = (0..k)
                .map(|r| {
                    if self.signs[r] < 0 {
                        (p - g2[r][j]) % p
                    } else {
                        g2[r][j]
                    }
                })
                .collect();
            let (cls, s) = sign_class(&v, p);
            targets.entry(cls).or_default().push((j, s));
        }
        let mut perm = vec![usize::MAX; t];
        let mut signs = vec![1i8; t];
        for (r, &c) in self.c1.pivots.iter().enumerate() {
            perm[c] = self.chosen[r];
            signs[c] = self.signs[r];
        }
        for (&i, (cls, si)) in self.free1.iter().zip(&self.free_cols) {
            let (j, sj) = targets.get_mut(cls)?.pop()?;
            perm[i] = j;
            signs[i] = si * sj;
        }
        Some(MonomialMap { perm, signs })
    }
}

/// Whether `L_B(C)` has norm-2 vectors, decided on the code.
///
/// For self-orthogonal `C` a root lies over a nonzero codeword `c` with
/// `Σ c_i(p−c_i) = 2p` and is a sum of minimal vectors of the cosets
/// `λ_{c_i} + A_{p−1}`. Such a vector has `χ`-pairing `Σ_i Σ_{s∈S_i} ρ_s / p`
/// for subsets `S_i` of size `c_i`, so a root exists exactly when those sums
/// can reach `0 (mod p)`.
pub fn construction_b_has_roots(c: &CodeZp) -> Result<bool> {
    let p = c.p;
    if p == 2 {
        return Err(Error::Precondition("root predicate needs odd p".into()));
    }
    if !c.is_self_orthogonal() {
        return Err(Error::Precondition(
            "root predicate needs a self-orthogonal code".into(),
        ));
    }
    let pi = p as i64;
    let rho: Vec<i64> = (0..pi).map(|s| (pi - 1) / 2 - s).collect();
    // reach[j]: residues of Σ_{s∈S} ρ_s over |S| = j.
    let mut by_size = vec![BTreeSet::from([0i64]); 1];
    by_size.resize(p as usize + 1, BTreeSet::new());
    for &r in &rho {
        for j in (1..=p as usize).rev() {
            let prev: Vec<i64> = by_size[j - 1].iter().copied().collect();
            for x in prev {
                by_size[j].insert((x + r).rem_euclid(pi));
            }
        }
    }
    let mut found = false;
    c.for_each_codeword(|w| {
        if found || w.iter().all(|&x| x == 0) {
            return;
        }
        let m: u64 = w.iter().map(|&x| x * (p - x)).sum();
        if m != 2 * p {
            return;
        }
        let mut acc = BTreeSet::from([0i64]);
        for &x in w.iter().filter(|&&x| x != 0) {
            acc = acc
                .iter()
                .flat_map(|a| by_size[x as usize].iter().map(move |b| (a + b).rem_euclid(pi)))
                .collect();
        }
        found = acc.contains(&0);
    })?;
    Ok(found)
}

/// Result of an exhaustive classification.
#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<CodeZp>,
    pub candidates_examined: u64,
}

/// Self-orthogonal (optionally) codes of the given shape, one per
/// signed-permutation class, optionally keeping only those whose
/// Construction B lattice is rootless.
///
/// Every code is equivalent to one with generator `[I | A]` whose columns of
/// `A` are sign-normalized and sorted, so only multisets of sign classes are
/// enumerated. Survivors are bucketed by fingerprint and then compared
/// exactly.
pub fn classify_codes(
    p: u64,
    t: usize,
    dim: usize,
    require_self_orthogonal: bool,
    require_b_rootless: bool,
) -> Result<Classification> {
    classify_codes_with_budget(
        p,
        t,
        dim,
        require_self_orthogonal,
        require_b_rootless,
        CLASSIFICATION_BUDGET,
    )
}

pub fn classify_codes_with_budget(
    p: u64,
    t: usize,
    dim: usize,
    require_self_orthogonal: bool,
    require_b_rootless: bool,
    budget: u64,
) -> Result<Classification> {
    if !is_prime(p) || dim > t {
        return Err(Error::OutOfRange(format!("no codes of shape [{p},{t},{dim}]")));
    }
    let classes_vecs = sign_classes(p, dim);
    let mut classes: Vec<(CodeFingerprint, CodeZp)> = Vec::new();
    let mut examined = 0u64;
    let mut multiset = vec![0usize; t - dim];
    loop {
        examined += 1;
        if examined > budget {
            return Err(Error::BudgetExceeded(format!(
                "classification of [{p},{t},{dim}] stopped after {budget} candidates with {} classes: {}",
                classes.len(),
                classes
                    .iter()
                    .map(|(_, c)| format!("{:?}", c.to_json().generators))
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|r| {
                let mut row = vec![0u64; t];
                row[r] = 1;
                for (j, &cl) in multiset.iter().enumerate() {
                    row[dim + j] = classes_vecs[cl][r];
                }
                row
            })
            .collect();
        let code = CodeZp::from_reduced(p, t, rows);
        if keep(&code, require_self_orthogonal, require_b_rootless)? {
            let fp = fingerprint(&code)?;
            let mut new = true;
            for (f, c) in &classes {
                if *f == fp && monomial_equivalent(c, &code)?.is_some() {
                    new = false;
                    break;
                }
            }
            if new {
                classes.push((fp, code));
            }
        }
        if !next_multiset(&mut multiset, classes_vecs.len()) {
            break;
        }
    }
    let mut out: Vec<CodeZp> = classes.into_iter().map(|(_, c)| c).collect();
    out.sort();
    Ok(Classification {
        classes: out,
        candidates_examined: examined,
    })
}

fn keep(code: &CodeZp, so: bool, rootless: bool) -> Result<bool> {
    if so && !code.is_self_orthogonal() {
        return Ok(false);
    }
    if !rootless {
        return Ok(true);
    }
    let by_code = !construction_b_has_roots(code)?;
    if by_code {
        let lattice = crate::construction::ZpContext::new(code.p, code.length)?.construct_b(code)?;
        if !lattice.is_rootless()? {
            return Err(Error::InvariantMismatch(
                "code-level root test disagrees with lattice enumeration".into(),
            ));
        }
    }
    Ok(by_code)
}

/// Representatives of `ℤ_p^k / ±1`, the zero vector first.
fn sign_classes(p: u64, k: usize) -> Vec<Vec<u64>> {
    let total = (0..k).fold(1u64, |a, _| a * p);
    let mut out = Vec::new();
    for n in 0..total {
        let v: Vec<u64> = (0..k)
            .scan(n, |s, _| {
                let d = *s % p;
                *s /= p;
                Some(d)
            })
            .collect();
        if sign_class(&v, p).0 == v {
            out.push(v);
        }
    }
    out
}

/// Next non-decreasing sequence over `0..n`.
fn next_multiset(m: &mut [usize], n: usize) -> bool {
    for i in (0..m.len()).rev() {
        if m[i] + 1 < n {
            let v = m[i] + 1;
            for x in &mut m[i..] {
                *x = v;
            }
            return true;
        }
    }
    false
}
