//! The root lattice A_{k−1} in its standard model `{a ∈ ℤ^k : Σ a_i = 0}`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, int, rat, IntMatrix, Rat, RatMatrix};
use crate::isometry::LatticeIsometry;
use crate::lattice::Lattice;

/// `A_{k−1}` together with its standard simple roots `α_i = v_i − v_{i+1}`.
#[derive(Clone, Debug)]
pub struct TypeALattice {
    pub k: usize,
    pub lattice: Lattice,
    pub simple_roots: Vec<Vec<Rat>>,
}

pub fn unit(k: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); k];
    v[i] = Rat::one();
    v
}

/// `α_i = v_i − v_{i+1}` for `1 ≤ i ≤ k−1`.
pub fn simple_root(k: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); k];
    v[i - 1] = Rat::one();
    v[i] = -Rat::one();
    v
}

impl TypeALattice {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::OutOfRange(format!("A_{{k-1}} needs k ≥ 2, got {k}")));
        }
        let simple_roots: Vec<Vec<Rat>> = (1..k).map(|i| simple_root(k, i)).collect();
        let b = RatMatrix::from_rows(simple_roots.clone(), k)?;
        let lattice = Lattice::new(b, Rat::one())?;
        Ok(TypeALattice {
            k,
            lattice,
            simple_roots,
        })
    }

    /// All `k(k−1)` roots `v_i − v_j`.
    pub fn roots(&self) -> Vec<Vec<Rat>> {
        all_roots(self.k)
    }

    /// The negated highest root `α_0 = v_k − v_1`.
    pub fn alpha0(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.k];
        v[self.k - 1] = Rat::one();
        v[0] = -Rat::one();
        v
    }
}

pub fn all_roots(k: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::with_capacity(k * (k - 1));
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut v = vec![Rat::zero(); k];
                v[i] = Rat::one();
                v[j] = -Rat::one();
                out.push(v);
            }
        }
    }
    out
}

/// `λ_j = (1/k)((k−j)Σ_{i≤j} v_i − j Σ_{i>j} v_i)`.
pub fn fundamental_weight(k: usize, j: usize) -> Result<Vec<Rat>> {
    if j == 0 || j >= k {
        return Err(Error::OutOfRange(format!(
            "fundamental weight index {j} outside 1..{}",
            k.saturating_sub(1)
        )));
    }
    let (k, j) = (k as i64, j as i64);
    Ok((1..=k)
        .map(|i| if i <= j { rat(k - j, k) } else { rat(-j, k) })
        .collect())
}

/// `ρ = ½(k−1, k−3, …, −(k−1))`.
pub fn weyl_vector(k: usize) -> Vec<Rat> {
    let k = k as i64;
    (0..k).map(|i| rat(k - 1 - 2 * i, 2)).collect()
}

/// Cyclic shift `(x_1, …, x_k) ↦ (x_k, x_1, …, x_{k−1})` on row vectors.
pub fn coxeter_ambient(k: usize) -> RatMatrix {
    // v_i ↦ v_{i+1}: row i of P is e_{i+1}.
    IntMatrix::from_i64_rows(
        &(0..k)
            .map(|i| (0..k).map(|j| i64::from(j == (i + 1) % k)).collect())
            .collect::<Vec<_>>(),
    )
    .to_rat()
}

pub fn apply_coxeter(v: &[Rat], power: usize) -> Vec<Rat> {
    let k = v.len();
    let s = power % k;
    (0..k).map(|i| v[(i + k - s) % k].clone()).collect()
}

/// The Coxeter element `g_Δ` as an isometry of `A_{k−1}`.
pub fn coxeter_isometry(k: usize) -> Result<LatticeIsometry> {
    let a = TypeALattice::new(k)?;
    LatticeIsometry::from_ambient(a.lattice, &coxeter_ambient(k))
}

/// `(β|ρ) ≢ 0 (mod k)` for every root `β`.
pub fn check_rho_pairing(k: usize) -> bool {
    let rho = weyl_vector(k);
    let kk = Rat::from_integer(int(k as i64));
    all_roots(k).iter().all(|b| {
        let x = dot(b, &rho);
        x.is_integer() && !(x.clone() / &kk).is_integer()
    })
}

/// Range of `|(ρ|β)|` over all roots.
pub fn rho_pairing_range(k: usize) -> (Rat, Rat) {
    let rho = weyl_vector(k);
    let vals: Vec<Rat> = all_roots(k)
        .iter()
        .map(|b| {
            let x = dot(b, &rho);
            if x < Rat::zero() {
                -x
            } else {
                x
            }
        })
        .collect();
    (
        vals.iter().min().cloned().unwrap_or_default(),
        vals.iter().max().cloned().unwrap_or_default(),
    )
}

/// One affine cycle `Δ ∪ {α_0}` found inside a root set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootComponent {
    /// `α_1, …, α_{p−1}` with consecutive inner products −1.
    pub base: Vec<Vec<Rat>>,
    /// `α_0 = −(α_1 + … + α_{p−1})`.
    pub negated_highest: Vec<Rat>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootDecomposition {
    pub components: Vec<RootComponent>,
    pub leftover: Vec<Vec<Rat>>,
}

/// Splits a set of norm-2 vectors into affine `A_{p−1}` diagrams.
///
/// The set is first split into mutually orthogonal pieces. A piece whose
/// distinct vectors pair to 0 or −1 (roots lying in one coset of a rootless
/// lattice) must be a `p`-cycle or a shorter path; a piece closed under
/// negation must be a full `A_{p−1}` root system, whose base is taken with
/// respect to the lexicographic order. Components are sorted by their first
/// base vector.
pub fn decompose_root_set(
    x: &[Vec<Rat>],
    p: usize,
    inner: impl Fn(&[Rat], &[Rat]) -> Rat,
) -> Result<RootDecomposition> {
    let n = x.len();
    let two = rat(2, 1);
    for v in x {
        if inner(v, v) != two {
            return Err(Error::NotTypeAConfiguration("input vector does not have norm 2".into()));
        }
    }
    let mut gram = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ip = inner(&x[i], &x[j]);
            if ip.abs() > two {
                return Err(Error::NotTypeAConfiguration(format!(
                    "inner product {ip} between roots"
                )));
            }
            gram[i][j] = ip.clone();
            gram[j][i] = ip;
        }
    }
    let mut seen = vec![false; n];
    let mut out = RootDecomposition::default();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for t in 0..n {
                if !seen[t] && !gram[a][t].is_zero() {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            k += 1;
        }
        let coset_like = comp.iter().all(|&a| {
            comp.iter()
                .all(|&b| a == b || gram[a][b].is_zero() || gram[a][b] == rat(-1, 1))
        });
        let vecs: Vec<&Vec<Rat>> = comp.iter().map(|&i| &x[i]).collect();
        if coset_like {
            match affine_cycle(&vecs, &comp, &gram, p)? {
                Some(c) => out.components.push(c),
                None => out.leftover.extend(vecs.into_iter().cloned()),
            }
        } else {
            out.components.push(full_system_base(&vecs, p, &inner)?);
        }
    }
    out.components.sort_by(|a, b| a.base[0].cmp(&b.base[0]));
    out.leftover.sort();
    Ok(out)
}

fn affine_cycle(vecs: &[&Vec<Rat>], idx: &[usize], gram: &[Vec<Rat>], p: usize) -> Result<Option<RootComponent>> {
    let m = vecs.len();
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|a| (0..m).filter(|&b| a != b && !gram[idx[a]][idx[b]].is_zero()).collect())
        .collect();
    if adj.iter().any(|a| a.len() > 2) {
        return Err(Error::NegativeNormRelation(p));
    }
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if edges < m {
        // A path: a proper subdiagram of the affine diagram when short enough.
        return if m < p {
            Ok(None)
        } else {
            Err(Error::NegativeNormRelation(p))
        };
    }
    if m != p {
        return Err(Error::NegativeNormRelation(p));
    }
    let start = (0..m).min_by(|&a, &b| vecs[a].cmp(vecs[b])).unwrap();
    let first = *adj[start].iter().min_by(|&&a, &&b| vecs[a].cmp(vecs[b])).unwrap();
    let mut walk = vec![start, first];
    while walk.len() < p {
        let cur = walk[walk.len() - 1];
        let prev = walk[walk.len() - 2];
        walk.push(*adj[cur].iter().find(|&&t| t != prev).unwrap());
    }
    let mut sum = vec![Rat::zero(); vecs[start].len()];
    for &i in &walk {
        for (a, b) in sum.iter_mut().zip(vecs[i]) {
            *a += b;
        }
    }
    if sum.iter().any(|c| !c.is_zero()) {
        return Err(Error::NotTypeAConfiguration("affine cycle does not sum to zero".into()));
    }
    Ok(Some(RootComponent {
        base: walk[..p - 1].iter().map(|&i| vecs[i].clone()).collect(),
        negated_highest: vecs[walk[p - 1]].clone(),
    }))
}

fn full_system_base(vecs: &[&Vec<Rat>], p: usize, inner: &impl Fn(&[Rat], &[Rat]) -> Rat) -> Result<RootComponent> {
    let bad = |why: &str| Error::NotTypeAConfiguration(why.to_string());
    if vecs.len() != p * (p - 1) {
        return Err(bad("root system component has the wrong size"));
    }
    let set: BTreeSet<&Vec<Rat>> = vecs.iter().copied().collect();
    let neg = |v: &[Rat]| -> Vec<Rat> { v.iter().map(|c| -c).collect() };
    let positive = |v: &[Rat]| v.iter().find(|c| !c.is_zero()).is_some_and(|c| *c > Rat::zero());
    let pos: Vec<&Vec<Rat>> = vecs.iter().copied().filter(|v| positive(v)).collect();
    if pos.len() * 2 != vecs.len() || pos.iter().any(|v| !set.contains(&neg(v))) {
        return Err(bad("root set is not closed under negation"));
    }
    // Simple roots: positive roots that are not sums of two positive roots.
    let sums: BTreeSet<Vec<Rat>> = pos
        .iter()
        .flat_map(|a| {
            pos.iter()
                .map(move |b| a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
        })
        .collect();
    let simple: Vec<&Vec<Rat>> = pos.iter().copied().filter(|v| !sums.contains(*v)).collect();
    if simple.len() != p - 1 {
        return Err(bad("root system is not of type A_{p-1}"));
    }
    let m = simple.len();
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|a| {
            (0..m)
                .filter(|&b| a != b && inner(simple[a], simple[b]) == rat(-1, 1))
                .collect()
        })
        .collect();
    if adj.iter().any(|a| a.len() > 2) {
        return Err(bad("Dynkin diagram is not a path"));
    }
    let ends: Vec<usize> = (0..m).filter(|&a| adj[a].len() <= 1).collect();
    let start = *ends.iter().min_by(|&&a, &&b| simple[a].cmp(simple[b])).unwrap();
    let mut walk = vec![start];
    while walk.len() < m {
        let cur = *walk.last().unwrap();
        let next = adj[cur]
            .iter()
            .copied()
            .find(|t| !walk.contains(t))
            .ok_or_else(|| bad("Dynkin diagram is disconnected"))?;
        walk.push(next);
    }
    let base: Vec<Vec<Rat>> = walk.iter().map(|&i| simple[i].clone()).collect();
    let mut highest = vec![Rat::zero(); base[0].len()];
    for b in &base {
        for (a, c) in highest.iter_mut().zip(b) {
            *a += c;
        }
    }
    let alpha0 = neg(&highest);
    if !set.contains(&alpha0) {
        return Err(bad("highest root missing"));
    }
    Ok(RootComponent {
        base,
        negated_highest: alpha0,
    })
}

/// Orthogonality check of components, used by callers that need it.
pub fn components_orthogonal(d: &RootDecomposition, inner: impl Fn(&[Rat], &[Rat]) -> Rat) -> bool {
    let sets: Vec<BTreeSet<&Vec<Rat>>> = d
        .components
        .iter()
        .map(|c| c.base.iter().chain(std::iter::once(&c.negated_highest)).collect())
        .collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            for a in &sets[i] {
                for b in &sets[j] {
                    if !inner(a, b).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn std_inner(a: &[Rat], b: &[Rat]) -> Rat {
        dot(a, b)
    }

    #[test]
    fn weights_k3() {
        let l1 = fundamental_weight(3, 1).unwrap();
        assert_eq!(l1, vec![rat(2, 3), rat(-1, 3), rat(-1, 3)]);
        assert_eq!(dot(&l1, &l1), rat(2, 3));
        assert!(fundamental_weight(3, 3).is_err());
        assert!(fundamental_weight(3, 0).is_err());
    }

    #[test]
    fn weight_inner_products() {
        let l1 = fundamental_weight(4, 1).unwrap();
        let l2 = fundamental_weight(4, 2).unwrap();
        assert_eq!(dot(&l1, &l2), rat(1, 2));
        for k in 2..=9 {
            let a = TypeALattice::new(k).unwrap();
            let l1 = fundamental_weight(k, 1).unwrap();
            for j in 1..k {
                let lj = fundamental_weight(k, j).unwrap();
                let diff: Vec<Rat> = lj.iter().zip(&l1).map(|(a, b)| a - rat(j as i64, 1) * b).collect();
                assert!(a.lattice.contains(&diff));
                for i in 1..=j {
                    let li = fundamental_weight(k, i).unwrap();
                    assert_eq!(dot(&li, &lj), rat((i * (k - j)) as i64, k as i64));
                    let frac = dot(&li, &lj) + rat((i * j) as i64, k as i64);
                    assert!(frac.is_integer());
                }
            }
        }
    }

    #[test]
    fn weyl_vectors() {
        assert_eq!(weyl_vector(3), vec![rat(1, 1), rat(0, 1), rat(-1, 1)]);
        assert_eq!(dot(&weyl_vector(3), &weyl_vector(3)), rat(2, 1));
        assert_eq!(weyl_vector(2), vec![rat(1, 2), rat(-1, 2)]);
        let rho = weyl_vector(5);
        let l2 = fundamental_weight(5, 2).unwrap();
        assert_eq!(dot(&rho, &l2), rat(3, 1));
        for k in 2..=9 {
            let rho = weyl_vector(k);
            for i in 1..k {
                assert_eq!(dot(&rho, &simple_root(k, i)), rat(1, 1));
            }
            let sum = (1..k).fold(vec![Rat::zero(); k], |acc, j| {
                let w = fundamental_weight(k, j).unwrap();
                acc.iter().zip(&w).map(|(a, b)| a + b).collect()
            });
            assert_eq!(sum, rho);
        }
    }

    #[test]
    fn coxeter_element() {
        let rho = weyl_vector(3);
        let g_rho = apply_coxeter(&rho, 1);
        assert_eq!(g_rho, vec![rat(-1, 1), rat(1, 1), rat(0, 1)]);
        let l1 = fundamental_weight(3, 1).unwrap();
        let expect: Vec<Rat> = rho.iter().zip(&l1).map(|(r, l)| r - rat(3, 1) * l).collect();
        assert_eq!(g_rho, expect);
        for k in 2..=7 {
            let g = coxeter_isometry(k).unwrap();
            assert_eq!(g.order(), k as u64);
            for j in 1..=k as u64 {
                assert_eq!(
                    g.power(j).is_fixed_point_free(),
                    j.gcd(&(k as u64)) == 1 && j % k as u64 != 0,
                    "k={k} j={j}"
                );
            }
            for i in 1..k - 1 {
                assert_eq!(apply_coxeter(&simple_root(k, i), 1), simple_root(k, i + 1));
            }
        }
        assert!(!coxeter_isometry(4).unwrap().power(2).is_fixed_point_free());
    }

    #[test]
    fn coxeter_permutes_affine_diagram() {
        for k in 3..=9 {
            let a = TypeALattice::new(k).unwrap();
            let mut affine = a.simple_roots.clone();
            affine.push(a.alpha0());
            // α_{k−1} ↦ α_0 ↦ α_1: a single k-cycle.
            let mut cur = affine[0].clone();
            let mut visited = BTreeSet::new();
            for _ in 0..k {
                assert!(affine.contains(&cur));
                visited.insert(cur.clone());
                cur = apply_coxeter(&cur, 1);
            }
            assert_eq!(cur, affine[0]);
            assert_eq!(visited.len(), k);
        }
    }

    #[test]
    fn rho_pairing() {
        for k in 2..=9 {
            assert!(check_rho_pairing(k));
            let (lo, hi) = rho_pairing_range(k);
            assert_eq!(lo, rat(1, 1));
            assert_eq!(hi, rat(k as i64 - 1, 1));
            assert_eq!(all_roots(k).len(), k * (k - 1));
        }
    }

    #[test]
    fn decompose_a2_cycle() {
        let a = TypeALattice::new(3).unwrap();
        let mut x = a.simple_roots.clone();
        x.push(a.alpha0());
        let d = decompose_root_set(&x, 3, std_inner).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].base.len(), 2);
        assert!(d.leftover.is_empty());
    }

    #[test]
    fn decompose_two_orthogonal_cycles() {
        let embed = |v: &[Rat], off: usize| {
            let mut w = vec![Rat::zero(); 6];
            w[off..off + 3].clone_from_slice(v);
            w
        };
        let a = TypeALattice::new(3).unwrap();
        let mut cyc = a.simple_roots.clone();
        cyc.push(a.alpha0());
        let x: Vec<Vec<Rat>> = cyc
            .iter()
            .map(|v| embed(v, 0))
            .chain(cyc.iter().map(|v| embed(v, 3)))
            .collect();
        let d = decompose_root_set(&x, 3, std_inner).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(components_orthogonal(&d, std_inner));
    }

    #[test]
    fn path_is_leftover() {
        let a = TypeALattice::new(3).unwrap();
        let d = decompose_root_set(&a.simple_roots, 3, std_inner).unwrap();
        assert!(d.components.is_empty());
        assert_eq!(d.leftover.len(), 2);
    }

    #[test]
    fn long_path_is_rejected() {
        let a = TypeALattice::new(5).unwrap();
        let err = decompose_root_set(&a.simple_roots, 3, std_inner).unwrap_err();
        assert_eq!(err, Error::NegativeNormRelation(3));
    }

    #[test]
    fn full_root_systems_decompose() {
        for p in [3usize, 5, 7] {
            for t in 1..=4 {
                let n = p * t;
                let mut x = Vec::new();
                for c in 0..t {
                    let a = TypeALattice::new(p).unwrap();
                    let mut cyc = a.simple_roots.clone();
                    cyc.push(a.alpha0());
                    for v in cyc.into_iter().chain(a.roots()) {
                        let mut w = vec![Rat::zero(); n];
                        w[c * p..(c + 1) * p].clone_from_slice(&v);
                        x.push(w);
                    }
                }
                x.sort();
                x.dedup();
                assert_eq!(x.len(), t * p * (p - 1));
                let d = decompose_root_set(&x, p, std_inner).unwrap();
                assert_eq!(d.components.len(), t);
                assert!(components_orthogonal(&d, std_inner));
                assert!(d.leftover.is_empty());
            }
        }
    }
}
