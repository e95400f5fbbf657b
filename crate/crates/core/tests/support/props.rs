#![allow(dead_code)]

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use orbilat::codes::{weight, CodeZp};
use orbilat::construction::{ConstructionContext, ZpContext};
use orbilat::exact::{int, rat, Int, IntMatrix, Rat, RatMatrix};
use orbilat::isometry::LatticeIsometry;
use orbilat::lattice::{index, Lattice};
use orbilat::orbifold::qdim_squared;
use orbilat::roots::{all_roots, coxeter_ambient, weyl_vector};

pub const CASES: u32 = 200;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// ---------- lattices from random integer bases ----------

pub fn int_basis(max_rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, r)| proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), r))
}

pub fn lattice_of(rows: &[Vec<i64>]) -> Option<Lattice> {
    let m = IntMatrix::from_i64_rows(rows).to_rat();
    if m.rank() < rows.len() {
        return None;
    }
    Lattice::new(m, rat(1, 1)).ok()
}

/// Naive count of `rep + L` vectors by norm, over the box
/// `|c_i + rep_i| ≤ sqrt(bound · (G⁻¹)_ii)` in basis coordinates.
pub fn box_count(l: &Lattice, bound: i64, rep: &[Rat]) -> BTreeMap<Rat, u64> {
    let r = l.rank();
    let g = l.gram();
    let gi = invert(&g);
    let basis: Vec<Vec<Rat>> = l.basis().to_rows();
    let shift = l.coordinates(rep).unwrap();
    let radius: Vec<i64> = (0..r)
        .map(|i| {
            let q = &gi[i][i] * rat(bound, 1);
            let fl = q.floor().to_integer().to_i64().unwrap();
            let reach = (0..).find(|s: &i64| s * s > fl).unwrap();
            reach + shift[i].abs().ceil().to_integer().to_i64().unwrap()
        })
        .collect();
    let mut out = BTreeMap::new();
    let mut c: Vec<i64> = radius.iter().map(|x| -x).collect();
    let lo: Vec<i64> = c.clone();
    loop {
        let coords: Vec<Rat> = (0..r).map(|i| rat(c[i], 1) + &shift[i]).collect();
        let mut v = vec![Rat::zero(); l.ambient_dim()];
        for (ci, b) in coords.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += ci * y;
            }
        }
        let n = l.norm(&v);
        if n <= rat(bound, 1) {
            *out.entry(n).or_insert(0) += 1;
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            c[i] += 1;
            if c[i] <= radius[i] {
                break;
            }
            c[i] = lo[i];
            i += 1;
        }
    }
}

pub fn invert(g: &RatMatrix) -> Vec<Vec<Rat>> {
    let n = g.nrows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row = g.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).unwrap();
        a.swap(col, piv);
        let inv = Rat::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pr = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

// ---------- self-orthogonal codes ----------

pub fn base_codes() -> Vec<(u64, Vec<Vec<i64>>)> {
    vec![
        (3, vec![vec![1, 1, 1]]),
        (3, vec![vec![1; 6]]),
        (3, vec![vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1]]),
        (
            3,
            vec![
                vec![1; 9],
                vec![1, 1, 1, 2, 2, 2, 0, 0, 0],
                vec![1, 2, 0, 1, 2, 0, 1, 2, 0],
            ],
        ),
        (5, vec![vec![1, 2]]),
        (5, vec![vec![1, 1, 2, 2]]),
        (5, vec![vec![1; 5], vec![1, 2, 4, 3, 0]]),
        (7, vec![vec![1, 2, 3]]),
        (3, vec![vec![0, 0]]),
        (5, vec![vec![0, 0, 0]]),
    ]
}

/// A random signed permutation of a base code, optionally cut down to the
/// span of one random codeword.
pub fn so_code() -> impl Strategy<Value = CodeZp> {
    (0..base_codes().len(), any::<u64>(), any::<bool>()).prop_map(|(i, seed, cut)| {
        let (p, rows) = base_codes()[i].clone();
        let t = rows[0].len();
        let mut s = seed;
        let mut next = |m: u64| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) % m
        };
        let mut perm: Vec<usize> = (0..t).collect();
        for j in (1..t).rev() {
            perm.swap(j, next(j as u64 + 1) as usize);
        }
        let signs: Vec<i64> = (0..t).map(|_| if next(2) == 0 { 1 } else { -1 }).collect();
        let mut moved: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                let mut out = vec![0; t];
                for j in 0..t {
                    out[perm[j]] = (signs[j] * r[j]).rem_euclid(p as i64);
                }
                out
            })
            .collect();
        if cut && moved.len() > 1 {
            let coeffs: Vec<i64> = (0..moved.len()).map(|_| next(p) as i64).collect();
            let w: Vec<i64> = (0..t)
                .map(|j| {
                    moved
                        .iter()
                        .zip(&coeffs)
                        .map(|(r, c)| r[j] * c)
                        .sum::<i64>()
                        .rem_euclid(p as i64)
                })
                .collect();
            moved = vec![w];
        }
        CodeZp::new(p, t, &moved).unwrap()
    })
}

pub fn full_weight_dual_word(c: &CodeZp, pick: usize) -> Option<Vec<u64>> {
    let words: Vec<Vec<u64>> = c
        .dual_code()
        .codewords()
        .unwrap()
        .into_iter()
        .filter(|w| weight(w) == c.length())
        .collect();
    (!words.is_empty()).then(|| words[pick % words.len()].clone())
}

// ---------- fixed-point free isometries ----------

pub fn block_diagonal(blocks: &[RatMatrix]) -> RatMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = RatMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                m[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        off += b.nrows();
    }
    m
}

/// `⊕ A_{k_i−1}` with the Coxeter element raised to a power prime to `k_i`
/// on each summand.
pub fn coxeter_product(parts: &[(usize, u64)]) -> LatticeIsometry {
    let ks: Vec<usize> = parts.iter().map(|p| p.0).collect();
    let ctx = ConstructionContext::new(&ks).unwrap();
    let blocks: Vec<RatMatrix> = parts.iter().map(|&(k, s)| coxeter_ambient(k).pow(s)).collect();
    LatticeIsometry::from_ambient(ctx.root_lattice().clone(), &block_diagonal(&blocks)).unwrap()
}

pub fn coprime_power(k: usize) -> impl Strategy<Value = (usize, u64)> {
    (1..k as u64).prop_filter_map("power prime to k", move |s| (s.gcd(&(k as u64)) == 1).then_some((k, s)))
}

pub fn fpf_isometry() -> impl Strategy<Value = LatticeIsometry> {
    proptest::collection::vec((2usize..=6).prop_flat_map(coprime_power), 1..=3)
        .prop_map(|parts| coxeter_product(&parts))
}

pub fn prime_order_isometry() -> impl Strategy<Value = (u64, LatticeIsometry)> {
    prop_oneof![
        (prop::sample::select(vec![2usize, 3, 5, 7]), 1usize..=3).prop_flat_map(|(p, a)| {
            proptest::collection::vec(coprime_power(p), a).prop_map(move |parts| (p as u64, coxeter_product(&parts)))
        }),
        (so_code(), any::<usize>()).prop_filter_map("dual code has a full-weight word", |(c, pick)| {
            let e = full_weight_dual_word(&c, pick)?;
            let ctx = ZpContext::new(c.p(), c.length()).ok()?;
            let l = ctx.construct_b(&c).ok()?;
            let g = ctx.g_delta_e(&l, &e).ok()?;
            Some((c.p(), g))
        }),
    ]
}

pub fn image_lattice(l: &Lattice, m: &RatMatrix, target: &Lattice) -> Lattice {
    // Applies a coordinate matrix of L's basis to the rows of `target`.
    let rows: Vec<Vec<Rat>> = target
        .basis()
        .rows_iter()
        .map(|v| l.vector(&m.mul_vec(&l.coordinates(v).unwrap())))
        .collect();
    Lattice::span(
        &RatMatrix::from_rows(rows, l.ambient_dim()).unwrap(),
        l.inner_scale().clone(),
    )
}

pub type Check = Result<(), TestCaseError>;

pub fn dual_is_an_involution(rows: Vec<Vec<i64>>) -> Check {
    let Some(l) = lattice_of(&rows) else { return Ok(()) };
    prop_assert_eq!(l.dual().dual(), l);
    Ok(())
}

pub fn discriminant_order_is_det(rows: Vec<Vec<i64>>) -> Check {
    let Some(l) = lattice_of(&rows) else { return Ok(()) };
    let d = l.discriminant_group().unwrap();
    prop_assert_eq!(Rat::from_integer(d.order()), l.det());
    prop_assert_eq!(index(&l, &l.dual()).unwrap(), d.order());
    Ok(())
}

pub fn enumeration_matches_box((rows, bound, num, den): (Vec<Vec<i64>>, i64, Vec<i64>, i64)) -> Check {
    let Some(l) = lattice_of(&rows) else { return Ok(()) };
    let zero = vec![Rat::zero(); l.rank()];
    prop_assert_eq!(
        l.count_by_norm(&rat(bound, 1), None).unwrap(),
        box_count(&l, bound, &l.vector(&zero))
    );
    let coords: Vec<Rat> = (0..l.rank()).map(|i| rat(num[i], den)).collect();
    let rep = l.vector(&coords);
    let naive = box_count(&l, bound, &rep);
    prop_assert_eq!(l.count_by_norm(&rat(bound, 1), Some(&rep)).unwrap(), naive.clone());
    let listed = l.enumerate_up_to_norm(&rat(bound, 1), Some(&rep)).unwrap();
    prop_assert!(listed.iter().all(|v| l.norm(v) <= rat(bound, 1)));
    prop_assert_eq!(listed.len() as u64, naive.values().sum::<u64>());
    Ok(())
}

pub fn box_input() -> impl Strategy<Value = (Vec<Vec<i64>>, i64, Vec<i64>, i64)> {
    (
        int_basis(4),
        0i64..=8,
        proptest::collection::vec(-2i64..=2, 4),
        1i64..=3,
    )
}

pub fn dual_of_construction_a(c: CodeZp) -> Check {
    let ctx = ZpContext::new(c.p(), c.length()).unwrap();
    let la = ctx.construct_a(&c).unwrap();
    prop_assert!(la.is_even());
    prop_assert_eq!(la.dual(), ctx.construct_a(&c.dual_code()).unwrap());
    let quotient = c.dual_code().size() / c.size();
    prop_assert_eq!(la.discriminant_group().unwrap().order(), Int::from(quotient));
    Ok(())
}

pub fn dual_of_construction_b(c: CodeZp) -> Check {
    let ctx = ZpContext::new(c.p(), c.length()).unwrap();
    let lb = ctx.construct_b(&c).unwrap();
    let p = c.p();
    let quotient = c.dual_code().size() / c.size();
    prop_assert_eq!(lb.discriminant_group().unwrap().order(), Int::from(p * p * quotient));
    let chi = ctx.context().chi().to_vec();
    let want = ctx.construct_a(&c.dual_code()).unwrap().glue(&[chi]).unwrap();
    prop_assert_eq!(lb.dual(), want);
    Ok(())
}

pub fn weight_input() -> impl Strategy<Value = (u64, Vec<u64>)> {
    (
        prop::sample::select(vec![3u64, 5, 7, 11]),
        proptest::collection::vec(any::<u64>(), 1..=6),
    )
}

pub fn even_norm_iff_chi_integral((p, xs): (u64, Vec<u64>)) -> Check {
    let x: Vec<u64> = xs.iter().map(|v| v % p).collect();
    let ctx = ConstructionContext::new(&vec![p as usize; x.len()]).unwrap();
    let l = ctx.lambda_x(&x).unwrap();
    let norm = ctx.inner(&l, &l);
    let pair = ctx.inner(&l, ctx.chi());
    prop_assert_eq!(&norm, &(&pair * rat(2, 1)));
    prop_assert_eq!((&norm / rat(2, 1)).is_integer(), pair.is_integer());
    prop_assert_eq!(norm, ctx.lambda_norm_formula(&x));
    Ok(())
}

pub fn root_input() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=9, any::<usize>())
}

pub fn roots_never_pair_to_zero_mod_k((k, pick): (usize, usize)) -> Check {
    let roots = all_roots(k);
    let b = &roots[pick % roots.len()];
    let rho = weyl_vector(k);
    let ip: Rat = b.iter().zip(&rho).map(|(x, y)| x * y).sum();
    prop_assert!(ip.is_integer());
    let v = ip.to_integer();
    prop_assert!(!v.is_multiple_of(&int(k as i64)));
    prop_assert!(v.abs() >= Int::one() && v.abs() < int(k as i64));
    Ok(())
}

pub fn one_minus_g_equals_one_minus_inverse(g: LatticeIsometry) -> Check {
    let l = g.lattice();
    prop_assert_eq!(
        g.one_minus_g_image(l, 1).unwrap(),
        g.inverse().one_minus_g_image(l, 1).unwrap()
    );
    Ok(())
}

pub fn inverse_of_one_minus_g(g: LatticeIsometry) -> Check {
    let l = g.lattice();
    let r = l.rank();
    let inv = g.one_minus_g_inverse().unwrap();
    let one_minus = IntMatrix::identity(r).sub(g.matrix());
    prop_assert!(one_minus.to_rat().mul(&inv).is_identity());
    let one_minus_inv = IntMatrix::identity(r).sub(g.inverse().matrix());
    prop_assert_eq!(one_minus.det(), one_minus_inv.det());
    let image = g.one_minus_g_image(l, 1).unwrap();
    prop_assert_eq!(image.dual(), image_lattice(l, &inv, &l.dual()));
    Ok(())
}

pub fn quotient_by_one_minus_g((p, g): (u64, LatticeIsometry)) -> Check {
    let l = g.lattice();
    let m = l.rank() as u32;
    prop_assert_eq!(g.order(), p);
    let idx = index(&g.one_minus_g_image(l, 1).unwrap(), l).unwrap();
    prop_assert_eq!(idx, num_traits::pow(Int::from(p), (m / (p as u32 - 1)) as usize));
    Ok(())
}

pub fn qdim_input() -> impl Strategy<Value = ((u64, LatticeIsometry), u64)> {
    (prime_order_isometry(), 1u64..=6)
}

pub fn qdim_collapses(((p, g), s): ((u64, LatticeIsometry), u64)) -> Check {
    let l = g.lattice();
    let s = 1 + (s - 1) % (p - 1);
    if g.one_minus_g_image(&l.dual(), s).unwrap().is_sublattice_of(l) {
        prop_assert_eq!(qdim_squared(l, &g, s).unwrap(), rat(1, 1));
    }
    Ok(())
}

fn run<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Check) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

/// Every property, each over `CASES` generated inputs.
pub fn run_all() -> Vec<(&'static str, std::result::Result<(), String>)> {
    vec![
        ("dual involution", run(int_basis(4), dual_is_an_involution)),
        ("|D(L)| = det", run(int_basis(4), discriminant_order_is_det)),
        ("enumeration vs box", run(box_input(), enumeration_matches_box)),
        ("dual of L_A(C)", run(so_code(), dual_of_construction_a)),
        ("dual of L_B(C)", run(so_code(), dual_of_construction_b)),
        (
            "even norm iff chi-integral",
            run(weight_input(), even_norm_iff_chi_integral),
        ),
        (
            "(beta|rho) nonzero mod k",
            run(root_input(), roots_never_pair_to_zero_mod_k),
        ),
        (
            "(1-g)L = (1-g^-1)L",
            run(fpf_isometry(), one_minus_g_equals_one_minus_inverse),
        ),
        ("(1-g)^-1 and ((1-g)L)*", run(fpf_isometry(), inverse_of_one_minus_g)),
        ("|L/(1-g)L|", run(prime_order_isometry(), quotient_by_one_minus_g)),
        ("qdim collapse", run(qdim_input(), qdim_collapses)),
    ]
}
