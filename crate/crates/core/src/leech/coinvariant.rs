//! Coinvariant lattices of permutation isometries of the Leech lattice and
//! the glue reconstructions of the unimodular overlattice.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::perm::{find_golay_automorphism, CycleType, GolayPermutation, DEFAULT_SEED};
use super::{build_leech, GolayCode};
use crate::error::{Error, Result};
use crate::exact::{int, Int, Rat, RatMatrix};
use crate::isometry::LatticeIsometry;
use crate::lattice::Lattice;
use crate::orbifold::{QuadraticSpaceFp, QuadraticType};

const FOUND_JSON: &str = include_str!("../../fixtures/found_permutations.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "3B")]
    B3,
    #[serde(rename = "5B")]
    B5,
    #[serde(rename = "7B")]
    B7,
    #[serde(rename = "11A")]
    A11,
    #[serde(rename = "23A")]
    A23,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] = [ClassTag::B3, ClassTag::B5, ClassTag::B7, ClassTag::A11, ClassTag::A23];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::B3 => "3B",
            ClassTag::B5 => "5B",
            ClassTag::B7 => "7B",
            ClassTag::A11 => "11A",
            ClassTag::A23 => "23A",
        }
    }

    pub fn p(self) -> u64 {
        match self {
            ClassTag::B3 => 3,
            ClassTag::B5 => 5,
            ClassTag::B7 => 7,
            ClassTag::A11 => 11,
            ClassTag::A23 => 23,
        }
    }

    pub fn cycle_type(self) -> CycleType {
        let s = match self {
            ClassTag::B3 => "1^6 3^6",
            ClassTag::B5 => "1^4 5^4",
            ClassTag::B7 => "1^3 7^3",
            ClassTag::A11 => "1^2 11^2",
            ClassTag::A23 => "1 23",
        };
        CycleType::parse(s).expect("valid cycle type")
    }

    /// Rank of the coinvariant lattice.
    pub fn rank(self) -> usize {
        let c = self.cycle_type();
        24 - c.cycles()
    }

    /// Exponent `k` in `D(Λ_h) ≅ ℤ_p^k`.
    pub fn discriminant_rank(self) -> usize {
        match self {
            ClassTag::B3 => 6,
            ClassTag::B5 => 4,
            ClassTag::B7 => 3,
            ClassTag::A11 => 2,
            ClassTag::A23 => 1,
        }
    }

    pub fn discriminant_label(self) -> String {
        crate::lattice::abelian_label(&vec![self.p(); self.discriminant_rank()])
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown class tag {s:?}")))
    }
}

/// A Golay-code permutation together with the isometry it induces on Λ.
#[derive(Clone, Debug)]
pub struct PermutationIsometry {
    permutation: GolayPermutation,
    isometry: LatticeIsometry,
}

/// Ambient matrix of `v ↦ vP` moving coordinate `i` to `images[i]`.
pub fn permutation_matrix(images: &[usize]) -> RatMatrix {
    let n = images.len();
    RatMatrix::from_fn(n, n, |i, j| {
        if images[i] == j {
            Rat::from_integer(1.into())
        } else {
            Rat::zero()
        }
    })
}

impl PermutationIsometry {
    pub fn new(leech: &Lattice, permutation: GolayPermutation) -> Result<Self> {
        let p = permutation_matrix(&permutation.images);
        let isometry = LatticeIsometry::from_ambient(leech.clone(), &p)?;
        Ok(PermutationIsometry { permutation, isometry })
    }

    pub fn permutation(&self) -> &GolayPermutation {
        &self.permutation
    }

    pub fn isometry(&self) -> &LatticeIsometry {
        &self.isometry
    }
}

#[derive(Serialize, Deserialize)]
struct FoundFixture {
    seed: u64,
    permutations: Vec<FoundEntry>,
}

#[derive(Serialize, Deserialize)]
struct FoundEntry {
    tag: ClassTag,
    cycle_type: String,
    images: Vec<usize>,
}

/// The permutations found with the default seed, frozen and re-verified.
pub fn found_permutations(golay: &GolayCode) -> Result<Vec<(ClassTag, GolayPermutation)>> {
    let fx: FoundFixture =
        serde_json::from_str(FOUND_JSON).map_err(|e| Error::CorruptFixture(format!("found_permutations.json: {e}")))?;
    if fx.seed != DEFAULT_SEED {
        return Err(Error::CorruptFixture("found_permutations.json: unexpected seed".into()));
    }
    fx.permutations
        .into_iter()
        .map(|e| {
            let bad = |m: String| Error::CorruptFixture(format!("found_permutations.json: {m}"));
            let p = GolayPermutation::new(e.images, golay).map_err(|x| bad(x.to_string()))?;
            if p.cycle_type() != e.tag.cycle_type() || p.cycle_type().to_string() != e.cycle_type {
                return Err(bad(format!("{} has cycle type {}", e.tag, p.cycle_type())));
            }
            Ok((e.tag, p))
        })
        .collect()
}

/// Runs the seeded search for every tag and renders the fixture document.
pub fn search_permutations_json(golay: &GolayCode, seed: u64) -> Result<String> {
    let permutations = ClassTag::ALL
        .into_iter()
        .map(|tag| {
            let p = find_golay_automorphism(golay, &tag.cycle_type(), seed)?;
            Ok(FoundEntry {
                tag,
                cycle_type: p.cycle_type().to_string(),
                images: p.images,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_string_pretty(&FoundFixture { seed, permutations }).map_err(|e| Error::Parse(e.to_string()))
}

/// Permutation for `tag`: the frozen fixture for the default seed, a fresh
/// search otherwise.
pub fn permutation_for(golay: &GolayCode, tag: ClassTag, seed: u64) -> Result<GolayPermutation> {
    if seed == DEFAULT_SEED {
        found_permutations(golay)?
            .into_iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::CorruptFixture(format!("no frozen permutation for {tag}")))
    } else {
        find_golay_automorphism(golay, &tag.cycle_type(), seed)
    }
}

/// `Λ_h`, `h|Λ_h` and the fixed lattice `Λ^h` for one class.
#[derive(Clone, Debug)]
pub struct CoinvariantClass {
    pub tag: ClassTag,
    pub leech: Lattice,
    pub permutation: PermutationIsometry,
    pub coinvariant: Lattice,
    pub isometry: LatticeIsometry,
    pub fixed: Lattice,
}

fn require(ok: bool, tag: ClassTag, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvariantMismatch(format!("{tag}: {}", what())))
    }
}

/// Gauss-reduced `(a, |b|, c)` of the binary form `[[a, b], [b, c]]`, a
/// complete `GL₂(ℤ)` invariant for positive definite forms.
pub fn reduce_binary_form(a: &Int, b: &Int, c: &Int) -> Result<(Int, Int, Int)> {
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    if !a.is_positive() || &a * &c - &b * &b <= Int::zero() {
        return Err(Error::NotPositiveDefinite);
    }
    loop {
        // Shift b into (−a/2, a/2] by x ↦ x − k·y.
        let k: Int = num_integer::Integer::div_floor(&(&b * 2 + &a - 1), &(&a * 2));
        if !k.is_zero() {
            c = &c - &k * &b * 2 + &k * &k * &a;
            b = &b - &k * &a;
        }
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    Ok((a, b.abs(), c))
}

/// Builds the coinvariant lattice of `tag` and checks its invariants.
pub fn coinvariant_class(tag: ClassTag, seed: u64) -> Result<CoinvariantClass> {
    let golay = GolayCode::load()?;
    let leech = build_leech(&golay)?;
    let permutation = PermutationIsometry::new(&leech, permutation_for(&golay, tag, seed)?)?;
    let full = permutation.isometry();
    let fixed = full.fixed_sublattice();
    let coinvariant = full.coinvariant_lattice();
    let isometry = full.restrict(&coinvariant)?;
    let p = tag.p();

    require(coinvariant.rank() == tag.rank(), tag, || {
        format!("coinvariant rank {} (expected {})", coinvariant.rank(), tag.rank())
    })?;
    require(fixed.rank() + coinvariant.rank() == 24, tag, || {
        "fixed and coinvariant ranks do not sum to 24".into()
    })?;
    let d = coinvariant.discriminant_group()?;
    require(d.label() == tag.discriminant_label(), tag, || {
        format!(
            "discriminant group {} (expected {})",
            d.label(),
            tag.discriminant_label()
        )
    })?;
    require(fixed.discriminant_group()?.order() == d.order(), tag, || {
        "|D(fixed)| differs from |D(coinvariant)|".into()
    })?;
    require(isometry.order() == p && isometry.is_fixed_point_free(), tag, || {
        format!("restricted isometry has order {} or fixed points", isometry.order())
    })?;
    require(coinvariant.is_rootless()?, tag, || {
        "coinvariant lattice has roots".into()
    })?;
    if matches!(tag, ClassTag::A11 | ClassTag::A23) {
        let img = isometry.one_minus_g_image(&coinvariant.dual(), 1)?;
        require(img == coinvariant, tag, || "(1 - h)L* differs from L".into())?;
    }
    if tag == ClassTag::A11 {
        let q = QuadraticSpaceFp::from_lattice(&coinvariant, p)?;
        let ty = q.quadratic_type()?;
        require(ty == QuadraticType::Minus, tag, || {
            format!("discriminant form of type {ty}")
        })?;
    }
    if tag == ClassTag::A23 {
        let g = fixed.gram().to_int().ok_or(Error::NotIntegral)?;
        let red = reduce_binary_form(&g[(0, 0)], &g[(0, 1)], &g[(1, 1)])?;
        require(red == (int(4), int(1), int(6)), tag, || {
            format!("fixed lattice reduces to {red:?}")
        })?;
    }
    Ok(CoinvariantClass {
        tag,
        leech,
        permutation,
        coinvariant,
        isometry,
        fixed,
    })
}

/// Anti-isometries `D(Λ_h) → D(Λ^h)` as lists of images of the generators
/// of `D(Λ_h)` in the coordinates of `D(Λ^h)`; returns the first one found.
fn anti_isometry(a: &QuadraticSpaceFp, b: &QuadraticSpaceFp) -> Option<Vec<Vec<u64>>> {
    let p = a.p();
    let k = a.dim();
    if b.dim() != k || b.p() != p {
        return None;
    }
    let elems: Vec<Vec<u64>> = b.values().ok()?.into_keys().collect();
    let mut chosen: Vec<Vec<u64>> = Vec::with_capacity(k);
    fn go(
        i: usize,
        a: &QuadraticSpaceFp,
        b: &QuadraticSpaceFp,
        elems: &[Vec<u64>],
        chosen: &mut Vec<Vec<u64>>,
    ) -> bool {
        let p = a.p();
        let k = a.dim();
        if i == k {
            return true;
        }
        let mut e = vec![0u64; k];
        e[i] = 1;
        let want = (p - a.value(&e)) % p;
        for y in elems {
            if b.value(y) != want {
                continue;
            }
            let ok = (0..i).all(|j| {
                let mut f = vec![0u64; k];
                f[j] = 1;
                (b.bilinear(y, &chosen[j]) + a.bilinear(&e, &f)) % p == 0
            });
            if ok {
                chosen.push(y.clone());
                if go(i + 1, a, b, elems, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(0, a, b, &elems, &mut chosen).then_some(chosen)
}

/// `Λ_h ⊥ Λ^h` glued along `x_i + y_i`, required to be even.
pub fn glue_lattice(coinvariant: &Lattice, fixed: &Lattice, glue: &[(Vec<Rat>, Vec<Rat>)]) -> Result<Lattice> {
    let base = coinvariant.sum(fixed)?;
    let vecs: Vec<Vec<Rat>> = glue
        .iter()
        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a + b).collect())
        .collect();
    let u = base.glue(&vecs)?;
    if !u.is_even() {
        return Err(Error::NotEven);
    }
    Ok(u)
}

/// Even unimodular overlattice of `Λ_h ⊥ Λ^h` from an anti-isometry of
/// discriminant forms.
pub fn reconstruct_unimodular(class: &CoinvariantClass) -> Result<Lattice> {
    let tag = class.tag;
    if !matches!(tag, ClassTag::A11 | ClassTag::A23) {
        return Err(Error::Precondition(format!(
            "glue reconstruction is only provided for 11A and 23A, not {tag}"
        )));
    }
    let p = tag.p();
    let qa = QuadraticSpaceFp::from_lattice(&class.coinvariant, p)?;
    let qb = QuadraticSpaceFp::from_lattice(&class.fixed, p)?;
    let images = anti_isometry(&qa, &qb)
        .ok_or_else(|| Error::InvariantMismatch(format!("{tag}: no singular glue between the discriminant forms")))?;
    let db = class.fixed.discriminant_group()?;
    let glue: Vec<(Vec<Rat>, Vec<Rat>)> = qa
        .generators()
        .iter()
        .zip(&images)
        .map(|(x, y)| {
            let c: Vec<Int> = y.iter().map(|&v| Int::from(v)).collect();
            (x.clone(), db.element(&c))
        })
        .collect();
    let u = glue_lattice(&class.coinvariant, &class.fixed, &glue)?;
    let ok = u.rank() == 24 && u.det() == Rat::from_integer(1.into()) && u.is_rootless()?;
    if !ok {
        return Err(Error::InvariantMismatch(format!(
            "{tag}: glued lattice is not rootless even unimodular of rank 24"
        )));
    }
    Ok(u)
}

/// `q(x) + q(y)` over `F_p` for a pair of discriminant elements, used to
/// diagnose non-singular glue.
pub fn glue_defect(class: &CoinvariantClass, x: &[Rat], y: &[Rat]) -> Result<u64> {
    let p = Rat::from_integer(class.tag.p().into());
    let n = (class.coinvariant.norm(x) + class.fixed.norm(y)) * p / Rat::from_integer(2.into());
    if !crate::exact::is_integer(&n) {
        return Err(Error::NotElementary("glue value is not integral".into()));
    }
    let m = n.to_integer() % Int::from(class.tag.p());
    Ok(m.to_i64()
        .map(|v| v.rem_euclid(class.tag.p() as i64) as u64)
        .unwrap_or(0))
}
