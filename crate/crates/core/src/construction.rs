//! Constructions A and B over a fixed base of `⊕ A_{k_i−1}`, and the
//! isometries `g_{Δ,e}` that rotate each affine diagram.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::codes::{weight, CodeJson, CodeZp};
use crate::error::{Error, Result};
use crate::exact::{int, integer_left_kernel, is_integer, rat, Int, IntMatrix, Rat, RatMatrix};
use crate::isometry::LatticeIsometry;
use crate::lattice::{index, Lattice};
use crate::roots::{coxeter_ambient, fundamental_weight, weyl_vector, TypeALattice};

/// The root lattice `R = A_{k_1−1} ⊕ … ⊕ A_{k_t−1}` in `ℤ^{k_1} ⊕ … ⊕ ℤ^{k_t}`
/// with its standard base and `χ_Δ = (ρ_1/k_1, …, ρ_t/k_t)`.
#[derive(Clone, Debug)]
pub struct ConstructionContext {
    ks: Vec<usize>,
    offsets: Vec<usize>,
    root_lattice: Lattice,
    chi: Vec<Rat>,
}

impl ConstructionContext {
    pub fn new(ks: &[usize]) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::OutOfRange("need at least one component".into()));
        }
        let parts = ks
            .iter()
            .map(|&k| TypeALattice::new(k).map(|a| a.lattice))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Lattice> = parts.iter().collect();
        let root_lattice = Lattice::orthogonal_sum(&refs)?;
        let mut offsets = Vec::with_capacity(ks.len());
        let mut chi = Vec::new();
        for &k in ks {
            offsets.push(chi.len());
            let kk = rat(k as i64, 1);
            chi.extend(weyl_vector(k).into_iter().map(|x| x / &kk));
        }
        Ok(ConstructionContext {
            ks: ks.to_vec(),
            offsets,
            root_lattice,
            chi,
        })
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn components(&self) -> usize {
        self.ks.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.chi.len()
    }

    /// `lcm(k_1, …, k_t)`, the order of `g_{Δ,e}` for unit `e`.
    pub fn n(&self) -> u64 {
        self.ks.iter().fold(1u64, |a, &k| a.lcm(&(k as u64)))
    }

    pub fn root_lattice(&self) -> &Lattice {
        &self.root_lattice
    }

    pub fn chi(&self) -> &[Rat] {
        &self.chi
    }

    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.root_lattice.inner(x, y)
    }

    fn check_element(&self, x: &[u64]) -> Result<()> {
        if x.len() != self.ks.len() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} for {} components",
                x.len(),
                self.ks.len()
            )));
        }
        if let Some(i) = (0..x.len()).find(|&i| x[i] as usize >= self.ks[i]) {
            return Err(Error::OutOfRange(format!(
                "coordinate {i} is {} but must be below {}",
                x[i], self.ks[i]
            )));
        }
        Ok(())
    }

    /// `λ_x = (λ_{x_1}, …, λ_{x_t})` with `λ_0 = 0`.
    pub fn lambda_x(&self, x: &[u64]) -> Result<Vec<Rat>> {
        self.check_element(x)?;
        let mut v = Vec::with_capacity(self.ambient_dim());
        for (&xi, &k) in x.iter().zip(&self.ks) {
            if xi == 0 {
                v.extend(std::iter::repeat(Rat::zero()).take(k));
            } else {
                v.extend(fundamental_weight(k, xi as usize)?);
            }
        }
        Ok(v)
    }

    /// `Σ x_i(k_i − x_i)/k_i`.
    pub fn lambda_norm_formula(&self, x: &[u64]) -> Rat {
        x.iter()
            .zip(&self.ks)
            .map(|(&a, &k)| rat((a * (k as u64 - a)) as i64, k as i64))
            .sum()
    }

    /// `L_A(C) = R + Σ ℤλ_c` over the generators of `C`.
    pub fn construct_a(&self, gens: &[Vec<u64>]) -> Result<Lattice> {
        let glue = gens.iter().map(|c| self.lambda_x(c)).collect::<Result<Vec<_>>>()?;
        self.root_lattice.glue(&glue)
    }

    /// `{α ∈ L_A(C) : (α|χ_Δ) ∈ ℤ}`.
    pub fn construct_b(&self, gens: &[Vec<u64>]) -> Result<Lattice> {
        let la = self.construct_a(gens)?;
        Ok(self.chi_integral_sublattice(&la))
    }

    /// `{α ∈ L : (α|χ_Δ) ∈ ℤ}` for any lattice in the ambient space.
    pub fn chi_integral_sublattice(&self, l: &Lattice) -> Lattice {
        let vals: Vec<Rat> = l.basis().rows_iter().map(|b| self.inner(b, &self.chi)).collect();
        let d = crate::exact::common_denominator(&vals);
        // Solve Σ z_i a_i + w·d = 0 over ℤ and keep z.
        let mut col: Vec<Vec<Int>> = vals
            .iter()
            .map(|v| vec![(v * Rat::from_integer(d.clone())).to_integer()])
            .collect();
        col.push(vec![d]);
        let m = IntMatrix::from_rows(col, 1).expect("column matrix");
        let k = integer_left_kernel(&m);
        let z = RatMatrix::from_fn(k.nrows(), l.rank(), |i, j| Rat::from_integer(k[(i, j)].clone()));
        Lattice::span(&z.mul(l.basis()), l.inner_scale().clone())
    }

    /// Ambient matrix of `g_{Δ,e}`: block `i` is the cyclic shift to the
    /// power `e_i`.
    pub fn g_delta_e_ambient(&self, e: &[u64]) -> Result<RatMatrix> {
        self.check_element(e)?;
        let n = self.ambient_dim();
        let mut m = RatMatrix::zeros(n, n);
        for (i, (&k, &off)) in self.ks.iter().zip(&self.offsets).enumerate() {
            let block = coxeter_ambient(k).pow(e[i]);
            for a in 0..k {
                for b in 0..k {
                    m[(off + a, off + b)] = block[(a, b)].clone();
                }
            }
        }
        Ok(m)
    }

    /// `g_{Δ,e}` acting on `lattice`. `e = 0` gives the identity; otherwise
    /// every `e_i` must be a unit mod `k_i`.
    pub fn g_delta_e(&self, lattice: &Lattice, e: &[u64]) -> Result<LatticeIsometry> {
        self.check_element(e)?;
        if e.iter().all(|&x| x == 0) {
            return Ok(LatticeIsometry::identity(lattice.clone()));
        }
        if let Some(i) = (0..e.len()).find(|&i| e[i].gcd(&(self.ks[i] as u64)) != 1) {
            return Err(Error::Precondition(format!(
                "not fixed-point free: coordinate {i} of e is not a unit mod {}",
                self.ks[i]
            )));
        }
        LatticeIsometry::from_ambient(lattice.clone(), &self.g_delta_e_ambient(e)?)
    }

    /// Assumptions of the extra-automorphism criterion for `L_B(C)` and
    /// `g_{Δ,e}`.
    pub fn extra_preconditions(&self, gens: &[Vec<u64>], e: &[u64]) -> Result<ExtraPreconditions> {
        self.check_element(e)?;
        let la = self.construct_a(gens)?;
        let lb = self.chi_integral_sublattice(&la);
        let la_dual = la.dual();
        let n = self.n();
        let idx = index(&lb, &la)?;
        let nchi: Vec<Rat> = self.chi.iter().map(|x| x * rat(n as i64, 1)).collect();
        let units = e.iter().zip(&self.ks).all(|(&x, &k)| x.gcd(&(k as u64)) == 1);
        Ok(ExtraPreconditions {
            n,
            index: idx.clone(),
            index_is_n: idx == int(n as i64),
            chi_in_dual_over_n: la_dual.contains(&nchi),
            lambda_e_in_dual: la_dual.contains(&self.lambda_x(e)?),
            e_units: units,
            la_even: la.is_even(),
        })
    }
}

/// Outcome of the precondition checks, with the two equivalent forms of the
/// index condition kept separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraPreconditions {
    pub n: u64,
    pub index: Int,
    pub index_is_n: bool,
    pub chi_in_dual_over_n: bool,
    pub lambda_e_in_dual: bool,
    pub e_units: bool,
    pub la_even: bool,
}

impl ExtraPreconditions {
    pub fn hold(&self) -> bool {
        self.index_is_n && self.lambda_e_in_dual && self.e_units && self.la_even
    }
}

/// The ℤ_p specialization: `t` copies of `A_{p−1}`.
#[derive(Clone, Debug)]
pub struct ZpContext {
    p: u64,
    ctx: ConstructionContext,
}

impl ZpContext {
    pub fn new(p: u64, t: usize) -> Result<Self> {
        if !crate::isometry::is_prime(p) || p == 2 {
            return Err(Error::OutOfRange(format!(
                "ℤ_p constructions need an odd prime, got {p}"
            )));
        }
        Ok(ZpContext {
            p,
            ctx: ConstructionContext::new(&vec![p as usize; t])?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> usize {
        self.ctx.components()
    }

    pub fn context(&self) -> &ConstructionContext {
        &self.ctx
    }

    fn check_code(&self, c: &CodeZp) -> Result<()> {
        if c.p() != self.p || c.length() != self.t() {
            return Err(Error::DimensionMismatch(format!(
                "code over ℤ_{} of length {} in a context for ℤ_{}^{}",
                c.p(),
                c.length(),
                self.p,
                self.t()
            )));
        }
        Ok(())
    }

    pub fn lambda_x(&self, x: &[u64]) -> Result<Vec<Rat>> {
        self.ctx.lambda_x(x)
    }

    pub fn construct_a(&self, c: &CodeZp) -> Result<Lattice> {
        self.check_code(c)?;
        self.ctx.construct_a(c.generators())
    }

    pub fn construct_b(&self, c: &CodeZp) -> Result<Lattice> {
        self.check_code(c)?;
        self.ctx.construct_b(c.generators())
    }

    pub fn g_delta_e(&self, lattice: &Lattice, e: &[u64]) -> Result<LatticeIsometry> {
        self.ctx.g_delta_e(lattice, e)
    }

    /// For ℤ_p the lattice conditions reduce to: `C` self-orthogonal and `e`
    /// a full-weight word of `C^⊥`. Both forms are evaluated and must agree.
    pub fn verify_extra_preconditions(&self, c: &CodeZp, e: &[u64]) -> Result<bool> {
        self.check_code(c)?;
        self.ctx.check_element(e)?;
        let by_code = c.is_self_orthogonal() && c.dual_code().contains(e) && weight(e) == self.t();
        let by_lattice = self.ctx.extra_preconditions(c.generators(), e)?.hold();
        if by_code != by_lattice {
            return Err(Error::InvariantMismatch(format!(
                "code-level ({by_code}) and lattice-level ({by_lattice}) preconditions disagree"
            )));
        }
        Ok(by_code)
    }
}

/// `{ "p", "t", "code", "e" }` as read and written by the command line tool.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub p: u64,
    pub t: usize,
    pub code: CodeJson,
    pub e: Vec<i64>,
}

impl Bundle {
    pub fn new(c: &CodeZp, e: &[u64]) -> Self {
        Bundle {
            p: c.p(),
            t: c.length(),
            code: c.to_json(),
            e: e.iter().map(|&x| x as i64).collect(),
        }
    }

    pub fn decode(&self) -> Result<(ZpContext, CodeZp, Vec<u64>)> {
        let code = CodeZp::from_json(&self.code)?;
        if code.p() != self.p || code.length() != self.t || self.e.len() != self.t {
            return Err(Error::DimensionMismatch("bundle fields disagree on p or t".into()));
        }
        let p = self.p as i64;
        let e = self.e.iter().map(|&x| x.rem_euclid(p) as u64).collect();
        Ok((ZpContext::new(self.p, self.t)?, code, e))
    }
}

/// Whether `(λ|χ_Δ) ∈ ℤ`.
pub fn pairs_integrally_with_chi(ctx: &ConstructionContext, v: &[Rat]) -> bool {
    is_integer(&ctx.inner(v, ctx.chi()))
}
