//! Integral LLL reduction on a Gram matrix (δ = 3/4).
//!
//! Works entirely with the integer subdeterminants `d_i` and the scaled
//! Gram–Schmidt coefficients `λ_ij = d_j · μ_ij`, so no rationals appear.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};

/// Output of [`lll_gram`]: `h · gram · hᵀ = reduced`.
#[derive(Clone, Debug)]
pub struct LllResult {
    pub h: IntMatrix,
    pub reduced: IntMatrix,
}

struct State {
    n: usize,
    a: IntMatrix,
    h: IntMatrix,
    // d[i] is the Gram determinant of the first i vectors; d[0] = 1.
    d: Vec<Int>,
    lambda: IntMatrix,
}

fn round_div(n: &Int, d: &Int) -> Int {
    // Nearest integer to n/d for d > 0, halves rounded down.
    let two = Int::from(2);
    (&two * n + d).div_floor(&(&two * d))
}

impl State {
    // b_k <- b_k - q·b_l, applied to the Gram matrix and the transform.
    fn sub_row(&mut self, k: usize, l: usize, q: &Int) {
        let n = self.n;
        for j in 0..n {
            let v = q * &self.h[(l, j)];
            self.h[(k, j)] -= v;
        }
        let all = q * q * &self.a[(l, l)];
        let akl = self.a[(k, l)].clone();
        for j in 0..n {
            if j != k {
                let v = q * &self.a[(l, j)];
                self.a[(k, j)] -= v;
                self.a[(j, k)] = self.a[(k, j)].clone();
            }
        }
        let two = Int::from(2);
        self.a[(k, k)] = &self.a[(k, k)] - &two * q * &akl + all;
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.h.swap_rows(i, j);
        self.a.swap_rows(i, j);
        self.a.swap_cols(i, j);
    }

    fn redi(&mut self, k: usize, l: usize) {
        let two = Int::from(2);
        if (&two * &self.lambda[(k, l)]).abs() <= self.d[l + 1] {
            return;
        }
        let q = round_div(&self.lambda[(k, l)], &self.d[l + 1]);
        self.sub_row(k, l, &q);
        let v = &q * &self.d[l + 1];
        self.lambda[(k, l)] -= v;
        for i in 0..l {
            let v = &q * &self.lambda[(l, i)];
            self.lambda[(k, i)] -= v;
        }
    }

    fn swapi(&mut self, k: usize, kmax: usize) {
        self.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lambda[(k, j)].clone();
            self.lambda[(k, j)] = self.lambda[(k - 1, j)].clone();
            self.lambda[(k - 1, j)] = t;
        }
        let lam = self.lambda[(k, k - 1)].clone();
        let b = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lambda[(i, k)].clone();
            self.lambda[(i, k)] = (&self.d[k + 1] * &self.lambda[(i, k - 1)] - &lam * &t) / &self.d[k];
            self.lambda[(i, k - 1)] = (&b * &t + &lam * &self.lambda[(i, k)]) / &self.d[k + 1];
        }
        self.d[k] = b;
    }
}

/// LLL-reduces the lattice with integer Gram matrix `gram`.
pub fn lll_gram(gram: &IntMatrix) -> Result<LllResult> {
    let n = gram.nrows();
    if n == 0 {
        return Ok(LllResult {
            h: IntMatrix::identity(0),
            reduced: gram.clone(),
        });
    }
    let mut st = State {
        n,
        a: gram.clone(),
        h: IntMatrix::identity(n),
        d: vec![Int::zero(); n + 1],
        lambda: IntMatrix::zeros(n, n),
    };
    st.d[0] = Int::one();
    st.d[1] = st.a[(0, 0)].clone();
    if !st.d[1].is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = st.a[(k, j)].clone();
                for i in 0..j {
                    u = (&st.d[i + 1] * &u - &st.lambda[(k, i)] * &st.lambda[(j, i)]) / &st.d[i];
                }
                if j < k {
                    st.lambda[(k, j)] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    st.d[k + 1] = u;
                }
            }
        }
        loop {
            st.redi(k, k - 1);
            let lam = &st.lambda[(k, k - 1)];
            let lhs = Int::from(4) * &st.d[k + 1] * &st.d[k - 1];
            let rhs = Int::from(3) * &st.d[k] * &st.d[k] - Int::from(4) * lam * lam;
            if lhs < rhs {
                st.swapi(k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                break;
            }
        }
        for l in (0..k - 1).rev() {
            st.redi(k, l);
        }
        k += 1;
    }
    let reduced = st.h.mul(gram).mul(&st.h.transpose());
    debug_assert_eq!(reduced, st.a);
    Ok(LllResult { h: st.h, reduced })
}
