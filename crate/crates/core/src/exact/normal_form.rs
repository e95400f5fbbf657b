//! Hermite and Smith normal forms over ℤ.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntMatrix};

/// Result of a Smith normal form computation: `u · m · v = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `s`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.s.nrows().min(self.s.ncols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn row_combine(m: &mut IntMatrix, i: usize, j: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
    // (row_i, row_j) <- (a·row_i + b·row_j, c·row_i + d·row_j)
    for col in 0..m.ncols() {
        let x = m[(i, col)].clone();
        let y = m[(j, col)].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[(i, col)] = a * &x + b * &y;
        m[(j, col)] = c * &x + d * &y;
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    for col in 0..m.ncols() {
        if !m[(src, col)].is_zero() {
            let v = &m[(src, col)] * f;
            m[(target, col)] += v;
        }
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    for row in 0..m.nrows() {
        if !m[(row, src)].is_zero() {
            let v = &m[(row, src)] * f;
            m[(row, target)] += v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m.row_mut(i) {
        *x = -x.clone();
    }
}

/// Row Hermite normal form. Returns `(h, u)` with `h = u · m`, `u` unimodular.
///
/// Nonzero rows of `h` come first, pivots are positive and strictly increase
/// in column, and entries above each pivot lie in `0..pivot`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.nrows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..h.ncols() {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let eg = a.extended_gcd(&b);
            let (x, y, g) = (eg.x, eg.y, eg.gcd);
            let a_g = &a / &g;
            let b_g = &b / &g;
            // [[x, y], [-b/g, a/g]] has determinant 1.
            let nb = -b_g;
            row_combine(&mut h, r, i, &x, &y, &nb, &a_g);
            row_combine(&mut u, r, i, &x, &y, &nb, &a_g);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                row_axpy(&mut h, i, r, &nq);
                row_axpy(&mut u, i, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn row_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let keep: Vec<usize> = (0..h.nrows())
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .collect();
    let mut out = h.select_rows(&keep);
    if keep.is_empty() {
        out = IntMatrix::zeros(0, m.ncols());
    }
    out
}

/// Basis (as rows) of the lattice `{x ∈ ℤ^rows : x · m = 0}`.
pub fn integer_left_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let zero_rows: Vec<usize> = (0..h.nrows()).filter(|&i| h.row(i).iter().all(Zero::is_zero)).collect();
    if zero_rows.is_empty() {
        return IntMatrix::zeros(0, m.nrows());
    }
    row_basis(&u.select_rows(&zero_rows))
}

/// Smith normal form by elementary operations, pivoting on the entry of
/// smallest absolute value.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let e = &s[(i, j)];
                    if !e.is_zero() && best.map_or(true, |(bi, bj)| e.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(s, u, v);
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = s[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = s[(i, k)].div_floor(&pivot);
                let nq = -q;
                row_axpy(&mut s, i, k, &nq);
                row_axpy(&mut u, i, k, &nq);
                dirty |= !s[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = s[(k, j)].div_floor(&pivot);
                let nq = -q;
                col_axpy(&mut s, j, k, &nq);
                col_axpy(&mut v, j, k, &nq);
                dirty |= !s[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let bad = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => {
                    let one = Int::one();
                    row_axpy(&mut s, k, i, &one);
                    row_axpy(&mut u, k, i, &one);
                }
                None => break,
            }
        }
        if s[(k, k)].is_negative() {
            negate_row(&mut s, k);
            negate_row(&mut u, k);
        }
    }
    finish(s, u, v)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix) -> SnfResult {
    SnfResult { s, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn brute_row_space_contains(basis: &IntMatrix, v: &[Int]) -> bool {
        // Small 2x2 oracle: search coefficient box.
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                let w: Vec<Int> = (0..basis.ncols())
                    .map(|j| int(a) * &basis[(0, j)] + int(b) * &basis[(1, j)])
                    .collect();
                if w == v {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn hnf_identity() {
        let id = IntMatrix::identity(3);
        let (h, u) = hnf(&id);
        assert!(h.is_identity());
        assert!(u.is_identity());
    }

    #[test]
    fn hnf_small_against_box_search() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hnf(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        assert_eq!(h, IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]));
        for r in h.rows_iter() {
            assert!(brute_row_space_contains(&m, r));
        }
        for r in m.rows_iter() {
            assert!(brute_row_space_contains(&h, r));
        }
    }

    #[test]
    fn hnf_permutation_invariant() {
        let m = IntMatrix::from_i64_rows(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        let p = m.select_rows(&[2, 0, 1]);
        assert_eq!(hnf(&m).0, hnf(&p).0);
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let k = integer_left_kernel(&m);
        assert_eq!(k.nrows(), 1);
        assert!(k.mul(&m).is_zero());
        assert_eq!(k.row(0), &[int(2), int(-1), int(0)][..]);
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let r = snf(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.s);
        assert_eq!(r.diagonal(), vec![int(1), int(6)]);

        let id = IntMatrix::identity(3);
        assert!(snf(&id).s.is_identity());

        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]);
        let r = snf(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.s);
        assert_eq!(r.diagonal(), vec![int(2), int(4)]);
        assert!(r.u.is_unimodular() && r.v.is_unimodular());
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let m = IntMatrix::from_i64_rows(&[vec![4, 6, 8], vec![6, 9, 12]]);
        let r = snf(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.s);
        assert_eq!(r.diagonal(), vec![int(1), int(0)]);
        let z = IntMatrix::zeros(2, 2);
        assert!(snf(&z).s.is_zero());
    }
}
