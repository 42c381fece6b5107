//! Integer linear algebra: Hermite and Smith forms, congruence kernels and
//! canonical bases for rational lattices.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::{IntMatrix, Matrix, RatMatrix};

fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..a.cols() {
        let v = q * &a[(src, j)];
        a[(dst, j)] -= v;
    }
}

/// Row-style Hermite normal form of the row lattice of `m`.
///
/// The result is upper echelon with strictly positive pivots, entries above
/// each pivot reduced into `[0, pivot)`, and zero rows dropped. Two integer
/// matrices span the same row lattice iff their HNFs are equal.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&i, &j| a[(i, c)].abs().cmp(&a[(j, c)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(p, r);
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                row_axpy(&mut a, i, r, &q);
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            for j in 0..cols {
                a[(r, j)] = -&a[(r, j)];
            }
        }
        for i in 0..r {
            let q = a[(i, c)].div_floor(&a[(r, c)]);
            row_axpy(&mut a, i, r, &q);
        }
        r += 1;
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Diagonal of the Smith normal form: the nonzero invariant factors
/// `s_1 | s_2 | ...`, all positive.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[(i, t)].div_floor(&a[(t, t)]);
            row_axpy(&mut a, i, t, &q);
            clean &= a[(i, t)].is_zero();
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_floor(&a[(t, t)]);
            if !q.is_zero() {
                for i in 0..rows {
                    let v = &q * &a[(i, t)];
                    a[(i, j)] -= v;
                }
            }
            clean &= a[(t, j)].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into the pivot row
        let d = a[(t, t)].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&d)));
        if let Some(i) = bad {
            for j in 0..cols {
                let v = a[(i, j)].clone();
                a[(t, j)] += v;
            }
            // reduce the new pivot row now so the next pivot is strictly smaller
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&d);
                if !q.is_zero() {
                    for r in 0..rows {
                        let v = &q * &a[(r, t)];
                        a[(r, j)] -= v;
                    }
                }
            }
            continue;
        }
        out.push(d.abs());
        t += 1;
    }
    out
}

/// Basis (HNF rows) of the lattice `{a in Z^n : a * w == 0 (mod modulus)}`
/// for an `n x k` integer matrix `w`.
pub fn congruence_kernel(w: &IntMatrix, modulus: &BigInt) -> IntMatrix {
    let (n, k) = (w.rows(), w.cols());
    let big = Matrix::from_fn(n + k, k + n, |i, j| {
        if i < n {
            if j < k {
                w[(i, j)].clone()
            } else if j - k == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if j == i - n {
            modulus.clone()
        } else {
            BigInt::zero()
        }
    });
    let h = hnf(&big);
    let keep: Vec<usize> = (0..h.rows()).filter(|&i| (0..k).all(|j| h[(i, j)].is_zero())).collect();
    let tail = Matrix::from_fn(keep.len(), n, |i, j| h[(keep[i], k + j)].clone());
    hnf(&tail)
}

/// Canonical basis of the rational row lattice spanned by the rows of `gens`.
pub fn canonical_basis(gens: &RatMatrix) -> RatMatrix {
    let (den, ints) = gens.clear_denominators();
    let h = hnf(&ints);
    let d = BigRational::from_integer(den);
    h.map(|x| BigRational::from_integer(x.clone()) / &d)
}

/// True when every row of `vectors` is an integer combination of the rows of
/// the invertible `basis`.
pub fn rows_in_lattice(vectors: &RatMatrix, basis: &RatMatrix) -> bool {
    match basis.inverse() {
        Some(inv) => (vectors * &inv).is_integral(),
        None => false,
    }
}

/// Same row lattice, for full-rank square bases.
pub fn same_lattice(a: &RatMatrix, b: &RatMatrix) -> bool {
    a.rows() == b.rows() && rows_in_lattice(a, b) && rows_in_lattice(b, a)
}

/// Exact integer `k`-th root when it exists.
pub fn exact_root(value: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 || value.is_negative() {
        return None;
    }
    let r = value.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *value).then_some(r)
}
