//! Small independent exact linear algebra for cross-checking the library.
#![allow(dead_code)]

use abvar_core::matrix::Matrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Mat = Vec<Vec<Q>>;
pub type IMat = Vec<Vec<BigInt>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn from_lib<T: Clone>(m: &Matrix<T>) -> Vec<Vec<T>> {
    m.iter_rows().map(|r| r.to_vec()).collect()
}

pub fn to_q(m: &IMat) -> Mat {
    m.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).fold(Q::zero(), |s, t| s + &a[i][t] * &b[t][j])).collect()).collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn scale(a: &Mat, c: &Q) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Mat = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        m[c] = m[c].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &Mat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut d = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return q(0) };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            let row = m[c].clone();
            for (x, y) in m[r].iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
    }
    d
}

pub fn is_integral(a: &Mat) -> bool {
    a.iter().flatten().all(|x| x.is_integer())
}

pub fn to_int(a: &Mat) -> IMat {
    assert!(is_integral(a));
    a.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect()
}

/// Echelon basis of the Z-span of integer rows (gcd row operations).
pub fn int_span(rows: &IMat) -> IMat {
    let mut m = rows.clone();
    let cols = m[0].len();
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&r| !m[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    out.push(m.remove(r));
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| m[r][c].abs()).unwrap();
            let prow = m[p].clone();
            for &r in &nz {
                if r != p {
                    let f = m[r][c].div_floor(&prow[c]);
                    for (x, y) in m[r].iter_mut().zip(&prow) {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    out
}

/// Z-basis of the span of rational rows.
pub fn span(rows: &Mat) -> Mat {
    let den = rows.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: IMat = rows.iter().map(|r| r.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect()).collect();
    int_span(&ints).into_iter().map(|r| r.into_iter().map(|x| Q::new(x, den.clone())).collect()).collect()
}

pub fn same_span(a: &Mat, b: &Mat) -> bool {
    let (Some(ai), Some(bi)) = (inverse(a), inverse(b)) else { return false };
    is_integral(&mul(a, &bi)) && is_integral(&mul(b, &ai))
}

/// Diagonal of the Smith normal form of a square nonsingular integer matrix.
pub fn smith(a: &IMat) -> Vec<BigInt> {
    let mut m = a.clone();
    let n = m.len();
    let mut d = Vec::new();
    for t in 0..n {
        loop {
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].abs())
            else {
                return d;
            };
            m.swap(t, pi);
            for r in m.iter_mut() {
                r.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                let f = m[i][t].div_floor(&p);
                let row = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..n {
                let f = m[t][j].div_floor(&p);
                for r in m.iter_mut() {
                    let y = r[t].clone();
                    r[j] -= &f * y;
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            if let Some(i) = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&m[i][j] % &p).is_zero())) {
                let row = m[i].clone();
                for (x, y) in m[t].iter_mut().zip(row) {
                    *x += y;
                }
                continue;
            }
            d.push(p.abs());
            break;
        }
    }
    d
}

/// Elementary divisors of an alternating form, each listed once.
pub fn alt_type(e: &IMat) -> Vec<BigInt> {
    let mut s = smith(e);
    s.sort();
    s.into_iter().step_by(2).collect()
}

pub fn divides_chain(d: &[BigInt]) -> bool {
    d.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

/// `{v in F_2^n : v E w = 0 mod 2 for every w}`, by scanning all of `F_2^n`.
pub fn brute_perp(e: &IMat, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = e.len();
    (0u64..1 << n)
        .map(|bits| (0..n).map(|i| (bits >> i & 1) as i64).collect::<Vec<i64>>())
        .filter(|v| {
            gens.iter().all(|w| {
                let s: BigInt = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| &e[i][j] * (v[i] * w[j])).sum();
                s.is_even()
            })
        })
        .collect()
}

/// Type of the quotient `X/H`: the span of `X` and the half points `h/2`,
/// with `2E` restricted to it.
pub fn quotient_type(e: &IMat, half_gens: &[Vec<i64>]) -> Vec<BigInt> {
    let n = e.len();
    let mut rows: IMat = (0..n).map(|i| (0..n).map(|j| BigInt::from(2 * (i == j) as i64)).collect()).collect();
    rows.extend(half_gens.iter().map(|h| h.iter().map(|&x| BigInt::from(x)).collect()));
    let l = to_q(&int_span(&rows));
    let l = scale(&l, &Q::new(1.into(), 2.into()));
    let g = mul(&mul(&l, &scale(&to_q(e), &q(2))), &transpose(&l));
    alt_type(&to_int(&g))
}
