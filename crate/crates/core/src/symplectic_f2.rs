//! The 2-torsion `X_2` with its mod-2 pairing, as a symplectic space over F2.
//!
//! Vectors are bit-packed into a `u64`; coordinate `i` is bit `i`. Written
//! out as bitstrings, coordinate 0 comes first.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::PolarizedLattice;
use crate::rng;
use crate::torsion::{FiniteSubgroup, TorsionPoint};

pub const MAX_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpaceF2 {
    dim: usize,
    gram: Vec<u64>,
}

fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

fn mask(dim: usize) -> u64 {
    if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

fn lowest(x: u64) -> usize {
    x.trailing_zeros() as usize
}

/// Rank of a list of F2 vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            if x & (1 << lowest(b)) != 0 {
                x ^= b;
            }
        }
        if x != 0 {
            // keep the pivot of x clear in earlier rows
            let p = lowest(x);
            for b in basis.iter_mut() {
                if *b & (1 << p) != 0 {
                    *b ^= x;
                }
            }
            basis.push(x);
        }
    }
    basis.len()
}

impl SymplecticSpaceF2 {
    /// From Gram rows; must be alternating and nondegenerate.
    pub fn from_gram(gram: Vec<u64>) -> Result<Self> {
        let dim = gram.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionMismatch { expected: MAX_DIM, found: dim });
        }
        if dim % 2 == 1 {
            return Err(Error::OddDimension(dim));
        }
        for (i, &row) in gram.iter().enumerate() {
            if row & !mask(dim) != 0 || row & (1 << i) != 0 {
                return Err(Error::DegeneratePairing);
            }
            for (j, &other) in gram.iter().enumerate() {
                if (row >> j) & 1 != (other >> i) & 1 {
                    return Err(Error::DegeneratePairing);
                }
            }
        }
        if rank(&gram) != dim {
            return Err(Error::DegeneratePairing);
        }
        Ok(SymplecticSpaceF2 { dim, gram })
    }

    /// `e_i` paired with `f_i = e_{i+n}`.
    pub fn standard(dim: usize) -> Result<Self> {
        if dim % 2 == 1 {
            return Err(Error::OddDimension(dim));
        }
        let n = dim / 2;
        let gram = (0..dim).map(|i| 1u64 << if i < n { i + n } else { i - n }).collect();
        Self::from_gram(gram)
    }

    /// `X_2` of `p` in the basis `b_i / 2`, with Gram `2 q(b_i/2, b_j/2) = E_ij mod 2`.
    pub fn from_torsion(p: &PolarizedLattice) -> Result<Self> {
        let n = p.dim();
        if n > MAX_DIM {
            return Err(Error::DimensionMismatch { expected: MAX_DIM, found: n });
        }
        let gram = (0..n)
            .map(|i| {
                (0..n).fold(0u64, |acc, j| if p.form()[(i, j)].is_odd() { acc | (1 << j) } else { acc })
            })
            .collect::<Vec<_>>();
        Self::from_gram(gram)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    /// `v·G` as a bitmask, so that `<v, w> = parity(v·G & w)`.
    pub fn dual_vector(&self, v: u64) -> u64 {
        let mut acc = 0;
        let mut x = v;
        while x != 0 {
            acc ^= self.gram[lowest(x)];
            x &= x - 1;
        }
        acc
    }

    pub fn pair(&self, v: u64, w: u64) -> bool {
        parity(self.dual_vector(v) & w)
    }

    pub fn is_isotropic_plane(&self, v: u64, w: u64) -> bool {
        v != 0 && w != 0 && v != w && !self.pair(v, w)
    }

    fn check_vector(&self, v: u64) -> Result<()> {
        if v & !mask(self.dim) != 0 {
            return Err(Error::DimensionMismatch { expected: self.dim, found: 64 - v.leading_zeros() as usize });
        }
        Ok(())
    }

    /// Orthogonal of a subspace: the common kernel of `<·, v>`.
    pub fn perp(&self, sub: &SubspaceF2) -> SubspaceF2 {
        let functionals: Vec<u64> = sub.basis.iter().map(|&v| self.dual_vector(v)).collect();
        SubspaceF2::from_vectors(&null_space(&functionals, self.dim))
    }

    /// `plane^⊥`, of dimension `2n - 2`.
    pub fn coisotropic_complement(&self, plane: &Plane) -> Result<SubspaceF2> {
        self.check_vector(plane.first | plane.second)?;
        if !self.is_isotropic_plane(plane.first, plane.second) {
            return Err(Error::NotIsotropic);
        }
        Ok(self.perp(&plane.to_subspace()))
    }

    /// All isotropic planes, in canonical order.
    pub fn enumerate_isotropic_planes(&self) -> Vec<Plane> {
        let mut out = self.enumerate_part(0, 1);
        out.sort();
        out
    }

    /// The planes whose pivot pair has index `≡ part (mod parts)`, unsorted.
    /// The union over all parts, sorted, is `enumerate_isotropic_planes`.
    pub fn enumerate_part(&self, part: usize, parts: usize) -> Vec<Plane> {
        let n = self.dim;
        let mut out = Vec::new();
        let mut index = 0usize;
        for p in 0..n {
            for q in p + 1..n {
                index += 1;
                if parts == 0 || (index - 1) % parts != part {
                    continue;
                }
                // second row: pivot q, free above q
                let free2: Vec<usize> = (q + 1..n).collect();
                // first row: pivot p, zero at q, free elsewhere above p
                let free1: Vec<usize> = (p + 1..n).filter(|&i| i != q).collect();
                for s2 in 0u64..(1u64 << free2.len()) {
                    let w = (1u64 << q) | spread(s2, &free2);
                    for s1 in 0u64..(1u64 << free1.len()) {
                        let v = (1u64 << p) | spread(s1, &free1);
                        if !self.pair(v, w) {
                            out.push(Plane { first: v, second: w });
                        }
                    }
                }
            }
        }
        out
    }

    /// Ordered pairs of distinct nonzero orthogonal vectors, divided by
    /// `|GL_2(F_2)| = 6`. Independent of the enumerator.
    pub fn count_planes_by_pairs(&self) -> u64 {
        let top = 1u64 << self.dim;
        let mut pairs = 0u64;
        for v in 1..top {
            let dv = self.dual_vector(v);
            for w in 1..top {
                if w != v && !parity(dv & w) {
                    pairs += 1;
                }
            }
        }
        pairs / 6
    }

    pub fn random_isotropic_plane(&self, seed: u64) -> Result<Plane> {
        if self.dim < 4 {
            return Err(Error::NoneExist(self.dim));
        }
        let mut r = rng::seeded(seed);
        let m = mask(self.dim);
        loop {
            let v = r.gen::<u64>() & m;
            let w = r.gen::<u64>() & m;
            if self.is_isotropic_plane(v, w) {
                return Ok(Plane::new(v, w).expect("independent"));
            }
        }
    }
}

impl SymplecticSpaceF2 {
    /// A random totally isotropic subspace of dimension `k`.
    pub fn random_isotropic_subspace(&self, k: usize, seed: u64) -> Result<SubspaceF2> {
        if 2 * k > self.dim {
            return Err(Error::NoneExist(self.dim));
        }
        let mut r = rng::seeded(seed);
        let m = mask(self.dim);
        let mut vs: Vec<u64> = Vec::with_capacity(k);
        while vs.len() < k {
            let v = r.gen::<u64>() & m;
            if vs.iter().all(|&w| !self.pair(v, w)) && rank(&[&vs[..], &[v]].concat()) == vs.len() + 1 {
                vs.push(v);
            }
        }
        Ok(SubspaceF2::from_vectors(&vs))
    }
}

fn spread(bits: u64, positions: &[usize]) -> u64 {
    positions.iter().enumerate().fold(0, |acc, (k, &i)| if bits >> k & 1 == 1 { acc | (1 << i) } else { acc })
}

/// Basis of `{x : parity(x & f) = 0 for every f}` in `F_2^dim`.
fn null_space(functionals: &[u64], dim: usize) -> Vec<u64> {
    // reduced echelon form of the functionals, pivot = lowest bit
    let mut rows: Vec<u64> = Vec::new();
    for &f in functionals {
        let mut x = f;
        for &r in &rows {
            if x & (1 << lowest(r)) != 0 {
                x ^= r;
            }
        }
        if x != 0 {
            let p = lowest(x);
            for r in rows.iter_mut() {
                if *r & (1 << p) != 0 {
                    *r ^= x;
                }
            }
            rows.push(x);
        }
    }
    let pivots: Vec<usize> = rows.iter().map(|&r| lowest(r)).collect();
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut v = 1u64 << c;
            for (r, &p) in rows.iter().zip(&pivots) {
                if r >> c & 1 == 1 {
                    v |= 1 << p;
                }
            }
            v
        })
        .collect()
}

/// Renders `v` as a bitstring of length `dim`, coordinate 0 first.
pub fn bitstring(v: u64, dim: usize) -> String {
    (0..dim).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<u64> {
    if s.is_empty() || s.len() > MAX_DIM {
        return Err(Error::Parse(alloc::format!("bitstring length {}", s.len())));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        _ => Err(Error::Parse(alloc::format!("bad bit {c:?}"))),
    })
}

/// A 2-dimensional subspace in reduced echelon form: pivots `p < q` (lowest
/// set bits), `first` vanishes at `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    first: u64,
    second: u64,
}

impl Plane {
    /// Canonical plane spanned by `v, w`; `None` if they are dependent.
    pub fn new(v: u64, w: u64) -> Option<Self> {
        if v == 0 || w == 0 || v == w {
            return None;
        }
        let elems = [v, w, v ^ w];
        let p = elems.iter().map(|&x| lowest(x)).min().expect("nonempty");
        let second = *elems.iter().find(|&&x| x >> p & 1 == 0).expect("one element vanishes at p");
        let q = lowest(second);
        let first = *elems.iter().find(|&&x| x >> p & 1 == 1 && x >> q & 1 == 0).expect("echelon row");
        Some(Plane { first, second })
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn second(&self) -> u64 {
        self.second
    }

    pub fn elements(&self) -> [u64; 3] {
        [self.first, self.second, self.first ^ self.second]
    }

    pub fn to_subspace(&self) -> SubspaceF2 {
        SubspaceF2 { basis: alloc::vec![self.first, self.second] }
    }

    /// The subgroup of `X_2` of `p` generated by `v/2` for `v` in the plane.
    pub fn to_subgroup(&self, p: &PolarizedLattice) -> Result<FiniteSubgroup> {
        let gens = [self.first, self.second]
            .iter()
            .map(|&v| half_point(p, v))
            .collect::<Result<Vec<_>>>()?;
        FiniteSubgroup::generated(p, gens)
    }

    pub fn render(&self, dim: usize) -> (String, String) {
        (bitstring(self.first, dim), bitstring(self.second, dim))
    }

    fn key(&self) -> (u64, u64) {
        (self.first.reverse_bits(), self.second.reverse_bits())
    }
}

/// Planes order lexicographically on their bitstrings.
impl Ord for Plane {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Plane {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `v / 2` as a torsion point of `p`.
pub fn half_point(p: &PolarizedLattice, v: u64) -> Result<TorsionPoint> {
    let n = p.dim();
    if v & !mask(n.min(64)) != 0 {
        return Err(Error::DimensionMismatch { expected: n, found: 64 - v.leading_zeros() as usize });
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let coords = (0..n).map(|i| if v >> i & 1 == 1 { half.clone() } else { BigRational::zero() }).collect();
    TorsionPoint::new(p, coords)
}

/// A subspace in reduced echelon form (canonical basis).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceF2 {
    basis: Vec<u64>,
}

impl SubspaceF2 {
    pub fn from_vectors(vectors: &[u64]) -> Self {
        let mut rows: Vec<u64> = Vec::new();
        for &v in vectors {
            let mut x = v;
            for &r in &rows {
                if x & (1 << lowest(r)) != 0 {
                    x ^= r;
                }
            }
            if x != 0 {
                let p = lowest(x);
                for r in rows.iter_mut() {
                    if *r & (1 << p) != 0 {
                        *r ^= x;
                    }
                }
                rows.push(x);
            }
        }
        rows.sort_by_key(|&r| lowest(r));
        SubspaceF2 { basis: rows }
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The subgroup of `X_2` of `p` generated by `v/2` for basis vectors `v`.
    pub fn to_subgroup(&self, p: &PolarizedLattice) -> Result<FiniteSubgroup> {
        let gens = self.basis.iter().map(|&v| half_point(p, v)).collect::<Result<Vec<_>>>()?;
        FiniteSubgroup::generated(p, gens)
    }

    pub fn contains(&self, v: u64) -> bool {
        rank(&[&self.basis[..], &[v]].concat()) == self.basis.len()
    }
}
