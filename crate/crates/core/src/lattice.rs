//! Polarized lattices: a full-rank lattice in the fixed ambient space `Q^{2g}`
//! carrying an integral alternating form, and the symplectic normal form that
//! produces its polarization type.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::intlin;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rng;

/// Elementary divisors `(d_1, ..., d_g)` of a polarization, `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolType(Vec<BigInt>);

impl PolType {
    pub fn new(divisors: Vec<BigInt>) -> Result<Self> {
        if divisors.is_empty() {
            return Err(Error::InvalidGenus);
        }
        if divisors.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidType("divisors must be positive".into()));
        }
        if divisors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidType("divisor chain broken".into()));
        }
        Ok(PolType(divisors))
    }

    pub fn from_u64(divisors: &[u64]) -> Result<Self> {
        Self::new(divisors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn principal(g: usize) -> Self {
        PolType(alloc::vec![BigInt::one(); g])
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.0
    }

    pub fn genus(&self) -> usize {
        self.0.len()
    }

    pub fn is_principal(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    /// `d_1 * ... * d_g`; the Pfaffian of the normal form.
    pub fn product(&self) -> BigInt {
        self.0.iter().product()
    }

    pub fn scaled(&self, m: &BigInt) -> Self {
        PolType(self.0.iter().map(|d| d * m).collect())
    }

    /// `d_1 * d_g`, the scale carried by the dual polarization.
    pub fn dual_scale(&self) -> BigInt {
        &self.0[0] * &self.0[self.0.len() - 1]
    }

    pub fn is_dualizable(&self) -> bool {
        let e = self.dual_scale();
        self.0.iter().all(|d| e.is_multiple_of(d))
    }

    /// `(d_1 d_g / d_g, ..., d_1 d_g / d_1)`.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_dualizable() {
            return Err(Error::NotDualizableType(self.to_string()));
        }
        let e = self.dual_scale();
        Self::new(self.0.iter().rev().map(|d| &e / d).collect())
    }

    /// The standard form `[[0, D], [-D, 0]]`.
    pub fn standard_form(&self) -> IntMatrix {
        let g = self.genus();
        IntMatrix::from_fn(2 * g, 2 * g, |i, j| {
            if i < g && j == i + g {
                self.0[i].clone()
            } else if i >= g && i == j + g {
                -&self.0[j]
            } else {
                BigInt::zero()
            }
        })
    }
}

impl fmt::Display for PolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Witness of a change of lattice basis; `det = ±1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnimodularChange(IntMatrix);

impl UnimodularChange {
    pub fn new(u: IntMatrix) -> Result<Self> {
        if !u.is_unimodular() {
            return Err(Error::InvalidLattice("change of basis is not unimodular".into()));
        }
        Ok(UnimodularChange(u))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }
}

/// Symplectic normal form of an integral alternating form.
///
/// Returns the type and a unimodular `U` with `U^T E U = [[0, D], [-D, 0]]`.
/// Pivot rule: the pair `(i, j)`, `i < j`, of smallest nonzero `|E_ij|` in the
/// unreduced block, ties broken lexicographically.
pub fn frobenius_normal_form(form: &IntMatrix) -> Result<(PolType, UnimodularChange)> {
    if !form.is_square() {
        return Err(Error::InvalidLattice("form is not square".into()));
    }
    let n = form.rows();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if n == 0 {
        return Err(Error::InvalidGenus);
    }
    if !form.is_alternating() {
        return Err(Error::InvalidLattice("form is not alternating".into()));
    }
    if form.det().is_zero() {
        return Err(Error::DegenerateForm);
    }

    let mut m = form.clone();
    let mut u = IntMatrix::identity(n);
    let mut divisors = Vec::with_capacity(n / 2);

    let mut k = 0;
    while k < n {
        'pivot: loop {
            let (pi, pj) = smallest_pair(&m, k).ok_or(Error::DegenerateForm)?;
            move_index(&mut m, &mut u, pi, k);
            // pj may have been displaced by the first swap
            let pj = if pj == k { pi } else { pj };
            move_index(&mut m, &mut u, pj, k + 1);
            if m[(k, k + 1)].is_negative() {
                negate_index(&mut m, &mut u, k + 1);
            }
            let d = m[(k, k + 1)].clone();
            loop {
                let mut remainder = false;
                for l in k + 2..n {
                    // v_l -= q v_{k+1} clears E(v_k, v_l) mod d
                    let q = m[(k, l)].div_floor(&d);
                    add_multiple(&mut m, &mut u, l, k + 1, &-q);
                    // v_l += q' v_k clears E(v_{k+1}, v_l) mod d
                    let q2 = m[(k + 1, l)].div_floor(&d);
                    add_multiple(&mut m, &mut u, l, k, &q2);
                    remainder |= !m[(k, l)].is_zero() || !m[(k + 1, l)].is_zero();
                }
                if remainder {
                    continue 'pivot;
                }
                let offender =
                    (k + 2..n).find(|&l| (l + 1..n).any(|j| !m[(l, j)].is_multiple_of(&d)));
                match offender {
                    // the next reduction pass leaves a remainder smaller than d
                    Some(l) => add_multiple(&mut m, &mut u, k, l, &BigInt::one()),
                    None => break 'pivot,
                }
            }
        }
        divisors.push(m[(k, k + 1)].clone());
        k += 2;
    }

    // reorder (λ_1, μ_1, λ_2, μ_2, ...) into (λ_1..λ_g, μ_1..μ_g)
    let g = n / 2;
    let order: Vec<usize> = (0..g).map(|i| 2 * i).chain((0..g).map(|i| 2 * i + 1)).collect();
    let u = IntMatrix::from_fn(n, n, |i, j| u[(i, order[j])].clone());
    Ok((PolType::new(divisors)?, UnimodularChange(u)))
}

fn smallest_pair(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let n = m.rows();
    let mut best: Option<(usize, usize)> = None;
    for i in k..n {
        for j in i + 1..n {
            if m[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// Congruence operations: each acts on the basis (columns of u) and on the
// Gram matrix m = u^T E u simultaneously.

fn move_index(m: &mut IntMatrix, u: &mut IntMatrix, from: usize, to: usize) {
    if from != to {
        m.swap_rows(from, to);
        m.swap_cols(from, to);
        u.swap_cols(from, to);
    }
}

fn negate_index(m: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    let n = m.rows();
    for j in 0..n {
        m[(i, j)] = -&m[(i, j)];
        m[(j, i)] = -&m[(j, i)];
        u[(j, i)] = -&u[(j, i)];
    }
}

/// `v_dst += c * v_src`.
fn add_multiple(m: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let n = m.rows();
    for j in 0..n {
        let v = c * &m[(src, j)];
        m[(dst, j)] += v;
    }
    for i in 0..n {
        let v = c * &m[(i, src)];
        m[(i, dst)] += v;
    }
    for i in 0..n {
        let v = c * &u[(i, src)];
        u[(i, dst)] += v;
    }
}

/// A broken invariant of a candidate polarized lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidGenus,
    BasisShape { rows: usize, cols: usize, expected: usize },
    FormShape { rows: usize, cols: usize, expected: usize },
    BasisSingular,
    NotAlternating,
    DegenerateForm,
    DeterminantNotSquare,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidGenus => write!(f, "genus must be at least 1"),
            Violation::BasisShape { rows, cols, expected } => {
                write!(f, "basis is {rows}x{cols}, expected {expected}x{expected}")
            }
            Violation::FormShape { rows, cols, expected } => {
                write!(f, "form is {rows}x{cols}, expected {expected}x{expected}")
            }
            Violation::BasisSingular => write!(f, "basis is singular"),
            Violation::NotAlternating => write!(f, "not alternating"),
            Violation::DegenerateForm => write!(f, "degenerate form"),
            Violation::DeterminantNotSquare => write!(f, "determinant is not a perfect square"),
        }
    }
}

/// Checks every invariant of a polarized lattice on raw data. Never fails;
/// an empty list means valid.
pub fn validate(genus: usize, basis: &RatMatrix, form: &IntMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    if genus == 0 {
        out.push(Violation::InvalidGenus);
    }
    let n = 2 * genus;
    let basis_ok = basis.rows() == n && basis.cols() == n;
    if !basis_ok {
        out.push(Violation::BasisShape { rows: basis.rows(), cols: basis.cols(), expected: n });
    } else if basis.det().is_zero() {
        out.push(Violation::BasisSingular);
    }
    if form.rows() != n || form.cols() != n {
        out.push(Violation::FormShape { rows: form.rows(), cols: form.cols(), expected: n });
        return out;
    }
    if !form.is_alternating() {
        out.push(Violation::NotAlternating);
    }
    let det = form.det();
    if det.is_zero() {
        out.push(Violation::DegenerateForm);
    } else if det.is_negative() || intlin::exact_root(&det, 2).is_none() {
        out.push(Violation::DeterminantNotSquare);
    }
    out
}

#[derive(Debug)]
struct Inner {
    genus: usize,
    basis: RatMatrix,
    basis_inv: RatMatrix,
    form: IntMatrix,
    ambient_form: RatMatrix,
    pol_type: PolType,
    symplectic_change: UnimodularChange,
}

/// A full-rank lattice in `Q^{2g}` with an integral nondegenerate alternating
/// form. Immutable; clones share storage.
#[derive(Clone, Debug)]
pub struct PolarizedLattice(Arc<Inner>);

impl PartialEq for PolarizedLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.basis == other.0.basis && self.0.form == other.0.form)
    }
}

impl Eq for PolarizedLattice {}

impl PolarizedLattice {
    /// `basis` rows span the lattice; `form` is the alternating form in that basis.
    pub fn new(basis: RatMatrix, form: IntMatrix) -> Result<Self> {
        if form.rows() % 2 == 1 && form.is_square() {
            return Err(Error::OddDimension(form.rows()));
        }
        let genus = form.rows() / 2;
        let violations = validate(genus, &basis, &form);
        if !violations.is_empty() {
            if violations.iter().all(|v| *v == Violation::DegenerateForm) {
                return Err(Error::DegenerateForm);
            }
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidLattice(msg.join("; ")));
        }
        let basis_inv = basis.inverse().ok_or(Error::InvalidLattice("basis is singular".into()))?;
        let ambient_form = &(&basis_inv * &form.to_rational()) * &basis_inv.transpose();
        let (pol_type, symplectic_change) = frobenius_normal_form(&form)?;
        Ok(PolarizedLattice(Arc::new(Inner {
            genus,
            basis,
            basis_inv,
            form,
            ambient_form,
            pol_type,
            symplectic_change,
        })))
    }

    /// Lattice spanned by `basis` with the restriction of an ambient rational
    /// form; fails with `InvalidLattice` when the restriction is not integral.
    pub fn from_ambient(basis: RatMatrix, ambient_form: &RatMatrix) -> Result<Self> {
        let form = &(&basis * ambient_form) * &basis.transpose();
        let form = form
            .to_integer()
            .ok_or_else(|| Error::InvalidLattice("restricted form is not integral".into()))?;
        Self::new(basis, form)
    }

    /// Basis = identity, form = the standard principal `J`.
    pub fn standard_principal(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidGenus);
        }
        Self::standard(&PolType::principal(genus))
    }

    /// Basis = identity, form = `[[0, D], [-D, 0]]`.
    pub fn standard(pol_type: &PolType) -> Result<Self> {
        let n = 2 * pol_type.genus();
        Self::new(RatMatrix::identity(n), pol_type.standard_form())
    }

    /// Deterministic random lattice of the requested type: the standard form
    /// conjugated by a random unimodular matrix, on a random unimodular basis.
    pub fn random(pol_type: &PolType, seed: u64) -> Self {
        let n = 2 * pol_type.genus();
        let mut r = rng::seeded(seed);
        let v = random_unimodular(n, &mut r);
        let w = random_unimodular(n, &mut r);
        let form = &(&v.transpose() * &pol_type.standard_form()) * &v;
        Self::new(w.to_rational(), form).expect("conjugated standard form is valid")
    }

    pub fn genus(&self) -> usize {
        self.0.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.0.genus
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.0.basis
    }

    pub fn basis_inverse(&self) -> &RatMatrix {
        &self.0.basis_inv
    }

    pub fn form(&self) -> &IntMatrix {
        &self.0.form
    }

    /// The rational extension of the form in ambient coordinates.
    pub fn ambient_form(&self) -> &RatMatrix {
        &self.0.ambient_form
    }

    pub fn pol_type(&self) -> &PolType {
        &self.0.pol_type
    }

    /// `U` with `U^T E U` standard; rows of `U^T B` form a symplectic basis.
    pub fn symplectic_change(&self) -> &UnimodularChange {
        &self.0.symplectic_change
    }

    /// Symplectic basis `λ_1..λ_g, μ_1..μ_g` in ambient coordinates.
    pub fn symplectic_basis(&self) -> RatMatrix {
        &self.0.symplectic_change.matrix().transpose().to_rational() * &self.0.basis
    }

    /// Same lattice, form multiplied by `m >= 1`.
    pub fn rescale_form(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::DegenerateForm);
        }
        if m == 1 {
            return Ok(self.clone());
        }
        Self::new(self.0.basis.clone(), self.0.form.scale(&BigInt::from(m)))
    }

    /// Ambient vector to lattice coordinates.
    pub fn coords_of(&self, ambient: &[BigRational]) -> Vec<BigRational> {
        self.0.basis_inv.apply_row(ambient)
    }

    /// Lattice coordinates to ambient vector.
    pub fn ambient_of(&self, coords: &[BigRational]) -> Vec<BigRational> {
        self.0.basis.apply_row(coords)
    }

    /// Rational extension of the form on lattice coordinates: `c E d^T`.
    pub fn form_on_coords(&self, c: &[BigRational], d: &[BigRational]) -> BigRational {
        let e = &self.0.form;
        let mut acc = BigRational::zero();
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                if !e[(i, j)].is_zero() && !dj.is_zero() {
                    acc += ci * dj * BigRational::from_integer(e[(i, j)].clone());
                }
            }
        }
        acc
    }

    /// Same lattice (as a set) and same ambient form.
    pub fn same_polarized(&self, other: &Self) -> bool {
        self == other || (self.same_lattice(other) && self.0.ambient_form == other.0.ambient_form)
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        intlin::same_lattice(&self.0.basis, &other.0.basis)
    }

    /// Hermite-reduced ambient basis; equal for equal lattices.
    pub fn canonical_basis(&self) -> RatMatrix {
        intlin::canonical_basis(&self.0.basis)
    }

    /// The same polarized lattice on its canonical basis.
    pub fn canonicalized(&self) -> Self {
        Self::from_ambient(self.canonical_basis(), &self.0.ambient_form)
            .expect("change of basis preserves integrality")
    }

    /// Absolute covolume `|det B|`.
    pub fn covolume(&self) -> BigRational {
        self.0.basis.det().abs()
    }
}

/// Product of at most 50 random elementary operations with multipliers in `[-3, 3]`.
pub fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u[(0, 0)] = BigInt::from(-1);
        }
        return u;
    }
    let ops = rng.gen_range(20..=50);
    for _ in 0..ops {
        match rng.gen_range(0..10) {
            0 => {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                u.swap_rows(a, b);
            }
            1 => {
                let a = rng.gen_range(0..n);
                for j in 0..n {
                    u[(a, j)] = -&u[(a, j)];
                }
            }
            _ => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let c = BigInt::from(*[-3i64, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap());
                for j in 0..n {
                    let v = &c * &u[(b, j)];
                    u[(a, j)] += v;
                }
            }
        }
    }
    u
}
