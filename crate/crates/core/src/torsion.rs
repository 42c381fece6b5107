//! Torsion points, finite subgroups of `(Q/Z)^{2g}` and the Riemann pairing.
//!
//! Points are stored in lattice coordinates reduced into `[0, 1)`. A finite
//! subgroup `S` is represented by the superlattice `Z^{2g} + span(S)` of
//! coordinate space, kept in Hermite form, so equality and containment are
//! exact lattice comparisons.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlin;
use crate::lattice::PolarizedLattice;
use crate::matrix::{frac, RatMatrix};

/// A point of `V/Λ` given by lattice coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPoint {
    owner: PolarizedLattice,
    coords: Vec<BigRational>,
}

impl TorsionPoint {
    pub fn new(owner: &PolarizedLattice, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != owner.dim() {
            return Err(Error::DimensionMismatch { expected: owner.dim(), found: coords.len() });
        }
        Ok(TorsionPoint { owner: owner.clone(), coords: coords.iter().map(frac).collect() })
    }

    pub fn zero(owner: &PolarizedLattice) -> Self {
        TorsionPoint { owner: owner.clone(), coords: alloc::vec![BigRational::zero(); owner.dim()] }
    }

    /// `e_i / m` for the `i`-th lattice basis vector.
    pub fn basis_fraction(owner: &PolarizedLattice, i: usize, m: u64) -> Self {
        let mut c = alloc::vec![BigRational::zero(); owner.dim()];
        c[i] = BigRational::new(BigInt::one(), BigInt::from(m));
        Self::new(owner, c).expect("dimension matches")
    }

    /// The image of an ambient vector.
    pub fn from_ambient(owner: &PolarizedLattice, v: &[BigRational]) -> Result<Self> {
        if v.len() != owner.dim() {
            return Err(Error::DimensionMismatch { expected: owner.dim(), found: v.len() });
        }
        Self::new(owner, owner.coords_of(v))
    }

    pub fn owner(&self) -> &PolarizedLattice {
        &self.owner
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Canonical lift `x̃` in the ambient space.
    pub fn lift(&self) -> Vec<BigRational> {
        self.owner.ambient_of(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn order(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_killed_by(&self, m: u64) -> bool {
        let m = BigInt::from(m);
        self.coords.iter().all(|c| m.is_multiple_of(c.denom()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_owner(&self.owner, &other.owner)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| frac(&(a + b))).collect();
        Ok(TorsionPoint { owner: self.owner.clone(), coords })
    }

    pub fn neg(&self) -> Self {
        TorsionPoint { owner: self.owner.clone(), coords: self.coords.iter().map(|c| frac(&-c)).collect() }
    }

    pub fn mul(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        TorsionPoint { owner: self.owner.clone(), coords: self.coords.iter().map(|c| frac(&(c * &k))).collect() }
    }
}

fn check_owner(a: &PolarizedLattice, b: &PolarizedLattice) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::OwnerMismatch)
    }
}

/// Value of a pairing as an exponent `q ∈ [0, 1)`; the root of unity is
/// `exp(2πi q)` with the sign of the Riemann form already folded into `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairingExponent(BigRational);

impl PairingExponent {
    pub fn new(q: BigRational) -> Self {
        PairingExponent(frac(&q))
    }

    pub fn exponent(&self) -> &BigRational {
        &self.0
    }

    /// The pairing value equals 1.
    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }
}

/// Which pairing a subgroup is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairingContext {
    /// `e^L` on `K(L)` for the lattice's own form.
    Kernel,
    /// `e^{L^m}` on the `m`-torsion `X_m`.
    Torsion(u64),
}

impl PairingContext {
    pub fn scale(self) -> BigRational {
        match self {
            PairingContext::Kernel => BigRational::one(),
            PairingContext::Torsion(m) => BigRational::from_integer(BigInt::from(m)),
        }
    }
}

/// A finite subgroup of `V/Λ` given by generators.
#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    owner: PolarizedLattice,
    generators: Vec<TorsionPoint>,
    /// Hermite basis of `Z^n + span(generators)` in lattice coordinates.
    superlattice: RatMatrix,
    order: BigInt,
    invariant_factors: Vec<BigInt>,
}

impl FiniteSubgroup {
    pub fn generated(owner: &PolarizedLattice, generators: Vec<TorsionPoint>) -> Result<Self> {
        for g in &generators {
            check_owner(owner, g.owner())?;
        }
        let n = owner.dim();
        let mut rows: Vec<Vec<BigRational>> = generators.iter().map(|g| g.coords.clone()).collect();
        rows.extend(RatMatrix::identity(n).to_rows());
        let superlattice = intlin::canonical_basis(&RatMatrix::from_rows(rows).expect("uniform rows"));
        Ok(Self::with_superlattice(owner, generators, superlattice))
    }

    pub fn trivial(owner: &PolarizedLattice) -> Self {
        Self::generated(owner, Vec::new()).expect("no generators")
    }

    /// The subgroup `L / Z^n` for a superlattice `L ⊇ Z^n` of coordinate space.
    pub fn from_superlattice(owner: &PolarizedLattice, basis: &RatMatrix) -> Result<Self> {
        let gens = basis
            .iter_rows()
            .map(|r| TorsionPoint::new(owner, r.to_vec()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| !p.is_zero())
            .collect();
        Self::generated(owner, gens)
    }

    /// The full `m`-torsion `X_m`.
    pub fn torsion(owner: &PolarizedLattice, m: u64) -> Self {
        let gens = (0..owner.dim()).map(|i| TorsionPoint::basis_fraction(owner, i, m)).collect();
        Self::generated(owner, gens).expect("own points")
    }

    fn with_superlattice(owner: &PolarizedLattice, generators: Vec<TorsionPoint>, superlattice: RatMatrix) -> Self {
        let (den, h) = superlattice.clear_denominators();
        // N·Z^n inside N·L; its coordinates in the basis h
        let hinv = h.to_rational().inverse().expect("full rank");
        let rel = hinv.scale(&BigRational::from_integer(den)).to_integer().expect("Z^n ⊆ L");
        let invariant_factors: Vec<BigInt> =
            intlin::smith_diagonal(&rel).into_iter().filter(|d| !d.is_one()).collect();
        let order = invariant_factors.iter().product();
        FiniteSubgroup { owner: owner.clone(), generators, superlattice, order, invariant_factors }
    }

    pub fn owner(&self) -> &PolarizedLattice {
        &self.owner
    }

    pub fn generators(&self) -> &[TorsionPoint] {
        &self.generators
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Nontrivial invariant factors `s_1 | s_2 | ...`.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Invariant factors padded with leading 1s to length `2g`.
    pub fn structure_padded(&self) -> Vec<BigInt> {
        let n = self.owner.dim();
        let mut out = alloc::vec![BigInt::one(); n.saturating_sub(self.invariant_factors.len())];
        out.extend(self.invariant_factors.iter().cloned());
        out
    }

    /// Hermite basis of the superlattice `Z^n + S` in lattice coordinates.
    pub fn superlattice_coords(&self) -> &RatMatrix {
        &self.superlattice
    }

    /// `Λ + lifts(S)` in ambient coordinates.
    pub fn superlattice_ambient(&self) -> RatMatrix {
        &self.superlattice * self.owner.basis()
    }

    /// Canonical generators: the nonzero rows of the Hermite basis.
    pub fn canonical_generators(&self) -> Vec<TorsionPoint> {
        self.superlattice
            .iter_rows()
            .map(|r| TorsionPoint::new(&self.owner, r.to_vec()).expect("dimension"))
            .filter(|p| !p.is_zero())
            .collect()
    }

    pub fn contains(&self, p: &TorsionPoint) -> Result<bool> {
        check_owner(&self.owner, p.owner())?;
        let row = RatMatrix::from_rows(alloc::vec![p.coords.clone()]).expect("one row");
        Ok(intlin::rows_in_lattice(&row, &self.superlattice))
    }

    pub fn contains_subgroup(&self, other: &Self) -> Result<bool> {
        check_owner(&self.owner, &other.owner)?;
        Ok(intlin::rows_in_lattice(&other.superlattice, &self.superlattice))
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        check_owner(&self.owner, &other.owner)?;
        Ok(self.superlattice == other.superlattice)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_owner(&self.owner, &other.owner)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::generated(&self.owner, gens)
    }

    /// Every element `m` kills.
    pub fn is_killed_by(&self, m: u64) -> bool {
        self.generators.iter().all(|g| g.is_killed_by(m))
    }

    /// All elements, in a deterministic order. Intended for small groups.
    pub fn elements(&self) -> Vec<TorsionPoint> {
        let (den, h) = self.superlattice.clear_denominators();
        let n = h.rows();
        // triangular Hermite basis: coefficient i ranges over [0, den / h_ii)
        let bounds: Vec<u64> =
            (0..n).map(|i| (&den / &h[(i, i)]).to_u64().expect("small group")).collect();
        let mut out = Vec::new();
        let mut idx = alloc::vec![0u64; n];
        loop {
            let mut c = alloc::vec![BigRational::zero(); n];
            for (i, &k) in idx.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj += &self.superlattice[(i, j)] * BigRational::from_integer(BigInt::from(k));
                }
            }
            out.push(TorsionPoint::new(&self.owner, c).expect("dimension"));
            let mut pos = 0;
            loop {
                if pos == n {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < bounds[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// `K(L) = Λ(E)/Λ` with `Λ(E) = {x : E(x, Λ) ⊆ Z}`.
pub fn kernel_k(p: &PolarizedLattice) -> FiniteSubgroup {
    let einv = p.form().to_rational().inverse().expect("nondegenerate form");
    FiniteSubgroup::from_superlattice(p, &intlin::canonical_basis(&einv)).expect("own dimension")
}

/// The group a context pairs on.
pub fn context_group(p: &PolarizedLattice, ctx: PairingContext) -> FiniteSubgroup {
    match ctx {
        PairingContext::Kernel => kernel_k(p),
        PairingContext::Torsion(m) => FiniteSubgroup::torsion(p, m),
    }
}

fn raw_pairing(p: &PolarizedLattice, ctx: PairingContext, x: &TorsionPoint, y: &TorsionPoint) -> PairingExponent {
    PairingExponent::new(-(ctx.scale() * p.form_on_coords(&x.coords, &y.coords)))
}

fn in_kernel(p: &PolarizedLattice, x: &TorsionPoint) -> bool {
    p.form().to_rational().apply_row(&x.coords).iter().all(BigRational::is_integer)
}

/// The Riemann form `e^L` on `K(L)`: `q = -E(x̃, ỹ) mod 1`.
pub fn riemann_pairing(p: &PolarizedLattice, x: &TorsionPoint, y: &TorsionPoint) -> Result<PairingExponent> {
    check_owner(p, x.owner())?;
    check_owner(p, y.owner())?;
    if !in_kernel(p, x) || !in_kernel(p, y) {
        return Err(Error::NotInKernel);
    }
    Ok(raw_pairing(p, PairingContext::Kernel, x, y))
}

/// The pairing `e^{L^m}` on `X_m`: `q = -m E(x̃, ỹ) mod 1`.
pub fn torsion_pairing(p: &PolarizedLattice, m: u64, x: &TorsionPoint, y: &TorsionPoint) -> Result<PairingExponent> {
    check_owner(p, x.owner())?;
    check_owner(p, y.owner())?;
    if m == 0 || !x.is_killed_by(m) || !y.is_killed_by(m) {
        return Err(Error::NotTorsion(m));
    }
    Ok(raw_pairing(p, PairingContext::Torsion(m), x, y))
}

pub fn pairing(p: &PolarizedLattice, ctx: PairingContext, x: &TorsionPoint, y: &TorsionPoint) -> Result<PairingExponent> {
    match ctx {
        PairingContext::Kernel => riemann_pairing(p, x, y),
        PairingContext::Torsion(m) => torsion_pairing(p, m, x, y),
    }
}

fn check_context(p: &PolarizedLattice, s: &FiniteSubgroup, ctx: PairingContext) -> Result<()> {
    check_owner(p, s.owner())?;
    let inside = match ctx {
        PairingContext::Torsion(0) => return Err(Error::NotTorsion(0)),
        PairingContext::Torsion(m) => s.is_killed_by(m),
        PairingContext::Kernel => context_group(p, ctx).contains_subgroup(s)?,
    };
    if !inside {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// Pairing vanishes on all generator pairs (enough by bilinearity).
pub fn is_totally_isotropic(p: &PolarizedLattice, s: &FiniteSubgroup, ctx: PairingContext) -> Result<bool> {
    check_context(p, s, ctx)?;
    let gens = s.generators();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            if !raw_pairing(p, ctx, x, y).is_trivial() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `S^⊥` inside the context group, by solving a congruence system on the
/// generator matrix.
pub fn orthogonal_complement(p: &PolarizedLattice, s: &FiniteSubgroup, ctx: PairingContext) -> Result<FiniteSubgroup> {
    check_context(p, s, ctx)?;
    let group = context_group(p, ctx);
    let n = p.dim();
    let gb = group.superlattice_coords();
    let f = p.form().to_rational().scale(&ctx.scale());
    let gens = s.generators();
    if gens.is_empty() {
        return Ok(group);
    }
    let st = RatMatrix::from_fn(n, gens.len(), |i, j| gens[j].coords[i].clone());
    // x = k·gb pairs integrally with s_j iff k·(gb F s_j^T) ∈ Z
    let w = &(gb * &f) * &st;
    let (den, wint) = w.clear_denominators();
    let k = intlin::congruence_kernel(&wint, &den);
    let complement = &k.to_rational() * gb;
    FiniteSubgroup::from_superlattice(p, &intlin::canonical_basis(&complement))
}
