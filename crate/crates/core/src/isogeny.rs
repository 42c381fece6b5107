//! Isogenies as ambient-linear lattice maps, quotients by isotropic
//! subgroups, and the dual polarized lattice.
//!
//! An isogeny `V/Λ_s → V/Λ_t` is a rational matrix `M` (acting on row
//! vectors, `x ↦ x M`) with `Λ_s M ⊆ Λ_t` of finite index. Composition is
//! the matrix product in application order.
//!
//! The dual of `(Λ, Ω)` is realized as `(Λ^Ω, e·Ω)` with
//! `Λ^Ω = {x : Ω(x, Λ) ⊆ Z}` and `e = d_1 d_g`, so `λ_L` is the identity on
//! the ambient space and `λ_{L^∨} ∘ λ_L` is multiplication by `e`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlin;
use crate::lattice::PolarizedLattice;
use crate::matrix::RatMatrix;
use crate::torsion::{self, FiniteSubgroup, PairingContext};

#[derive(Clone, Debug)]
pub struct Isogeny {
    source: PolarizedLattice,
    target: PolarizedLattice,
    matrix: RatMatrix,
    degree: BigInt,
}

impl Isogeny {
    pub fn new(source: &PolarizedLattice, target: &PolarizedLattice, matrix: RatMatrix) -> Result<Self> {
        let n = source.dim();
        if target.dim() != n {
            return Err(Error::GenusMismatch(source.genus(), target.genus()));
        }
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.rows().max(matrix.cols()) });
        }
        // source basis written in the target basis
        let rel = &(source.basis() * &matrix) * target.basis_inverse();
        let rel = rel.to_integer().ok_or(Error::NotLatticeMap)?;
        let det = rel.det();
        if det.is_zero() {
            return Err(Error::NotFiniteIndex);
        }
        Ok(Isogeny { source: source.clone(), target: target.clone(), matrix, degree: det.abs() })
    }

    /// The identity of the ambient space, viewed as `source → target`.
    pub fn ambient_identity(source: &PolarizedLattice, target: &PolarizedLattice) -> Result<Self> {
        Self::new(source, target, RatMatrix::identity(source.dim()))
    }

    pub fn identity(p: &PolarizedLattice) -> Self {
        Self::ambient_identity(p, p).expect("identity is a lattice map")
    }

    /// Multiplication by `m` on `p`; degree `m^{2g}`.
    pub fn multiplication(p: &PolarizedLattice, m: i64) -> Result<Self> {
        let c = BigRational::from_integer(BigInt::from(m));
        Self::new(p, p, RatMatrix::identity(p.dim()).scale(&c))
    }

    pub fn source(&self) -> &PolarizedLattice {
        &self.source
    }

    pub fn target(&self) -> &PolarizedLattice {
        &self.target
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// Index of `Λ_s M` in `Λ_t`, which is also the kernel order.
    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    /// `self` followed by `next`. The intermediate lattices must agree as sets.
    pub fn then(&self, next: &Isogeny) -> Result<Isogeny> {
        if !self.target.same_lattice(&next.source) {
            return Err(Error::NotComposable);
        }
        Isogeny::new(&self.source, &next.target, &self.matrix * &next.matrix)
    }

    pub fn scaled(&self, m: i64) -> Result<Isogeny> {
        let c = BigRational::from_integer(BigInt::from(m));
        Isogeny::new(&self.source, &self.target, self.matrix.scale(&c))
    }

    /// Inverse of a degree-1 isogeny.
    pub fn inverse(&self) -> Result<Isogeny> {
        let inv = self.matrix.inverse().ok_or(Error::NotFiniteIndex)?;
        Isogeny::new(&self.target, &self.source, inv)
    }

    /// `ker f = (Λ_t M^{-1}) / Λ_s` as a subgroup of the source.
    pub fn kernel(&self) -> FiniteSubgroup {
        let minv = self.matrix.inverse().expect("finite index");
        let coords = &(self.target.basis() * &minv) * self.source.basis_inverse();
        FiniteSubgroup::from_superlattice(&self.source, &intlin::canonical_basis(&coords))
            .expect("source dimension")
    }

    /// Same matrix between the same lattices.
    pub fn same_map(&self, other: &Isogeny) -> bool {
        self.matrix == other.matrix
            && self.source.same_lattice(&other.source)
            && self.target.same_lattice(&other.target)
    }

    /// The pulled-back form `E'(x, y) = E_t(xM, yM)` on the source lattice.
    pub fn pullback_polarization(&self) -> Result<PolarizedLattice> {
        pullback_polarization(self.source.basis(), &self.matrix, &self.target)
    }

    /// Degree 1 and the target form pulls back to the source form.
    pub fn is_polarized_isomorphism(&self) -> bool {
        self.degree.is_one() && pulled_back_gram(&self.matrix, &self.target) == *self.source.ambient_form()
    }
}

fn pulled_back_gram(m: &RatMatrix, target: &PolarizedLattice) -> RatMatrix {
    &(m * target.ambient_form()) * &m.transpose()
}

/// Polarizes the lattice spanned by `source_basis` with the pullback of the
/// target form along `matrix`.
pub fn pullback_polarization(
    source_basis: &RatMatrix,
    matrix: &RatMatrix,
    target: &PolarizedLattice,
) -> Result<PolarizedLattice> {
    let rel = &(source_basis * matrix) * target.basis_inverse();
    if !rel.is_integral() {
        return Err(Error::NotLatticeMap);
    }
    PolarizedLattice::from_ambient(intlin::canonical_basis(source_basis), &pulled_back_gram(matrix, target))
}

/// The form the context descends (`E` or `mE`) restricted to `Λ + lifts(S)`.
/// Integral exactly when `S` is totally isotropic.
pub fn descended_form(p: &PolarizedLattice, s: &FiniteSubgroup, ctx: PairingContext) -> (RatMatrix, RatMatrix) {
    let basis = s.superlattice_ambient();
    let gram = p.ambient_form().scale(&ctx.scale());
    let form = &(&basis * &gram) * &basis.transpose();
    (basis, form)
}

/// `P/S` with the descended polarization, and the quotient isogeny
/// `P → P/S` (identity on the ambient space, degree `|S|`).
///
/// `Kernel` descends the form of `P`; `Torsion(m)` descends `m·E`.
pub fn quotient_by_subgroup(
    p: &PolarizedLattice,
    s: &FiniteSubgroup,
    ctx: PairingContext,
) -> Result<(PolarizedLattice, Isogeny)> {
    if !torsion::is_totally_isotropic(p, s, ctx)? {
        return Err(Error::NotIsotropic);
    }
    let basis = s.superlattice_ambient();
    let gram = p.ambient_form().scale(&ctx.scale());
    let q = PolarizedLattice::from_ambient(intlin::canonical_basis(&basis), &gram)
        .map_err(|_| Error::NotIsotropic)?;
    let f = Isogeny::ambient_identity(p, &q)?;
    Ok((q, f))
}

/// `Λ + lifts(S)` carrying the form pulled back along `x ↦ m x` into `P`.
///
/// For `S ⊆ X_m` the map lands in `Λ`, so this is the polarized source of
/// `P/S → P/X_m ≅ P`.
pub fn pullback_quotient(p: &PolarizedLattice, s: &FiniteSubgroup, m: i64) -> Result<(PolarizedLattice, Isogeny)> {
    let scale = RatMatrix::identity(p.dim()).scale(&BigRational::from_integer(BigInt::from(m)));
    let q = pullback_polarization(&s.superlattice_ambient(), &scale, p)?;
    let f = Isogeny::new(&q, p, scale)?;
    Ok((q, f))
}

/// The dual `(Λ^Ω, d_1 d_g · Ω)`.
pub fn dual_polarized(p: &PolarizedLattice) -> Result<PolarizedLattice> {
    let t = p.pol_type();
    if !t.is_dualizable() {
        return Err(Error::NotDualizableType(alloc::format!("{t}")));
    }
    let e = BigRational::from_integer(t.dual_scale());
    let einv = p.form().to_rational().inverse().ok_or(Error::DegenerateForm)?;
    let basis = intlin::canonical_basis(&(&einv * p.basis()));
    PolarizedLattice::from_ambient(basis, &p.ambient_form().scale(&e))
}

/// `λ_L : P → P^∨`, the ambient identity onto the dual lattice.
pub fn lambda_isogeny(p: &PolarizedLattice) -> Result<Isogeny> {
    let d = dual_polarized(p)?;
    Isogeny::ambient_identity(p, &d)
}

/// The dual map `f^∨ : target^∨ → source^∨`, the Ω-adjoint
/// `Ω_t M^T Ω_s^{-1}`.
pub fn dual_isogeny(f: &Isogeny) -> Result<Isogeny> {
    let src_dual = dual_polarized(f.target())?;
    let tgt_dual = dual_polarized(f.source())?;
    let omega_s_inv = f.source().ambient_form().inverse().ok_or(Error::DegenerateForm)?;
    let m = &(f.target().ambient_form() * &f.matrix().transpose()) * &omega_s_inv;
    Isogeny::new(&src_dual, &tgt_dual, m)
}

/// `(P^∨)^∨ → P`, multiplication by `d_1 d_g`; a polarized isomorphism.
pub fn double_dual_identification(p: &PolarizedLattice) -> Result<Isogeny> {
    let dd = dual_polarized(&dual_polarized(p)?)?;
    let e = BigRational::from_integer(p.pol_type().dual_scale());
    Isogeny::new(&dd, p, RatMatrix::identity(p.dim()).scale(&e))
}

/// `Some(m)` when `m^{2g} = degree` for a positive integer `m`.
pub fn multiplication_degree_obstruction(degree: &BigInt, genus: usize) -> Option<BigInt> {
    if !degree.is_positive() || genus == 0 {
        return None;
    }
    intlin::exact_root(degree, 2 * genus as u32)
}
