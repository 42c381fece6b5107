//! Exact lattice models of polarized abelian varieties.
//!
//! A polarized abelian variety `V/Λ` is modeled by its period lattice `Λ`
//! inside a fixed rational ambient space `Q^{2g}` together with the integral
//! alternating form `E = Im H`. Everything is exact: integers are
//! arbitrary precision and rationals are kept reduced.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod intlin;
pub mod isogeny;
pub mod lattice;
pub mod lemmas;
pub mod matrix;
pub mod monodromy;
pub mod rng;
pub mod symplectic_f2;
pub mod torsion;

pub use error::{Error, Result};
pub use isogeny::{dual_isogeny, dual_polarized, lambda_isogeny, quotient_by_subgroup, Isogeny};
pub use lattice::{frobenius_normal_form, validate, PolType, PolarizedLattice, UnimodularChange, Violation};
pub use lemmas::{degree_ledger, verify_dual_quotient_identity, verify_lemma_ker, verify_pullback_lemmas, Claim, Report};
pub use matrix::{IntMatrix, RatMatrix};
pub use monodromy::{bigonal, prym_numerics, BranchedCover, Perm, TowerOf2Covers};
pub use symplectic_f2::{Plane, SymplecticSpaceF2};
pub use torsion::{
    is_totally_isotropic, kernel_k, orthogonal_complement, riemann_pairing, torsion_pairing, FiniteSubgroup,
    PairingContext, PairingExponent, TorsionPoint,
};
