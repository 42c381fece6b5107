use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 1")]
    InvalidGenus,
    #[error("alternating form has odd size {0}")]
    OddDimension(usize),
    #[error("form is degenerate (determinant zero)")]
    DegenerateForm,
    #[error("invalid polarized lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid polarization type: {0}")]
    InvalidType(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not in the kernel K(L)")]
    NotInKernel,
    #[error("point is not {0}-torsion")]
    NotTorsion(u64),
    #[error("subgroup is not contained in the pairing context group")]
    ContextMismatch,
    #[error("objects belong to different lattices")]
    OwnerMismatch,
    #[error("subgroup is not totally isotropic")]
    NotIsotropic,
    #[error("type {0} is not dualizable: some d_i does not divide d_1 d_g")]
    NotDualizableType(String),
    #[error("map does not carry the source lattice into the target lattice")]
    NotLatticeMap,
    #[error("map is singular, image has infinite index")]
    NotFiniteIndex,
    #[error("maps cannot be composed: target and source differ")]
    NotComposable,
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("mod-2 pairing is degenerate on the 2-torsion")]
    DegeneratePairing,
    #[error("no isotropic plane exists in dimension {0}")]
    NoneExist(usize),
    #[error("invalid monodromy: {0}")]
    InvalidMonodromy(String),
    #[error("Riemann-Hurwitz gives a negative or non-integral genus")]
    NegativeGenus,
    #[error("unbranched double cover: the norm kernel is disconnected")]
    UnbranchedCover,
    #[error("odd number of branch points: {0}")]
    OddBranchCount(usize),
    #[error("tower is not generic: {0}")]
    NotGeneric(String),
    #[error("cycle notation: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
