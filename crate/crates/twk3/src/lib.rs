//! Exact arithmetic for the lattice theory of twisted K3 surfaces.
//!
//! The crate computes with integral lattices (Gram matrices over `BigInt`),
//! their discriminant quadratic forms, isometries and spinor norms, the
//! extended K3 lattice with its ring structure and `exp(B)` action, twisted
//! Picard lattices `L^B_d`, positive sign structures, and the decision
//! criteria for when a very general twisted K3 surface admits only signed
//! Hodge isometries.
//!
//! Everything is exact: `BigInt` / `BigRational` throughout, no floating
//! point. All values are immutable after construction and all operations are
//! pure functions, so the whole crate is safe to use from multiple threads.

pub mod criteria;
pub mod disc;
pub mod enumerate;
pub mod isometry;
pub mod jsonio;
pub mod lattice;
pub mod mat;
pub mod mukai;
pub mod parse;
pub mod rat;
pub mod signs;
pub mod snf;
pub mod sublattice;

pub use disc::DiscriminantForm;
pub use isometry::{
    glue_extend, o_sharp_sampler, o_sharp_sampler_with, GammaZeroElement, Isometry, Place,
    RationalIsometry, SquareClass,
};
pub use lattice::Lattice;
pub use mat::{IMat, IVec, Int, QMat, QVec, Rat};
pub use mukai::{BField, ExtendedVector, LbdResult, PolarizationData};
pub use signs::{SignBasis, TestPeriod};
pub use snf::{smith_normal_form, Snf};
pub use sublattice::Sublattice;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("gram matrix not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("degenerate gram matrix")]
    Degenerate,
    #[error("matrix dimensions do not match (expected {expected}, got {got})")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not an isometry at ({0},{1})")]
    NotIsometry(usize, usize),
    #[error("not unimodular")]
    NotUnimodular,
    #[error("reflection in isotropic vector")]
    IsotropicReflection,
    #[error("quadratic form requires even lattice")]
    OddLattice,
    #[error("sublattice basis not linearly independent")]
    DependentBasis,
    #[error("sublattice not primitive")]
    NotPrimitive,
    #[error("discriminant action nontrivial — extension by identity not integral")]
    GlueNotIntegral,
    #[error("sublattice is not a hyperbolic plane")]
    NotHyperbolicPlane,
    #[error("projection singular — spaces orthogonal")]
    ProjectionSingular,
    #[error("tuple not positive-definite — period/ω incompatible")]
    NotPositiveDefinite,
    #[error("invalid test period: {0}")]
    InvalidPeriod(String),
    #[error("lattice has no positive directions")]
    NoPositivePart,
    #[error("x not isotropic")]
    NotIsotropic,
    #[error("(x.y) = 0")]
    ZeroPairing,
    #[error("enumeration cancelled")]
    Cancelled,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
