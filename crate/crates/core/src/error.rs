use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("containment violation: {0}")]
    ContainmentViolation(String),
    #[error("matrix is singular")]
    Singular,
    #[error("omega is not antisymmetric")]
    NotAntisymmetric,
    #[error("omega is degenerate")]
    Degenerate,
    #[error("group action does not preserve omega")]
    NotSymplecticAction,
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("subspace is not coisotropic")]
    NotCoisotropic,
    #[error("subspace is not invariant under the group action")]
    NotInvariant,
    #[error("group element is not invertible")]
    NotInvertible,
    #[error("group closure exceeded cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("invalid circle generator: not similar to rotation blocks with integer weights")]
    InvalidCircleGenerator,
    #[error("group models do not match")]
    GroupModelMismatch,
    #[error("relations are not composable: target/source spaces differ")]
    NotComposable,
    #[error("relation is not an endomorphism")]
    NotEndomorphism,
    #[error("operation is not supported for the circle model")]
    UnsupportedGroupModel,
    #[error("isomorphism class is not realizable without an explicit witness")]
    UnrealizableClass,
    #[error("witness representation has the wrong isomorphism class")]
    WitnessClassMismatch,
    #[error("subspaces are not independent: {0}")]
    NotIndependent(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("unresolved name: {0}")]
    UnresolvedName(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
