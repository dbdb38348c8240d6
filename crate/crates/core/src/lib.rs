//! Exact-arithmetic equivariant linear canonical relations over the
//! rationals: composition with excess tracking, classification of
//! Wehrheim-Woodward morphisms as indexed canonical relations, equivariant
//! normal forms, and a randomized law-verification harness.
//!
//! Global conventions, fixed once for the whole crate:
//!
//! * Vectors are columns; subspace bases are stored as matrix rows.
//! * The ground field is the rationals; every computation is exact.
//! * A relation f: X <- Y is an invariant Lagrangian subspace of X x Ybar,
//!   with X-coordinates first and Y-coordinates second.
//! * Products order coordinates as (A-block, then B-block), everywhere.
//! * The dual Xbar of X keeps the underlying space and action and negates
//!   the symplectic form.

pub mod doc;
pub mod error;
pub mod grouprep;
pub mod laws;
pub mod linalg;
pub mod relations;
pub mod sample;
pub mod symplectic;
pub mod wwcat;

pub use error::{Error, Result};
pub use grouprep::{GroupAction, IsoClass};
pub use linalg::{Mat, Rat, Subspace};
pub use relations::CanRel;
pub use symplectic::{SubspaceKind, SympGSpace};
pub use wwcat::{IndexedRel, Word};
