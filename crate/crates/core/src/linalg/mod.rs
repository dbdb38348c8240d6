//! Exact rational dense linear algebra and canonical subspace arithmetic.
//!
//! Everything downstream (symplectic forms, group actions, relations) reduces
//! to the primitives here: reduced row-echelon canonicalization, kernels,
//! intersections, sums, and deterministic complements.

mod mat;
mod subspace;

pub use mat::{rat, rat_parse, rat_string, ratq, Mat, Rat};
pub use subspace::Subspace;
