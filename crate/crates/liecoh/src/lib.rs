//! Exact computational Lie theory at desk scale: Chevalley-Eilenberg
//! cohomology over Q and cyclotomic fields, the fundamental central-extension
//! cocycles of mapping algebras on tori, vector-field cocycles with window
//! certificates, multiloop algebras, and abelian extensions of semidirect
//! sums.
//!
//! Everything is exact: scalars live in Q(zeta_m), linear algebra is
//! fraction-free elimination, and every infeasibility answer comes with a
//! certificate that is re-verified by multiplication.

pub mod error;
pub mod scalar;
pub mod laurent;
pub mod linalg;
pub mod lie;
pub mod ce;
pub mod invariant;
pub mod torus;
pub mod mapping;
pub mod vfields;
pub mod multiloop;
pub mod semidirect;

pub use error::{Error, Result};
pub use scalar::{Field, FieldKind, FieldSpec, Scalar};

/// Version tag for the sign and normalization conventions, embedded in every
/// report so convention changes are detectable downstream. The conventions
/// themselves are spelled out in docs/CONVENTIONS.md.
pub const CONVENTIONS_VERSION: &str = "liecoh-conventions-1";
