use thiserror::Error;

/// Errors surfaced by construction and validation routines.
///
/// Basis elements are reported by index into the owning algebra's basis;
/// monomials by their exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order must be >= 1")]
    InvalidFieldOrder,
    #[error("axis {axis} out of range for {vars} variables")]
    AxisOutOfRange { axis: usize, vars: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("bracket table assigns inconsistent values to ({0}, {1})")]
    AntisymmetryViolation(usize, usize),
    #[error("unknown algebra name `{0}`")]
    UnknownAlgebra(String),
    #[error("map is not a derivation on basis pair ({0}, {1})")]
    NotADerivation(usize, usize),
    #[error("action is not a Lie algebra homomorphism on basis pair ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("cochain is not a cocycle (d != 0 on ({0}, {1}, {2}))")]
    NotACocycle(usize, usize, usize),
    #[error("bilinear form is not invariant on basis triple ({0}, {1}, {2})")]
    NotInvariant(usize, usize, usize),
    #[error("Cartan 3-cocycle of the form is not a coboundary")]
    KappaNotExact,
    #[error("cocycle pair tables violate the coupling condition at monomial {0:?}")]
    CouplingViolated(Vec<i64>),
    #[error("map is not an algebra automorphism")]
    NotAutomorphism,
    #[error("twisting automorphisms do not commute (generators {0}, {1})")]
    NonCommutingAutomorphisms(usize, usize),
    #[error("generator {0} does not have the declared order")]
    OrderViolation(usize),
    #[error("form is not equivariant for the declared twisting data")]
    NotEquivariant,
    #[error("window too small: degree {0:?} has no constraining bracket pair")]
    WindowTooSmall(Vec<i64>),
    #[error("unsupported degree k = {0} for this cocycle family")]
    UnsupportedDegree(usize),
    #[error("value modules are incompatible: {0}")]
    IncompatibleModules(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
