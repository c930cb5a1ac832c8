use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element is not invertible")]
    Singular,

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("rank decision is ambiguous: residual {residual:.3e}, singular value gap {gap:.3e}")]
    IllConditioned { residual: f64, gap: f64 },

    #[error("kernel evaluated on the diagonal y = x")]
    OnDiagonal,

    #[error("point lies outside the integration domain")]
    PointOutsideDomain,

    #[error("quadrature under-resolved: error estimate {estimate:.3e} exceeds bound {bound:.3e}")]
    QuadratureUnderResolved { estimate: f64, bound: f64 },

    #[error("algebra is not commutative (defect {0:.3e})")]
    NotCommutative(f64),

    #[error("principal minor is not invertible")]
    SingularPrincipalMinor,

    #[error("basis elements do not square to -e0 and anticommute (defect {0:.3e})")]
    BasisNotAnticommuting(f64),

    #[error("no affine coefficient data attached")]
    NoAffineData,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
