use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch {
        expected: crate::Field,
        found: crate::Field,
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid manifold descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("point is not on the manifold (residual {residual:.3e} > {tolerance:.1e})")]
    NotMember { residual: f64, tolerance: f64 },
    #[error("retraction basin escape (residual {residual:.3e} > basin {basin:.1e})")]
    BasinEscape { residual: f64, basin: f64 },
    #[error("vector is not tangent (normal component {0:.3e})")]
    NotTangent(f64),
    #[error("tangent frame deficiency: expected {expected} vectors, found {found}")]
    FrameDeficiency { expected: usize, found: usize },
    #[error("degenerate critical point: Hessian eigenvalue {eigenvalue:.3e} within threshold {threshold:.3e}")]
    Degenerate { eigenvalue: f64, threshold: f64 },
    #[error("malformed label: {0}")]
    MalformedLabel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ambiguous limit: nearest critical point at distance {distance:.3e}, margin {margin:.3e}")]
    Ambiguous { distance: f64, margin: f64 },
    #[error("inputs are not mutually orthogonal (overlap {0:.3e})")]
    NonOrthogonal(f64),
    #[error("sampler exhausted after {0} retries")]
    SamplerExhausted(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("not in the span of the basis: {0}")]
    NotInSpan(String),
    #[error("non-integral coefficient: {0}")]
    NotIntegral(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
