use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {}", expected.join(", "))]
    SyntaxError { offset: usize, expected: Vec<String> },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("division by the zero field")]
    DivisionByZeroField,
    #[error("coordinate index {index} out of range for a chart of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("denominator vanishes at point {0}")]
    PoleAtPoint(String),
    #[error("point has {got} coordinates, chart has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("degree {0} exceeds the available dimension")]
    DegreeOverflow(usize),
    #[error("cannot contract a degree-0 object")]
    DegreeUnderflow,
    #[error("bivector is not antisymmetric at entry ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("metric is not symmetric at entry ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("metric is not positive definite at {0}")]
    NotPositiveDefiniteAt(String),
    #[error("cotangent metric is singular")]
    SingularMetric,
    #[error("rank of the bivector is not the declared {declared} at {point} (found {found})")]
    RankNotConstant { point: String, declared: usize, found: usize },
    #[error("declared symplectic rank {0} is odd")]
    RankOdd(usize),
    #[error("leafwise symplectic form is singular at {0}")]
    SingularLeafwiseForm(String),
    #[error("distribution is not involutive: bracket of frame fields {0} and {1} leaves the span")]
    NotInvolutive(usize, usize),
    #[error("leafwise 2-form is not d_F-closed")]
    NotLeafwiseClosed,
    #[error("2-form does not vanish on the orthogonal complement of the distribution")]
    OmegaNotHorizontal,
    #[error("2-form is degenerate on the distribution at {0}")]
    DegenerateOmegaAt(String),
    #[error("invariance fails: L_X omega(U,V) = {value} for X = {x}, U = frame[{u}], V = frame[{v}]")]
    InvarianceFails { x: String, u: usize, v: usize, value: String },
    #[error("metric is not bundle-like: {0}")]
    NotBundleLike(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("form is not basic: {0}")]
    NotBasic(String),
    #[error("window too small: image needs coefficient degree {needed}, window allows {allowed}")]
    WindowTooSmall { needed: u32, allowed: u32 },
    #[error("bivector has non-polynomial entries")]
    NonPolynomialBivector,
    #[error("bivector is not Poisson, so d_pi does not square to zero")]
    NotPoisson,
    #[error("frame is not constant; truncated windows need constant frames")]
    NonConstantFrame,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{field}: {source}")]
    InField { field: String, source: Box<Error> },
}

impl Error {
    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        if let Error::InField { source, .. } = self {
            return source.is_input_error();
        }
        matches!(
            self,
            Error::SyntaxError { .. }
                | Error::UnknownIdentifier { .. }
                | Error::InvalidChart(_)
                | Error::DimensionMismatch { .. }
                | Error::Schema(_)
                | Error::Io(_)
                | Error::NonPolynomialBivector
                | Error::NotAntisymmetric(..)
                | Error::NotSymmetric(..)
                | Error::DivisionByZeroField
                | Error::IndexOutOfRange { .. }
        )
    }

    /// Attaches the name of the input field that produced the error.
    pub fn in_field(self, field: impl Into<String>) -> Self {
        Error::InField { field: field.into(), source: Box::new(self) }
    }

    /// Variant name of the root error, e.g. `NotInvolutive`.
    pub fn kind(&self) -> String {
        let debug = format!("{:?}", self.root());
        debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
    }

    /// The error without field context.
    pub fn root(&self) -> &Error {
        match self {
            Error::InField { source, .. } => source.root(),
            e => e,
        }
    }
}
