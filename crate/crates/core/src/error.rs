use thiserror::Error;

/// Every failure the library reports. The variant is the error class; the
/// message names the offending object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands from different fields, wrong field level, ragged matrices.
    #[error("structural error: {0}")]
    Structural(String),
    /// A value outside the domain of the operation (inverse of zero, η for even q).
    #[error("domain error: {0}")]
    Domain(String),
    /// A size or enumeration budget was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A family or function spec violates its constraints.
    #[error("invalid specification: {0}")]
    Spec(String),
    /// A computed quantity contradicts an identity that must hold.
    #[error("internal consistency error: {0}")]
    Consistency(String),
    /// A brute-force character-sum/count oracle disagreed with its closed form.
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    /// The requested parameters fall outside every tabulated case.
    #[error("no closed form: {0}")]
    NoClosedForm(String),
    #[error("empty design: {0}")]
    EmptyDesign(String),
    #[error("not a design: {0}")]
    NotADesign(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
