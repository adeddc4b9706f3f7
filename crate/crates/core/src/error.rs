use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed scalar `{0}`")]
    Scalar(String),
    #[error("unknown indeterminate `{0}`")]
    Indeterminate(String),
    #[error("malformed polynomial at byte {pos}: {msg}")]
    Poly { pos: usize, msg: String },
    #[error("suite data line {line}: {msg}")]
    Record { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different indeterminate registries")]
    RegistryMismatch,
    #[error("formal marker `{0}` cannot be substituted")]
    MarkerSubstitution(String),
    #[error("signature mismatch: ({0},{1}) vs ({2},{3})")]
    SignatureMismatch(u8, u8, u8, u8),
    #[error("invalid signature (p={p}, q={q}): {reason}")]
    InvalidSignature { p: u8, q: u8, reason: &'static str },
    #[error("ξₙ-integrand does not decay fast enough: {0}")]
    InsufficientDecay(String),
    #[error("indeterminate `{0}` has no numeric binding")]
    Unbound(String),
    #[error("unknown trace identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{side} symbol has no order {order} jet")]
    MissingJetOrder { side: &'static str, order: i32 },
    #[error("integration by parts disagrees for case {case}: {direct} vs {rewritten}")]
    IntegrationByParts { case: String, direct: String, rewritten: String },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
