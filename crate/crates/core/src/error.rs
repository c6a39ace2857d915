use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable x{index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={nvars}")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weights must be positive: {0}")]
    NonPositiveWeight(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("jacobian is not constant: {0}")]
    NonConstantJacobian(String),

    #[error("jacobian is zero")]
    ZeroJacobian,

    #[error("coordinate {0} of the map is zero")]
    ZeroCoordinate(usize),

    #[error("derivation is zero")]
    ZeroDerivation,

    #[error("no index i with deg2(Delta_i) >= -w_i; the input is not an automorphism")]
    NoWitnessIndex,

    #[error("groebner resource cap exceeded after {0} pair reductions")]
    ResourceCap(usize),

    #[error("coefficient of x3^2 is not constant: {0}")]
    OddLeadingX3Coefficient(String),

    #[error("polynomial is not weighted homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("weights must be ascending positive integers: {0}")]
    InvalidWeights(String),

    #[error("witness verification failed: {0}")]
    WitnessVerificationFailed(String),

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("impossible family index {0} is not in 1..=6")]
    UnknownFamily(u8),
}
