use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("value is not in the image of the base-4 encoding at depth {depth}")]
    NotInImage { depth: usize },
    #[error("threshold applied to {value}, which lies strictly between 0 and 1")]
    UndefinedThreshold { value: String },
    #[error("output protocol violated at step {step}: data line raised without validation")]
    ProtocolViolation { step: u64 },
    #[error("advice consistency failed: length {n} vs {n_prime} disagree on {word}")]
    ConsistencyViolation {
        n: usize,
        n_prime: usize,
        word: String,
    },
    #[error("enumeration budget of {budget} leaves exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("acceptance probability {probability} is not bounded away from 1/2 by the 2/3 rule")]
    BppViolation { probability: String },
    #[error("compile error: {0}")]
    Compile(String),
    #[error("boolean block arity {arity} exceeds cap {cap}")]
    ArityExceeded { arity: usize, cap: usize },
    #[error(
        "no precision constant up to {cap} reproduces the exact runs (last witness {witness})"
    )]
    NoConvergence { cap: u32, witness: String },
    #[error("probability must lie strictly between 0 and 1")]
    DegenerateProbability,
    #[error("bias comparison undecided after {digits} digits")]
    PrecisionExhausted { digits: usize },
    #[error("decompressor exceeded {bound} steps at n = {n}")]
    BoundViolation { n: usize, bound: u64 },
    #[error("decompressed prefix differs at n = {n}, m = {m}")]
    Mismatch { n: usize, m: usize },
    #[error("separator missing at position {position}")]
    MalformedInterleaving { position: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("malformed advice: {0}")]
    MalformedAdvice(String),
    #[error("no length below {cap} satisfies the defining inequality")]
    SearchExhausted { cap: usize },
    #[error("machine has no transition from state {state}")]
    Stuck { state: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
