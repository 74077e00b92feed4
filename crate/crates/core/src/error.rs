use thiserror::Error;

use crate::syntax::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex,
    Syntax,
    ArityClash,
    Unsafe,
    NonGroundFact,
    DuplicateInstance,
    InvalidBounds,
    TooDeep,
}

/// A diagnostic from any of the text front ends (`.lp`, `.chi`, `.map`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message} (at `{token}`)")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: Pos,
    pub token: String,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, pos: Pos, token: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { kind, pos, token: token.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("arithmetic on non-integer term `{0}`")]
    NonIntegerArithmetic(String),
    #[error("integer overflow while evaluating `{0}`")]
    Overflow(String),
    #[error("grounding exceeded the cap of {cap} ground rules")]
    CapExceeded { cap: usize },
    #[error("rule at line {line} is unsafe: variable {var} is never bound")]
    Unbound { line: usize, var: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search exceeded the node budget of {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("brute-force enumeration supports at most {cap} atoms, program has {atoms}")]
    TooManyAtoms { atoms: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("atom `{0}` is mapped more than once")]
    Overlap(String),
    #[error("cluster `{0}` needs at least two source atoms")]
    SmallCluster(String),
    #[error("cluster target `{0}` is used twice")]
    DuplicateTarget(String),
    #[error("cluster target `{0}` coincides with an unmapped atom")]
    TargetCollision(String),
    #[error("atom `{0}` is not in the universe of the program and instances")]
    OutsideUniverse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("atom `{0}` does not occur in the program")]
    UnknownAtom(String),
    #[error("atom not in answer set: `{0}`")]
    NotInAnswerSet(String),
    #[error("mapping is not verified on this instance; abstract explanation refused")]
    Unverified,
    #[error("no answer set")]
    NoAnswerSet,
    #[error("answer set index {index} out of range ({count} answer sets)")]
    ModelIndex { index: usize, count: usize },
    #[error("{count} answer sets; choose one with a model index")]
    AmbiguousModel { count: usize },
    #[error("atom `{0}` has no well-founded support in the interpretation")]
    Unsupported(String),
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Explain(#[from] ExplainError),
    #[error("instance `{instance}`: {source}")]
    Instance {
        instance: String,
        #[source]
        source: Box<Error>,
    },
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("domain `{domain}`: {source}")]
    Domain {
        domain: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for grounding caps and solver budgets.
    pub fn is_resource_limit(&self) -> bool {
        match self {
            Error::Ground(GroundError::CapExceeded { .. }) => true,
            Error::Solve(_) => true,
            Error::Instance { source, .. } | Error::Domain { source, .. } => source.is_resource_limit(),
            _ => false,
        }
    }

    pub fn in_instance(self, instance: &str) -> Error {
        Error::Instance { instance: instance.to_string(), source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
