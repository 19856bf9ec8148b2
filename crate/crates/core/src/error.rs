use thiserror::Error;

/// Errors surfaced by the algebra and topology engines.
///
/// Violation reports (from `validate`-style operations) are data, not errors;
/// only genuine failures of an operation's contract live here.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// After full reduction the localized homology does not have rank one.
    #[error("localization does not have rank one: {0} tower generator(s) survive")]
    NotRankOne(usize),

    /// Two maps that should share source/target/degree do not.
    #[error("degree or endpoint mismatch: {0}")]
    DegreeMismatch(String),

    /// The local-map search space is too large for the configured budget.
    #[error("search budget exceeded: kernel dimension {dim} > cap {cap} bits")]
    SearchBudgetExceeded { dim: usize, cap: usize },

    /// surgery_cone inputs do not form a cone (v not a chain map, bad degrees,
    /// or B not reducing to a single tower).
    #[error("invalid cone: {0}")]
    InvalidCone(String),

    /// A hypothesis of a reduction argument fails on the given input.
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    /// Malformed input parameter (e.g. n <= 0 where a positive level is required).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The component cannot be blown down (wrong framing or a companion).
    #[error("not blowdownable: {0}")]
    NotBlowdownable(String),

    /// No clasp (linking +-1) between the named components.
    #[error("no clasp between components {0} and {1}")]
    NoClasp(usize, usize),

    /// A generator word that does not present a homology-sphere splice.
    #[error("inadmissible word: {0}")]
    InadmissibleWord(String),

    /// Residue out of range for a lens-space correction term.
    #[error("out of range: {0}")]
    OutOfRange(String),
}

/// Line-numbered parse failure for the text formats.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError { line, msg: msg.into() }
    }
}
