use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("empty word")]
    EmptyWord,
    #[error("the period of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
    #[error("({s}, {e}) is not a linked pair")]
    NotLinkedPair { s: usize, e: usize },
    #[error("accepting set is not closed under conjugation")]
    NotClosed,
    #[error("recognizers are defined over different morphisms")]
    MorphismMismatch,
    #[error("alphabets do not match")]
    AlphabetMismatch,
    #[error("operation requires a strongly recognizing morphism")]
    NotStrong,
    #[error("parameter out of range: {0}")]
    CapExceeded(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version `{0}`")]
    VersionMismatch(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
