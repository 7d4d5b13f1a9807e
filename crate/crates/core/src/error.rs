use thiserror::Error;

/// Everything that can go wrong between reading a grammar file and printing
/// its order type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: undeclared symbol `{symbol}`")]
    UndeclaredSymbol { line: usize, symbol: String },

    #[error("missing `{0}:` header")]
    MissingHeader(&'static str),

    #[error("ordinal syntax error at byte {pos}: {message}")]
    OrdinalSyntax { pos: usize, message: String },

    #[error("coefficient overflow")]
    CoefficientOverflow,

    #[error("degree of 0 is undefined")]
    DegreeOfZero,

    #[error("primitive root of the empty word is undefined")]
    EmptyWord,

    #[error("language of `{0}` is infinite")]
    InfiniteLanguage(String),

    #[error("symbol `{0}` is unproductive")]
    Unproductive(String),

    #[error("left recursion through `{0}`: not an ordinal grammar")]
    LeftRecursion(String),

    #[error("production `{production}` violates the normal-form shape: {reason}")]
    ShapeViolation { production: String, reason: String },

    #[error("not an ordinal grammar: {0}")]
    NotAnOrdinalGrammar(String),

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("result {0} is not below w^(w^w)")]
    BoundViolation(String),
}

impl Error {
    /// Short stable name of the error class, used by the CLI and the C ABI.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Syntax { .. } | Error::UndeclaredSymbol { .. } | Error::MissingHeader(_) => {
                "ParseError"
            }
            Error::OrdinalSyntax { .. } => "OrdinalParseError",
            Error::CoefficientOverflow => "CoefficientOverflow",
            Error::DegreeOfZero | Error::EmptyWord => "DomainError",
            Error::InfiniteLanguage(_) => "InfiniteLanguage",
            Error::Unproductive(_) => "Unproductive",
            Error::LeftRecursion(_) => "LeftRecursionDetected",
            Error::ShapeViolation { .. } => "ShapeViolation",
            Error::NotAnOrdinalGrammar(_) => "NotAnOrdinalGrammar",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BoundViolation(_) => "BoundViolation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
