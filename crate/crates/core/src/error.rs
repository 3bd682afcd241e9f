use thiserror::Error;

/// Errors raised while building, loading or querying a risk model.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// so that the CLI and the HTTP service can report failures uniformly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid model: {0}")]
    Invalid(String),

    #[error("unknown grade `{0}`")]
    UnknownGrade(String),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("unknown level `{label}` on axis `{axis}`")]
    UnknownLabel { axis: String, label: String },

    #[error("level {index} out of range for axis `{axis}` (expected 0..{levels})")]
    LevelOutOfRange {
        axis: String,
        index: usize,
        levels: usize,
    },

    #[error("state has {got} components, expected {expected}")]
    StateArity { expected: usize, got: usize },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("assignment is not total: {count} uncovered state(s), e.g. {}", .examples.join(", "))]
    NonTotal { count: u64, examples: Vec<String> },

    #[error("conflicting explicit entries for state {0}")]
    Conflict(String),

    #[error(
        "state space has {size} states, above the enumeration cap of {cap}; \
         declare a `default` grade so totality holds without enumeration"
    )]
    EnumerationCap { size: u128, cap: u64 },

    #[error("invalid slice: {0}")]
    Slice(String),

    #[error("context axis `{0}` has no level profile; add a `profile` listing one grade per level")]
    MissingProfile(String),

    #[error("cannot take the mode of an empty multiset")]
    EmptyMultiset,

    #[error("invalid render settings: {0}")]
    Render(String),

    #[error("cannot read {0}")]
    Io(String),
}

impl Error {
    /// Stable error code, e.g. `E_SCHEMA`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Schema(_) => "E_SCHEMA",
            Error::Invalid(_) => "E_INVALID",
            Error::UnknownGrade(_) => "E_UNKNOWN_GRADE",
            Error::UnknownAxis(_) => "E_UNKNOWN_AXIS",
            Error::UnknownLabel { .. } => "E_UNKNOWN_LABEL",
            Error::LevelOutOfRange { .. } => "E_LEVEL_RANGE",
            Error::StateArity { .. } => "E_STATE_ARITY",
            Error::Syntax { .. } => "E_SYNTAX",
            Error::NonTotal { .. } => "E_NON_TOTAL",
            Error::Conflict(_) => "E_CONFLICT",
            Error::EnumerationCap { .. } => "E_ENUM_CAP",
            Error::Slice(_) => "E_SLICE",
            Error::MissingProfile(_) => "E_MISSING_PROFILE",
            Error::EmptyMultiset => "E_EMPTY",
            Error::Render(_) => "E_RENDER",
            Error::Io(_) => "E_IO",
        }
    }

    /// True for errors caused by a reference to something that does not exist
    /// (axis, level, grade). The service maps these to 404.
    pub fn is_unknown_reference(&self) -> bool {
        matches!(
            self,
            Error::UnknownAxis(_)
                | Error::UnknownLabel { .. }
                | Error::UnknownGrade(_)
                | Error::LevelOutOfRange { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
