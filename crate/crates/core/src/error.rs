use std::fmt;

/// Machine-readable classification of input problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputCode {
    Malformed,
    Dimension,
    RankDeficient,
    RhoRange,
    GammaOrder,
    RegionOverlap,
    RegionDomain,
    RegionEmpty,
    Contraction,
    Formula,
    UnknownAtom,
}

impl InputCode {
    pub fn as_str(self) -> &'static str {
        match self {
            InputCode::Malformed => "MALFORMED",
            InputCode::Dimension => "DIMENSION",
            InputCode::RankDeficient => "RANK_DEFICIENT",
            InputCode::RhoRange => "RHO_RANGE",
            InputCode::GammaOrder => "GAMMA_ORDER",
            InputCode::RegionOverlap => "REGION_OVERLAP",
            InputCode::RegionDomain => "REGION_DOMAIN",
            InputCode::RegionEmpty => "REGION_EMPTY",
            InputCode::Contraction => "CONTRACTION",
            InputCode::Formula => "FORMULA",
            InputCode::UnknownAtom => "UNKNOWN_ATOM",
        }
    }
}

impl fmt::Display for InputCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{code}: {message}")]
    Input { code: InputCode, message: String },

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(code: InputCode, message: impl Into<String>) -> Self {
        Error::Input {
            code,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Error::Invariant(message.into())
    }

    pub fn code(&self) -> Option<InputCode> {
        match self {
            Error::Input { code, .. } => Some(*code),
            Error::Syntax { .. } => Some(InputCode::Formula),
            Error::DimensionMismatch { .. } => Some(InputCode::Dimension),
            _ => None,
        }
    }

    /// Process exit code: 1 input error, 2 invariant violation, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. } | Error::Input { .. } | Error::Syntax { .. } => 1,
            Error::Invariant(_) => 2,
            Error::Precondition(_) | Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
