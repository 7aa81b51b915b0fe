use std::fmt;
use std::io;
use std::process::ExitCode;

use altcsit_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or contradictory command-line input.
    Input(String),
    /// A pattern file that does not parse; the path prefixes the location.
    Pattern {
        path: String,
        source: CoreError,
    },
    Io {
        path: String,
        source: io::Error,
    },
    Core(CoreError),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 2 bad input, 3 infeasible scheme, 4 dimension guard, 1 anything else.
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Input(_) | CliError::Pattern { .. } => 2,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::EmptyPattern
                | CoreError::RaggedPattern { .. }
                | CoreError::IllegalSymbol { .. }
                | CoreError::BadRational(_)
                | CoreError::DimensionMismatch { .. }
                | CoreError::InvalidProbability(_)
                | CoreError::InvalidUserSet(_)
                | CoreError::InvalidConfig(_)
                | CoreError::NegativeCoordinate(_)
                | CoreError::ZeroInequality => 2,
                CoreError::InfeasibleScheme(_) | CoreError::TooFewAntennas { .. } => 3,
                CoreError::DimensionTooLarge { .. } | CoreError::UnsupportedUsers { .. } => 4,
                CoreError::Ledger(_) | CoreError::CsitViolation { .. } => 1,
            },
        };
        ExitCode::from(code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Pattern { path, source } => write!(f, "{path}: {source}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
