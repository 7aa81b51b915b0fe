use alloc::string::String;

use crate::csit::CsitState;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("empty CSIT pattern")]
    EmptyPattern,
    #[error("ragged CSIT pattern: row {row} has {found} slots, expected {expected}")]
    RaggedPattern { row: usize, expected: usize, found: usize },
    /// Row and column are 1-based, as they appear in the pattern text.
    #[error("illegal CSIT symbol {symbol:?} at row {row}, column {col}")]
    IllegalSymbol { row: usize, col: usize, symbol: char },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid user set: {0}")]
    InvalidUserSet(String),
    #[error("inequality has no nonzero coefficient")]
    ZeroInequality,
    #[error("negative DoF coordinate at user {0}")]
    NegativeCoordinate(usize),
    #[error("{users} users exceed the enumeration limit of {limit}")]
    DimensionTooLarge { users: usize, limit: usize },
    #[error("{antennas} antennas cannot serve {users} users (need M >= K)")]
    TooFewAntennas { users: usize, antennas: usize },
    #[error("scheme infeasible: {0}")]
    InfeasibleScheme(String),
    #[error("operation requires {expected} users, got {found}")]
    UnsupportedUsers { expected: usize, found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("schedule ledger inconsistent: {0}")]
    Ledger(String),
    #[error("slot {slot} needs {required:?} CSIT of user {user}, pattern declares {declared:?}")]
    CsitViolation {
        user: usize,
        slot: usize,
        required: CsitState,
        declared: CsitState,
    },
}
