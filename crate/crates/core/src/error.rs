use thiserror::Error;

/// Errors raised by parsing, dictionary updates and index queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("matrix dimensions must be non-zero")]
    ZeroDimension,
    #[error("invalid byte 0x{0:02x} in matrix body")]
    InvalidByte(u8),
    #[error("width mismatch: dictionary width is {expected}, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("unknown or removed pattern id {0}")]
    UnknownPattern(u64),
    #[error("unknown or dead name {0}")]
    DeadName(u32),
    #[error("position {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },
    #[error("pattern does not belong to {0}")]
    WrongGroup(&'static str),
    #[error("unknown engine `{0}` (expected auto, linear, blocked or grouped)")]
    UnknownEngine(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
