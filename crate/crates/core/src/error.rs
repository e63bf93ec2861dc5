use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Field(String),
    #[error("{q} is not a characteristic power (characteristic {characteristic})")]
    NotCharacteristicPower { q: u64, characteristic: u64 },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("name collision: {0}")]
    NameCollision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
