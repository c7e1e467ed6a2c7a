use std::io;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{what} = {value} is out of range (bound {bound})")]
    Range {
        what: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("malformed encoding: {0}")]
    Decode(String),

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
