use alloc::string::String;

use crate::words::Generator;

/// Errors raised by the computational core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("no image given for generator {0}")]
    MissingImage(Generator),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("generator {0} does not belong to this group")]
    UnknownGenerator(Generator),

    #[error("action is not defined: {0}")]
    NoAction(String),

    #[error("map is not invertible on the free basis")]
    NotInvertible,

    #[error("word could not be rewritten into the kernel: {0}")]
    RewriteFailure(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("input word is trivial")]
    TrivialInput,

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
