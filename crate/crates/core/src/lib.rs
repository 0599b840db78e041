//! Computational core for pure braid groups of non-orientable surfaces.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combing;
pub mod error;
pub mod free;
pub mod groupring;
pub mod linalg;
pub mod padp;
pub mod pquotient;
pub mod presentations;
pub mod words;

pub use error::{Error, Result};
pub use presentations::{GroupSpec, NamedElement, Presentation};
pub use words::{parse_word, Generator, Letter, Word};
