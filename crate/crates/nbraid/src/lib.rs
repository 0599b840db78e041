//! Command-line front end, JSON formats and verification batteries for
//! `nbraid-core`.

pub mod cli;
pub mod formats;
pub mod report;
pub mod suites;
