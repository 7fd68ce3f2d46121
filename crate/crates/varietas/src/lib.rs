//! IO, JSON documents, property suites and the command-line front end for
//! `varietas-core`.

pub mod cli;
pub mod commands;
pub mod docs;
mod error;
pub mod gen;
pub mod selftest;

pub use error::WorkbenchError;
