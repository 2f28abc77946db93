//! One-sided shift spaces over countable alphabets.
//!
//! Sequences, the cylinder topology and its metrics, directed graphs and
//! their edge shifts, forbidden-block presentations, sliding block codes, and
//! a symbolic engine for Cuntz-Krieger families and graph groupoids.

use std::fmt;

pub mod algebra;
pub mod code;
pub mod graph;
pub mod groupoid;
pub mod seq;
pub mod space;
pub mod topology;

pub use graph::{BoundaryPath, Graph, Path};
pub use seq::{Length, Seq, Symbol, Word};

/// A syntax error in one of the text formats, with its 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: String) -> Self {
        ParseError { line, message }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}
