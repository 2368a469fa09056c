//! The `.ggr` line-oriented text format.

use serde::Serialize;
use std::fmt;

/// A parse failure with its position.
#[derive(Debug, Clone, Serialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub offending_token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: {} (near {:?})",
            self.line, self.column, self.message, self.offending_token
        )
    }
}

impl std::error::Error for ParseError {}
