//! The line-oriented knowledge-base language.
//!
//! ```text
//! SYMPTOM cough "Cough"
//! DISEASE tb "TB" SYMPTOMS: cough, fever TREATMENT: "..." IF_UNTREATED: "..."
//! RULE classic_tb: IF symptom(cough) AND symptom(fever) THEN disease(tb)
//! ```
//!
//! `#` starts a comment that runs to the end of the line and blank lines are
//! ignored. A `DISEASE` declaration may continue on following lines before
//! each of its `SYMPTOMS:`, `TREATMENT:` and `IF_UNTREATED:` clauses. In
//! premises `AND` binds tighter than `OR` and parentheses group.

mod lexer;
mod parser;
mod render;

use thiserror::Error;

pub use parser::MAX_NESTING;
pub use render::render_kb;

use crate::kb::KnowledgeBase;
use crate::rule::PremiseExpr;

/// A grammar violation at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: lexer::Pos, message: impl Into<String>) -> Self {
        Self {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

/// Parses a whole knowledge-base file. Validation is a separate step.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    parser::Parser::new(text)?.kb()
}

/// Parses a standalone premise expression such as `symptom(a) AND symptom(b)`.
pub fn parse_premise(text: &str) -> Result<PremiseExpr, ParseError> {
    parser::Parser::new(text)?.standalone_premise()
}
