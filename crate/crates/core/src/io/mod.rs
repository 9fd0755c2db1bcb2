//! Text formats: the `.alg` algebra DSL, the formula syntax, and canonical
//! JSON.

use std::fmt;

use thiserror::Error;

mod dsl;
mod formula;
mod json;
mod lexer;

pub use dsl::{
    elaborate, parse_spec, render_spec, spec_from_algebra, AlgebraSpec, Elaborated, Kind,
    OpSpec, SpecError, Spanned, TableEntry,
};
pub use formula::{parse_formula, parse_term};
pub use json::{
    export_algebra, export_con_lattice, export_report, export_twist, import_algebra,
    import_document, to_canonical_string, JsonError,
};
pub use lexer::Loc;

/// Syntax error with its source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub loc: Loc,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.loc, self.message)
    }
}
