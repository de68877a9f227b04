//! Concrete text syntax for types, constructions and knowledge-base files.
//!
//! ```text
//! type  := o | iota | tau | omega | ALIAS | *N | (RESULT ARG ...) | type@tw
//! expr  := \BINDER[,BINDER...] ... BODY | exec
//! exec  := ^1 'ENTITY | ^2 exec | wt
//! wt    := triv[_wt]
//! triv  := 'triv | NAME[:type] | 'NUMBER | [expr ...]
//! ```
//!
//! `\w \t B` is two nested closures; `\x,y B` one closure with two
//! parameters. A bracket holding a single item is grouping, so
//! `[\x ['Cot x]]` is the closure itself. `C_wt` abbreviates `[[C w] t]` for
//! the nearest enclosing `\w \t` pair (an omega closure directly wrapping a
//! tau closure).

mod kb;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use kb::{parse_kb, print_kb, Decl, KbError, KbErrorKind, KbFile, ModelValue};
pub use parser::{parse_value, Parsed};
pub use printer::{print_entity, print_value, print_with};

use crate::construction::{Construction, NodePath};
use crate::symbols::SymbolTable;
use crate::types::TilType;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("undeclared variable `{0}`")]
    UnknownVariable(String),
    #[error("`{name}` takes {expected} argument(s), given {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("`_wt` used outside an enclosing \\w \\t pair")]
    WtOutsidePair,
    #[error("malformed type: {0}")]
    BadType(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("closure parameters must be pairwise distinct (`{0}` repeated)")]
    DuplicateParam(String),
    #[error("`->` annotation only applies to construction types *n")]
    ConstructsOnNonOrder,
    #[error("value does not fit type {0}")]
    BadValue(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

/// Parses a type; the `->` constructs annotation is not accepted here.
pub fn parse_type(text: &str) -> Result<TilType, ParseError> {
    parse_type_with(text, &SymbolTable::standard())
}

pub fn parse_type_with(text: &str, symbols: &SymbolTable) -> Result<TilType, ParseError> {
    let mut p = parser::Parser::new(text, symbols);
    let (ty, constructs) = p.type_annotation()?;
    if constructs.is_some() {
        return Err(p.error_here(ParseErrorKind::ConstructsOnNonOrder));
    }
    p.expect_end()?;
    Ok(ty)
}

pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Construction, ParseError> {
    parse_spanned(text, symbols).map(|p| p.construction)
}

/// Parses and keeps the source span of every node, keyed by node path.
pub fn parse_spanned(text: &str, symbols: &SymbolTable) -> Result<Parsed, ParseError> {
    let mut p = parser::Parser::new(text, symbols);
    let (c, spans) = p.expr()?;
    p.expect_end()?;
    let mut map = BTreeMap::new();
    spans.flatten(NodePath::root(), &mut map);
    Ok(Parsed { construction: c, spans: map })
}

/// Canonical text against the standard symbol table.
pub fn print(c: &Construction) -> String {
    print_with(c, &SymbolTable::standard())
}
