//! A reasoning engine for Transparent Intensional Logic.
//!
//! Constructions are parsed from a compact text syntax, type checked in the
//! ramified hierarchy, classified by context, evaluated with partiality in
//! finite models, and turned into clauses for a resolution prover that
//! answers yes/no and wh-questions over a knowledge base.

pub mod clausal;
pub mod construction;
pub mod context;
pub mod number;
pub mod reduce;
pub mod repl;
pub mod resolve;
pub mod session;
pub mod symbols;
pub mod syntax;
pub mod types;
pub mod typing;

pub use construction::{Builtin, Construction, Entity, NodePath, Var};
pub use number::Number;
pub use symbols::SymbolTable;
pub use types::{BaseType, TilType};
