//! Knowledge-base files.
//!
//! ```text
//! # comment
//! type alpha : iota
//! entity Tom Peter SC : iota
//! entity Skier Climber : (o iota)@tw
//! var x : iota
//! assert (a) \w \t ['Skier_wt 'Tom]
//! query (q) \w \t ['Exists \x ['Skier_wt x]]
//! domain tau = 0 1 2
//! actual W1 0
//! value Skier @ W1 0 = {Tom}
//! value Children_of @ W1 0 = {John -> {}}
//! ```
//!
//! A line starting with whitespace continues the previous declaration.
//! `value` tables for `o`-valued functions list the tuples mapped to `T`;
//! other tables list `args -> value` pairs, absent tuples being undefined.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::parser::Parser;
use super::{print_value, print_with, ParseError};
use crate::construction::{Construction, Entity, Var};
use crate::number::Number;
use crate::symbols::{SymbolError, SymbolTable};
use crate::types::{BaseType, TilType};

/// A value assigned to an entity, optionally at a world and time; `None`
/// means undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelValue {
    pub name: String,
    pub at: Option<(Arc<str>, Number)>,
    pub value: Option<Entity>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    TypeAlias { name: String, ty: TilType },
    Entity { names: Vec<String>, ty: TilType },
    Var(Var),
    Assert { label: String, construction: Construction },
    Query { label: String, construction: Construction },
    Domain { base: BaseType, values: Vec<Entity> },
    Actual { world: Arc<str>, time: Number },
    Value(ModelValue),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KbFile {
    pub decls: Vec<Decl>,
    pub symbols: SymbolTable,
}

impl KbFile {
    pub fn assertions(&self) -> impl Iterator<Item = (&str, &Construction)> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Assert { label, construction } => Some((label.as_str(), construction)),
            _ => None,
        })
    }

    pub fn queries(&self) -> impl Iterator<Item = (&str, &Construction)> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Query { label, construction } => Some((label.as_str(), construction)),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KbErrorKind {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct KbError {
    pub line: usize,
    pub kind: KbErrorKind,
}

impl fmt::Display for KbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            KbErrorKind::Parse(p) => write!(f, "line {}:{}: {}", self.line, p.span.column, p.kind),
            other => write!(f, "line {}: {}", self.line, other),
        }
    }
}

fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            // blank lines keep line arithmetic of continuations intact
            if let Some(last) = out.last_mut() {
                last.1.push('\n');
            }
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.1.push('\n');
                last.1.push_str(line);
                continue;
            }
        }
        out.push((i + 1, line.to_string()));
    }
    out
}

struct Loader {
    kb: KbFile,
    auto_label: usize,
}

pub fn parse_kb(text: &str) -> Result<KbFile, KbError> {
    let mut loader = Loader { kb: KbFile { decls: Vec::new(), symbols: SymbolTable::standard() }, auto_label: 0 };
    for (line, stmt) in statements(text) {
        loader.statement(&stmt).map_err(|kind| {
            let line = match &kind {
                KbErrorKind::Parse(p) => line + p.span.line - 1,
                _ => line,
            };
            KbError { line, kind }
        })?;
    }
    Ok(loader.kb)
}

fn other(msg: impl Into<String>) -> KbErrorKind {
    KbErrorKind::Other(msg.into())
}

impl Loader {
    fn fresh_label(&mut self, query: bool) -> String {
        if query {
            let used = |l: &str| self.kb.queries().any(|(x, _)| x == l);
            let mut n = 1;
            let mut label = "q".to_string();
            while used(&label) {
                n += 1;
                label = format!("q{n}");
            }
            return label;
        }
        loop {
            let i = self.auto_label;
            self.auto_label += 1;
            let label = if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("k{i}") };
            if !self.kb.assertions().any(|(l, _)| l == label) {
                return label;
            }
        }
    }

    fn statement(&mut self, stmt: &str) -> Result<(), KbErrorKind> {
        let symbols = self.kb.symbols.clone();
        let mut p = Parser::new(stmt, &symbols);
        let keyword = p.word().ok_or_else(|| other("expected a declaration keyword"))?;
        match keyword.as_str() {
            "type" => {
                let name = p.word().ok_or_else(|| other("expected a type name"))?;
                expect_char(&mut p, stmt, ':')?;
                let (ty, _) = p.type_annotation()?;
                p.expect_end()?;
                self.kb.symbols.declare_alias(&name, ty.clone())?;
                self.kb.decls.push(Decl::TypeAlias { name, ty });
            }
            "entity" => {
                let mut names = Vec::new();
                while !rest_from(stmt, &mut p).starts_with(':') {
                    let n = p.word().ok_or_else(|| other("expected entity names followed by `: TYPE`"))?;
                    names.push(n);
                }
                if names.is_empty() {
                    return Err(other("expected at least one entity name"));
                }
                expect_char(&mut p, stmt, ':')?;
                let (ty, _) = p.type_annotation()?;
                p.expect_end()?;
                for n in &names {
                    self.kb.symbols.declare(n, ty.clone())?;
                }
                self.kb.decls.push(Decl::Entity { names, ty });
            }
            "var" => {
                let name = p.word().ok_or_else(|| other("expected a variable name"))?;
                expect_char(&mut p, stmt, ':')?;
                let (ty, constructs) = p.type_annotation()?;
                p.expect_end()?;
                let v = Var { name: name.into(), ty, constructs };
                self.kb.symbols.declare_var(v.clone())?;
                self.kb.decls.push(Decl::Var(v));
            }
            "assert" | "query" => {
                let query = keyword == "query";
                let label = if rest_from(stmt, &mut p).starts_with('(') {
                    expect_char(&mut p, stmt, '(')?;
                    let l = p.word().ok_or_else(|| other("expected a label"))?;
                    expect_char(&mut p, stmt, ')')?;
                    l
                } else {
                    self.fresh_label(query)
                };
                let (c, _) = p.expr()?;
                p.expect_end()?;
                let clash = if query {
                    self.kb.queries().any(|(l, _)| l == label)
                } else {
                    self.kb.assertions().any(|(l, _)| l == label)
                };
                if clash {
                    return Err(other(format!("duplicate label `{label}`")));
                }
                self.kb.decls.push(if query {
                    Decl::Query { label, construction: c }
                } else {
                    Decl::Assert { label, construction: c }
                });
            }
            "domain" => {
                let base = p
                    .word()
                    .and_then(|w| BaseType::from_keyword(&w))
                    .filter(|b| !matches!(b, BaseType::Bool))
                    .ok_or_else(|| other("expected `iota`, `tau` or `omega` after `domain`"))?;
                expect_char(&mut p, stmt, '=')?;
                let ty = TilType::Base(base);
                let mut values = Vec::new();
                while !p.at_end() {
                    let v = p.value(&ty)?.ok_or_else(|| other("domain members cannot be undefined"))?;
                    values.push(v);
                }
                self.kb.decls.push(Decl::Domain { base, values });
            }
            "actual" => {
                let world = p.word().ok_or_else(|| other("expected a world"))?;
                let time = number(&mut p)?;
                p.expect_end()?;
                self.kb.decls.push(Decl::Actual { world: world.into(), time });
            }
            "value" => {
                let name = p.word().ok_or_else(|| other("expected an entity name"))?;
                let ty = self
                    .kb
                    .symbols
                    .entity(&name)
                    .and_then(Entity::ty)
                    .ok_or_else(|| other(format!("`{name}` is not a declared entity")))?;
                let at = if rest_from(stmt, &mut p).starts_with('@') {
                    expect_char(&mut p, stmt, '@')?;
                    let world = p.word().ok_or_else(|| other("expected a world"))?;
                    let time = number(&mut p)?;
                    Some((Arc::<str>::from(world), time))
                } else {
                    None
                };
                let vty = match &at {
                    Some(_) => ty
                        .intension_of()
                        .cloned()
                        .ok_or_else(|| other(format!("`{name}` is not an intension; drop `@`")))?,
                    None => ty,
                };
                expect_char(&mut p, stmt, '=')?;
                let value = p.value(&vty)?;
                p.expect_end()?;
                self.kb.decls.push(Decl::Value(ModelValue { name, at, value }));
            }
            other_kw => return Err(other(format!("unknown declaration `{other_kw}`"))),
        }
        Ok(())
    }
}

fn rest_from<'a>(stmt: &'a str, p: &mut Parser<'_>) -> &'a str {
    p.at_end();
    &stmt[p.position()..]
}

fn expect_char(p: &mut Parser<'_>, _stmt: &str, ch: char) -> Result<(), KbErrorKind> {
    Ok(p.expect(ch)?)
}

fn number(p: &mut Parser<'_>) -> Result<Number, KbErrorKind> {
    match p.value(&TilType::tau())? {
        Some(Entity::Number(n)) => Ok(n),
        _ => Err(other("expected a number")),
    }
}

/// Canonical text of a knowledge base; `parse_kb(print_kb(kb))` yields
/// the same declarations.
pub fn print_kb(kb: &KbFile) -> String {
    let mut out = String::new();
    let mut symbols = SymbolTable::standard();
    for d in &kb.decls {
        match d {
            Decl::TypeAlias { name, ty } => {
                out.push_str(&format!("type {name} : {}\n", ty.compact()));
                let _ = symbols.declare_alias(name, ty.clone());
            }
            Decl::Entity { names, ty } => {
                out.push_str(&format!("entity {} : {}\n", names.join(" "), ty.compact()));
                for n in names {
                    let _ = symbols.declare(n, ty.clone());
                }
            }
            Decl::Var(v) => {
                out.push_str(&format!("var {} : {}", v.name, v.ty.compact()));
                if let Some(k) = &v.constructs {
                    out.push_str(&format!("->{}", k.compact()));
                }
                out.push('\n');
                let _ = symbols.declare_var(v.clone());
            }
            Decl::Assert { label, construction } => {
                out.push_str(&format!("assert ({label}) {}\n", print_with(construction, &symbols)));
            }
            Decl::Query { label, construction } => {
                out.push_str(&format!("query ({label}) {}\n", print_with(construction, &symbols)));
            }
            Decl::Domain { base, values } => {
                let vs: Vec<String> = values.iter().map(|v| print_value(Some(v), &symbols)).collect();
                out.push_str(&format!("domain {} = {}\n", base.keyword(), vs.join(" ")));
            }
            Decl::Actual { world, time } => out.push_str(&format!("actual {world} {time}\n")),
            Decl::Value(mv) => {
                out.push_str(&format!("value {}", mv.name));
                if let Some((w, t)) = &mv.at {
                    out.push_str(&format!(" @ {w} {t}"));
                }
                out.push_str(&format!(" = {}\n", print_value(mv.value.as_ref(), &symbols)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a tiny base
entity Tom : iota
entity Skier : (o iota)@tw
assert (a) \\w \\t
    ['Skier_wt 'Tom]
actual W1 0
value Skier @ W1 0 = {Tom}
";

    #[test]
    fn loads_declarations_in_order() {
        let kb = parse_kb(SMALL).unwrap();
        assert_eq!(kb.decls.len(), 5);
        assert_eq!(kb.assertions().count(), 1);
        assert!(matches!(&kb.decls[4], Decl::Value(ModelValue { at: Some(_), value: Some(_), .. })));
    }

    #[test]
    fn save_load_save_is_stable() {
        let once = print_kb(&parse_kb(SMALL).unwrap());
        let twice = print_kb(&parse_kb(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse_kb("entity Tom : iota\n\nassert (a) \\w \\t ['Skier_wt 'Tom]\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_kb("entity Tom : iota\nentity Tom : iota\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn empty_file_is_empty_kb() {
        assert!(parse_kb("").unwrap().decls.is_empty());
        assert!(parse_kb("# only comments\n\n").unwrap().decls.is_empty());
    }
}
