use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigInt, BigRational};

use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::construction::{Construction, Entity, NodePath, Var};
use crate::number::Number;
use crate::reduce::value::FunctionValue;
use crate::symbols::SymbolTable;
use crate::types::{BaseType, TilType};

/// A parsed construction with the span of each node.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub construction: Construction,
    pub spans: BTreeMap<NodePath, SourceSpan>,
}

/// Span tree mirroring `Construction::children`.
#[derive(Debug, Clone)]
pub(crate) struct SpanTree {
    span: SourceSpan,
    children: Vec<SpanTree>,
}

impl SpanTree {
    fn leaf(span: SourceSpan) -> Self {
        SpanTree { span, children: Vec::new() }
    }

    pub(crate) fn flatten(self, path: NodePath, out: &mut BTreeMap<NodePath, SourceSpan>) {
        out.insert(path.clone(), self.span);
        for (i, ch) in self.children.into_iter().enumerate() {
            ch.flatten(path.child(i), out);
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'')
}

fn is_operator_char(c: char) -> bool {
    matches!(c, '+' | '-' | '*' | '/' | '=' | '<' | '>' | '!' | '&' | '|' | '~')
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: &'a SymbolTable,
    scope: Vec<Var>,
    pairs: Vec<(Var, Var)>,
}

type Node = (Construction, SpanTree);

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, symbols: &'a SymbolTable) -> Self {
        Parser { src, pos: 0, symbols, scope: Vec::new(), pairs: Vec::new() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek2(&self) -> Option<char> {
        self.rest().chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn span(&self, start: usize) -> SourceSpan {
        let before = &self.src[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(start, |i| start - i - 1) + 1;
        SourceSpan { start, end: self.pos.max(start), line, column }
    }

    pub(crate) fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let mut span = self.span(self.pos);
        span.end = (self.pos + self.peek().map_or(0, char::len_utf8)).min(self.src.len());
        ParseError { kind, span }
    }

    fn error_at(&self, start: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, span: self.span(start) }
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_here(ParseErrorKind::Unexpected { expected: expected.into(), found: self.found() })
    }

    pub(crate) fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{ch}`")))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    /// Reads an identifier; the flag reports a stripped `_wt` suffix.
    fn ident(&mut self) -> Option<(String, bool)> {
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        if text.len() > 3 && text.ends_with("_wt") {
            Some((text[..text.len() - 3].to_string(), true))
        } else {
            Some((text.to_string(), false))
        }
    }

    /// `_wt` directly after a token that cannot absorb it.
    fn wt_suffix(&mut self) -> bool {
        let r = self.rest();
        if r.starts_with("_wt") && !r[3..].chars().next().is_some_and(is_ident_char) {
            self.pos += 3;
            true
        } else {
            false
        }
    }

    pub(crate) fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.bump();
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    // ---- types ----

    pub(crate) fn type_annotation(&mut self) -> Result<(TilType, Option<TilType>), ParseError> {
        let start = self.pos;
        let ty = self.type_expr()?;
        if self.rest().trim_start().starts_with("->") {
            self.skip_ws();
            self.pos += 2;
            let constructs = self.type_expr()?;
            if !matches!(ty, TilType::Order(_)) {
                return Err(self.error_at(start, ParseErrorKind::ConstructsOnNonOrder));
            }
            return Ok((ty, Some(constructs)));
        }
        Ok((ty, None))
    }

    fn type_expr(&mut self) -> Result<TilType, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut ty = match self.peek() {
            Some('(') => {
                self.bump();
                let mut parts = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(')') {
                        self.bump();
                        break;
                    }
                    if self.peek().is_none() {
                        return Err(self.unexpected("`)`"));
                    }
                    parts.push(self.type_expr()?);
                }
                if parts.len() < 2 {
                    return Err(self.error_at(
                        start,
                        ParseErrorKind::BadType("a functional type needs a result and at least one argument".into()),
                    ));
                }
                let result = parts.remove(0);
                if parts.len() > 1 && parts.contains(&TilType::omega()) {
                    return Err(self.error_at(
                        start,
                        ParseErrorKind::BadType(
                            "omega must be the sole argument of a functional type; write ((T tau) omega)".into(),
                        ),
                    ));
                }
                TilType::Func(Box::new(result), parts)
            }
            Some('*') => {
                self.bump();
                let ds = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
                let n: u32 = self.src[ds..self.pos].parse().map_err(|_| {
                    self.error_at(start, ParseErrorKind::BadType("expected an order after `*`".into()))
                })?;
                if n == 0 {
                    return Err(self.error_at(start, ParseErrorKind::BadType("orders start at *1".into())));
                }
                TilType::Order(n)
            }
            _ => {
                let (name, wt) = self.ident().ok_or_else(|| self.unexpected("a type"))?;
                if wt {
                    // leave `_wt` for the enclosing construction
                    self.pos -= 3;
                }
                if let Some(b) = BaseType::from_keyword(&name) {
                    TilType::Base(b)
                } else if let Some(t) = self.symbols.alias(&name) {
                    t.clone()
                } else {
                    return Err(self.error_at(start, ParseErrorKind::BadType(format!("unknown type `{name}`"))));
                }
            }
        };
        while self.rest().starts_with("@tw") {
            self.pos += 3;
            ty = TilType::intension(ty);
        }
        Ok(ty)
    }

    // ---- constructions ----

    pub(crate) fn expr(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        if self.peek() == Some('\\') {
            self.lambda()
        } else {
            self.exec()
        }
    }

    fn binder(&mut self) -> Result<Var, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let (name, wt) = self.ident().ok_or_else(|| self.unexpected("a variable name"))?;
        if wt {
            return Err(self.error_at(start, ParseErrorKind::Unexpected {
                expected: "a variable name".into(),
                found: format!("`{name}_wt`"),
            }));
        }
        self.skip_ws();
        if self.peek() == Some(':') {
            self.bump();
            let (ty, constructs) = self.type_annotation()?;
            return Ok(Var { name: name.into(), ty, constructs });
        }
        self.symbols
            .var(&name)
            .cloned()
            .ok_or_else(|| self.error_at(start, ParseErrorKind::UnknownVariable(name)))
    }

    fn lambda(&mut self) -> Result<Node, ParseError> {
        let mut groups: Vec<(usize, Vec<Var>)> = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() != Some('\\') {
                break;
            }
            let start = self.pos;
            self.bump();
            let mut group = vec![self.binder()?];
            loop {
                self.skip_ws();
                if self.peek() != Some(',') {
                    break;
                }
                self.bump();
                group.push(self.binder()?);
            }
            let distinct: BTreeSet<&Var> = group.iter().collect();
            if distinct.len() != group.len() {
                let dup = group
                    .iter()
                    .enumerate()
                    .find(|(i, v)| group[..*i].contains(v))
                    .map(|(_, v)| v.name.to_string())
                    .unwrap_or_default();
                return Err(self.error_at(start, ParseErrorKind::DuplicateParam(dup)));
            }
            groups.push((start, group));
        }
        let scope_len = self.scope.len();
        for (_, g) in &groups {
            self.scope.extend(g.iter().cloned());
        }
        let pair = groups.windows(2).rev().find_map(|w| match (&w[0].1[..], &w[1].1[..]) {
            ([a], [b]) if a.ty == TilType::omega() && b.ty == TilType::tau() => Some((a.clone(), b.clone())),
            _ => None,
        });
        let pushed = pair.is_some();
        if let Some(p) = pair {
            self.pairs.push(p);
        }
        let body = self.exec();
        if pushed {
            self.pairs.pop();
        }
        self.scope.truncate(scope_len);
        let (mut c, mut tree) = body?;
        for (start, g) in groups.into_iter().rev() {
            c = Construction::Closure(g, Box::new(c));
            let mut span = self.span(start);
            span.end = tree.span.end;
            tree = SpanTree { span, children: vec![tree] };
        }
        Ok((c, tree))
    }

    fn exec(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with("^1") {
            self.pos += 2;
            self.expect('\'')?;
            let (e, payload, pending) = self.payload()?;
            if pending {
                return Err(self.error_here(ParseErrorKind::Unexpected {
                    expected: "an entity after ^1".into(),
                    found: "`_wt`".into(),
                }));
            }
            let children = payload.into_iter().collect();
            return Ok((Construction::Exec1(e), SpanTree { span: self.span(start), children }));
        }
        if self.rest().starts_with("^2") {
            self.pos += 2;
            let (inner, tree) = self.exec()?;
            return Ok((Construction::exec2(inner), SpanTree { span: self.span(start), children: vec![tree] }));
        }
        self.wt()
    }

    fn wt(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let (c, tree, pending) = self.triv()?;
        if !pending {
            return Ok((c, tree));
        }
        let (w, t) = self
            .pairs
            .last()
            .cloned()
            .ok_or_else(|| self.error_at(start, ParseErrorKind::WtOutsidePair))?;
        let span = self.span(start);
        let suffix = SpanTree::leaf(SourceSpan { start: self.pos - 3, ..span });
        let inner_tree = SpanTree { span, children: vec![tree, suffix.clone()] };
        let outer = SpanTree { span, children: vec![inner_tree, suffix] };
        Ok((Construction::extensionalize(c, &w, &t), outer))
    }

    /// Returns the node and whether a `_wt` suffix is pending.
    fn triv(&mut self) -> Result<(Construction, SpanTree, bool), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('\'') => {
                self.bump();
                let (e, payload, pending) = self.payload()?;
                let children = payload.into_iter().collect();
                Ok((Construction::Triv(e), SpanTree { span: self.span(start), children }, pending))
            }
            Some('[') => self.bracket(),
            Some(c) if is_ident_start(c) => {
                let (v, wt) = self.variable_occurrence()?;
                Ok((Construction::Var(v), SpanTree::leaf(self.span(start)), wt))
            }
            _ => Err(self.unexpected("a construction")),
        }
    }

    fn resolve_var(&self, name: &str) -> Option<Var> {
        self.scope
            .iter()
            .rev()
            .find(|v| &*v.name == name)
            .cloned()
            .or_else(|| self.symbols.var(name).cloned())
    }

    fn variable_occurrence(&mut self) -> Result<(Var, bool), ParseError> {
        let start = self.pos;
        let (name, wt) = self.ident().ok_or_else(|| self.unexpected("a variable"))?;
        if !wt && self.peek() == Some(':') {
            self.bump();
            let (ty, constructs) = self.type_annotation()?;
            let wt = self.wt_suffix();
            return Ok((Var { name: name.into(), ty, constructs }, wt));
        }
        let v = self
            .resolve_var(&name)
            .ok_or_else(|| self.error_at(start, ParseErrorKind::UnknownVariable(name)))?;
        Ok((v, wt))
    }

    /// What follows a `'`: an entity, with the payload's span tree when it
    /// is a construction.
    fn payload(&mut self) -> Result<(Entity, Option<SpanTree>, bool), ParseError> {
        let start = self.pos;
        match (self.peek(), self.peek2()) {
            (Some('\'' | '['), _) => {
                let (c, tree, pending) = self.triv()?;
                Ok((Entity::construction(c), Some(tree), pending))
            }
            (Some(c), _) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok((Entity::Number(n), None, self.wt_suffix()))
            }
            (Some('-'), Some(d)) if d.is_ascii_digit() => {
                let n = self.number()?;
                Ok((Entity::Number(n), None, self.wt_suffix()))
            }
            (Some(c), _) if is_operator_char(c) => {
                while matches!(self.peek(), Some(c) if is_operator_char(c)) {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                let e = self
                    .symbols
                    .entity(name)
                    .cloned()
                    .ok_or_else(|| self.error_at(start, ParseErrorKind::UnknownSymbol(name.into())))?;
                Ok((e, None, self.wt_suffix()))
            }
            (Some(c), _) if is_ident_start(c) => {
                let save = self.pos;
                let (name, wt) = self.ident().expect("identifier start checked");
                if !wt && self.peek() == Some(':') {
                    self.pos = save;
                    let (v, wt) = self.variable_occurrence()?;
                    return Ok((Entity::construction(Construction::Var(v)), Some(SpanTree::leaf(self.span(start))), wt));
                }
                if let Some(e) = self.symbols.entity(&name) {
                    return Ok((e.clone(), None, wt));
                }
                match self.resolve_var(&name) {
                    Some(v) => Ok((Entity::construction(Construction::Var(v)), Some(SpanTree::leaf(self.span(start))), wt)),
                    None => Err(self.error_at(start, ParseErrorKind::UnknownSymbol(name))),
                }
            }
            _ => Err(self.unexpected("a symbol, number or construction after `'`")),
        }
    }

    fn number(&mut self) -> Result<Number, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits = |p: &mut Self| {
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.bump();
            }
        };
        digits(self);
        let mut is_float = false;
        let mut denom = None;
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            is_float = true;
            self.bump();
            digits(self);
        } else if self.peek() == Some('/') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            let ds = self.pos;
            digits(self);
            denom = Some(self.src[ds..self.pos].to_string());
        }
        if matches!(self.peek(), Some('e' | 'E'))
            && (self.peek2().is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+'))
        {
            is_float = true;
            self.bump();
            if matches!(self.peek(), Some('-' | '+')) {
                self.bump();
            }
            digits(self);
        }
        let text = &self.src[start..self.pos];
        let bad = || self.error_at(start, ParseErrorKind::BadNumber(text.to_string()));
        if is_float {
            let f: f64 = text.parse().map_err(|_| bad())?;
            return Ok(Number::float(f));
        }
        let numer_text = match &denom {
            Some(d) => &text[..text.len() - d.len() - 1],
            None => text,
        };
        let numer: BigInt = numer_text.parse().map_err(|_| bad())?;
        let denom: BigInt = match &denom {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::from(1),
        };
        if denom == BigInt::from(0) {
            return Err(bad());
        }
        let q = BigRational::new(numer, denom);
        if self.rest().starts_with("pi") && !self.rest()[2..].chars().next().is_some_and(|c| is_ident_char(c) && c != '_') {
            self.pos += 2;
            return Ok(Number::PiMultiple(q));
        }
        Ok(Number::Rational(q))
    }

    fn bracket(&mut self) -> Result<(Construction, SpanTree, bool), ParseError> {
        let start = self.pos;
        self.bump();
        let mut items: Vec<Node> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(']') => {
                    self.bump();
                    break;
                }
                None => return Err(self.unexpected("`]`")),
                _ => items.push(self.expr()?),
            }
        }
        let pending = self.wt_suffix();
        match items.len() {
            0 => Err(self.error_at(start, ParseErrorKind::Unexpected {
                expected: "a construction".into(),
                found: "`[]`".into(),
            })),
            1 => {
                let (c, tree) = items.pop().expect("one item");
                Ok((c, tree, pending))
            }
            _ => {
                let (head, head_tree) = items.remove(0);
                self.check_arity(&head, items.len(), start)?;
                let (args, arg_trees): (Vec<_>, Vec<_>) = items.into_iter().unzip();
                let mut children = vec![head_tree];
                children.extend(arg_trees);
                let span = self.span(start);
                Ok((Construction::Comp(Box::new(head), args), SpanTree { span, children }, pending))
            }
        }
    }

    fn check_arity(&self, head: &Construction, given: usize, start: usize) -> Result<(), ParseError> {
        let Construction::Triv(e) = head else { return Ok(()) };
        let expected = match e {
            Entity::Builtin(b) => Some(b.arity()),
            other => other.ty().and_then(|t| t.as_func().map(|(_, args)| args.len())),
        };
        match expected {
            Some(n) if n != given => Err(self.error_at(start, ParseErrorKind::Arity {
                name: e.symbol_name().unwrap_or("?").to_string(),
                expected: n,
                found: given,
            })),
            _ => Ok(()),
        }
    }

    // ---- model values ----

    /// A value of type `ty`; `None` for `undefined`.
    pub(crate) fn value(&mut self, ty: &TilType) -> Result<Option<Entity>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with("undefined") {
            self.pos += "undefined".len();
            return Ok(None);
        }
        let bad = |p: &Self| p.error_at(start, ParseErrorKind::BadValue(ty.to_string()));
        let e = match ty {
            TilType::Base(BaseType::Bool) => match self.word().as_deref() {
                Some("T" | "True") => Entity::Truth(true),
                Some("F" | "False") => Entity::Truth(false),
                _ => return Err(bad(self)),
            },
            TilType::Base(BaseType::Individual) => match self.word() {
                Some(name) => match self.symbols.entity(&name) {
                    Some(e @ Entity::Individual(_)) => e.clone(),
                    Some(_) => return Err(bad(self)),
                    None => Entity::Individual(name.into()),
                },
                None => return Err(bad(self)),
            },
            TilType::Base(BaseType::World) => match self.word() {
                Some(name) => Entity::World(name.into()),
                None => return Err(bad(self)),
            },
            TilType::Base(BaseType::Real) => {
                if self.rest().starts_with("pi") {
                    self.pos += 2;
                    Entity::Number(Number::pi())
                } else if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '-') {
                    Entity::Number(self.number()?)
                } else {
                    return Err(bad(self));
                }
            }
            TilType::Order(_) => {
                self.expect('\'')?;
                let (c, _, pending) = self.triv()?;
                if pending {
                    return Err(self.error_at(start, ParseErrorKind::WtOutsidePair));
                }
                Entity::construction(c)
            }
            TilType::Func(res, args) => {
                self.expect('{')?;
                let mut entries = BTreeMap::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some('}') {
                        self.bump();
                        break;
                    }
                    if self.peek().is_none() {
                        return Err(self.unexpected("`}`"));
                    }
                    let key = self.tuple(args)?;
                    self.skip_ws();
                    let val = if self.rest().starts_with("->") {
                        self.pos += 2;
                        self.value(res)?
                    } else if res.is_bool() {
                        Some(Entity::Truth(true))
                    } else {
                        return Err(self.unexpected("`->`"));
                    };
                    if let Some(v) = val {
                        entries.insert(key, v);
                    }
                    self.skip_ws();
                    if self.peek() == Some(',') {
                        self.bump();
                    }
                }
                let default = res.is_bool().then_some(Entity::Truth(false));
                Entity::Function(Arc::new(FunctionValue::Table { ty: ty.clone(), entries, default }))
            }
        };
        Ok(Some(e))
    }

    fn tuple(&mut self, args: &[TilType]) -> Result<Vec<Entity>, ParseError> {
        let start = self.pos;
        let mut out = Vec::with_capacity(args.len());
        if args.len() == 1 {
            out.push(self.value(&args[0])?.ok_or_else(|| self.error_at(start, ParseErrorKind::BadValue("undefined argument".into())))?);
            return Ok(out);
        }
        self.expect('(')?;
        for a in args {
            out.push(self.value(a)?.ok_or_else(|| self.error_at(start, ParseErrorKind::BadValue("undefined argument".into())))?);
        }
        self.expect(')')?;
        Ok(out)
    }
}

/// Parses a model value of the given type; `None` stands for `undefined`.
pub fn parse_value(text: &str, ty: &TilType, symbols: &SymbolTable) -> Result<Option<Entity>, ParseError> {
    let mut p = Parser::new(text, symbols);
    let v = p.value(ty)?;
    p.expect_end()?;
    Ok(v)
}
