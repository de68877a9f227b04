use crate::construction::{Construction, Entity, Var};
use crate::number::Number;
use crate::reduce::value::FunctionValue;
use crate::symbols::SymbolTable;
use crate::types::TilType;

/// Syntactic position of a node, deciding where brackets are needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    Expr,
    Head,
    Exec,
    WtBase,
    Payload,
}

struct Printer<'a> {
    symbols: &'a SymbolTable,
    scope: Vec<Var>,
    pairs: Vec<(Var, Var)>,
    out: String,
}

/// Canonical text; parsing it back against `symbols` gives the same
/// construction.
pub fn print_with(c: &Construction, symbols: &SymbolTable) -> String {
    let mut p = Printer { symbols, scope: Vec::new(), pairs: Vec::new(), out: String::new() };
    p.node(c, Level::Expr);
    p.out
}

impl Printer<'_> {
    fn bracketed(&mut self, c: &Construction) {
        self.out.push('[');
        self.node(c, Level::Expr);
        self.out.push(']');
    }

    fn wt_base<'c>(&self, c: &'c Construction) -> Option<&'c Construction> {
        let (w, t) = self.pairs.last()?;
        let Construction::Comp(outer, targs) = c else { return None };
        let [Construction::Var(tv)] = &targs[..] else { return None };
        let Construction::Comp(base, wargs) = outer.as_ref() else { return None };
        let [Construction::Var(wv)] = &wargs[..] else { return None };
        (wv == w && tv == t && self.resolves(w) && self.resolves(t)).then_some(base.as_ref())
    }

    fn resolves(&self, v: &Var) -> bool {
        let found = self.scope.iter().rev().find(|s| s.name == v.name).or_else(|| self.symbols.var(&v.name));
        found == Some(v)
    }

    fn node(&mut self, c: &Construction, level: Level) {
        match c {
            Construction::Closure(..) => {
                if matches!(level, Level::Expr) {
                    self.closure(c);
                } else {
                    self.bracketed(c);
                }
            }
            Construction::Exec1(e) => {
                if matches!(level, Level::WtBase | Level::Payload) {
                    self.bracketed(c);
                } else {
                    self.out.push_str("^1 '");
                    self.payload(e);
                }
            }
            Construction::Exec2(x) => {
                if matches!(level, Level::WtBase | Level::Payload) {
                    self.bracketed(c);
                } else {
                    self.out.push_str("^2 ");
                    self.node(x, Level::Exec);
                }
            }
            Construction::Comp(head, args) => {
                if let Some(base) = self.wt_base(c) {
                    if matches!(level, Level::WtBase | Level::Payload) {
                        self.bracketed(c);
                    } else {
                        self.node(base, Level::WtBase);
                        self.out.push_str("_wt");
                    }
                    return;
                }
                self.out.push('[');
                self.node(head, Level::Head);
                for a in args {
                    self.out.push(' ');
                    self.node(a, Level::Expr);
                }
                self.out.push(']');
            }
            Construction::Var(v) => {
                let entity_clash = level == Level::Payload && self.symbols.entity(&v.name).is_some();
                self.out.push_str(&v.name);
                if entity_clash || !self.resolves(v) {
                    self.annotation(v);
                }
            }
            Construction::Triv(e) => {
                self.out.push('\'');
                self.payload(e);
            }
        }
    }

    fn annotation(&mut self, v: &Var) {
        self.out.push(':');
        self.out.push_str(&v.ty.to_string());
        if let Some(k) = &v.constructs {
            self.out.push_str("->");
            self.out.push_str(&k.to_string());
        }
    }

    fn payload(&mut self, e: &Entity) {
        match e {
            Entity::Construction(c) => self.node(c, Level::Payload),
            other => self.out.push_str(&print_entity(other)),
        }
    }

    fn closure(&mut self, c: &Construction) {
        let mut groups: Vec<&[Var]> = Vec::new();
        let mut cur = c;
        while let Construction::Closure(ps, body) = cur {
            groups.push(ps);
            cur = body;
        }
        for (i, g) in groups.iter().enumerate() {
            if i > 0 {
                self.out.push(' ');
            }
            self.out.push('\\');
            for (j, p) in g.iter().enumerate() {
                if j > 0 {
                    self.out.push(',');
                }
                self.out.push_str(&p.name);
                if self.symbols.var(&p.name) != Some(p) {
                    self.annotation(p);
                }
            }
        }
        self.out.push(' ');
        let scope_len = self.scope.len();
        for g in &groups {
            self.scope.extend(g.iter().cloned());
        }
        let pair = groups.windows(2).rev().find_map(|w| match (w[0], w[1]) {
            ([a], [b]) if a.ty == TilType::omega() && b.ty == TilType::tau() => Some((a.clone(), b.clone())),
            _ => None,
        });
        let pushed = pair.is_some();
        if let Some(p) = pair {
            self.pairs.push(p);
        }
        self.node(cur, Level::Exec);
        if pushed {
            self.pairs.pop();
        }
        self.scope.truncate(scope_len);
    }
}

/// Text of a non-construction entity as it appears after `'`.
pub fn print_entity(e: &Entity) -> String {
    match e {
        Entity::Truth(true) => "True".into(),
        Entity::Truth(false) => "False".into(),
        Entity::Individual(n) | Entity::World(n) => n.to_string(),
        Entity::Named { name, .. } | Entity::Skolem { name, .. } => name.to_string(),
        Entity::Builtin(b) => b.name().into(),
        Entity::Number(n) => n.to_string(),
        Entity::Construction(c) => crate::syntax::print(c),
        Entity::Function(f) => f.to_string(),
    }
}

/// A model value in knowledge-base syntax; `None` prints as `undefined`.
pub fn print_value(v: Option<&Entity>, symbols: &SymbolTable) -> String {
    let Some(e) = v else { return "undefined".into() };
    match e {
        Entity::Truth(true) => "T".into(),
        Entity::Truth(false) => "F".into(),
        Entity::Number(n) => number_literal(n),
        Entity::Construction(c) => {
            let mut p = Printer { symbols, scope: Vec::new(), pairs: Vec::new(), out: "'".into() };
            p.node(c, Level::Payload);
            p.out
        }
        Entity::Function(f) => match f.as_ref() {
            FunctionValue::Table { ty, entries, default } => {
                let res_bool = ty.as_func().is_some_and(|(r, _)| r.is_bool());
                let is_set = res_bool && *default == Some(Entity::Truth(false));
                let mut parts = Vec::new();
                for (args, val) in entries {
                    if is_set && *val == Entity::Truth(false) {
                        continue;
                    }
                    let key = if args.len() == 1 {
                        print_value(Some(&args[0]), symbols)
                    } else {
                        let inner: Vec<String> = args.iter().map(|a| print_value(Some(a), symbols)).collect();
                        format!("({})", inner.join(" "))
                    };
                    if is_set {
                        parts.push(key);
                    } else {
                        parts.push(format!("{key} -> {}", print_value(Some(val), symbols)));
                    }
                }
                format!("{{{}}}", parts.join(" "))
            }
            FunctionValue::Closure { params, body, env, .. } => {
                let c = Construction::Closure(params.clone(), Box::new(body.clone()));
                let mut out = format!("<closure {}", print_with(&c, symbols));
                for (v, e) in env.iter() {
                    out.push_str(&format!(" {}={}", v.name, print_value(Some(e), symbols)));
                }
                out.push('>');
                out
            }
            other => other.to_string(),
        },
        other => print_entity(other),
    }
}

fn number_literal(n: &Number) -> String {
    n.to_string()
}
