//! Ramified type inference with derivation trees.

use std::fmt;

use thiserror::Error;

use crate::construction::{Builtin, Construction, Entity, NodePath};
use crate::syntax::{print, KbFile};
use crate::types::TilType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Variable,
    Trivialization,
    Composition,
    Closure,
    Execution,
    DoubleExecution,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Variable => "variable",
            Rule::Trivialization => "trivialization",
            Rule::Composition => "composition",
            Rule::Closure => "closure",
            Rule::Execution => "execution",
            Rule::DoubleExecution => "double-execution",
        }
    }
}

/// One node of a type derivation. For a Trivialization of a construction
/// the single child is the derivation of the displayed construction, which
/// is not a constituent of the whole.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDerivation {
    pub path: NodePath,
    pub node: Construction,
    pub assigned: TilType,
    pub rule: Rule,
    pub children: Vec<TypeDerivation>,
}

impl TypeDerivation {
    /// The derivation of the node at `path`, if it was derived.
    pub fn find(&self, path: &NodePath) -> Option<&TypeDerivation> {
        if &self.path == path {
            return Some(self);
        }
        self.children.iter().find(|c| path.starts_with(&c.path)).and_then(|c| c.find(path))
    }

    pub fn iter(&self) -> Vec<&TypeDerivation> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.iter());
        }
        out
    }

    /// Indented text, one node per line: `construction : type  (rule)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{} : {}  ({})\n", print(&self.node), self.assigned, self.rule.name()));
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("argument {index} has type {found}, expected {expected}")]
    Mismatch { index: usize, expected: String, found: String },
    #[error("head of type {0} is not a function")]
    NotAFunction(String),
    #[error("function takes {expected} argument(s), given {found}")]
    Arity { expected: usize, found: usize },
    #[error("cannot determine what the double execution constructs")]
    UnresolvableExec2,
    #[error("execution of a non-construction")]
    ExecutesNonConstruction,
    #[error("polymorphic {0} must be applied to fix its type")]
    UninstantiatedBuiltin(&'static str),
    #[error("{0} is not a proposition")]
    NotAProposition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error at {path}: {kind}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: NodePath,
}

fn err(kind: TypeErrorKind, path: &NodePath) -> TypeError {
    TypeError { kind, path: path.clone() }
}

/// Whether a value of type `actual` may stand where `expected` is required.
/// Constructions of order `n` are also constructions of every higher order.
pub fn fits(actual: &TilType, expected: &TilType) -> bool {
    match (actual, expected) {
        (TilType::Order(n), TilType::Order(m)) => n <= m,
        _ => actual == expected,
    }
}

pub fn infer(c: &Construction) -> Result<TypeDerivation, TypeError> {
    infer_at(c, &NodePath::root())
}

pub fn type_of(c: &Construction) -> Result<TilType, TypeError> {
    infer(c).map(|d| d.assigned)
}

fn leaf(c: &Construction, path: &NodePath, ty: TilType, rule: Rule) -> TypeDerivation {
    TypeDerivation { path: path.clone(), node: c.clone(), assigned: ty, rule, children: Vec::new() }
}

fn infer_at(c: &Construction, path: &NodePath) -> Result<TypeDerivation, TypeError> {
    match c {
        Construction::Var(v) => Ok(leaf(c, path, v.ty.clone(), Rule::Variable)),
        Construction::Triv(e) => {
            let ty = match e {
                Entity::Builtin(b) => b.mono_type().ok_or_else(|| err(TypeErrorKind::UninstantiatedBuiltin(b.name()), path))?,
                other => other.ty().expect("non-builtin entities are typed"),
            };
            let mut d = leaf(c, path, ty, Rule::Trivialization);
            if let Entity::Construction(inner) = e {
                d.children.push(infer_at(inner, &path.child(0))?);
            }
            Ok(d)
        }
        Construction::Comp(h, args) => infer_comp(c, h, args, path),
        Construction::Closure(params, body) => {
            let b = infer_at(body, &path.child(0))?;
            let ty = TilType::func(b.assigned.clone(), params.iter().map(|p| p.ty.clone()).collect());
            Ok(TypeDerivation { path: path.clone(), node: c.clone(), assigned: ty, rule: Rule::Closure, children: vec![b] })
        }
        Construction::Exec1(e) => {
            let Entity::Construction(inner) = e else {
                return Err(err(TypeErrorKind::ExecutesNonConstruction, path));
            };
            let d = infer_at(inner, &path.child(0))?;
            Ok(TypeDerivation {
                path: path.clone(),
                node: c.clone(),
                assigned: d.assigned.clone(),
                rule: Rule::Execution,
                children: vec![d],
            })
        }
        Construction::Exec2(x) => {
            let dx = infer_at(x, &path.child(0))?;
            let ty = exec2_result(x, &dx).ok_or_else(|| err(TypeErrorKind::UnresolvableExec2, path))?;
            Ok(TypeDerivation { path: path.clone(), node: c.clone(), assigned: ty, rule: Rule::DoubleExecution, children: vec![dx] })
        }
    }
}

/// What `^2 X` constructs, when it can be read off `X`.
fn exec2_result(x: &Construction, dx: &TypeDerivation) -> Option<TilType> {
    if !matches!(dx.assigned, TilType::Order(_)) {
        return None;
    }
    match x {
        Construction::Triv(Entity::Construction(_)) => dx.children.first().map(|d| d.assigned.clone()),
        Construction::Var(v) => v.constructs.clone(),
        _ => match x.as_builtin_app()? {
            (Builtin::Sub, [_, _, target]) => {
                let dt = dx.children.get(3)?;
                exec2_result(target, dt)
            }
            (Builtin::Singularizer, [Construction::Closure(ps, _)]) => match ps.as_slice() {
                [sel] => sel.constructs.clone(),
                _ => None,
            },
            _ => None,
        },
    }
}

fn infer_comp(c: &Construction, h: &Construction, args: &[Construction], path: &NodePath) -> Result<TypeDerivation, TypeError> {
    let mut arg_ds = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        arg_ds.push(infer_at(a, &path.child(i + 1))?);
    }
    let arg_tys: Vec<TilType> = arg_ds.iter().map(|d| d.assigned.clone()).collect();
    let head_d = match h {
        Construction::Triv(Entity::Builtin(b)) if b.mono_type().is_none() => {
            let ty = instantiate(*b, &arg_tys, path)?;
            leaf(h, &path.child(0), ty, Rule::Trivialization)
        }
        _ => infer_at(h, &path.child(0))?,
    };
    let (res, params) = head_d
        .assigned
        .as_func()
        .ok_or_else(|| err(TypeErrorKind::NotAFunction(head_d.assigned.to_string()), &path.child(0)))?;
    if params.len() != args.len() {
        return Err(err(TypeErrorKind::Arity { expected: params.len(), found: args.len() }, path));
    }
    for (i, (p, a)) in params.iter().zip(&arg_tys).enumerate() {
        if !fits(a, p) {
            return Err(err(
                TypeErrorKind::Mismatch { index: i + 1, expected: p.to_string(), found: a.to_string() },
                &path.child(i + 1),
            ));
        }
    }
    let assigned = res.clone();
    let mut children = vec![head_d];
    children.extend(arg_ds);
    Ok(TypeDerivation { path: path.clone(), node: c.clone(), assigned, rule: Rule::Composition, children })
}

/// The use-site type of a polymorphic builtin, read off its arguments.
fn instantiate(b: Builtin, args: &[TilType], path: &NodePath) -> Result<TilType, TypeError> {
    if args.len() != b.arity() {
        return Err(err(TypeErrorKind::Arity { expected: b.arity(), found: args.len() }, path));
    }
    let mismatch = |index: usize, expected: &str| {
        err(
            TypeErrorKind::Mismatch { index, expected: expected.to_string(), found: args[index - 1].to_string() },
            &path.child(index),
        )
    };
    let o = TilType::o();
    match b {
        Builtin::Identity => Ok(TilType::func(o, vec![args[0].clone(), args[0].clone()])),
        Builtin::Forall | Builtin::Exists => match &args[0] {
            TilType::Func(r, ps) if r.is_bool() && ps.len() == 1 => Ok(TilType::func(o, vec![args[0].clone()])),
            _ => Err(mismatch(1, "(o a)")),
        },
        Builtin::Sub => {
            let mut n = 1;
            for (i, a) in args.iter().enumerate() {
                match a {
                    TilType::Order(k) => n = n.max(*k),
                    _ => return Err(mismatch(i + 1, "*n")),
                }
            }
            let star = TilType::order(n);
            Ok(TilType::func(star.clone(), vec![star.clone(), star.clone(), star]))
        }
        Builtin::Tr => Ok(TilType::func(TilType::order(args[0].type_order()), vec![args[0].clone()])),
        Builtin::Singularizer => match &args[0] {
            TilType::Func(r, ps) if r.is_bool() && ps.len() == 1 && matches!(ps[0], TilType::Order(_)) => {
                Ok(TilType::func(ps[0].clone(), vec![args[0].clone()]))
            }
            _ => Err(mismatch(1, "(o *n)")),
        },
        _ => unreachable!("monomorphic builtins are typed directly"),
    }
}

/// A failure while checking a knowledge base, naming the declaration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{label}: {error}")]
pub struct KbTypeError {
    pub label: String,
    pub error: TypeError,
}

/// Checks that every assertion and query is a proposition.
pub fn check_kb(kb: &KbFile) -> Result<Vec<TypeDerivation>, KbTypeError> {
    let mut out = Vec::new();
    for (label, c) in kb.assertions().chain(kb.queries()) {
        let d = infer(c).map_err(|error| KbTypeError { label: label.to_string(), error })?;
        if d.assigned != TilType::proposition() {
            return Err(KbTypeError {
                label: label.to_string(),
                error: err(TypeErrorKind::NotAProposition(d.assigned.to_string()), &NodePath::root()),
            });
        }
        out.push(d);
    }
    Ok(out)
}

impl fmt::Display for TypeDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Var;
    use crate::symbols::SymbolTable;
    use crate::syntax::parse;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::standard();
        t.declare("Tom", TilType::iota()).unwrap();
        t.declare("Calculate", TilType::intension(TilType::func(TilType::o(), vec![TilType::iota(), TilType::order(1)])))
            .unwrap();
        t
    }

    fn ty(s: &str) -> TilType {
        crate::syntax::parse_type(s).unwrap()
    }

    #[test]
    fn calculate_sentence() {
        let t = table();
        let c = parse("\\w \\t ['Calculate_wt 'Tom '['Cot 'pi]]", &t).unwrap();
        let d = infer(&c).unwrap();
        assert_eq!(d.assigned, ty("((o tau) omega)"));
        let at = |p: &[usize]| d.find(&NodePath(p.to_vec())).unwrap().assigned.clone();
        // \w . \t . [[[Calculate w] t] Tom '[Cot pi]]
        assert_eq!(at(&[0]), ty("(o tau)"));
        assert_eq!(at(&[0, 0]), TilType::o());
        assert_eq!(at(&[0, 0, 0]), ty("(o iota *1)"));
        assert_eq!(at(&[0, 0, 0, 0]), ty("((o iota *1) tau)"));
        assert_eq!(at(&[0, 0, 0, 0, 0]), ty("(((o iota *1) tau) omega)"));
        assert_eq!(at(&[0, 0, 0, 0, 1]), TilType::omega());
        assert_eq!(at(&[0, 0, 0, 1]), TilType::tau());
        assert_eq!(at(&[0, 0, 1]), TilType::iota());
        assert_eq!(at(&[0, 0, 2]), TilType::order(1));
        assert_eq!(at(&[0, 0, 2, 0]), TilType::tau());
        assert_eq!(at(&[0, 0, 2, 0, 0]), ty("(tau tau)"));
        assert_eq!(at(&[0, 0, 2, 0, 1]), TilType::tau());
    }

    #[test]
    fn double_execution_of_a_display() {
        let t = table();
        assert_eq!(type_of(&parse("['Cot 'pi]", &t).unwrap()).unwrap(), TilType::tau());
        assert_eq!(type_of(&parse("^2 '['Cot 'pi]", &t).unwrap()).unwrap(), TilType::tau());
    }

    #[test]
    fn errors() {
        let t = table();
        let c = Construction::app(Builtin::Not, vec![Construction::triv(Entity::individual("Tom"))]);
        assert!(matches!(infer(&c).unwrap_err().kind, TypeErrorKind::Mismatch { index: 1, .. }));
        let v = Var::new("c", TilType::order(1));
        let e = Construction::exec2(Construction::var(&v));
        assert_eq!(infer(&e).unwrap_err().kind, TypeErrorKind::UnresolvableExec2);
        let annotated = Construction::exec2(Construction::var(&Var::over_constructions("c", 1, TilType::o())));
        assert_eq!(type_of(&annotated).unwrap(), TilType::o());
        let _ = t;
    }

    #[test]
    fn polymorphic_instances() {
        let mut t = table();
        t.declare_var(Var::new("y", TilType::tau())).unwrap();
        t.declare_var(Var::new("x", TilType::tau())).unwrap();
        assert_eq!(type_of(&parse("['Sub ['Tr y] 'x '['Cot x]]", &t).unwrap()).unwrap(), TilType::order(1));
        assert_eq!(type_of(&parse("^2 ['Sub ['Tr y] 'x '['Cot x]]", &t).unwrap()).unwrap(), TilType::tau());
        assert_eq!(type_of(&parse("['Exists \\y ['= y 'pi]]", &t).unwrap()).unwrap(), TilType::o());
        assert!(infer(&parse("['= 'Tom 'pi]", &t).unwrap()).is_err());
    }
}
