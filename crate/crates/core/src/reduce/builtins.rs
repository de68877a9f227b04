//! Interpretation of the builtin functions.

use std::sync::Arc;

use crate::construction::{Builtin, Construction, Entity, NodePath, Var};
use crate::types::TilType;

use super::eval::{undefined, Evaluator};
use super::subst;
use super::value::{number, truth, EvalResult, FunctionValue, Improper, ImproperReason};

/// Type signature of a builtin as text; polymorphic ones use `a` for the
/// type parameter and `*n` for construction orders.
pub fn signature(b: Builtin) -> String {
    match b.mono_type() {
        Some(t) => t.to_string(),
        None => match b {
            Builtin::Identity => "(o a a)".into(),
            Builtin::Forall | Builtin::Exists => "(o (o a))".into(),
            Builtin::Sub => "(*n *n *n *n)".into(),
            Builtin::Tr => "(*n a)".into(),
            Builtin::Singularizer => "(*n (o *n))".into(),
            _ => unreachable!("monomorphic builtins have a type"),
        },
    }
}

impl Evaluator<'_> {
    pub(crate) fn apply_builtin(&self, b: Builtin, args: &[Entity], path: &NodePath) -> EvalResult {
        if args.len() != b.arity() {
            return Err(undefined(path));
        }
        let truths = || -> Option<Vec<bool>> { args.iter().map(Entity::as_truth).collect() };
        match b {
            Builtin::Not => truths().map(|t| truth(!t[0])).ok_or_else(|| undefined(path)),
            Builtin::And | Builtin::Or | Builtin::Implies | Builtin::Equiv => {
                let t = truths().ok_or_else(|| undefined(path))?;
                let (p, q) = (t[0], t[1]);
                Ok(truth(match b {
                    Builtin::And => p && q,
                    Builtin::Or => p || q,
                    Builtin::Implies => !p || q,
                    _ => p == q,
                }))
            }
            Builtin::Identity => self.entity_eq(&args[0], &args[1], path).map(truth),
            Builtin::Forall | Builtin::Exists => self.quantify(b, &args[0], path),
            Builtin::All => {
                let ty = TilType::func(TilType::o(), vec![TilType::func(TilType::o(), vec![TilType::iota()])]);
                Ok(Entity::Function(Arc::new(FunctionValue::Supersets { ty, base: args[0].clone() })))
            }
            Builtin::Sub => match (&args[0], &args[1], &args[2]) {
                (Entity::Construction(c1), Entity::Construction(c2), Entity::Construction(c3)) => {
                    Ok(Entity::construction(subst::sub(c1, c2, c3)))
                }
                _ => Err(undefined(path)),
            },
            Builtin::Tr => Ok(Entity::construction(subst::tr(&args[0]))),
            Builtin::Singularizer => self.singularize(&args[0], path),
            Builtin::Cot => match &args[0] {
                Entity::Number(n) => n.cot().map(number).ok_or_else(|| undefined(path)),
                _ => Err(undefined(path)),
            },
            Builtin::Add | Builtin::Subtract | Builtin::Multiply | Builtin::Divide => match (&args[0], &args[1]) {
                (Entity::Number(a), Entity::Number(c)) => {
                    let r = match b {
                        Builtin::Add => a.add(c),
                        Builtin::Subtract => a.sub(c),
                        Builtin::Multiply => a.mul(c),
                        _ => a.div(c),
                    };
                    r.map(number).ok_or_else(|| undefined(path))
                }
                _ => Err(undefined(path)),
            },
        }
    }

    /// `∀`/`∃` over the finite model domain of the class's argument type.
    pub fn quantify(&self, q: Builtin, class: &Entity, path: &NodePath) -> EvalResult {
        let ty = class.ty().ok_or_else(|| undefined(path))?;
        let (_, arg_tys) = ty.as_func().ok_or_else(|| undefined(path))?;
        let [alpha] = arg_tys else { return Err(undefined(path)) };
        let domain = self.model.domain(alpha).ok_or_else(|| undefined(path))?;
        let mut members = domain.iter().map(|e| self.holds(class, std::slice::from_ref(e), path));
        Ok(truth(match q {
            Builtin::Forall => members.all(|m| m),
            _ => members.any(|m| m),
        }))
    }

    pub(crate) fn superset_of(&self, base: &Entity, set: &Entity, path: &NodePath) -> EvalResult {
        let domain = self.model.domain(&TilType::iota()).ok_or_else(|| undefined(path))?;
        Ok(truth(domain.iter().all(|e| {
            let one = std::slice::from_ref(e);
            !self.holds(base, one, path) || self.holds(set, one, path)
        })))
    }

    /// The singularizer on classes of constructions. A Closure class is
    /// tested on the constructions it displays plus one construction it
    /// does not mention; membership of the latter means the class cannot be
    /// enumerated and the result is improper.
    pub fn singularize(&self, class: &Entity, path: &NodePath) -> EvalResult {
        let many = || Improper::new(ImproperReason::SingularizerEmptyOrMany, path.clone());
        let Entity::Function(fv) = class else { return Err(undefined(path)) };
        let members: Vec<Entity> = match fv.as_ref() {
            FunctionValue::Table { entries, default, .. } => {
                if matches!(default, Some(Entity::Truth(true))) {
                    return Err(many());
                }
                entries
                    .iter()
                    .filter(|(_, v)| matches!(v, Entity::Truth(true)))
                    .filter_map(|(k, _)| k.first().cloned())
                    .collect()
            }
            FunctionValue::Closure { body, env, .. } => {
                let mut candidates: Vec<Entity> = Vec::new();
                for (_, node) in body.subconstructions() {
                    if let Construction::Triv(e @ Entity::Construction(_)) = node {
                        if !candidates.contains(e) {
                            candidates.push(e.clone());
                        }
                    }
                }
                for (_, e) in env.iter() {
                    if matches!(e, Entity::Construction(_)) && !candidates.contains(e) {
                        candidates.push(e.clone());
                    }
                }
                let sentinel = Entity::construction(Construction::Var(Var::new("%unmentioned", TilType::o())));
                if self.holds(class, std::slice::from_ref(&sentinel), path) {
                    return Err(many());
                }
                candidates.into_iter().filter(|c| self.holds(class, std::slice::from_ref(c), path)).collect()
            }
            _ => return Err(undefined(path)),
        };
        match members.as_slice() {
            [only] => Ok(only.clone()),
            _ => Err(many()),
        }
    }

    /// Identity: numeric across representations, extensional for functions
    /// over finite domains, structural otherwise.
    pub(crate) fn entity_eq(&self, a: &Entity, b: &Entity, path: &NodePath) -> Result<bool, Improper> {
        match (a, b) {
            (Entity::Number(x), Entity::Number(y)) => Ok(x.numeric_eq(y)),
            (Entity::Function(_), _) | (_, Entity::Function(_)) if a != b => {
                let ty = a.ty().ok_or_else(|| undefined(path))?;
                let Some((_, args)) = ty.as_func() else { return Ok(false) };
                let mut tuples: Vec<Vec<Entity>> = vec![Vec::new()];
                for t in args {
                    let Some(dom) = self.model.domain(t) else { return Ok(false) };
                    tuples = tuples
                        .into_iter()
                        .flat_map(|pre| {
                            dom.iter().map(move |d| {
                                let mut next = pre.clone();
                                next.push(d.clone());
                                next
                            })
                        })
                        .collect();
                }
                for tup in &tuples {
                    let fa = self.apply(a, tup, path).ok();
                    let fb = self.apply(b, tup, path).ok();
                    let same = match (&fa, &fb) {
                        (Some(x), Some(y)) => self.entity_eq(x, y, path)?,
                        (None, None) => true,
                        _ => false,
                    };
                    if !same {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(a == b),
        }
    }
}
