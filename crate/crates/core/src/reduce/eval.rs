//! Evaluation of constructions under a valuation and a finite model.
//! Improperness is a value: nothing here returns an error.

use crate::construction::{Construction, Entity, NodePath};
use crate::typing;

use super::model::Model;
use super::value::{EvalResult, FunctionValue, Improper, ImproperReason, Valuation};

pub struct Evaluator<'m> {
    pub model: &'m Model,
}

pub(crate) fn undefined(path: &NodePath) -> Improper {
    Improper::new(ImproperReason::UndefinedApplication, path.clone())
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator { model }
    }

    pub fn evaluate(&self, c: &Construction, v: &Valuation) -> EvalResult {
        self.eval(c, v, &NodePath::root())
    }

    pub(crate) fn eval(&self, c: &Construction, v: &Valuation, path: &NodePath) -> EvalResult {
        match c {
            Construction::Var(x) => v
                .get(x)
                .cloned()
                .ok_or_else(|| Improper::new(ImproperReason::UnassignedVariable, path.clone())),
            Construction::Triv(e) => Ok(e.clone()),
            Construction::Comp(h, args) => {
                let f = self.eval(h, v, &path.child(0))?;
                let mut vals = Vec::with_capacity(args.len());
                for (i, a) in args.iter().enumerate() {
                    vals.push(self.eval(a, v, &path.child(i + 1))?);
                }
                self.apply(&f, &vals, path)
            }
            Construction::Closure(params, body) => {
                let ty = typing::type_of(c).unwrap_or_else(|_| {
                    let res = typing::type_of(body).unwrap_or_else(|_| crate::types::TilType::o());
                    crate::types::TilType::func(res, params.iter().map(|p| p.ty.clone()).collect())
                });
                Ok(Entity::Function(std::sync::Arc::new(FunctionValue::Closure {
                    ty,
                    params: params.clone(),
                    body: (**body).clone(),
                    env: v.clone(),
                })))
            }
            Construction::Exec1(e) => match e {
                Entity::Construction(inner) => self.eval(inner, v, &path.child(0)),
                _ => Err(Improper::new(ImproperReason::NonConstructionExecuted, path.clone())),
            },
            Construction::Exec2(x) => {
                let produced = self.eval(x, v, &path.child(0))?;
                let Entity::Construction(inner) = produced else {
                    return Err(Improper::new(ImproperReason::NonConstructionExecuted, path.clone()));
                };
                if matches!(x.as_ref(), Construction::Triv(_)) {
                    return self.eval(&inner, v, &path.child(0).child(0));
                }
                self.eval(&inner, v, &NodePath::root()).map_err(|cause| Improper {
                    reason: ImproperReason::Propagated,
                    path: path.clone(),
                    cause: Some(Box::new(cause)),
                })
            }
        }
    }

    /// Applies a function-like entity to arguments.
    pub fn apply(&self, f: &Entity, args: &[Entity], path: &NodePath) -> EvalResult {
        match f {
            Entity::Builtin(b) => self.apply_builtin(*b, args, path),
            Entity::Named { name, ty } => {
                if ty.intension_of().is_some() {
                    if let [Entity::World(w)] = args {
                        let (chron, _) = ty.as_func().expect("intensions are functional");
                        return Ok(Entity::Function(std::sync::Arc::new(FunctionValue::Chronology {
                            ty: chron.clone(),
                            name: name.clone(),
                            world: w.clone(),
                        })));
                    }
                    return Err(undefined(path));
                }
                match self.model.extension(name) {
                    Some(val) => self.apply(val, args, path),
                    None => Err(undefined(path)),
                }
            }
            Entity::Function(fv) => match fv.as_ref() {
                FunctionValue::Table { entries, default, .. } => {
                    if let Some(v) = entries.get(args) {
                        return Ok(v.clone());
                    }
                    let numeric_key = entries.iter().find(|(k, _)| {
                        k.len() == args.len() && k.iter().zip(args).all(|(a, b)| self.entity_eq(a, b, path).unwrap_or(false))
                    });
                    match numeric_key {
                        Some((_, v)) => Ok(v.clone()),
                        None => default.clone().ok_or_else(|| undefined(path)),
                    }
                }
                FunctionValue::Closure { params, body, env, .. } => {
                    if params.len() != args.len() {
                        return Err(undefined(path));
                    }
                    let mut v = env.clone();
                    for (p, a) in params.iter().zip(args) {
                        v.set(p, a.clone());
                    }
                    self.eval(body, &v, &NodePath::root()).map_err(|cause| Improper {
                        reason: ImproperReason::Propagated,
                        path: path.clone(),
                        cause: Some(Box::new(cause)),
                    })
                }
                FunctionValue::Chronology { name, world, .. } => match args {
                    [Entity::Number(t)] => self.model.intension_at(name, world, t).cloned().ok_or_else(|| undefined(path)),
                    _ => Err(undefined(path)),
                },
                FunctionValue::Supersets { base, .. } => match args {
                    [set] => self.superset_of(base, set, path),
                    _ => Err(undefined(path)),
                },
            },
            _ => Err(undefined(path)),
        }
    }

    /// Whether `f` maps the arguments to `T`; undefined counts as not.
    pub(crate) fn holds(&self, f: &Entity, args: &[Entity], path: &NodePath) -> bool {
        matches!(self.apply(f, args, path), Ok(Entity::Truth(true)))
    }

    /// Evaluates a proposition at a world and time.
    pub fn at_point(&self, proposition: &Construction, v: &Valuation, world: &str, time: &crate::number::Number) -> EvalResult {
        let p = self.evaluate(proposition, v)?;
        let chron = self.apply(&p, &[Entity::World(world.into())], &NodePath::root())?;
        self.apply(&chron, &[Entity::Number(time.clone())], &NodePath::root())
    }
}
