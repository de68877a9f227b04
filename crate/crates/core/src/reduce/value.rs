//! Values produced by evaluation: function values, valuations and the
//! improper outcome.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::construction::{Construction, Entity, NodePath, Var};
use crate::number::Number;
use crate::syntax::{print_entity, print_with};
use crate::symbols::SymbolTable;
use crate::types::TilType;

/// Assignment of entities to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(BTreeMap<Var, Entity>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Entity> {
        self.0.get(v)
    }

    /// `v(e/x)`: this valuation with `x` reassigned.
    pub fn with(&self, v: &Var, e: Entity) -> Self {
        let mut next = self.clone();
        next.0.insert(v.clone(), e);
        next
    }

    pub fn set(&mut self, v: &Var, e: Entity) {
        self.0.insert(v.clone(), e);
    }

    /// Keeps only the given variables.
    pub fn restricted<'a>(&self, keep: impl IntoIterator<Item = &'a Var>) -> Self {
        let mut out = Valuation::default();
        for v in keep {
            if let Some(e) = self.0.get(v) {
                out.0.insert(v.clone(), e.clone());
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Entity)> {
        self.0.iter()
    }
}

/// A function obtained at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionValue {
    /// Finite table; tuples not listed map to `default` (`None`: undefined).
    Table { ty: TilType, entries: BTreeMap<Vec<Entity>, Entity>, default: Option<Entity> },
    /// The function constructed by a Closure, applied on demand.
    Closure { ty: TilType, params: Vec<Var>, body: Construction, env: Valuation },
    /// A named intension applied to a world: a function of time.
    Chronology { ty: TilType, name: Arc<str>, world: Arc<str> },
    /// `[All S]`: the class of supersets of `S`.
    Supersets { ty: TilType, base: Entity },
}

impl FunctionValue {
    pub fn ty(&self) -> &TilType {
        match self {
            FunctionValue::Table { ty, .. }
            | FunctionValue::Closure { ty, .. }
            | FunctionValue::Chronology { ty, .. }
            | FunctionValue::Supersets { ty, .. } => ty,
        }
    }
}

impl fmt::Display for FunctionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionValue::Table { entries, default, .. } => {
                f.write_str("{")?;
                for (i, (args, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    let a: Vec<String> = args.iter().map(print_entity).collect();
                    write!(f, "({}) -> {}", a.join(" "), print_entity(v))?;
                }
                match default {
                    Some(d) => write!(f, "; else {}}}", print_entity(d)),
                    None => f.write_str("}"),
                }
            }
            FunctionValue::Closure { params, body, env, .. } => {
                let c = Construction::Closure(params.clone(), Box::new(body.clone()));
                write!(f, "<closure {}", print_with(&c, &SymbolTable::standard()))?;
                for (v, e) in env.iter() {
                    write!(f, " {}={}", v.name, print_entity(e))?;
                }
                f.write_str(">")
            }
            FunctionValue::Chronology { name, world, .. } => write!(f, "<{name} at {world}>"),
            FunctionValue::Supersets { base, .. } => write!(f, "<supersets of {}>", print_entity(base)),
        }
    }
}

/// Why a construction failed to construct anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImproperReason {
    UndefinedApplication,
    NonConstructionExecuted,
    SingularizerEmptyOrMany,
    Propagated,
    /// A free variable the valuation does not assign.
    UnassignedVariable,
}

impl ImproperReason {
    pub fn label(self) -> &'static str {
        match self {
            ImproperReason::UndefinedApplication => "undefined-application",
            ImproperReason::NonConstructionExecuted => "non-construction-executed",
            ImproperReason::SingularizerEmptyOrMany => "singularizer-empty-or-many",
            ImproperReason::Propagated => "propagated",
            ImproperReason::UnassignedVariable => "unassigned-variable",
        }
    }
}

/// The improper outcome, located at the node where it arose. `cause` is
/// set when the failure happened inside a function applied at `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Improper {
    pub reason: ImproperReason,
    pub path: NodePath,
    pub cause: Option<Box<Improper>>,
}

impl Improper {
    pub fn new(reason: ImproperReason, path: NodePath) -> Self {
        Improper { reason, path, cause: None }
    }

    /// The reason at the bottom of the propagation chain.
    pub fn root_reason(&self) -> ImproperReason {
        match &self.cause {
            Some(c) => c.root_reason(),
            None => self.reason,
        }
    }
}

impl fmt::Display for Improper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IMPROPER: {}", self.root_reason().label())
    }
}

pub type EvalResult = Result<Entity, Improper>;

pub(crate) fn truth(b: bool) -> Entity {
    Entity::Truth(b)
}

pub(crate) fn number(n: Number) -> Entity {
    Entity::Number(n)
}
