//! The construction AST together with the entities that Trivialization and
//! Single Execution can carry.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::number::Number;
use crate::reduce::value::FunctionValue;
use crate::types::TilType;

/// Logical and mathematical objects with a fixed interpretation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    And,
    Or,
    Not,
    Implies,
    Equiv,
    /// `=`, identity at any type.
    Identity,
    Forall,
    Exists,
    /// Restricted universal quantifier `All/((o(o iota))(o iota))`.
    All,
    Sub,
    Tr,
    /// The singularizer `I*` on classes of constructions.
    Singularizer,
    Cot,
    Add,
    Subtract,
    Multiply,
    Divide,
}

impl Builtin {
    pub const ALL: [Builtin; 17] = [
        Builtin::And,
        Builtin::Or,
        Builtin::Not,
        Builtin::Implies,
        Builtin::Equiv,
        Builtin::Identity,
        Builtin::Forall,
        Builtin::Exists,
        Builtin::All,
        Builtin::Sub,
        Builtin::Tr,
        Builtin::Singularizer,
        Builtin::Cot,
        Builtin::Add,
        Builtin::Subtract,
        Builtin::Multiply,
        Builtin::Divide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::And => "And",
            Builtin::Or => "Or",
            Builtin::Not => "Not",
            Builtin::Implies => "Implies",
            Builtin::Equiv => "Equiv",
            Builtin::Identity => "=",
            Builtin::Forall => "Forall",
            Builtin::Exists => "Exists",
            Builtin::All => "All",
            Builtin::Sub => "Sub",
            Builtin::Tr => "Tr",
            Builtin::Singularizer => "Istar",
            Builtin::Cot => "Cot",
            Builtin::Add => "+",
            Builtin::Subtract => "-",
            Builtin::Multiply => "*",
            Builtin::Divide => "/",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Not
            | Builtin::Forall
            | Builtin::Exists
            | Builtin::All
            | Builtin::Tr
            | Builtin::Singularizer
            | Builtin::Cot => 1,
            Builtin::Sub => 3,
            _ => 2,
        }
    }

    /// The type of a monomorphic builtin; `None` for the polymorphic ones
    /// (`=`, quantifiers, `Sub`, `Tr`, `Istar`), which are instantiated at
    /// each use site.
    pub fn mono_type(self) -> Option<TilType> {
        let o = TilType::o;
        let tau = TilType::tau;
        match self {
            Builtin::And | Builtin::Or | Builtin::Implies | Builtin::Equiv => {
                Some(TilType::func(o(), vec![o(), o()]))
            }
            Builtin::Not => Some(TilType::func(o(), vec![o()])),
            Builtin::All => {
                let class = TilType::func(o(), vec![TilType::iota()]);
                Some(TilType::func(TilType::func(o(), vec![class.clone()]), vec![class]))
            }
            Builtin::Cot => Some(TilType::func(tau(), vec![tau()])),
            Builtin::Add | Builtin::Subtract | Builtin::Multiply | Builtin::Divide => {
                Some(TilType::func(tau(), vec![tau(), tau()]))
            }
            _ => None,
        }
    }

    pub fn is_connective(self) -> bool {
        matches!(
            self,
            Builtin::And | Builtin::Or | Builtin::Not | Builtin::Implies | Builtin::Equiv
        )
    }
}

/// Anything that can be Trivialized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entity {
    Truth(bool),
    Individual(Arc<str>),
    Number(Number),
    World(Arc<str>),
    Builtin(Builtin),
    /// A declared non-individual object (intensions, extensional functions)
    /// interpreted by a model.
    Named { name: Arc<str>, ty: TilType },
    /// Skolem constants and functions introduced by clausal transformation.
    Skolem { name: Arc<str>, ty: TilType },
    Construction(Arc<Construction>),
    /// Functions produced at evaluation time.
    Function(Arc<FunctionValue>),
}

impl Entity {
    pub fn individual(name: &str) -> Self {
        Entity::Individual(name.into())
    }

    pub fn named(name: &str, ty: TilType) -> Self {
        Entity::Named { name: name.into(), ty }
    }

    pub fn construction(c: Construction) -> Self {
        Entity::Construction(Arc::new(c))
    }

    /// The type of the entity. Polymorphic builtins have none of their own.
    pub fn ty(&self) -> Option<TilType> {
        match self {
            Entity::Truth(_) => Some(TilType::o()),
            Entity::Individual(_) => Some(TilType::iota()),
            Entity::Number(_) => Some(TilType::tau()),
            Entity::World(_) => Some(TilType::omega()),
            Entity::Builtin(b) => b.mono_type(),
            Entity::Named { ty, .. } | Entity::Skolem { ty, .. } => Some(ty.clone()),
            Entity::Construction(c) => Some(TilType::order(c.order())),
            Entity::Function(f) => Some(f.ty().clone()),
        }
    }

    pub fn as_construction(&self) -> Option<&Construction> {
        match self {
            Entity::Construction(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_truth(&self) -> Option<bool> {
        match self {
            Entity::Truth(b) => Some(*b),
            _ => None,
        }
    }

    /// Symbol name for entities that are referred to by name.
    pub fn symbol_name(&self) -> Option<&str> {
        match self {
            Entity::Individual(n) | Entity::World(n) => Some(n),
            Entity::Named { name, .. } | Entity::Skolem { name, .. } => Some(name),
            Entity::Builtin(b) => Some(b.name()),
            Entity::Truth(true) => Some("True"),
            Entity::Truth(false) => Some("False"),
            _ => None,
        }
    }
}

/// A typed variable. Name and type together identify it.
///
/// `constructs` records what a construction-ranging variable is typed to
/// v-construct when double-executed (`c/*n+1 ->v *n`, `2c ->v o`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Arc<str>,
    pub ty: TilType,
    pub constructs: Option<TilType>,
}

impl Var {
    pub fn new(name: &str, ty: TilType) -> Self {
        Var { name: name.into(), ty, constructs: None }
    }

    /// A variable over `*n` that double-executes to `constructs`.
    pub fn over_constructions(name: &str, order: u32, constructs: TilType) -> Self {
        Var { name: name.into(), ty: TilType::order(order), constructs: Some(constructs) }
    }

    pub fn renamed(&self, name: &str) -> Self {
        Var { name: name.into(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    Var(Var),
    Triv(Entity),
    Comp(Box<Construction>, Vec<Construction>),
    Closure(Vec<Var>, Box<Construction>),
    Exec1(Entity),
    Exec2(Box<Construction>),
}

/// Position of a node: child indices from the root.
///
/// Composition: 0 is the head, 1.. the arguments. Closure: 0 is the body.
/// Trivialization and Single Execution of a construction: 0 is the payload.
/// Double Execution: 0 is the operand.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn starts_with(&self, prefix: &NodePath) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl Construction {
    pub fn var(v: &Var) -> Self {
        Construction::Var(v.clone())
    }

    pub fn triv(e: Entity) -> Self {
        Construction::Triv(e)
    }

    /// `'C` for a construction `C`.
    pub fn display(c: Construction) -> Self {
        Construction::Triv(Entity::construction(c))
    }

    pub fn builtin(b: Builtin) -> Self {
        Construction::Triv(Entity::Builtin(b))
    }

    pub fn comp(head: Construction, args: Vec<Construction>) -> Self {
        assert!(!args.is_empty(), "composition needs at least one argument");
        Construction::Comp(Box::new(head), args)
    }

    /// Panics when the parameters are empty or not pairwise distinct.
    pub fn closure(params: Vec<Var>, body: Construction) -> Self {
        assert!(!params.is_empty(), "closure needs at least one parameter");
        let distinct: BTreeSet<&Var> = params.iter().collect();
        assert_eq!(distinct.len(), params.len(), "closure parameters must be pairwise distinct");
        Construction::Closure(params, Box::new(body))
    }

    pub fn exec2(c: Construction) -> Self {
        Construction::Exec2(Box::new(c))
    }

    /// `[[C w] t]`.
    pub fn extensionalize(c: Construction, w: &Var, t: &Var) -> Self {
        Construction::comp(Construction::comp(c, vec![Construction::var(w)]), vec![Construction::var(t)])
    }

    /// `\w \t body` as two nested single-parameter closures.
    pub fn intension_closure(w: &Var, t: &Var, body: Construction) -> Self {
        Construction::closure(vec![w.clone()], Construction::closure(vec![t.clone()], body))
    }

    pub fn app(b: Builtin, args: Vec<Construction>) -> Self {
        Construction::comp(Construction::builtin(b), args)
    }

    /// Least `n` such that this is a construction of order `n`.
    pub fn order(&self) -> u32 {
        match self {
            Construction::Var(v) => v.ty.type_order(),
            Construction::Triv(e) | Construction::Exec1(e) => entity_order(e),
            Construction::Comp(h, args) => args.iter().map(Construction::order).fold(h.order(), u32::max),
            Construction::Closure(params, body) => {
                params.iter().map(|p| p.ty.type_order()).fold(body.order(), u32::max)
            }
            Construction::Exec2(x) => x.order() + 1,
        }
    }

    /// Direct children with their child indices.
    pub fn children(&self) -> Vec<&Construction> {
        match self {
            Construction::Var(_) => vec![],
            Construction::Triv(e) | Construction::Exec1(e) => match e {
                Entity::Construction(c) => vec![c.as_ref()],
                _ => vec![],
            },
            Construction::Comp(h, args) => std::iter::once(h.as_ref()).chain(args.iter()).collect(),
            Construction::Closure(_, body) => vec![body.as_ref()],
            Construction::Exec2(x) => vec![x.as_ref()],
        }
    }

    /// Preorder traversal including `self` and displayed payloads.
    pub fn subconstructions(&self) -> Vec<(NodePath, &Construction)> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Construction, path: NodePath, out: &mut Vec<(NodePath, &'a Construction)>) {
            out.push((path.clone(), c));
            for (i, ch) in c.children().into_iter().enumerate() {
                walk(ch, path.child(i), out);
            }
        }
        walk(self, NodePath::root(), &mut out);
        out
    }

    pub fn node_at(&self, path: &NodePath) -> Option<&Construction> {
        let mut cur = self;
        for &i in &path.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Variables occurring executed and not λ-bound. Variables inside
    /// Trivialized payloads are Trivialization-bound and do not count.
    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn occurs_free(&self, v: &Var) -> bool {
        self.free_variables().contains(v)
    }

    /// Canonical representative of the α-equivalence class: binders renamed
    /// to `%0, %1, ...` in binding order. Displayed payloads are normalized
    /// on their own, since a λ above a Trivialization does not bind into it.
    pub fn alpha_normalized(&self) -> Construction {
        normalize(self, &mut Vec::new(), &mut 0)
    }

    pub fn alpha_equivalent(&self, other: &Construction) -> bool {
        self.alpha_normalized() == other.alpha_normalized()
    }

    /// All variables bound by some closure, at any depth.
    pub fn bound_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for (_, c) in self.subconstructions() {
            if let Construction::Closure(ps, _) = c {
                out.extend(ps.iter().cloned());
            }
        }
        out
    }

    /// Every variable name appearing anywhere, bound, free or displayed.
    pub fn variable_names(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        for (_, c) in self.subconstructions() {
            match c {
                Construction::Var(v) => {
                    out.insert(v.name.clone());
                }
                Construction::Closure(ps, _) => out.extend(ps.iter().map(|p| p.name.clone())),
                _ => {}
            }
        }
        out
    }

    pub fn as_builtin_app(&self) -> Option<(Builtin, &[Construction])> {
        match self {
            Construction::Comp(h, args) => match h.as_ref() {
                Construction::Triv(Entity::Builtin(b)) => Some((*b, args)),
                _ => None,
            },
            _ => None,
        }
    }
}

fn entity_order(e: &Entity) -> u32 {
    match e {
        Entity::Construction(c) => c.order() + 1,
        other => other.ty().map(|t| t.type_order()).unwrap_or(1),
    }
}

fn collect_free(c: &Construction, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match c {
        Construction::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        Construction::Triv(_) => {}
        Construction::Exec1(e) => {
            if let Entity::Construction(inner) = e {
                collect_free(inner, bound, out);
            }
        }
        Construction::Comp(h, args) => {
            collect_free(h, bound, out);
            for a in args {
                collect_free(a, bound, out);
            }
        }
        Construction::Closure(ps, body) => {
            let n = bound.len();
            bound.extend(ps.iter().cloned());
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        Construction::Exec2(x) => collect_free(x, bound, out),
    }
}

fn normalize(c: &Construction, env: &mut Vec<(Var, Var)>, counter: &mut usize) -> Construction {
    match c {
        Construction::Var(v) => match env.iter().rev().find(|(orig, _)| orig == v) {
            Some((_, renamed)) => Construction::Var(renamed.clone()),
            None => c.clone(),
        },
        Construction::Triv(Entity::Construction(inner)) => {
            Construction::display(normalize(inner, &mut Vec::new(), &mut 0))
        }
        Construction::Triv(_) => c.clone(),
        Construction::Exec1(Entity::Construction(inner)) => {
            Construction::Exec1(Entity::construction(normalize(inner, env, counter)))
        }
        Construction::Exec1(_) => c.clone(),
        Construction::Comp(h, args) => Construction::Comp(
            Box::new(normalize(h, env, counter)),
            args.iter().map(|a| normalize(a, env, counter)).collect(),
        ),
        Construction::Closure(ps, body) => {
            let n = env.len();
            let mut renamed = Vec::with_capacity(ps.len());
            for p in ps {
                let fresh = p.renamed(&format!("%{}", *counter));
                *counter += 1;
                env.push((p.clone(), fresh.clone()));
                renamed.push(fresh);
            }
            let body = normalize(body, env, counter);
            env.truncate(n);
            Construction::Closure(renamed, Box::new(body))
        }
        Construction::Exec2(x) => Construction::exec2(normalize(x, env, counter)),
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cot_pi() -> Construction {
        Construction::app(Builtin::Cot, vec![Construction::triv(Entity::Number(Number::pi()))])
    }

    #[test]
    fn orders_of_trivializations() {
        assert_eq!(Construction::triv(Entity::individual("Tom")).order(), 1);
        assert_eq!(Construction::display(cot_pi()).order(), 2);
        assert_eq!(Construction::var(&Var::new("x", TilType::iota())).order(), 1);
    }

    #[test]
    fn subconstructions_descend_into_displays() {
        let displayed = Construction::display(cot_pi());
        let subs = displayed.subconstructions();
        assert_eq!(subs.len(), 4);
        assert_eq!(subs[1].1, &cot_pi());
        for (path, node) in &subs {
            assert_eq!(displayed.node_at(path), Some(*node));
        }
        let x = Construction::var(&Var::new("x", TilType::iota()));
        assert_eq!(x.subconstructions().len(), 1);
    }

    #[test]
    fn free_variables_exclude_displayed_and_bound() {
        let x = Var::new("x", TilType::tau());
        let cot_x = Construction::app(Builtin::Cot, vec![Construction::var(&x)]);
        assert_eq!(cot_x.free_variables(), BTreeSet::from([x.clone()]));
        assert!(Construction::display(cot_x.clone()).free_variables().is_empty());
        assert!(Construction::closure(vec![x], cot_x).free_variables().is_empty());
    }

    #[test]
    fn alpha_equivalence() {
        let x = Var::new("x", TilType::tau());
        let y = Var::new("y", TilType::tau());
        let lam = |v: &Var| Construction::closure(vec![v.clone()], Construction::app(Builtin::Cot, vec![Construction::var(v)]));
        assert!(lam(&x).alpha_equivalent(&lam(&y)));
        let other = Construction::closure(vec![x.clone()], cot_pi());
        assert!(!lam(&x).alpha_equivalent(&other));
        // a λ does not bind into a displayed payload
        let disp = |v: &Var| {
            Construction::closure(vec![v.clone()], Construction::display(Construction::var(&x)))
        };
        assert!(disp(&x).alpha_equivalent(&disp(&y)));
        let shown = |v: &Var| Construction::closure(vec![v.clone()], Construction::display(Construction::var(v)));
        assert!(!shown(&x).alpha_equivalent(&shown(&y)));
    }

    #[test]
    #[should_panic]
    fn duplicate_closure_params_rejected() {
        let x = Var::new("x", TilType::tau());
        Construction::closure(vec![x.clone(), x.clone()], Construction::var(&x));
    }
}
