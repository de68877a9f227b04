//! Typed first-order unification.

use std::fmt;

use crate::clausal::{subst_term, Atom, Literal, Term};
use crate::construction::{Entity, Var};
use crate::typing::fits;

/// An idempotent substitution, kept in binding order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(pub Vec<(Var, Term)>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.iter().find(|(x, _)| x == v).map(|(_, t)| t)
    }

    pub fn apply(&self, t: &Term) -> Term {
        subst_term(t, &self.0)
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_terms(&mut |t| self.apply(t))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { positive: l.positive, atom: self.apply_atom(&l.atom) }
    }

    /// Adds `v ↦ t`, keeping the substitution idempotent.
    fn bind(&mut self, v: Var, t: Term) {
        let single = [(v.clone(), t.clone())];
        for (_, r) in self.0.iter_mut() {
            *r = subst_term(r, &single);
        }
        self.0.push((v, t));
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Only the bindings of the given variables.
    pub fn restricted(&self, keep: impl Fn(&Var) -> bool) -> Substitution {
        Substitution(self.0.iter().filter(|(v, _)| keep(v)).cloned().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, t)| format!("{t}/{}", v.name)).collect();
        f.write_str(&parts.join(", "))
    }
}

fn occurs(v: &Var, t: &Term) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::Const(_) => false,
        Term::App { args, .. } => args.iter().any(|a| occurs(v, a)),
    }
}

fn consts_match(a: &Entity, b: &Entity) -> bool {
    match (a, b) {
        (Entity::Construction(x), Entity::Construction(y)) => x.alpha_equivalent(y),
        (Entity::Number(x), Entity::Number(y)) => x.numeric_eq(y),
        _ => a == b,
    }
}

fn unify_into(a: &Term, b: &Term, s: &mut Substitution) -> bool {
    let (a, b) = (s.apply(a), s.apply(b));
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if occurs(x, t) {
                return false;
            }
            match t.ty() {
                Some(ty) if fits(&ty, &x.ty) || fits(&x.ty, &ty) => {
                    s.bind(x.clone(), t.clone());
                    true
                }
                _ => false,
            }
        }
        (Term::Const(x), Term::Const(y)) => consts_match(x, y),
        (Term::App { func: f, wt: fw, args: fa, .. }, Term::App { func: g, wt: gw, args: ga, .. }) => {
            f == g && fw == gw && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| unify_into(x, y, s))
        }
        _ => false,
    }
}

pub fn unify_terms(a: &Term, b: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    unify_into(a, b, &mut s).then_some(s)
}

/// Most general unifier of two atoms over the same predicate.
pub fn unify(a: &Atom, b: &Atom) -> Option<Substitution> {
    unify_with(a, b, Substitution::new())
}

pub(crate) fn unify_with(a: &Atom, b: &Atom, mut s: Substitution) -> Option<Substitution> {
    if !a.same_predicate(b) {
        return None;
    }
    for (x, y) in a.args().zip(b.args()) {
        if !unify_into(x, y, &mut s) {
            return None;
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TilType;

    fn atom(p: &str, args: Vec<Term>) -> Atom {
        Atom { pred: Entity::named(p, TilType::o()), wt: true, groups: vec![args] }
    }

    fn c(n: &str) -> Term {
        Term::Const(Entity::individual(n))
    }

    fn v(n: &str) -> Term {
        Term::Var(Var::new(n, TilType::iota()))
    }

    #[test]
    fn binds_query_variable() {
        let s = unify(&atom("Member-of", vec![v("q"), c("SC")]), &atom("Member-of", vec![c("Tom"), c("SC")])).unwrap();
        assert_eq!(s.to_string(), "'Tom/q");
    }

    #[test]
    fn occurs_check() {
        let f = Term::App {
            func: Entity::Skolem { name: "f".into(), ty: TilType::func(TilType::iota(), vec![TilType::iota()]) },
            wt: false,
            args: vec![v("x")],
            ty: TilType::iota(),
        };
        assert!(unify(&atom("P", vec![v("x")]), &atom("P", vec![f])).is_none());
    }

    #[test]
    fn identical_ground_atoms() {
        let s = unify(&atom("P", vec![c("a")]), &atom("P", vec![c("a")])).unwrap();
        assert!(s.is_empty());
        assert!(unify(&atom("P", vec![c("a")]), &atom("P", vec![c("b")])).is_none());
    }

    #[test]
    fn types_must_agree() {
        let tau = Term::Var(Var::new("n", TilType::tau()));
        assert!(unify(&atom("P", vec![tau]), &atom("P", vec![c("a")])).is_none());
    }
}
