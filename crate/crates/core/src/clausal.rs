//! Clausal form of propositional constructions.
//!
//! The outermost `\w \t` is removed and the remaining matrix becomes a
//! first-order formula whose atoms are extensionalized predicates such as
//! `['Skier_wt x]`. The formula is then simplified, renamed apart, stripped
//! of `Implies`/`Equiv`, brought to negation normal form, skolemized and
//! distributed into clauses.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::construction::{Builtin, Construction, Entity, Var};
use crate::reduce::rename_free;
use crate::syntax::print_entity;
use crate::types::{BaseType, TilType};

/// Names tried in order when a knowledge-base binder must be renamed.
pub const KB_POOL: [&str; 8] = ["x", "y", "z", "u", "v", "s", "r", "p"];
/// Names tried in order when a question binder must be renamed.
pub const QUESTION_POOL: [&str; 1] = ["q"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausalError {
    #[error("expected a proposition of the form \\w \\t C")]
    NotAnIntension,
    #[error("quantifier over {0}: only iota and tau are supported")]
    QuantifierType(String),
    #[error("unsupported construction in clausal form: {0}")]
    Unsupported(String),
}

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    /// A Trivialized object. Displayed constructions are opaque constants.
    Const(Entity),
    /// A named function or a Skolem function applied to arguments; `ty` is
    /// the type of the value.
    App { func: Entity, wt: bool, args: Vec<Term>, ty: TilType },
}

impl Term {
    pub fn ty(&self) -> Option<TilType> {
        match self {
            Term::Var(v) => Some(v.ty.clone()),
            Term::Const(e) => e.ty(),
            Term::App { ty, .. } => Some(ty.clone()),
        }
    }

    pub fn variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App { args, .. } => args.iter().for_each(|a| a.variables(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut vs = BTreeSet::new();
        self.variables(&mut vs);
        vs.is_empty()
    }
}

fn head_text(func: &Entity, wt: bool) -> String {
    let mut s = format!("'{}", print_entity(func));
    if wt {
        s.push_str("_wt");
    }
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Const(e) => write!(f, "'{}", print_entity(e)),
            Term::App { func, wt, args, .. } => {
                write!(f, "[{}", head_text(func, *wt))?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// An atomic formula: a predicate, extensionalized when `wt` is set,
/// applied to groups of arguments (`[['P_wt a] b]` has two groups).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Entity,
    pub wt: bool,
    pub groups: Vec<Vec<Term>>,
}

impl Atom {
    pub fn args(&self) -> impl Iterator<Item = &Term> {
        self.groups.iter().flatten()
    }

    pub fn same_predicate(&self, other: &Atom) -> bool {
        self.pred == other.pred
            && self.wt == other.wt
            && self.groups.iter().map(Vec::len).eq(other.groups.iter().map(Vec::len))
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            wt: self.wt,
            groups: self.groups.iter().map(|g| g.iter().map(&mut *f).collect()).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = head_text(&self.pred, self.wt);
        for g in &self.groups {
            let args: Vec<String> = g.iter().map(Term::to_string).collect();
            s = format!("[{s} {}]", args.join(" "));
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub label: String,
    /// Label of the statement the clause came from.
    pub origin: String,
    pub literals: Vec<Literal>,
}

/// Renders a disjunction of literals; the empty clause is `[]`.
pub fn literals_text(lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "[]".into();
    }
    lits.iter().map(Literal::to_string).collect::<Vec<_>>().join(" | ")
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}) {}", self.label, literals_text(&self.literals))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Truth(bool),
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Equiv(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(bx(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(bx(a), bx(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(bx(a), bx(b))
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Truth(_) => {}
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.args().for_each(|t| t.variables(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Equiv(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of variables by terms.
    pub fn substitute(&self, s: &[(Var, Term)]) -> Formula {
        match self {
            Formula::Truth(_) => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| subst_term(t, s))),
            Formula::Not(a) => Formula::not(a.substitute(s)),
            Formula::And(a, b) => Formula::and(a.substitute(s), b.substitute(s)),
            Formula::Or(a, b) => Formula::or(a.substitute(s), b.substitute(s)),
            Formula::Implies(a, b) => Formula::Implies(bx(a.substitute(s)), bx(b.substitute(s))),
            Formula::Equiv(a, b) => Formula::Equiv(bx(a.substitute(s)), bx(b.substitute(s))),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let inner: Vec<(Var, Term)> = s.iter().filter(|(x, _)| x != v).cloned().collect();
                let body = bx(body.substitute(&inner));
                match self {
                    Formula::Forall(..) => Formula::Forall(v.clone(), body),
                    _ => Formula::Exists(v.clone(), body),
                }
            }
        }
    }
}

pub fn subst_term(t: &Term, s: &[(Var, Term)]) -> Term {
    match t {
        Term::Var(v) => s.iter().find(|(x, _)| x == v).map(|(_, r)| r.clone()).unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App { func, wt, args, ty } => Term::App {
            func: func.clone(),
            wt: *wt,
            args: args.iter().map(|a| subst_term(a, s)).collect(),
            ty: ty.clone(),
        },
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Truth(true) => f.write_str("'True"),
            Formula::Truth(false) => f.write_str("'False"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => write!(f, "['Not {a}]"),
            Formula::And(a, b) => write!(f, "['And {a} {b}]"),
            Formula::Or(a, b) => write!(f, "['Or {a} {b}]"),
            Formula::Implies(a, b) => write!(f, "['Implies {a} {b}]"),
            Formula::Equiv(a, b) => write!(f, "['Equiv {a} {b}]"),
            Formula::Forall(v, body) => write!(f, "['Forall \\{} {body}]", v.name),
            Formula::Exists(v, body) => write!(f, "['Exists \\{} {body}]", v.name),
        }
    }
}

/// `\w \t C` (curried or not) split into `w`, `t` and `C`.
pub fn strip_lambda_wt(c: &Construction) -> Result<(Var, Var, &Construction), ClausalError> {
    let is = |v: &Var, b: BaseType| v.ty == TilType::Base(b);
    match c {
        Construction::Closure(ps, body) => match ps.as_slice() {
            [w, t] if is(w, BaseType::World) && is(t, BaseType::Real) => Ok((w.clone(), t.clone(), body)),
            [w] if is(w, BaseType::World) => match body.as_ref() {
                Construction::Closure(ts, inner) => match ts.as_slice() {
                    [t] if is(t, BaseType::Real) => Ok((w.clone(), t.clone(), inner)),
                    _ => Err(ClausalError::NotAnIntension),
                },
                _ => Err(ClausalError::NotAnIntension),
            },
            _ => Err(ClausalError::NotAnIntension),
        },
        _ => Err(ClausalError::NotAnIntension),
    }
}

/// Translates a matrix, with `w` and `t` free, into a formula. `[['All A]
/// B]` is read as `['Forall \x ['Implies [A x] [B x]]]` and quantifier
/// arguments that are not Closures are η-expanded.
pub fn to_formula(c: &Construction, w: &Var, t: &Var) -> Result<Formula, ClausalError> {
    Translator { w, t, fresh: 0, names: c.variable_names() }.formula(c)
}

struct Translator<'a> {
    w: &'a Var,
    t: &'a Var,
    fresh: usize,
    names: BTreeSet<Arc<str>>,
}

fn unsupported(c: &Construction) -> ClausalError {
    ClausalError::Unsupported(crate::syntax::print(c))
}

fn quantifiable(ty: &TilType) -> Result<(), ClausalError> {
    if *ty == TilType::iota() || *ty == TilType::tau() {
        Ok(())
    } else {
        Err(ClausalError::QuantifierType(ty.to_string()))
    }
}

impl Translator<'_> {
    fn fresh_var(&mut self, ty: TilType) -> Var {
        loop {
            self.fresh += 1;
            let name: Arc<str> = format!("v{}", self.fresh).into();
            if !self.names.contains(&name) {
                self.names.insert(name.clone());
                return Var::new(&name, ty);
            }
        }
    }

    /// `[C x]`, reducing by name when `C` is a one-parameter Closure.
    fn apply_class(&self, class: &Construction, x: &Var) -> Construction {
        match class {
            Construction::Closure(ps, body) if ps.len() == 1 => rename_free(body, &[(ps[0].clone(), x.clone())]),
            _ => Construction::comp(class.clone(), vec![Construction::var(x)]),
        }
    }

    fn class_arg_type(&self, class: &Construction) -> Result<TilType, ClausalError> {
        if let Construction::Closure(ps, _) = class {
            return match ps.as_slice() {
                [p] => Ok(p.ty.clone()),
                _ => Err(unsupported(class)),
            };
        }
        let ty = crate::typing::type_of(class).map_err(|_| unsupported(class))?;
        match ty.as_func() {
            Some((r, [a])) if r.is_bool() => Ok(a.clone()),
            _ => Err(unsupported(class)),
        }
    }

    fn quantifier(&mut self, q: Builtin, class: &Construction) -> Result<Formula, ClausalError> {
        let ty = self.class_arg_type(class)?;
        quantifiable(&ty)?;
        let (v, body) = match class {
            Construction::Closure(ps, body) => (ps[0].clone(), body.as_ref().clone()),
            _ => {
                let v = self.fresh_var(ty);
                let body = self.apply_class(class, &v);
                (v, body)
            }
        };
        let body = bx(self.formula(&body)?);
        Ok(if q == Builtin::Forall { Formula::Forall(v, body) } else { Formula::Exists(v, body) })
    }

    fn formula(&mut self, c: &Construction) -> Result<Formula, ClausalError> {
        match c {
            Construction::Triv(Entity::Truth(b)) => return Ok(Formula::Truth(*b)),
            Construction::Exec2(x) => {
                if let Construction::Triv(Entity::Construction(inner)) = x.as_ref() {
                    return self.formula(inner);
                }
                return Err(unsupported(c));
            }
            _ => {}
        }
        if let Some((b, args)) = c.as_builtin_app() {
            let sub = |i: usize, me: &mut Self| me.formula(&args[i]);
            return match b {
                Builtin::Not => Ok(Formula::not(sub(0, self)?)),
                Builtin::And => Ok(Formula::and(sub(0, self)?, sub(1, self)?)),
                Builtin::Or => Ok(Formula::or(sub(0, self)?, sub(1, self)?)),
                Builtin::Implies => Ok(Formula::Implies(bx(sub(0, self)?), bx(sub(1, self)?))),
                Builtin::Equiv => Ok(Formula::Equiv(bx(sub(0, self)?), bx(sub(1, self)?))),
                Builtin::Forall | Builtin::Exists => self.quantifier(b, &args[0]),
                Builtin::Identity => Ok(Formula::Atom(self.atom(c)?)),
                _ => Err(unsupported(c)),
            };
        }
        // [['All A] B]
        if let Construction::Comp(h, args) = c {
            if let (Some((Builtin::All, [a])), [b]) = (h.as_builtin_app(), args.as_slice()) {
                let x = self.fresh_var(TilType::iota());
                let ax = self.apply_class(a, &x);
                let bxx = self.apply_class(b, &x);
                let body = Formula::Implies(bx(self.formula(&ax)?), bx(self.formula(&bxx)?));
                return Ok(Formula::Forall(x, bx(body)));
            }
        }
        Ok(Formula::Atom(self.atom(c)?))
    }

    /// Peels a chain of Compositions down to a named head; returns the head,
    /// whether it was extensionalized and the argument groups.
    fn spine(&self, c: &Construction) -> Result<(Entity, bool, Vec<Vec<Term>>), ClausalError> {
        let mut groups = Vec::new();
        let mut cur = c;
        loop {
            match cur {
                Construction::Comp(h, args) => {
                    // `[[C w] t]` ends the spine with an extensionalized head
                    if let ([Construction::Var(tv)], Construction::Comp(hw, wargs)) = (args.as_slice(), h.as_ref()) {
                        if let [Construction::Var(wv)] = wargs.as_slice() {
                            if tv == self.t && wv == self.w {
                                if let Construction::Triv(e) = hw.as_ref() {
                                    groups.reverse();
                                    return Ok((e.clone(), true, groups));
                                }
                                return Err(unsupported(c));
                            }
                        }
                    }
                    groups.push(args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?);
                    cur = h;
                }
                Construction::Triv(e @ (Entity::Named { .. } | Entity::Builtin(Builtin::Identity))) => {
                    groups.reverse();
                    return Ok((e.clone(), false, groups));
                }
                _ => return Err(unsupported(c)),
            }
        }
    }

    fn atom(&self, c: &Construction) -> Result<Atom, ClausalError> {
        let (pred, wt, groups) = self.spine(c)?;
        if groups.is_empty() {
            return Err(unsupported(c));
        }
        Ok(Atom { pred, wt, groups })
    }

    fn term(&self, c: &Construction) -> Result<Term, ClausalError> {
        match c {
            Construction::Var(v) if v == self.w || v == self.t => Err(unsupported(c)),
            Construction::Var(v) => Ok(Term::Var(v.clone())),
            Construction::Triv(e) => Ok(Term::Const(e.clone())),
            Construction::Comp(..) => {
                let (func, wt, groups) = self.spine(c)?;
                if groups.len() != 1 {
                    return Err(unsupported(c));
                }
                let ty = crate::typing::type_of(c).map_err(|_| unsupported(c))?;
                Ok(Term::App { func, wt, args: groups.into_iter().next().unwrap_or_default(), ty })
            }
            _ => Err(unsupported(c)),
        }
    }
}

/// Removes quantifiers whose variable does not occur in their scope.
pub fn drop_vacuous_quantifiers(f: &Formula) -> Formula {
    map_children(f, &mut drop_vacuous_quantifiers, |f| match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) if !body.free_variables().contains(&v) => *body,
        other => other,
    })
}

fn map_children(f: &Formula, rec: &mut impl FnMut(&Formula) -> Formula, finish: impl FnOnce(Formula) -> Formula) -> Formula {
    let out = match f {
        Formula::Truth(_) | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(rec(a)),
        Formula::And(a, b) => Formula::and(rec(a), rec(b)),
        Formula::Or(a, b) => Formula::or(rec(a), rec(b)),
        Formula::Implies(a, b) => Formula::Implies(bx(rec(a)), bx(rec(b))),
        Formula::Equiv(a, b) => Formula::Equiv(bx(rec(a)), bx(rec(b))),
        Formula::Forall(v, body) => Formula::Forall(v.clone(), bx(rec(body))),
        Formula::Exists(v, body) => Formula::Exists(v.clone(), bx(rec(body))),
    };
    finish(out)
}

/// Renames binders so that every binder in a run has its own name. A
/// binder keeps its name if no earlier binder used it; otherwise it takes
/// the next unused name from `pool`, then `<first>1`, `<first>2`, ...
pub fn rename_apart(f: &Formula, pool: &[&str], used: &mut BTreeSet<Arc<str>>) -> Formula {
    match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let name: Arc<str> = if used.contains(&v.name) { next_name(pool, used) } else { v.name.clone() };
            used.insert(name.clone());
            let nv = v.renamed(&name);
            let body = if nv == *v { (**body).clone() } else { body.substitute(&[(v.clone(), Term::Var(nv.clone()))]) };
            let body = bx(rename_apart(&body, pool, used));
            match f {
                Formula::Forall(..) => Formula::Forall(nv, body),
                _ => Formula::Exists(nv, body),
            }
        }
        _ => map_children(f, &mut |g| rename_apart(g, pool, used), |g| g),
    }
}

fn next_name(pool: &[&str], used: &BTreeSet<Arc<str>>) -> Arc<str> {
    if let Some(n) = pool.iter().find(|n| !used.contains(**n)) {
        return (*n).into();
    }
    let first = pool.first().copied().unwrap_or("x");
    (1..).map(|i| format!("{first}{i}")).find(|n| !used.contains(n.as_str())).expect("names are unbounded").into()
}

/// `[C ⊃ D] ⊢ [¬C ∨ D]`, `[C ≡ D] ⊢ [[¬C ∨ D] ∧ [¬D ∨ C]]`.
pub fn eliminate_impl_equiv(f: &Formula) -> Formula {
    map_children(f, &mut eliminate_impl_equiv, |g| match g {
        Formula::Implies(a, b) => Formula::Or(bx(Formula::Not(a)), b),
        Formula::Equiv(a, b) => Formula::and(
            Formula::or(Formula::not((*a).clone()), (*b).clone()),
            Formula::or(Formula::not(*b), *a),
        ),
        other => other,
    })
}

/// Negation normal form; expects no `Implies`/`Equiv`.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Not(a) => negate(a),
        _ => map_children(f, &mut to_nnf, |g| g),
    }
}

fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Truth(b) => Formula::Truth(!b),
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(a) => to_nnf(a),
        Formula::And(a, b) => Formula::or(negate(a), negate(b)),
        Formula::Or(a, b) => Formula::and(negate(a), negate(b)),
        Formula::Implies(a, b) => Formula::and(to_nnf(a), negate(b)),
        Formula::Equiv(a, b) => negate(&eliminate_impl_equiv(&Formula::Equiv(a.clone(), b.clone()))),
        Formula::Forall(v, body) => Formula::Exists(v.clone(), bx(negate(body))),
        Formula::Exists(v, body) => Formula::Forall(v.clone(), bx(negate(body))),
    }
}

/// Replaces each existential variable by a Skolem constant, or by a Skolem
/// function of the enclosing universal variables. Expects NNF.
pub fn skolemize(f: &Formula, counter: &mut usize) -> Formula {
    sk(f, &mut Vec::new(), counter)
}

fn sk(f: &Formula, univ: &mut Vec<Var>, counter: &mut usize) -> Formula {
    match f {
        Formula::Forall(v, body) => {
            univ.push(v.clone());
            let b = sk(body, univ, counter);
            univ.pop();
            Formula::Forall(v.clone(), bx(b))
        }
        Formula::Exists(v, body) => {
            *counter += 1;
            let name = format!("sk{counter}");
            let term = if univ.is_empty() {
                Term::Const(Entity::Skolem { name: name.into(), ty: v.ty.clone() })
            } else {
                let ty = TilType::func(v.ty.clone(), univ.iter().map(|u| u.ty.clone()).collect());
                Term::App {
                    func: Entity::Skolem { name: name.into(), ty },
                    wt: false,
                    args: univ.iter().cloned().map(Term::Var).collect(),
                    ty: v.ty.clone(),
                }
            };
            sk(&body.substitute(&[(v.clone(), term)]), univ, counter)
        }
        _ => map_children(f, &mut |g| sk(g, univ, counter), |g| g),
    }
}

/// Drops the (prenex) universal quantifiers of a skolemized formula.
pub fn drop_universals(f: &Formula) -> Formula {
    match f {
        Formula::Forall(_, body) => drop_universals(body),
        _ => map_children(f, &mut drop_universals, |g| g),
    }
}

/// Distributes a quantifier-free NNF formula into a list of clauses. Each
/// clause keeps its literals in order of first occurrence; valid clauses
/// and `False` literals are removed.
pub fn to_cnf(f: &Formula) -> Vec<Vec<Literal>> {
    let raw = cnf(f);
    raw.into_iter()
        .filter_map(|c| {
            let mut out: Vec<Literal> = Vec::new();
            for l in c? {
                if !out.contains(&l) {
                    out.push(l);
                }
            }
            Some(out)
        })
        .collect()
}

/// `None` entries stand for clauses made true by a `True` disjunct.
fn cnf(f: &Formula) -> Vec<Option<Vec<Literal>>> {
    match f {
        Formula::Truth(true) => Vec::new(),
        Formula::Truth(false) => vec![Some(Vec::new())],
        Formula::Atom(a) => vec![Some(vec![Literal { positive: true, atom: a.clone() }])],
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => vec![Some(vec![Literal { positive: false, atom: a.clone() }])],
            Formula::Truth(b) => cnf(&Formula::Truth(!b)),
            other => cnf(&negate(other)),
        },
        Formula::And(a, b) => {
            let mut out = cnf(a);
            out.extend(cnf(b));
            out
        }
        Formula::Or(a, b) => {
            let (ca, cb) = (cnf(a), cnf(b));
            let mut out = Vec::new();
            for x in &ca {
                for y in &cb {
                    out.push(match (x, y) {
                        (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
                        _ => None,
                    });
                }
            }
            out
        }
        Formula::Implies(..) | Formula::Equiv(..) => cnf(&eliminate_impl_equiv(f)),
        Formula::Forall(_, body) => cnf(body),
        Formula::Exists(..) => unreachable!("skolemized before distribution"),
    }
}

/// Every intermediate formula of one transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct Stages {
    pub matrix: Formula,
    pub simplified: Formula,
    pub renamed: Formula,
    pub negated: Option<Formula>,
    pub no_implications: Formula,
    pub nnf: Formula,
    pub skolemized: Formula,
    pub matrix_only: Formula,
    pub clauses: Vec<Vec<Literal>>,
}

impl Stages {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |name: &str, f: &Formula| out.push_str(&format!("{name}: {f}\n"));
        line("matrix", &self.matrix);
        line("without vacuous quantifiers", &self.simplified);
        line("renamed apart", &self.renamed);
        if let Some(n) = &self.negated {
            line("negated", n);
        }
        line("without implications", &self.no_implications);
        line("negation normal form", &self.nnf);
        line("skolemized", &self.skolemized);
        line("universals dropped", &self.matrix_only);
        for c in &self.clauses {
            out.push_str(&format!("clause: {}\n", literals_text(c)));
        }
        out
    }
}

/// The negated question in clausal form together with the variables whose
/// bindings answer it.
#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub clauses: Vec<Clause>,
    /// The question's outer existential variables, after renaming.
    pub answer_vars: Vec<Var>,
    /// Original names of `answer_vars`, in the same order.
    pub original_names: Vec<Arc<str>>,
}

/// One transformation run: binder names and Skolem numbering are shared by
/// every statement and question passed to the same clausifier.
#[derive(Debug, Clone, Default)]
pub struct Clausifier {
    used: BTreeSet<Arc<str>>,
    skolems: usize,
}

fn labels(base: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![base.to_string()]
    } else {
        (1..=n).map(|i| format!("{base}{i}")).collect()
    }
}

impl Clausifier {
    pub fn new() -> Self {
        Clausifier::default()
    }

    pub fn stages(&mut self, c: &Construction, negate_it: bool) -> Result<Stages, ClausalError> {
        let (w, t, body) = strip_lambda_wt(c)?;
        let matrix = to_formula(body, &w, &t)?;
        let simplified = drop_vacuous_quantifiers(&matrix);
        let pool: &[&str] = if negate_it { &QUESTION_POOL } else { &KB_POOL };
        let renamed = rename_apart(&simplified, pool, &mut self.used);
        let negated = negate_it.then(|| Formula::not(renamed.clone()));
        let no_implications = eliminate_impl_equiv(negated.as_ref().unwrap_or(&renamed));
        let nnf = to_nnf(&no_implications);
        let skolemized = skolemize(&nnf, &mut self.skolems);
        let matrix_only = drop_universals(&skolemized);
        let clauses = to_cnf(&matrix_only);
        Ok(Stages { matrix, simplified, renamed, negated, no_implications, nnf, skolemized, matrix_only, clauses })
    }

    /// Clauses of an asserted statement, labelled from the statement label:
    /// `a` gives `A`, or `A1`, `A2`, ... when there are several.
    pub fn statement(&mut self, label: &str, c: &Construction) -> Result<Vec<Clause>, ClausalError> {
        let st = self.stages(c, false)?;
        let names = labels(&label.to_uppercase(), st.clauses.len());
        Ok(st
            .clauses
            .into_iter()
            .zip(names)
            .map(|(literals, l)| Clause { label: l, origin: label.to_string(), literals })
            .collect())
    }

    /// The goal clauses `G` (or `G1`, ...) obtained by negating a question.
    pub fn question(&mut self, c: &Construction) -> Result<Goal, ClausalError> {
        let (w, t, body) = strip_lambda_wt(c)?;
        let original = drop_vacuous_quantifiers(&to_formula(body, &w, &t)?);
        let st = self.stages(c, true)?;
        let mut answer_vars = Vec::new();
        let mut original_names = Vec::new();
        let (mut renamed, mut orig) = (&st.renamed, &original);
        while let (Formula::Exists(v, b), Formula::Exists(o, ob)) = (renamed, orig) {
            answer_vars.push(v.clone());
            original_names.push(o.name.clone());
            renamed = b;
            orig = ob;
        }
        let names = labels("G", st.clauses.len());
        let clauses = st
            .clauses
            .into_iter()
            .zip(names)
            .map(|(literals, l)| Clause { label: l, origin: "question".into(), literals })
            .collect();
        Ok(Goal { clauses, answer_vars, original_names })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;
    use crate::syntax::parse;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::standard();
        let prop = |args: Vec<TilType>| TilType::intension(TilType::func(TilType::o(), args));
        t.declare("a", TilType::iota()).unwrap();
        t.declare("P", prop(vec![TilType::iota()])).unwrap();
        t.declare("Q", prop(vec![TilType::iota()])).unwrap();
        t.declare("R", prop(vec![TilType::iota(), TilType::iota()])).unwrap();
        t.declare_var(Var::new("x", TilType::iota())).unwrap();
        t.declare_var(Var::new("y", TilType::iota())).unwrap();
        t
    }

    fn clauses(src: &str) -> Vec<String> {
        let c = parse(src, &table()).unwrap();
        Clausifier::new().statement("k", &c).unwrap().iter().map(|c| literals_text(&c.literals)).collect()
    }

    #[test]
    fn distribution() {
        assert_eq!(
            clauses("\\w \\t ['Or ['And ['P_wt 'a] ['Q_wt 'a]] ['R_wt 'a 'a]]"),
            ["['P_wt 'a] | ['R_wt 'a 'a]", "['Q_wt 'a] | ['R_wt 'a 'a]"]
        );
    }

    #[test]
    fn skolem_constants_and_functions() {
        assert_eq!(clauses("\\w \\t ['Exists \\x ['P_wt x]]"), ["['P_wt 'sk1]"]);
        assert_eq!(clauses("\\w \\t ['Forall \\x ['Exists \\y ['R_wt x y]]]"), ["['R_wt x ['sk1 x]]"]);
    }

    #[test]
    fn vacuous_quantifier_and_eta() {
        assert_eq!(clauses("\\w \\t ['Forall \\x ['P_wt 'a]]"), ["['P_wt 'a]"]);
        assert_eq!(clauses("\\w \\t ['Forall 'P_wt]"), ["['P_wt v1]"]);
    }

    #[test]
    fn rename_pools_are_shared() {
        let t = table();
        let mut k = Clausifier::new();
        let a = k.statement("b", &parse("\\w \\t ['Forall \\x ['P_wt x]]", &t).unwrap()).unwrap();
        let b = k.statement("c", &parse("\\w \\t ['Forall \\x ['Q_wt x]]", &t).unwrap()).unwrap();
        let g = k.question(&parse("\\w \\t ['Exists \\x ['P_wt x]]", &t).unwrap()).unwrap();
        assert_eq!(a[0].to_string(), "B) ['P_wt x]");
        assert_eq!(b[0].to_string(), "C) ['Q_wt y]");
        assert_eq!(g.clauses[0].to_string(), "G) ~['P_wt q]");
        assert_eq!(&*g.answer_vars[0].name, "q");
        assert_eq!(&*g.original_names[0], "x");
    }

    #[test]
    fn rejects_other_shapes() {
        let t = table();
        assert_eq!(strip_lambda_wt(&parse("'a", &t).unwrap()).unwrap_err(), ClausalError::NotAnIntension);
        let mut k = Clausifier::new();
        let bad = parse("\\w \\t ['Forall \\p:o p]", &t).unwrap();
        assert!(matches!(k.statement("k", &bad), Err(ClausalError::QuantifierType(_))));
    }
}
