//! Evaluation with partiality, the substitution machinery and the
//! constructions built from them.

mod builtins;
pub mod eval;
pub mod model;
pub mod subst;
pub mod value;

pub use builtins::signature;
pub use eval::Evaluator;
pub use model::Model;
pub use subst::{beta_by_name_restricted, beta_by_value, normalize_by_name, rename_free, sub, tr, BetaError};
pub use value::{EvalResult, FunctionValue, Improper, ImproperReason, Valuation};

use crate::construction::{Builtin, Construction, Entity, Var};
use crate::types::TilType;

/// Evaluates `c` under `v` in `m`.
pub fn evaluate(c: &Construction, v: &Valuation, m: &Model) -> EvalResult {
    Evaluator::new(m).evaluate(c, v)
}

/// The singularizer applied to an explicit class of constructions.
pub fn singularizer(class: &[Construction]) -> EvalResult {
    let mut members: Vec<&Construction> = Vec::new();
    for c in class {
        if !members.contains(&c) {
            members.push(c);
        }
    }
    match members.as_slice() {
        [only] => Ok(Entity::construction((*only).clone())),
        _ => Err(Improper::new(ImproperReason::SingularizerEmptyOrMany, crate::construction::NodePath::root())),
    }
}

/// The variable over selected constructions used by the conditional
/// builders: `c/*(n+1)` that double-executes to `result`.
pub fn selector_var(order: u32, result: TilType) -> Var {
    Var::over_constructions("c", order + 1, result)
}

fn selection(cond: Construction, chosen: Construction, c: &Var) -> Construction {
    Construction::app(
        Builtin::And,
        vec![cond, Construction::app(Builtin::Identity, vec![Construction::var(c), Construction::display(chosen)])],
    )
}

/// `^2 ['Istar \c ['And P ['= c 'S]]]`: executes `S` when `P` is true and
/// fails otherwise.
pub fn if_then_else_fail(p: Construction, s: Construction, result: TilType) -> Construction {
    let c = selector_var(s.order(), result);
    let body = selection(p, s, &c);
    Construction::exec2(Construction::app(Builtin::Singularizer, vec![Construction::closure(vec![c], body)]))
}

/// `^2 ['Istar \c ['Or ['And P ['= c 'S]] ['And ['Not P] ['= c 'R]]]]`.
pub fn if_then_else(p: Construction, s: Construction, r: Construction, result: TilType) -> Construction {
    let order = s.order().max(r.order());
    let c = selector_var(order, result);
    let body = Construction::app(
        Builtin::Or,
        vec![
            selection(p.clone(), s, &c),
            selection(Construction::app(Builtin::Not, vec![p]), r, &c),
        ],
    );
    Construction::exec2(Construction::app(Builtin::Singularizer, vec![Construction::closure(vec![c], body)]))
}

/// Splits an if-then-else-fail construction into its condition and the
/// selected construction.
pub fn as_if_then_else_fail(c: &Construction) -> Option<(&Construction, &Construction)> {
    let Construction::Exec2(x) = c else { return None };
    let (Builtin::Singularizer, [cls]) = x.as_builtin_app()? else { return None };
    let Construction::Closure(ps, body) = cls else { return None };
    let [sel] = ps.as_slice() else { return None };
    let (Builtin::And, [p, eq]) = body.as_builtin_app()? else { return None };
    let (Builtin::Identity, [lhs, rhs]) = eq.as_builtin_app()? else { return None };
    match (lhs, rhs) {
        (Construction::Var(v), Construction::Triv(Entity::Construction(s))) if v == sel => Some((p, s)),
        _ => None,
    }
}

/// Quantifying into a hyperintensional context. Every display in `c` that
/// mentions `target` is replaced by `['Sub ['Tr y] 'x 'D]`, where `D` is
/// the display with `target` replaced by `x`, and the body of the
/// outermost λw λt is existentially closed over `y`. Returns `None` when
/// `target` is not displayed anywhere in `c`.
pub fn quantify_in(c: &Construction, target: &Entity, y: &Var, x: &Var) -> Option<Construction> {
    let Construction::Closure(wp, inner) = c else { return None };
    let Construction::Closure(tp, body) = inner.as_ref() else { return None };
    let mut hit = false;
    let rewritten = quantify_displays(body, target, y, x, &mut hit);
    if !hit {
        return None;
    }
    let exists = Construction::app(Builtin::Exists, vec![Construction::closure(vec![y.clone()], rewritten)]);
    Some(Construction::Closure(wp.clone(), Box::new(Construction::Closure(tp.clone(), Box::new(exists)))))
}

fn quantify_displays(c: &Construction, target: &Entity, y: &Var, x: &Var, hit: &mut bool) -> Construction {
    match c {
        Construction::Triv(Entity::Construction(d)) => {
            let pattern = Construction::Triv(target.clone());
            let opened = sub(&Construction::var(x), &pattern, d);
            if opened == **d {
                return c.clone();
            }
            *hit = true;
            Construction::app(
                Builtin::Sub,
                vec![
                    Construction::app(Builtin::Tr, vec![Construction::var(y)]),
                    Construction::display(Construction::var(x)),
                    Construction::display(opened),
                ],
            )
        }
        Construction::Comp(h, args) => Construction::Comp(
            Box::new(quantify_displays(h, target, y, x, hit)),
            args.iter().map(|a| quantify_displays(a, target, y, x, hit)).collect(),
        ),
        Construction::Closure(ps, body) => {
            Construction::Closure(ps.clone(), Box::new(quantify_displays(body, target, y, x, hit)))
        }
        Construction::Exec2(inner) => Construction::exec2(quantify_displays(inner, target, y, x, hit)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Number;
    use crate::symbols::SymbolTable;
    use crate::syntax::{parse, print_with};

    fn pi() -> Construction {
        Construction::triv(Entity::Number(Number::pi()))
    }

    fn cot(arg: Construction) -> Construction {
        Construction::app(Builtin::Cot, vec![arg])
    }

    #[test]
    fn cot_pi_is_improper() {
        let m = Model::default();
        let r = evaluate(&cot(pi()), &Valuation::new(), &m).unwrap_err();
        assert_eq!(r.reason, ImproperReason::UndefinedApplication);
        let quarter = Construction::app(Builtin::Divide, vec![pi(), Construction::triv(Entity::Number(Number::int(4)))]);
        let v = evaluate(&cot(quarter), &Valuation::new(), &m).unwrap();
        assert_eq!(v, Entity::Number(Number::int(1)));
    }

    #[test]
    fn executing_a_number_fails() {
        let c = Construction::Exec1(Entity::Number(Number::pi()));
        let r = evaluate(&c, &Valuation::new(), &Model::default()).unwrap_err();
        assert_eq!(r.reason, ImproperReason::NonConstructionExecuted);
    }

    #[test]
    fn singularizer_on_explicit_classes() {
        let c = cot(pi());
        assert_eq!(singularizer(std::slice::from_ref(&c)).unwrap(), Entity::construction(c.clone()));
        assert!(singularizer(&[]).is_err());
        assert!(singularizer(&[c, pi()]).is_err());
    }

    #[test]
    fn if_then_else_fail_selects_or_fails() {
        let m = Model::default();
        let t = Construction::triv(Entity::Truth(true));
        let f = Construction::triv(Entity::Truth(false));
        let s = Construction::triv(Entity::Number(Number::int(3)));
        let yes = if_then_else_fail(t.clone(), s.clone(), TilType::tau());
        assert_eq!(evaluate(&yes, &Valuation::new(), &m).unwrap(), Entity::Number(Number::int(3)));
        let no = if_then_else_fail(f.clone(), s.clone(), TilType::tau());
        assert!(evaluate(&no, &Valuation::new(), &m).is_err());
        let bad = if_then_else_fail(Construction::app(Builtin::Identity, vec![cot(pi()), s.clone()]), s.clone(), TilType::tau());
        assert!(evaluate(&bad, &Valuation::new(), &m).is_err());
        assert_eq!(as_if_then_else_fail(&yes), Some((&t, &s)));
        let two = if_then_else(f, s, pi(), TilType::tau());
        assert_eq!(evaluate(&two, &Valuation::new(), &m).unwrap(), Entity::Number(Number::pi()));
    }

    #[test]
    fn quantifying_in_shape() {
        let mut t = SymbolTable::standard();
        t.declare("Tom", TilType::iota()).unwrap();
        t.declare("Calculate", TilType::intension(TilType::func(TilType::o(), vec![TilType::iota(), TilType::order(1)])))
            .unwrap();
        let premise = parse("\\w \\t ['Calculate_wt 'Tom '['Cot 'pi]]", &t).unwrap();
        let y = Var::new("y", TilType::tau());
        let x = Var::new("x", TilType::tau());
        t.declare_var(y.clone()).unwrap();
        t.declare_var(x.clone()).unwrap();
        let out = quantify_in(&premise, &Entity::Number(Number::pi()), &y, &x).unwrap();
        assert_eq!(
            print_with(&out, &t),
            "\\w \\t ['Exists \\y ['Calculate_wt 'Tom ['Sub ['Tr y] 'x '['Cot x]]]]"
        );
        assert!(quantify_in(&premise, &Entity::individual("Tom"), &y, &x).is_none());
    }
}
