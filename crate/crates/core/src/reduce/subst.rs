//! Syntactic operations on constructions: `Sub`, `Tr`, and the two
//! β-conversion rules.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::construction::{Builtin, Construction, Entity, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BetaError {
    #[error("not a redex: the head is not a Closure")]
    NotARedex,
    #[error("closure takes {expected} argument(s), given {found}")]
    Arity { expected: usize, found: usize },
    #[error("argument {0} is not a variable")]
    NotAVariable(usize),
    #[error("argument {index} has type {found}, parameter expects {expected}")]
    TypeMismatch { index: usize, expected: String, found: String },
}

/// A name based on `base` that is not in `used`, formed by appending `'`.
pub fn fresh_name(base: &str, used: &BTreeSet<Arc<str>>) -> Arc<str> {
    let mut name = format!("{base}'");
    while used.contains(name.as_str()) {
        name.push('\'');
    }
    name.into()
}

/// `Tr`: the Trivialization of an entity.
pub fn tr(e: &Entity) -> Construction {
    Construction::Triv(e.clone())
}

/// `Sub`: replaces every occurrence of `c2` in `c3` by `c1`, including
/// occurrences inside displayed constructions. Binders of `c3` that bind
/// `c2` or a free variable of `c1` are renamed first, so bound occurrences
/// are left alone and nothing in `c1` is captured.
pub fn sub(c1: &Construction, c2: &Construction, c3: &Construction) -> Construction {
    let mut avoid: BTreeSet<Var> = c1.free_variables();
    if let Construction::Var(v) = c2 {
        avoid.insert(v.clone());
    }
    let mut used = c3.variable_names();
    used.extend(c1.variable_names());
    used.extend(c2.variable_names());
    replace(c1, c2, c3, &avoid, &mut used, &mut Vec::new())
}

fn replace(
    c1: &Construction,
    c2: &Construction,
    c: &Construction,
    avoid: &BTreeSet<Var>,
    used: &mut BTreeSet<Arc<str>>,
    renames: &mut Vec<(Var, Var)>,
) -> Construction {
    // apply pending binder renamings to executed variable occurrences first
    let current = match c {
        Construction::Var(v) => match renames.iter().rev().find(|(from, _)| from == v) {
            Some((_, to)) => return Construction::Var(to.clone()),
            None => c,
        },
        _ => c,
    };
    if current == c2 {
        return c1.clone();
    }
    match current {
        Construction::Var(_) => current.clone(),
        Construction::Triv(Entity::Construction(inner)) => {
            // a λ above a display does not bind into it
            Construction::display(replace(c1, c2, inner, avoid, used, &mut Vec::new()))
        }
        Construction::Triv(_) => current.clone(),
        Construction::Exec1(Entity::Construction(inner)) => {
            Construction::Exec1(Entity::construction(replace(c1, c2, inner, avoid, used, renames)))
        }
        Construction::Exec1(_) => current.clone(),
        Construction::Comp(h, args) => Construction::Comp(
            Box::new(replace(c1, c2, h, avoid, used, renames)),
            args.iter().map(|a| replace(c1, c2, a, avoid, used, renames)).collect(),
        ),
        Construction::Closure(ps, body) => {
            let n = renames.len();
            let mut params = Vec::with_capacity(ps.len());
            for p in ps {
                if avoid.contains(p) {
                    let name = fresh_name(&p.name, used);
                    used.insert(name.clone());
                    let q = p.renamed(&name);
                    renames.push((p.clone(), q.clone()));
                    params.push(q);
                } else {
                    // an inner binder shadows any outer renaming of the same variable
                    renames.push((p.clone(), p.clone()));
                    params.push(p.clone());
                }
            }
            let body = replace(c1, c2, body, avoid, used, renames);
            renames.truncate(n);
            Construction::Closure(params, Box::new(body))
        }
        Construction::Exec2(x) => Construction::exec2(replace(c1, c2, x, avoid, used, renames)),
    }
}

/// β-conversion by value:
/// `[[\x1..xn Y] D1..Dn]` becomes `^2 ['Sub ['Tr D1] 'x1 .. ['Sub ['Tr Dn] 'xn 'Y]..]`.
pub fn beta_by_value(comp: &Construction) -> Result<Construction, BetaError> {
    let (params, body, args) = redex(comp)?;
    let mut inner = Construction::display(body.clone());
    for (p, d) in params.iter().zip(args).rev() {
        inner = Construction::app(
            Builtin::Sub,
            vec![
                Construction::app(Builtin::Tr, vec![d.clone()]),
                Construction::display(Construction::Var(p.clone())),
                inner,
            ],
        );
    }
    Ok(Construction::exec2(inner))
}

fn redex(comp: &Construction) -> Result<(&[Var], &Construction, &[Construction]), BetaError> {
    let Construction::Comp(head, args) = comp else { return Err(BetaError::NotARedex) };
    let Construction::Closure(params, body) = head.as_ref() else { return Err(BetaError::NotARedex) };
    if params.len() != args.len() {
        return Err(BetaError::Arity { expected: params.len(), found: args.len() });
    }
    Ok((params, body, args))
}

/// Restricted β-conversion by name: only variables of the parameters'
/// types may be substituted for the λ-bound variables.
pub fn beta_by_name_restricted(comp: &Construction) -> Result<Construction, BetaError> {
    let (params, body, args) = redex(comp)?;
    let mut pairs = Vec::with_capacity(params.len());
    for (i, (p, a)) in params.iter().zip(args).enumerate() {
        let Construction::Var(v) = a else { return Err(BetaError::NotAVariable(i)) };
        if v.ty != p.ty {
            return Err(BetaError::TypeMismatch { index: i, expected: p.ty.to_string(), found: v.ty.to_string() });
        }
        pairs.push((p.clone(), v.clone()));
    }
    Ok(rename_free(body, &pairs))
}

/// Simultaneous capture-avoiding replacement of free (executed) variables
/// by variables.
pub fn rename_free(c: &Construction, pairs: &[(Var, Var)]) -> Construction {
    let mut used = c.variable_names();
    used.extend(pairs.iter().map(|(_, v)| v.name.clone()));
    let targets: BTreeSet<Var> = pairs.iter().map(|(_, v)| v.clone()).collect();
    rename_rec(c, pairs, &targets, &mut used)
}

fn rename_rec(
    c: &Construction,
    pairs: &[(Var, Var)],
    targets: &BTreeSet<Var>,
    used: &mut BTreeSet<Arc<str>>,
) -> Construction {
    match c {
        Construction::Var(v) => match pairs.iter().find(|(from, _)| from == v) {
            Some((_, to)) => Construction::Var(to.clone()),
            None => c.clone(),
        },
        Construction::Triv(_) => c.clone(),
        Construction::Exec1(Entity::Construction(inner)) => {
            Construction::Exec1(Entity::construction(rename_rec(inner, pairs, targets, used)))
        }
        Construction::Exec1(_) => c.clone(),
        Construction::Comp(h, args) => Construction::Comp(
            Box::new(rename_rec(h, pairs, targets, used)),
            args.iter().map(|a| rename_rec(a, pairs, targets, used)).collect(),
        ),
        Construction::Closure(ps, body) => {
            // drop pairs shadowed by this binder
            let mut inner: Vec<(Var, Var)> = pairs.iter().filter(|(from, _)| !ps.contains(from)).cloned().collect();
            let mut params = Vec::with_capacity(ps.len());
            for p in ps {
                if targets.contains(p) && inner.iter().any(|(from, _)| body.occurs_free(from)) {
                    let name = fresh_name(&p.name, used);
                    used.insert(name.clone());
                    let q = p.renamed(&name);
                    inner.push((p.clone(), q.clone()));
                    params.push(q);
                } else {
                    params.push(p.clone());
                }
            }
            let body = rename_rec(body, &inner, targets, used);
            Construction::Closure(params, Box::new(body))
        }
        Construction::Exec2(x) => Construction::exec2(rename_rec(x, pairs, targets, used)),
    }
}

/// Applies restricted β by name bottom-up until no variable-argument
/// redex remains.
pub fn normalize_by_name(c: &Construction) -> Construction {
    let c = match c {
        Construction::Comp(h, args) => {
            Construction::Comp(Box::new(normalize_by_name(h)), args.iter().map(normalize_by_name).collect())
        }
        Construction::Closure(ps, body) => Construction::Closure(ps.clone(), Box::new(normalize_by_name(body))),
        Construction::Exec2(x) => Construction::exec2(normalize_by_name(x)),
        Construction::Exec1(Entity::Construction(inner)) => {
            Construction::Exec1(Entity::construction(normalize_by_name(inner)))
        }
        other => other.clone(),
    };
    match beta_by_name_restricted(&c) {
        Ok(reduced) => normalize_by_name(&reduced),
        Err(_) => c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use crate::symbols::SymbolTable;
    use crate::types::TilType;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::standard();
        t.declare("P", TilType::func(TilType::o(), vec![TilType::iota(), TilType::iota()])).unwrap();
        t.declare("A", TilType::iota()).unwrap();
        t.declare_var(Var::new("x", TilType::iota())).unwrap();
        t.declare_var(Var::new("y", TilType::iota())).unwrap();
        t
    }

    #[test]
    fn sub_renames_to_avoid_capture() {
        let t = table();
        let c3 = parse("\\y ['P x y]", &t).unwrap();
        let y = parse("y", &t).unwrap();
        let x = parse("x", &t).unwrap();
        let out = sub(&y, &x, &c3);
        assert_eq!(crate::syntax::print_with(&out, &t), "\\y':iota ['P y y']");
        assert_eq!(out.free_variables(), y.free_variables());
    }

    #[test]
    fn sub_reaches_into_displays() {
        let t = table();
        let c3 = parse("'['P x 'A]", &t).unwrap();
        let out = sub(&parse("'A", &t).unwrap(), &parse("x", &t).unwrap(), &c3);
        assert_eq!(out, parse("'['P 'A 'A]", &t).unwrap());
        let unchanged = sub(&parse("'A", &t).unwrap(), &parse("x", &t).unwrap(), &parse("'y", &t).unwrap());
        assert_eq!(unchanged, parse("'y", &t).unwrap());
    }

    #[test]
    fn beta_by_value_shape() {
        let mut t = SymbolTable::standard();
        t.declare_var(Var::new("x", TilType::tau())).unwrap();
        let c = parse("[[\\x ['Cot x]] 'pi]", &t).unwrap();
        let b = beta_by_value(&c).unwrap();
        assert_eq!(print_with_table(&b, &t), "^2 ['Sub ['Tr 'pi] 'x '['Cot x]]");
    }

    fn print_with_table(c: &Construction, t: &SymbolTable) -> String {
        crate::syntax::print_with(c, t)
    }

    #[test]
    fn restricted_beta_by_name() {
        let t = table();
        assert_eq!(beta_by_name_restricted(&parse("['P x y]", &t).unwrap()), Err(BetaError::NotARedex));
        let c = parse("[[\\x x] y]", &t).unwrap();
        assert_eq!(beta_by_name_restricted(&c).unwrap(), parse("y", &t).unwrap());
        let bad = parse("[[\\x x] 'A]", &t).unwrap();
        assert_eq!(beta_by_name_restricted(&bad), Err(BetaError::NotAVariable(0)));
    }
}
