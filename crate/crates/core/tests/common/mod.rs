//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use tilk::clausal::{Clause, Literal};
use tilk::{Builtin, Construction, Entity, Number, SymbolTable, TilType, Var};

pub fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).expect("bundled data file")
}

pub fn prop(args: Vec<TilType>) -> TilType {
    TilType::intension(TilType::func(TilType::o(), args))
}

/// Symbols used by the random constructions and the golden corpus.
pub fn table() -> SymbolTable {
    let mut t = SymbolTable::standard();
    for n in ["Tom", "Ann"] {
        t.declare(n, TilType::iota()).unwrap();
    }
    t.declare("P", TilType::func(TilType::o(), vec![TilType::iota()])).unwrap();
    t.declare("Q", prop(vec![TilType::iota()])).unwrap();
    t.declare("Calculate", prop(vec![TilType::iota(), TilType::order(1)])).unwrap();
    t.declare_var(Var::new("x", TilType::iota())).unwrap();
    t.declare_var(Var::new("y", TilType::iota())).unwrap();
    t.declare_var(Var::new("n", TilType::tau())).unwrap();
    t.declare_var(Var::over_constructions("c", 1, TilType::tau())).unwrap();
    t
}

/// At least one construction of each of the six kinds, with the surface
/// forms the printer produces.
pub const CORPUS: &[&str] = &[
    "x",
    "w",
    "c",
    "m:tau",
    "d:*2->tau",
    "'Tom",
    "'pi",
    "'3",
    "'-7",
    "'True",
    "'Cot",
    "'['Cot 'pi]",
    "''Tom",
    "'[\\x ['P x]]",
    "['Cot 'pi]",
    "['+ '1 '2]",
    "['P 'Tom]",
    "['= 'Tom 'Ann]",
    "['And ['P 'Tom] ['Not ['P 'Ann]]]",
    "['Implies ['P x] ['Equiv ['P y] ['P x]]]",
    "['P ^2 'c]",
    "[[\\x ['P x]] 'Tom]",
    "\\x ['P x]",
    "\\x,y ['= x y]",
    "\\x \\y ['= x y]",
    "\\n ['Cot n]",
    "\\w \\t ['Q_wt 'Tom]",
    "\\w \\t 'Q_wt",
    "\\w \\t ['Calculate_wt 'Tom '['Cot 'pi]]",
    "\\w \\t ['Exists \\y ['Calculate_wt 'Tom ['Sub ['Tr y] 'n '['Cot n]]]]",
    "\\w \\t ['Forall \\x ['Implies ['Q_wt x] ['P x]]]",
    "\\w \\t \\x ['Q_wt x]",
    "\\w \\t '['Q_wt 'Tom]",
    "\\t [['Q w] t]",
    "^1 ''Tom",
    "^1 '['Cot 'pi]",
    "^1 'x",
    "^2 c",
    "^2 'c",
    "^2 '['+ '1 '1]",
    "^2 ^2 ''['Cot 'pi]",
    "^2 ['Sub ['Tr '2] 'n '['Cot n]]",
    "^2 ['Istar \\c ['And ['P 'Tom] ['= c '['Cot 'pi]]]]",
    "['Istar \\c ['= c '['+ '1 '2]]]",
    "['Tr 'pi]",
    "['Exists \\x ['P x]]",
    "['All \\x ['P x]]",
    "[['All \\x ['P x]] \\y ['P y]]",
];

const IOTA: [&str; 2] = ["Tom", "Ann"];

fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn random_var(rng: &mut impl Rng) -> Var {
    match rng.gen_range(0..7) {
        0 => Var::new("x", TilType::iota()),
        1 => Var::new("y", TilType::iota()),
        2 => Var::new("n", TilType::tau()),
        3 => Var::new("w", TilType::omega()),
        4 => Var::new("t", TilType::tau()),
        5 => Var::over_constructions("c", 1, TilType::tau()),
        _ => Var::new("m", TilType::func(TilType::o(), vec![TilType::iota()])),
    }
}

fn random_entity(rng: &mut impl Rng) -> Entity {
    match rng.gen_range(0..7) {
        0 => Entity::individual(pick(rng, &IOTA)),
        1 => Entity::Number(Number::int(rng.gen_range(-20..20))),
        2 => Entity::Number(Number::pi()),
        3 => Entity::Builtin(*pick(rng, &Builtin::ALL)),
        4 => Entity::Truth(rng.gen()),
        5 => Entity::named("P", TilType::func(TilType::o(), vec![TilType::iota()])),
        _ => Entity::named("Q", prop(vec![TilType::iota()])),
    }
}

/// A random construction, not necessarily well typed, of the given depth.
pub fn random_construction<R: Rng>(rng: &mut R, depth: u32) -> Construction {
    if depth == 0 {
        return if rng.gen_bool(0.5) { Construction::Var(random_var(rng)) } else { Construction::Triv(random_entity(rng)) };
    }
    let sub = |rng: &mut R| {
        let d = rng.gen_range(0..depth);
        random_construction(rng, d)
    };
    match rng.gen_range(0..9) {
        0 => Construction::Var(random_var(rng)),
        1 => Construction::Triv(random_entity(rng)),
        2 => Construction::display(sub(rng)),
        3 | 4 => {
            let head = sub(rng);
            let n = match &head {
                Construction::Triv(Entity::Builtin(b)) => b.arity(),
                Construction::Triv(e) => match e.ty().as_ref().and_then(|t| t.as_func().map(|(_, a)| a.len())) {
                    Some(k) => k,
                    None => rng.gen_range(1..=3),
                },
                _ => rng.gen_range(1..=3),
            };
            let args = (0..n).map(|_| sub(rng)).collect();
            Construction::Comp(Box::new(head), args)
        }
        5 | 6 => {
            let mut params: Vec<Var> = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let v = random_var(rng);
                if !params.iter().any(|p| p.name == v.name) {
                    params.push(v);
                }
            }
            Construction::Closure(params, Box::new(sub(rng)))
        }
        7 => Construction::Exec1(if rng.gen_bool(0.5) { Entity::construction(sub(rng)) } else { random_entity(rng) }),
        _ => Construction::exec2(sub(rng)),
    }
}

/// Arithmetic over `tau` with closures applied to arguments, mirrored by
/// a direct interpreter.
#[derive(Debug, Clone)]
pub enum Expr {
    Lit(i64),
    Var(usize),
    Op(Builtin, Box<Expr>, Box<Expr>),
    /// `['Cot 'pi]`: no value.
    CotPi,
    /// `['Cot ['/ 'pi '4]]`: one.
    CotQuarterPi,
    /// `[\v_k BODY] ARG` where `v_k` is the next variable.
    Apply(Box<Expr>, Box<Expr>),
}

const OPS: [Builtin; 4] = [Builtin::Add, Builtin::Subtract, Builtin::Multiply, Builtin::Divide];

/// A random expression of depth at most `depth` over `bound` variables.
/// `partial` allows the improper leaf.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32, bound: usize, partial: bool) -> Expr {
    let leaf = |rng: &mut R| -> Expr {
        match rng.gen_range(0..10) {
            0 if partial => Expr::CotPi,
            1 => Expr::CotQuarterPi,
            2..=5 if bound > 0 => Expr::Var(rng.gen_range(0..bound)),
            _ => Expr::Lit(rng.gen_range(-9..10)),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng),
        1 | 2 => Expr::Op(
            *pick(rng, &OPS),
            Box::new(random_expr(rng, depth - 1, bound, partial)),
            Box::new(random_expr(rng, depth - 1, bound, partial)),
        ),
        _ => Expr::Apply(
            Box::new(random_expr(rng, depth - 1, bound + 1, partial)),
            Box::new(random_expr(rng, depth - 1, bound, partial)),
        ),
    }
}

/// An application of a closure at the root.
pub fn random_redex(rng: &mut impl Rng, depth: u32, partial: bool) -> Expr {
    let depth = depth.max(1);
    Expr::Apply(
        Box::new(random_expr(rng, depth - 1, 1, partial)),
        Box::new(random_expr(rng, depth - 1, 0, partial)),
    )
}

pub fn expr_var(i: usize) -> Var {
    Var::new(&format!("v{i}"), TilType::tau())
}

pub fn expr_construction(e: &Expr, bound: usize) -> Construction {
    let num = |n: Number| Construction::triv(Entity::Number(n));
    match e {
        Expr::Lit(n) => num(Number::int(*n)),
        Expr::Var(i) => Construction::var(&expr_var(*i)),
        Expr::Op(b, l, r) => Construction::app(*b, vec![expr_construction(l, bound), expr_construction(r, bound)]),
        Expr::CotPi => Construction::app(Builtin::Cot, vec![num(Number::pi())]),
        Expr::CotQuarterPi => Construction::app(
            Builtin::Cot,
            vec![Construction::app(Builtin::Divide, vec![num(Number::pi()), num(Number::int(4))])],
        ),
        Expr::Apply(body, arg) => Construction::comp(
            Construction::closure(vec![expr_var(bound)], expr_construction(body, bound + 1)),
            vec![expr_construction(arg, bound)],
        ),
    }
}

/// Strict exact-rational interpretation; `None` is improper.
pub fn expr_value(e: &Expr, env: &[num::BigRational]) -> Option<num::BigRational> {
    use num::{BigRational, One, Zero};
    match e {
        Expr::Lit(n) => Some(BigRational::from_integer((*n).into())),
        Expr::Var(i) => Some(env[*i].clone()),
        Expr::CotPi => None,
        Expr::CotQuarterPi => Some(BigRational::one()),
        Expr::Op(b, l, r) => {
            let (l, r) = (expr_value(l, env)?, expr_value(r, env)?);
            match b {
                Builtin::Add => Some(l + r),
                Builtin::Subtract => Some(l - r),
                Builtin::Multiply => Some(l * r),
                _ if r.is_zero() => None,
                _ => Some(l / r),
            }
        }
        Expr::Apply(body, arg) => {
            let a = expr_value(arg, env)?;
            let mut inner = env.to_vec();
            inner.push(a);
            expr_value(body, &inner)
        }
    }
}

/// Whether a computed number equals an exact rational.
pub fn number_is(n: &Number, q: &num::BigRational) -> bool {
    use num::ToPrimitive;
    let f = q.to_f64().unwrap();
    (n.to_f64() - f).abs() <= 1e-9 * f.abs().max(1.0)
}

/// Ground atoms as strings, clauses as signed atom lists.
pub type GroundClause = Vec<(bool, usize)>;

/// Whether some assignment to atoms `0..atoms` satisfies every clause.
pub fn satisfiable(clauses: &[GroundClause], atoms: usize) -> bool {
    (0u32..1 << atoms).any(|m| clauses.iter().all(|c| c.iter().any(|&(pos, a)| ((m >> a) & 1 == 1) == pos)))
}

/// A ground atom over up to three constants and four predicates: two
/// unary (`P`, `Q`), two binary (`R`, `S`).
pub fn ground_atom_names() -> Vec<(String, Vec<String>)> {
    let consts = ["a", "b", "c"];
    let mut out = Vec::new();
    for p in ["P", "Q"] {
        for a in consts {
            out.push((p.to_string(), vec![a.to_string()]));
        }
    }
    for p in ["R", "S"] {
        for a in consts {
            for b in consts {
                out.push((p.to_string(), vec![a.to_string(), b.to_string()]));
            }
        }
    }
    out
}

pub fn ground_literal(pos: bool, atom: &(String, Vec<String>)) -> Literal {
    let ty = TilType::func(TilType::o(), atom.1.iter().map(|_| TilType::iota()).collect());
    Literal {
        positive: pos,
        atom: tilk::clausal::Atom {
            pred: Entity::Named { name: Arc::from(atom.0.as_str()), ty },
            wt: false,
            groups: vec![atom.1.iter().map(|c| tilk::clausal::Term::Const(Entity::individual(c))).collect()],
        },
    }
}

/// Clauses over the atoms `chosen[i]`, labelled `K1`, `K2`, ...
pub fn ground_clauses(set: &[GroundClause], chosen: &[(String, Vec<String>)], prefix: &str) -> Vec<Clause> {
    set.iter()
        .enumerate()
        .map(|(i, c)| Clause {
            label: format!("{prefix}{}", i + 1),
            origin: prefix.to_string(),
            literals: c.iter().map(|&(pos, a)| ground_literal(pos, &chosen[a])).collect(),
        })
        .collect()
}

/// Truth of a ground literal under an assignment keyed by atom text.
pub fn literal_holds(l: &Literal, assignment: &BTreeMap<String, bool>) -> bool {
    assignment[&l.atom.to_string()] == l.positive
}
