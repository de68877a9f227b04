mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilk::clausal::{Clausifier, Term};
use tilk::reduce::{beta_by_value, evaluate, Model, Valuation};
use tilk::resolve::{prove, unify, Limits, ProofStatus};
use tilk::syntax::parse;
use tilk::{Construction, Entity, TilType, Var};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn type_order(t: &TilType) -> u32 {
    match t {
        TilType::Base(_) => 1,
        TilType::Order(n) => n + 1,
        TilType::Func(r, args) => args.iter().map(type_order).fold(type_order(r), u32::max),
    }
}

fn order(c: &Construction) -> u32 {
    let entity = |e: &Entity| match e {
        Entity::Construction(d) => order(d) + 1,
        _ => 1,
    };
    match c {
        Construction::Var(v) => type_order(&v.ty),
        Construction::Triv(e) | Construction::Exec1(e) => entity(e),
        Construction::Comp(h, args) => args.iter().map(order).fold(order(h), u32::max),
        Construction::Closure(ps, b) => ps.iter().map(|p| type_order(&p.ty)).fold(order(b), u32::max),
        Construction::Exec2(x) => order(x) + 1,
    }
}

/// Variables occurring free, displayed payloads excluded.
fn free(c: &Construction) -> BTreeSet<Var> {
    match c {
        Construction::Var(v) => BTreeSet::from([v.clone()]),
        Construction::Triv(_) => BTreeSet::new(),
        Construction::Exec1(Entity::Construction(d)) => free(d),
        Construction::Exec1(_) => BTreeSet::new(),
        Construction::Comp(h, args) => args.iter().flat_map(free).chain(free(h)).collect(),
        Construction::Closure(ps, b) => free(b).into_iter().filter(|v| !ps.contains(v)).collect(),
        Construction::Exec2(x) => free(x),
    }
}

/// Renames the parameters of every closure to fresh names.
fn rename_binders(c: &Construction, n: &mut usize, env: &[(Var, Var)]) -> Construction {
    match c {
        Construction::Var(v) => match env.iter().rev().find(|(a, _)| a == v) {
            Some((_, b)) => Construction::Var(b.clone()),
            None => c.clone(),
        },
        Construction::Triv(Entity::Construction(d)) => Construction::display(rename_binders(d, n, &[])),
        Construction::Exec1(Entity::Construction(d)) => Construction::Exec1(Entity::construction(rename_binders(d, n, env))),
        Construction::Triv(_) | Construction::Exec1(_) => c.clone(),
        Construction::Comp(h, args) => Construction::Comp(
            Box::new(rename_binders(h, n, env)),
            args.iter().map(|a| rename_binders(a, n, env)).collect(),
        ),
        Construction::Closure(ps, b) => {
            let mut inner = env.to_vec();
            let mut fresh = Vec::new();
            for p in ps {
                *n += 1;
                let q = p.renamed(&format!("r{n}"));
                inner.push((p.clone(), q.clone()));
                fresh.push(q);
            }
            Construction::Closure(fresh, Box::new(rename_binders(b, n, &inner)))
        }
        Construction::Exec2(x) => Construction::exec2(rename_binders(x, n, env)),
    }
}

fn agrees(result: &tilk::reduce::EvalResult, oracle: &Option<num::BigRational>) -> bool {
    match (result, oracle) {
        (Ok(Entity::Number(n)), Some(q)) => number_is(n, q),
        (Err(_), None) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn order_follows_the_definition(seed in any::<u64>(), depth in 0u32..6) {
        let c = random_construction(&mut rng(seed), depth);
        prop_assert_eq!(c.order(), order(&c));
        prop_assert_eq!(Construction::display(c.clone()).order(), order(&c) + 1);
    }

    #[test]
    fn free_variables_follow_the_definition(seed in any::<u64>(), depth in 0u32..6) {
        let c = random_construction(&mut rng(seed), depth);
        prop_assert_eq!(c.free_variables(), free(&c));
        prop_assert!(Construction::display(c).free_variables().is_empty());
    }

    #[test]
    fn renaming_binders_preserves_alpha_equivalence(seed in any::<u64>(), depth in 0u32..6) {
        let c = random_construction(&mut rng(seed), depth);
        let r = rename_binders(&c, &mut 0, &[]);
        prop_assert!(c.alpha_equivalent(&r));
        prop_assert_eq!(c.alpha_normalized(), r.alpha_normalized());
        prop_assert_eq!(c.alpha_normalized().alpha_normalized(), c.alpha_normalized());
    }

    #[test]
    fn evaluation_matches_the_arithmetic_oracle(seed in any::<u64>(), depth in 0u32..6) {
        let e = random_expr(&mut rng(seed), depth, 0, true);
        let c = expr_construction(&e, 0);
        let got = evaluate(&c, &Valuation::new(), &Model::default());
        prop_assert!(agrees(&got, &expr_value(&e, &[])), "{:?} vs {:?}", got, expr_value(&e, &[]));
    }

    #[test]
    fn composition_is_strict(seed in any::<u64>(), depth in 0u32..4) {
        let e = random_expr(&mut rng(seed), depth, 0, false);
        let c = Construction::app(tilk::Builtin::Add, vec![expr_construction(&e, 0), expr_construction(&Expr::CotPi, 0)]);
        prop_assert!(evaluate(&c, &Valuation::new(), &Model::default()).is_err());
    }

    #[test]
    fn double_execution_cancels_display(seed in any::<u64>(), depth in 0u32..5) {
        let c = expr_construction(&random_expr(&mut rng(seed), depth, 0, true), 0);
        let m = Model::default();
        let direct = evaluate(&c, &Valuation::new(), &m);
        let via = evaluate(&Construction::exec2(Construction::display(c)), &Valuation::new(), &m);
        prop_assert_eq!(direct.is_ok(), via.is_ok());
        if let (Ok(Entity::Number(a)), Ok(Entity::Number(b))) = (&direct, &via) {
            prop_assert!(a.numeric_eq(b));
        }
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn beta_by_value_preserves_values(seed in any::<u64>(), depth in 1u32..6, partial in any::<bool>()) {
        let e = random_redex(&mut rng(seed), depth, partial);
        let c = expr_construction(&e, 0);
        let reduced = beta_by_value(&c).unwrap();
        let oracle = expr_value(&e, &[]);
        let m = Model::default();
        prop_assert!(agrees(&evaluate(&c, &Valuation::new(), &m), &oracle));
        prop_assert!(agrees(&evaluate(&reduced, &Valuation::new(), &m), &oracle));
    }
}

#[derive(Debug, Clone)]
enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    Bin(&'static str, Box<Prop>, Box<Prop>),
}

const ATOMS: [&str; 4] = ["['P_wt 'a]", "['P_wt 'b]", "['Q_wt 'a]", "['R_wt 'a 'b]"];

fn random_prop(r: &mut impl Rng, depth: u32) -> Prop {
    if depth == 0 || r.gen_range(0..4) == 0 {
        return Prop::Atom(r.gen_range(0..ATOMS.len()));
    }
    if r.gen_range(0..5) == 0 {
        return Prop::Not(Box::new(random_prop(r, depth - 1)));
    }
    let op = ["And", "Or", "Implies", "Equiv"][r.gen_range(0..4)];
    Prop::Bin(op, Box::new(random_prop(r, depth - 1)), Box::new(random_prop(r, depth - 1)))
}

fn prop_text(p: &Prop) -> String {
    match p {
        Prop::Atom(i) => ATOMS[*i].to_string(),
        Prop::Not(x) => format!("['Not {}]", prop_text(x)),
        Prop::Bin(op, a, b) => format!("['{op} {} {}]", prop_text(a), prop_text(b)),
    }
}

fn prop_holds(p: &Prop, m: u32) -> bool {
    match p {
        Prop::Atom(i) => (m >> i) & 1 == 1,
        Prop::Not(x) => !prop_holds(x, m),
        Prop::Bin(op, a, b) => {
            let (a, b) = (prop_holds(a, m), prop_holds(b, m));
            match *op {
                "And" => a && b,
                "Or" => a || b,
                "Implies" => !a || b,
                _ => a == b,
            }
        }
    }
}

fn scenario_table() -> tilk::SymbolTable {
    let mut t = tilk::SymbolTable::standard();
    for n in ["a", "b"] {
        t.declare(n, TilType::iota()).unwrap();
    }
    t.declare("P", prop(vec![TilType::iota()])).unwrap();
    t.declare("Q", prop(vec![TilType::iota()])).unwrap();
    t.declare("R", prop(vec![TilType::iota(), TilType::iota()])).unwrap();
    t
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn clausal_form_has_the_same_truth_table(seed in any::<u64>(), depth in 0u32..5) {
        let p = random_prop(&mut rng(seed), depth);
        let c = parse(&format!("\\w \\t {}", prop_text(&p)), &scenario_table()).unwrap();
        let clauses = Clausifier::new().statement("k", &c).unwrap();
        for m in 0u32..1 << ATOMS.len() {
            let assignment: BTreeMap<String, bool> =
                ATOMS.iter().enumerate().map(|(i, a)| (a.to_string(), (m >> i) & 1 == 1)).collect();
            let cnf = clauses.iter().all(|cl| cl.literals.iter().any(|l| literal_holds(l, &assignment)));
            prop_assert_eq!(cnf, prop_holds(&p, m), "{}", prop_text(&p));
        }
    }
}

fn random_ground_set(r: &mut impl Rng, atoms: usize) -> Vec<GroundClause> {
    (0..r.gen_range(1..=6))
        .map(|_| {
            let mut c: GroundClause = Vec::new();
            for _ in 0..r.gen_range(1..=3) {
                let lit = (r.gen_bool(0.5), r.gen_range(0..atoms));
                if !c.contains(&lit) {
                    c.push(lit);
                }
            }
            c
        })
        .collect()
}

fn chosen_atoms(r: &mut impl Rng, k: usize) -> Vec<(String, Vec<String>)> {
    let mut all = ground_atom_names();
    let mut out = Vec::new();
    while out.len() < k {
        out.push(all.remove(r.gen_range(0..all.len())));
    }
    out
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn prover_agrees_with_truth_tables(seed in any::<u64>(), atoms in 1usize..5) {
        let mut r = rng(seed);
        let set = random_ground_set(&mut r, atoms);
        let chosen = chosen_atoms(&mut r, atoms);
        let clauses = ground_clauses(&set, &chosen, "K");
        let result = prove(&[], &clauses, &[], Limits::default());
        prop_assert_eq!(result.status == ProofStatus::Proved, !satisfiable(&set, atoms));
        prop_assert!(result.status != ProofStatus::LimitReached);
    }

    #[test]
    fn every_resolvent_follows_from_its_parents(seed in any::<u64>(), atoms in 1usize..5) {
        let mut r = rng(seed);
        let set = random_ground_set(&mut r, atoms);
        let chosen = chosen_atoms(&mut r, atoms);
        let clauses = ground_clauses(&set, &chosen, "K");
        let result = prove(&[], &clauses, &[], Limits::default());
        let mut by_label: BTreeMap<String, Vec<tilk::clausal::Literal>> =
            clauses.iter().map(|c| (c.label.clone(), c.literals.clone())).collect();
        for s in &result.steps {
            by_label.insert(s.label.clone(), s.literals.clone());
        }
        let names: Vec<String> = chosen.iter().map(|a| ground_literal(true, a).atom.to_string()).collect();
        for s in &result.steps {
            let (p1, p2) = (&by_label[&s.parents.0], &by_label[&s.parents.1]);
            for m in 0u32..1 << atoms {
                let asg: BTreeMap<String, bool> =
                    names.iter().enumerate().map(|(i, n)| (n.clone(), (m >> i) & 1 == 1)).collect();
                let sat = |c: &[tilk::clausal::Literal]| c.iter().any(|l| literal_holds(l, &asg));
                prop_assert!(!(sat(p1) && sat(p2)) || sat(&s.literals), "{}", s);
            }
        }
    }

    #[test]
    fn prover_is_deterministic(seed in any::<u64>(), atoms in 1usize..5) {
        let mut r = rng(seed);
        let set = random_ground_set(&mut r, atoms);
        let chosen = chosen_atoms(&mut r, atoms);
        let clauses = ground_clauses(&set, &chosen, "K");
        prop_assert_eq!(prove(&[], &clauses, &[], Limits::default()), prove(&[], &clauses, &[], Limits::default()));
    }
}

fn random_term(r: &mut impl Rng, depth: u32) -> Term {
    let f = Entity::Skolem { name: "f".into(), ty: TilType::func(TilType::iota(), vec![TilType::iota()]) };
    match r.gen_range(0..if depth == 0 { 2 } else { 3 }) {
        0 => Term::Var(Var::new(["x", "y", "z"][r.gen_range(0..3)], TilType::iota())),
        1 => Term::Const(Entity::individual(["a", "b"][r.gen_range(0..2)])),
        _ => Term::App { func: f, wt: false, args: vec![random_term(r, depth - 1)], ty: TilType::iota() },
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn unifiers_make_atoms_equal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pred = Entity::named("R", TilType::func(TilType::o(), vec![TilType::iota(), TilType::iota()]));
        let atom = |r: &mut ChaCha8Rng| tilk::clausal::Atom {
            pred: pred.clone(),
            wt: false,
            groups: vec![vec![random_term(r, 2), random_term(r, 2)]],
        };
        let (a, b) = (atom(&mut r), atom(&mut r));
        if let Some(s) = unify(&a, &b) {
            let (sa, sb) = (s.apply_atom(&a), s.apply_atom(&b));
            prop_assert_eq!(&sa, &sb);
            prop_assert_eq!(s.apply_atom(&sa), sa);
        }
    }
}

