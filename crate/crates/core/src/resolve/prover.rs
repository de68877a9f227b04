//! Goal-driven resolution with a set of support.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::clausal::{literals_text, subst_term, Clause, Literal, Term};
use crate::construction::Var;
use crate::reduce::subst::fresh_name;

use super::unify::{unify, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_clauses: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_clauses: 10_000, max_depth: 50 }
    }
}

impl Limits {
    /// Defaults overridden by `TILK_MAX_CLAUSES` and `TILK_MAX_DEPTH`.
    pub fn from_env() -> Self {
        let read = |k: &str| std::env::var(k).ok().and_then(|v| v.parse().ok());
        let d = Limits::default();
        Limits {
            max_clauses: read("TILK_MAX_CLAUSES").unwrap_or(d.max_clauses),
            max_depth: read("TILK_MAX_DEPTH").unwrap_or(d.max_depth),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStatus {
    Proved,
    Exhausted,
    LimitReached,
}

/// A kept resolvent. `tags` holds the answer tuples carried along: one
/// tuple is a definite answer, several form a disjunctive one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub label: String,
    pub literals: Vec<Literal>,
    pub parents: (String, String),
    pub unifier: Substitution,
    pub tags: Vec<Vec<Term>>,
    pub depth: usize,
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}) {}  <- {} + {}", self.label, literals_text(&self.literals), self.parents.0, self.parents.1)?;
        if !self.unifier.is_empty() {
            write!(f, ", {}", self.unifier)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofResult {
    pub status: ProofStatus,
    /// Every kept resolvent, in the order it was derived.
    pub steps: Vec<ProofStep>,
    /// Indices into `steps` of the empty clauses found.
    pub refutations: Vec<usize>,
    /// Bindings of the answer variables read off the first refutation,
    /// when it carries a single answer tuple.
    pub answer: Option<Substitution>,
}

impl ProofResult {
    /// The steps the first refutation depends on, in derivation order.
    pub fn proof(&self) -> Vec<&ProofStep> {
        let Some(&last) = self.refutations.first() else { return Vec::new() };
        let by_label: BTreeMap<&str, usize> = self.steps.iter().enumerate().map(|(i, s)| (s.label.as_str(), i)).collect();
        let mut needed = BTreeSet::new();
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            let (a, b) = &self.steps[i].parents;
            for p in [a, b] {
                if let Some(&j) = by_label.get(p.as_str()) {
                    stack.push(j);
                }
            }
        }
        needed.into_iter().map(|i| &self.steps[i]).collect()
    }

    /// The proof of the first refutation with its steps numbered `R1`,
    /// `R2`, ... in derivation order.
    pub fn numbered_proof(&self) -> Vec<ProofStep> {
        let steps = self.proof();
        let names: BTreeMap<&str, String> =
            steps.iter().enumerate().map(|(i, s)| (s.label.as_str(), format!("R{}", i + 1))).collect();
        let rename = |l: &String| names.get(l.as_str()).cloned().unwrap_or_else(|| l.clone());
        steps
            .iter()
            .map(|s| ProofStep {
                label: rename(&s.label),
                parents: (rename(&s.parents.0), rename(&s.parents.1)),
                ..(*s).clone()
            })
            .collect()
    }

    /// All answer tuples carried by empty clauses, in discovery order.
    pub fn answer_tags(&self) -> Vec<Vec<Term>> {
        let mut out = Vec::new();
        for &i in &self.refutations {
            for t in &self.steps[i].tags {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Kept {
    label: String,
    literals: Vec<Literal>,
    tags: Vec<Vec<Term>>,
    depth: usize,
}

fn clause_vars(lits: &[Literal], tags: &[Vec<Term>]) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for l in lits {
        l.atom.args().for_each(|t| t.variables(&mut out));
    }
    for t in tags.iter().flatten() {
        t.variables(&mut out);
    }
    out
}

/// Renames the variables of `k` that also occur in `avoid`.
fn rename_apart(k: &Kept, avoid: &BTreeSet<Var>) -> Kept {
    let mine = clause_vars(&k.literals, &k.tags);
    let mut used: BTreeSet<Arc<str>> = avoid.iter().chain(&mine).map(|v| v.name.clone()).collect();
    let mut map = Vec::new();
    for v in mine.iter().filter(|v| avoid.iter().any(|a| a.name == v.name)) {
        let n = fresh_name(&v.name, &used);
        used.insert(n.clone());
        map.push((v.clone(), Term::Var(v.renamed(&n))));
    }
    if map.is_empty() {
        return k.clone();
    }
    let s = Substitution(map);
    Kept {
        label: k.label.clone(),
        literals: k.literals.iter().map(|l| s.apply_literal(l)).collect(),
        tags: k.tags.iter().map(|t| t.iter().map(|x| s.apply(x)).collect()).collect(),
        depth: k.depth,
    }
}

fn dedup(lits: Vec<Literal>) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// All binary resolvents of two clauses whose variables are disjoint.
pub fn resolve_step(c1: &[Literal], c2: &[Literal]) -> Vec<(Vec<Literal>, Substitution)> {
    let mut out = Vec::new();
    for (i, l1) in c1.iter().enumerate() {
        for (j, l2) in c2.iter().enumerate() {
            if l1.positive == l2.positive {
                continue;
            }
            let Some(s) = unify(&l1.atom, &l2.atom) else { continue };
            let lits = c1
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, l)| l)
                .chain(c2.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l))
                .map(|l| s.apply_literal(l))
                .collect();
            out.push((dedup(lits), s));
        }
    }
    out
}

fn clashes(a: &[Literal], b: &[Literal]) -> bool {
    a.iter().any(|l| b.iter().any(|m| l.positive != m.positive && l.atom.same_predicate(&m.atom)))
}

fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().any(|l| l.positive && lits.iter().any(|m| !m.positive && m.atom == l.atom))
}

/// Canonical form up to variable renaming, answer tags included.
fn variant_key(lits: &[Literal], tags: &[Vec<Term>]) -> String {
    let mut names: BTreeMap<Var, String> = BTreeMap::new();
    let mut canon = |t: &Term| -> Term {
        let mut vs = BTreeSet::new();
        t.variables(&mut vs);
        let mut order = Vec::new();
        collect_in_order(t, &mut order);
        for v in order {
            let n = names.len();
            names.entry(v).or_insert_with(|| format!("%{n}"));
        }
        let map: Vec<(Var, Term)> = vs.iter().map(|v| (v.clone(), Term::Var(v.renamed(&names[v])))).collect();
        subst_term(t, &map)
    };
    let mut out = String::new();
    for l in lits {
        let a = l.atom.map_terms(&mut canon);
        out.push_str(&format!("{}{a};", if l.positive { "+" } else { "-" }));
    }
    out.push('#');
    for tag in tags {
        for t in tag {
            out.push_str(&format!("{} ", canon(t)));
        }
        out.push(';');
    }
    out
}

fn collect_in_order(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::Const(_) => {}
        Term::App { args, .. } => args.iter().for_each(|a| collect_in_order(a, out)),
    }
}

/// How far the search goes once a refutation is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    FirstRefutation,
    AllRefutations,
}

/// Refutation search. The goal clauses form the set of support; each
/// given clause is resolved against the knowledge base, then against the
/// clauses already processed, then against a renamed copy of itself.
pub fn prove(kb: &[Clause], goal: &[Clause], answer_vars: &[Var], limits: Limits) -> ProofResult {
    prove_with(kb, goal, answer_vars, limits, Search::FirstRefutation)
}

pub fn prove_with(kb: &[Clause], goal: &[Clause], answer_vars: &[Var], limits: Limits, search: Search) -> ProofResult {
    let mut all: Vec<Kept> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let kb_count = kb.len();
    for c in kb {
        seen.insert(variant_key(&c.literals, &[]));
        all.push(Kept { label: c.label.clone(), literals: c.literals.clone(), tags: Vec::new(), depth: 0 });
    }
    let tag: Vec<Term> = answer_vars.iter().cloned().map(Term::Var).collect();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut result = ProofResult { status: ProofStatus::Exhausted, steps: Vec::new(), refutations: Vec::new(), answer: None };
    for c in goal {
        let tags = if tag.is_empty() { Vec::new() } else { vec![tag.clone()] };
        if !seen.insert(variant_key(&c.literals, &tags)) {
            continue;
        }
        queue.push_back(all.len());
        all.push(Kept { label: c.label.clone(), literals: c.literals.clone(), tags, depth: 0 });
        if c.literals.is_empty() {
            result.status = ProofStatus::Proved;
            return result;
        }
    }
    let mut processed: Vec<usize> = Vec::new();
    let mut limited = false;
    // Answers already found; clauses that can only repeat them are dropped.
    let mut found: HashSet<Vec<Term>> = HashSet::new();
    while let Some(g) = queue.pop_front() {
        let given = all[g].clone();
        let given_vars = clause_vars(&given.literals, &given.tags);
        let partners: Vec<usize> = (0..kb_count).chain(processed.iter().copied()).chain(std::iter::once(g)).collect();
        for p in partners {
            if !clashes(&given.literals, &all[p].literals) {
                continue;
            }
            let partner = rename_apart(&all[p], &given_vars);
            for (lits, s) in resolve_step(&given.literals, &partner.literals) {
                if is_tautology(&lits) {
                    continue;
                }
                let mut tags: Vec<Vec<Term>> = Vec::new();
                for t in given.tags.iter().chain(&partner.tags) {
                    let t: Vec<Term> = t.iter().map(|x| s.apply(x)).collect();
                    if !tags.contains(&t) {
                        tags.push(t);
                    }
                }
                if search == Search::AllRefutations && !tags.is_empty() && tags.iter().all(|t| found.contains(t)) {
                    continue;
                }
                if !seen.insert(variant_key(&lits, &tags)) {
                    continue;
                }
                let depth = given.depth.max(partner.depth) + 1;
                if depth > limits.max_depth {
                    limited = true;
                    continue;
                }
                if all.len() >= limits.max_clauses {
                    result.status = if result.refutations.is_empty() { ProofStatus::LimitReached } else { ProofStatus::Proved };
                    return finish(result, answer_vars);
                }
                let label = format!("R{}", result.steps.len() + 1);
                let shown = s.restricted(|v| given_vars.contains(v) || clause_vars(&partner.literals, &partner.tags).contains(v));
                result.steps.push(ProofStep {
                    label: label.clone(),
                    literals: lits.clone(),
                    parents: (given.label.clone(), partner.label.clone()),
                    unifier: shown,
                    tags: tags.clone(),
                    depth,
                });
                let empty = lits.is_empty();
                all.push(Kept { label, literals: lits, tags, depth });
                if empty {
                    result.refutations.push(result.steps.len() - 1);
                    let last = &result.steps[result.steps.len() - 1];
                    found.extend(last.tags.iter().filter(|t| t.iter().all(Term::is_ground)).cloned());
                    if search == Search::FirstRefutation {
                        result.status = ProofStatus::Proved;
                        return finish(result, answer_vars);
                    }
                } else {
                    queue.push_back(all.len() - 1);
                }
            }
        }
        processed.push(g);
    }
    result.status = if !result.refutations.is_empty() {
        ProofStatus::Proved
    } else if limited {
        ProofStatus::LimitReached
    } else {
        ProofStatus::Exhausted
    };
    finish(result, answer_vars)
}

fn finish(mut r: ProofResult, answer_vars: &[Var]) -> ProofResult {
    if let Some(&i) = r.refutations.first() {
        if let [tag] = r.steps[i].tags.as_slice() {
            r.answer = Some(Substitution(answer_vars.iter().cloned().zip(tag.iter().cloned()).collect()));
        }
    }
    r
}

/// Instantiates goal clauses with one answer tuple.
pub fn instantiate_goal(goal: &[Clause], answer_vars: &[Var], tuple: &[Term]) -> Vec<Clause> {
    let s = Substitution(answer_vars.iter().cloned().zip(tuple.iter().cloned()).collect());
    goal.iter()
        .map(|c| Clause {
            label: c.label.clone(),
            origin: c.origin.clone(),
            literals: c.literals.iter().map(|l| s.apply_literal(l)).collect(),
        })
        .collect()
}

/// Answers to a wh-question: the tuples found on every refutation within
/// the limits, each confirmed by a proof of its own. Members of
/// disjunctive answers are tried one by one.
pub fn answer_who(kb: &[Clause], goal: &[Clause], answer_vars: &[Var], limits: Limits) -> Vec<Vec<Term>> {
    if answer_vars.is_empty() {
        return Vec::new();
    }
    let all = prove_with(kb, goal, answer_vars, limits, Search::AllRefutations);
    let mut out: Vec<Vec<Term>> = Vec::new();
    for tuple in all.answer_tags() {
        if out.contains(&tuple) || !tuple.iter().all(Term::is_ground) {
            continue;
        }
        let inst = instantiate_goal(goal, answer_vars, &tuple);
        if prove(kb, &inst, &[], limits).status == ProofStatus::Proved {
            out.push(tuple);
        }
    }
    out
}
