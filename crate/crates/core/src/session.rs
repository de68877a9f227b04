//! Sessions over a knowledge base: persistence, question answering and
//! the inspection commands behind the command-line interface.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::clausal::{literals_text, ClausalError, Clause, Clausifier, Term};
use crate::construction::{Builtin, Construction, NodePath};
use crate::context::{classify, export_annotations, matrix, ExportFormat};
use crate::reduce::{as_if_then_else_fail, Evaluator, Model, Valuation};
use crate::resolve::{answer_who, prove, Limits, ProofResult, ProofStatus, ProofStep};
use crate::syntax::{parse, parse_kb, print_kb, print_value, print_with, Decl, KbError, KbFile, ParseError};
use crate::types::TilType;
use crate::typing::{check_kb, infer, KbTypeError, TypeError, TypeErrorKind};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}:{error}")]
    Kb { file: String, error: KbError },
    #[error("{file}:{}{error}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    KbType { file: String, line: Option<usize>, error: KbTypeError },
    #[error("parse error at {}: {}", .0.span, .0.kind)]
    Parse(ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Clausal(#[from] ClausalError),
    #[error("label ({0}) is already in use")]
    DuplicateLabel(String),
    #[error("no statement labelled ({0})")]
    UnknownLabel(String),
    #[error("{0} is not an outer existential variable of the question")]
    UnknownVariable(String),
    #[error("unknown command {0}; try help")]
    UnknownCommand(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("the knowledge base has no query")]
    NoQuery,
}

impl From<ParseError> for SessionError {
    fn from(e: ParseError) -> Self {
        SessionError::Parse(e)
    }
}

/// Output format for traces and annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Xml,
    JsonLines,
}

impl Format {
    fn export(self) -> ExportFormat {
        match self {
            Format::Text => ExportFormat::Text,
            Format::Xml => ExportFormat::Xml,
            Format::JsonLines => ExportFormat::JsonLines,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub limits: Limits,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { limits: Limits::from_env(), format: Format::Text }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
    NoTruthValue,
}

impl Answer {
    pub fn label(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Unknown => "UNKNOWN",
            Answer::NoTruthValue => "NO TRUTH VALUE",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
            Answer::NoTruthValue => 3,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How an answer was reached.
#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    /// A refutation of the negated question (`Yes`) or of the question
    /// itself (`No`), with the steps it used.
    Refutation(Vec<ProofStep>),
    /// Neither refutation succeeded.
    Inconclusive { negated: ProofStatus, plain: ProofStatus },
    /// The question was evaluated in the model at the actual world and time.
    Model { world: String, time: String, value: String },
    /// The presupposition of the question was refuted from the knowledge base.
    PresuppositionRefuted(Vec<ProofStep>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AskReport {
    pub answer: Answer,
    pub justification: Justification,
}

impl AskReport {
    /// The answer followed by its justification in the chosen format.
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        let steps = match &self.justification {
            Justification::Refutation(s) | Justification::PresuppositionRefuted(s) => s.as_slice(),
            _ => &[],
        };
        match format {
            Format::Text => {
                out.push_str(&format!("{}\n", self.answer));
                match &self.justification {
                    Justification::Inconclusive { negated, plain } => {
                        out.push_str(&format!("negated question: {negated:?}; question: {plain:?}\n"));
                    }
                    Justification::Model { world, time, value } => {
                        out.push_str(&format!("evaluated at {world} {time}: {value}\n"));
                    }
                    Justification::PresuppositionRefuted(_) => out.push_str("presupposition refuted:\n"),
                    Justification::Refutation(_) => {}
                }
                for s in steps {
                    out.push_str(&format!("{s}\n"));
                }
            }
            Format::Xml => {
                out.push_str(&format!("<Answer value=\"{}\">\n", self.answer.label()));
                if let Justification::Model { world, time, value } = &self.justification {
                    out.push_str(&format!(
                        "  <Evaluation world=\"{}\" time=\"{}\" value=\"{}\"/>\n",
                        xml(world),
                        xml(time),
                        xml(value)
                    ));
                }
                for s in steps {
                    out.push_str(&format!(
                        "  <Step label=\"{}\" clause=\"{}\" parents=\"{} {}\" substitution=\"{}\"/>\n",
                        xml(&s.label),
                        xml(&literals_text(&s.literals)),
                        xml(&s.parents.0),
                        xml(&s.parents.1),
                        xml(&s.unifier.to_string())
                    ));
                }
                out.push_str("</Answer>\n");
            }
            Format::JsonLines => {
                let mut head = serde_json::json!({ "answer": self.answer.label() });
                if let Justification::Model { world, time, value } = &self.justification {
                    head["world"] = world.as_str().into();
                    head["time"] = time.as_str().into();
                    head["value"] = value.as_str().into();
                }
                out.push_str(&format!("{head}\n"));
                for s in steps {
                    let line = serde_json::json!({
                        "label": s.label,
                        "clause": literals_text(&s.literals),
                        "parents": [s.parents.0, s.parents.1],
                        "substitution": s.unifier.to_string(),
                    });
                    out.push_str(&format!("{line}\n"));
                }
            }
        }
        out
    }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders an answer term without the trivialization mark of constants.
pub fn answer_name(t: &Term) -> String {
    match t {
        Term::Const(_) => t.to_string().trim_start_matches('\'').to_string(),
        _ => t.to_string(),
    }
}

#[derive(Debug, Clone)]
struct ClauseCache {
    clauses: Vec<Clause>,
    clausifier: Clausifier,
}

/// A knowledge base with its derived clause set and settings.
#[derive(Debug, Clone, Default)]
pub struct Session {
    kb: KbFile,
    pub settings: Settings,
    cache: Option<ClauseCache>,
}

impl Session {
    pub fn new() -> Self {
        Session::from_kb(KbFile::default())
    }

    pub fn from_kb(mut kb: KbFile) -> Self {
        if kb.symbols == Default::default() {
            kb.symbols = crate::symbols::SymbolTable::standard();
        }
        Session { kb, settings: Settings::default(), cache: None }
    }

    /// Parses and type-checks knowledge-base text; `file` names it in errors.
    pub fn from_text(text: &str, file: &str) -> Result<Self, SessionError> {
        let kb = parse_kb(text).map_err(|error| SessionError::Kb { file: file.to_string(), error })?;
        check_kb(&kb).map_err(|error| SessionError::KbType {
            file: file.to_string(),
            line: declaration_line(text, &error.label),
            error,
        })?;
        Ok(Session::from_kb(kb))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SessionError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|source| SessionError::Io { path: path.to_path_buf(), source })?;
        Session::from_text(&text, &path.display().to_string())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SessionError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| SessionError::Io { path: path.to_path_buf(), source })
    }

    pub fn to_text(&self) -> String {
        print_kb(&self.kb)
    }

    pub fn kb(&self) -> &KbFile {
        &self.kb
    }

    pub fn model(&self) -> Option<Model> {
        Model::from_kb(&self.kb)
    }

    pub fn assertions(&self) -> Vec<(&str, &Construction)> {
        self.kb.assertions().collect()
    }

    /// Text of the query with the given label, or of the first query.
    pub fn query_text(&self, label: Option<&str>) -> Result<String, SessionError> {
        let mut qs = self.kb.queries();
        let found = match label {
            Some(l) => qs.find(|(q, _)| *q == l).ok_or_else(|| SessionError::UnknownLabel(l.to_string()))?,
            None => qs.next().ok_or(SessionError::NoQuery)?,
        };
        Ok(self.print(found.1))
    }

    pub fn parse(&self, text: &str) -> Result<Construction, SessionError> {
        Ok(parse(text, &self.kb.symbols)?)
    }

    pub fn print(&self, c: &Construction) -> String {
        print_with(c, &self.kb.symbols)
    }

    fn proposition(&self, text: &str) -> Result<Construction, SessionError> {
        let c = self.parse(text)?;
        let d = infer(&c)?;
        if d.assigned != TilType::proposition() {
            return Err(TypeError { kind: TypeErrorKind::NotAProposition(d.assigned.to_string()), path: NodePath::root() }
                .into());
        }
        Ok(c)
    }

    fn label_in_use(&self, label: &str) -> bool {
        self.kb.decls.iter().any(|d| match d {
            Decl::Assert { label: l, .. } | Decl::Query { label: l, .. } => l == label,
            _ => false,
        })
    }

    /// Adds a statement; it must be a proposition and its label unused.
    pub fn assert(&mut self, label: &str, text: &str) -> Result<(), SessionError> {
        if self.label_in_use(label) {
            return Err(SessionError::DuplicateLabel(label.to_string()));
        }
        let construction = self.proposition(text)?;
        self.kb.decls.push(Decl::Assert { label: label.to_string(), construction });
        self.cache = None;
        Ok(())
    }

    pub fn retract(&mut self, label: &str) -> Result<(), SessionError> {
        let before = self.kb.decls.len();
        self.kb.decls.retain(|d| !matches!(d, Decl::Assert { label: l, .. } if l == label));
        if self.kb.decls.len() == before {
            return Err(SessionError::UnknownLabel(label.to_string()));
        }
        self.cache = None;
        Ok(())
    }

    fn cache(&mut self) -> Result<&ClauseCache, SessionError> {
        if self.cache.is_none() {
            let mut clausifier = Clausifier::new();
            let mut clauses = Vec::new();
            for (label, c) in self.kb.assertions() {
                clauses.extend(clausifier.statement(label, c)?);
            }
            self.cache = Some(ClauseCache { clauses, clausifier });
        }
        Ok(self.cache.as_ref().expect("filled above"))
    }

    /// The clausal form of the knowledge base.
    pub fn clauses(&mut self) -> Result<Vec<Clause>, SessionError> {
        Ok(self.cache()?.clauses.clone())
    }

    /// Refutes the negation of `c` from the knowledge base.
    fn prove_entailed(&mut self, c: &Construction) -> Result<ProofResult, SessionError> {
        let limits = self.settings.limits;
        let cache = self.cache()?;
        let goal = cache.clausifier.clone().question(c)?;
        Ok(prove(&cache.clauses, &goal.clauses, &goal.answer_vars, limits))
    }

    /// Refutes `c` itself from the knowledge base.
    fn prove_refuted(&mut self, c: &Construction) -> Result<ProofResult, SessionError> {
        let limits = self.settings.limits;
        let cache = self.cache()?;
        let goal = cache.clausifier.clone().statement("g", c)?;
        Ok(prove(&cache.clauses, &goal, &[], limits))
    }

    /// Answers a yes/no question.
    ///
    /// A question of the form `\w \t` if-P-then-S-else-fail carries the
    /// presupposition `P`. With a model and an actual point it is
    /// evaluated there, a failed presupposition giving no truth value.
    /// Without one, the prover tries `P and S`, then `P and not S`, then
    /// `not P`. Any other question is answered by refuting its negation
    /// (`Yes`) or the question itself (`No`); one without a clausal form
    /// is evaluated in the model when there is one.
    pub fn ask(&mut self, text: &str) -> Result<AskReport, SessionError> {
        let q = self.proposition(text)?;
        if let Some((w, t, body)) = lambda_wt(&q) {
            if let Some((p, s)) = as_if_then_else_fail(body) {
                let (p, s) = (p.clone(), s.clone());
                if let Some(report) = self.ask_in_model(&q) {
                    return Ok(report);
                }
                let wrap = |b: Construction| {
                    Construction::Closure(vec![w.clone()], Box::new(Construction::closure(vec![t.clone()], b)))
                };
                let both = wrap(Construction::app(Builtin::And, vec![p.clone(), s.clone()]));
                let r = self.prove_entailed(&both)?;
                if r.status == ProofStatus::Proved {
                    return Ok(AskReport { answer: Answer::Yes, justification: Justification::Refutation(r.numbered_proof()) });
                }
                let neg = wrap(Construction::app(
                    Builtin::And,
                    vec![p.clone(), Construction::app(Builtin::Not, vec![s])],
                ));
                let r2 = self.prove_entailed(&neg)?;
                if r2.status == ProofStatus::Proved {
                    return Ok(AskReport { answer: Answer::No, justification: Justification::Refutation(r2.numbered_proof()) });
                }
                let r3 = self.prove_refuted(&wrap(p))?;
                if r3.status == ProofStatus::Proved {
                    return Ok(AskReport {
                        answer: Answer::NoTruthValue,
                        justification: Justification::PresuppositionRefuted(r3.numbered_proof()),
                    });
                }
                return Ok(AskReport {
                    answer: Answer::Unknown,
                    justification: Justification::Inconclusive { negated: r.status, plain: r2.status },
                });
            }
        }
        let yes = match self.prove_entailed(&q) {
            Err(SessionError::Clausal(e)) => return self.ask_in_model(&q).ok_or(SessionError::Clausal(e)),
            other => other?,
        };
        if yes.status == ProofStatus::Proved {
            return Ok(AskReport { answer: Answer::Yes, justification: Justification::Refutation(yes.numbered_proof()) });
        }
        let no = self.prove_refuted(&q)?;
        if no.status == ProofStatus::Proved {
            return Ok(AskReport { answer: Answer::No, justification: Justification::Refutation(no.numbered_proof()) });
        }
        Ok(AskReport {
            answer: Answer::Unknown,
            justification: Justification::Inconclusive { negated: yes.status, plain: no.status },
        })
    }

    fn ask_in_model(&self, q: &Construction) -> Option<AskReport> {
        let model = self.model()?;
        let (world, time) = model.actual.clone()?;
        let value = Evaluator::new(&model).at_point(q, &Valuation::new(), &world, &time);
        let (answer, shown) = match &value {
            Ok(e) => match e.as_truth() {
                Some(true) => (Answer::Yes, "T".to_string()),
                Some(false) => (Answer::No, "F".to_string()),
                None => (Answer::Unknown, print_value(Some(e), &self.kb.symbols)),
            },
            Err(imp) => (Answer::NoTruthValue, imp.to_string()),
        };
        Some(AskReport {
            answer,
            justification: Justification::Model { world: world.to_string(), time: time.to_string(), value: shown },
        })
    }

    /// Answers a wh-question: the values of `var`, named by its original
    /// or renamed name, over all verified answers.
    pub fn who(&mut self, text: &str, var: &str) -> Result<Vec<Term>, SessionError> {
        let q = self.proposition(text)?;
        let limits = self.settings.limits;
        let cache = self.cache()?;
        let goal = cache.clausifier.clone().question(&q)?;
        let index = goal
            .answer_vars
            .iter()
            .position(|v| &*v.name == var)
            .or_else(|| goal.original_names.iter().position(|n| &**n == var))
            .ok_or_else(|| SessionError::UnknownVariable(var.to_string()))?;
        let mut out: Vec<Term> = Vec::new();
        for tuple in answer_who(&cache.clauses, &goal.clauses, &goal.answer_vars, limits) {
            if !out.contains(&tuple[index]) {
                out.push(tuple[index].clone());
            }
        }
        Ok(out)
    }

    /// Type derivation of a construction.
    pub fn typecheck(&self, text: &str) -> Result<String, SessionError> {
        let c = self.parse(text)?;
        let d = infer(&c)?;
        Ok(match self.settings.format {
            Format::Text => d.render(),
            Format::Xml => {
                let mut out = String::new();
                for n in d.iter() {
                    out.push_str(&format!(
                        "<Type path=\"{}\" rule=\"{}\" type=\"{}\" construction=\"{}\"/>\n",
                        n.path,
                        n.rule.name(),
                        xml(&n.assigned.to_string()),
                        xml(&self.print(&n.node))
                    ));
                }
                out
            }
            Format::JsonLines => {
                let mut out = String::new();
                for n in d.iter() {
                    let line = serde_json::json!({
                        "path": n.path.to_string(),
                        "rule": n.rule.name(),
                        "type": n.assigned.to_string(),
                        "construction": self.print(&n.node),
                    });
                    out.push_str(&format!("{line}\n"));
                }
                out
            }
        })
    }

    /// Context annotations of a construction, from the matrix below a
    /// leading `\w \t`.
    pub fn context(&self, text: &str) -> Result<String, SessionError> {
        let c = self.parse(text)?;
        infer(&c)?;
        let annotations = classify(&c);
        let (from, _) = matrix(&c);
        Ok(export_annotations(&c, &annotations, &from, self.settings.format.export(), &self.kb.symbols))
    }

    /// The clausal transformation of a statement, stage by stage, using
    /// the binder names left free by the knowledge base.
    pub fn clausal(&mut self, text: &str) -> Result<String, SessionError> {
        let c = self.proposition(text)?;
        let mut clausifier = self.cache()?.clausifier.clone();
        Ok(clausifier.stages(&c, false)?.render())
    }

    /// The knowledge base's clause set, one labelled clause per line.
    pub fn clause_listing(&mut self) -> Result<String, SessionError> {
        let mut out = String::new();
        for c in &self.cache()?.clauses {
            out.push_str(&format!("{c}\n"));
        }
        Ok(out)
    }

    /// Evaluates a closed construction in the model (an empty one when
    /// the knowledge base declares none). A proposition is also evaluated
    /// at the actual world and time when one is declared.
    pub fn eval(&self, text: &str) -> Result<String, SessionError> {
        let c = self.parse(text)?;
        let d = infer(&c)?;
        let model = self.model().unwrap_or_default();
        let ev = Evaluator::new(&model);
        let show = |r: &crate::reduce::EvalResult| match r {
            Ok(e) => print_value(Some(e), &self.kb.symbols),
            Err(imp) => imp.to_string(),
        };
        let value = ev.evaluate(&c, &Valuation::new());
        let mut out = format!("{}\n", show(&value));
        if d.assigned == TilType::proposition() && value.is_ok() {
            if let Some((w, t)) = &model.actual {
                out.push_str(&format!("at {w} {t}: {}\n", show(&ev.at_point(&c, &Valuation::new(), w, t))));
            }
        }
        Ok(out)
    }
}

fn lambda_wt(c: &Construction) -> Option<(crate::construction::Var, crate::construction::Var, &Construction)> {
    crate::clausal::strip_lambda_wt(c).ok()
}

fn declaration_line(text: &str, label: &str) -> Option<usize> {
    let needle = format!("({label})");
    text.lines().position(|l| {
        let l = l.trim_start();
        (l.starts_with("assert") || l.starts_with("query")) && l.contains(&needle)
    })
    .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPORTCLUB: &str = include_str!("../data/sportclub.til");

    #[test]
    fn empty_text_is_an_empty_session() {
        let s = Session::from_text("", "empty.til").unwrap();
        assert!(s.assertions().is_empty());
        assert_eq!(s.to_text(), "");
    }

    #[test]
    fn sportclub_has_six_assertions() {
        let s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        let labels: Vec<&str> = s.assertions().iter().map(|(l, _)| *l).collect();
        assert_eq!(labels, ["a", "b", "c", "d", "e", "f"]);
    }

    #[test]
    fn save_load_save_is_stable() {
        let s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        let once = s.to_text();
        let twice = Session::from_text(&once, "again.til").unwrap().to_text();
        assert_eq!(once, twice);
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let mut s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        assert!(matches!(s.assert("a", "\\w \\t ['Skier_wt 'John]"), Err(SessionError::DuplicateLabel(_))));
    }

    #[test]
    fn assert_and_retract_invalidate_clauses() {
        let mut s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        let before = s.clauses().unwrap().len();
        s.assert("g", "\\w \\t ['Skier_wt 'John]").unwrap();
        assert_eq!(s.clauses().unwrap().len(), before + 1);
        s.retract("g").unwrap();
        assert_eq!(s.clauses().unwrap().len(), before);
        assert!(matches!(s.retract("g"), Err(SessionError::UnknownLabel(_))));
    }

    #[test]
    fn type_errors_name_the_line() {
        let text = "entity Tom : iota\nentity Skier : (o iota)@tw\n\nassert (a) \\w \\t ['Skier_wt 'Skier]\n";
        let e = Session::from_text(text, "bad.til").unwrap_err();
        assert!(e.to_string().starts_with("bad.til:line 4: a: "), "{e}");
    }

    #[test]
    fn tom_is_not_a_climber() {
        let mut s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        assert_eq!(s.ask("\\w \\t ['Climber_wt 'Tom]").unwrap().answer, Answer::No);
        assert_eq!(s.ask("\\w \\t ['Skier_wt 'Tom]").unwrap().answer, Answer::Yes);
    }

    #[test]
    fn unknown_when_nothing_follows() {
        let mut s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        assert_eq!(s.ask("\\w \\t ['Skier_wt 'John]").unwrap().answer, Answer::Unknown);
    }

    #[test]
    fn who_accepts_original_name_only_for_answer_variables() {
        let mut s = Session::from_text(SPORTCLUB, "sportclub.til").unwrap();
        let q = s.kb().queries().next().unwrap().1.clone();
        let text = s.print(&q);
        let names: Vec<String> = s.who(&text, "x").unwrap().iter().map(answer_name).collect();
        assert_eq!(names, ["Peter"]);
        assert!(matches!(s.who(&text, "nope"), Err(SessionError::UnknownVariable(_))));
    }

    #[test]
    fn questions_without_clausal_form_fall_back_to_the_model() {
        let mut s = Session::from_text(include_str!("../data/calculate.til"), "calculate.til").unwrap();
        let q = s.query_text(None).unwrap();
        let r = s.ask(&q).unwrap();
        assert_eq!(r.answer, Answer::Yes);
        assert!(matches!(r.justification, Justification::Model { .. }));
    }

    #[test]
    fn cot_pi_is_improper() {
        let s = Session::new();
        assert_eq!(s.eval("['Cot 'pi]").unwrap(), "IMPROPER: undefined-application\n");
    }
}
