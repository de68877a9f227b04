//! Context recognition: every occurrence is hyperintensional, intensional
//! or extensional.
//!
//! A Trivialization of a construction displays its payload, and everything
//! below a displayed construction is displayed too. `^2 'C` cancels the
//! display, so `C` is classified as if it stood where the Double Execution
//! stands. An executed constituent has extensional supposition when it is
//! the head of a Composition; it is extensional when, in addition, none of
//! the arguments of that Composition mentions a variable bound by a Closure
//! that is not itself applied (a λ-generic context). The variables of a
//! top-level `\w \t` never make a context generic.

use std::collections::BTreeSet;
use std::fmt;

use crate::construction::{Construction, Entity, NodePath, Var};
use crate::symbols::SymbolTable;
use crate::syntax::print_with;
use crate::types::{BaseType, TilType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextKind {
    Hyperintensional,
    Intensional,
    Extensional,
}

impl ContextKind {
    pub fn label(self) -> &'static str {
        match self {
            ContextKind::Hyperintensional => "HYPERINTENSIONAL",
            ContextKind::Intensional => "INTENSIONAL",
            ContextKind::Extensional => "EXTENSIONAL",
        }
    }
}

impl fmt::Display for ContextKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Supposition {
    Extensional,
    Intensional,
    /// Displayed occurrences have no supposition.
    NotApplicable,
}

impl Supposition {
    pub fn label(self) -> &'static str {
        match self {
            Supposition::Extensional => "extensional",
            Supposition::Intensional => "intensional",
            Supposition::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextAnnotation {
    pub path: NodePath,
    pub kind: ContextKind,
    pub supposition: Supposition,
    pub generic: bool,
}

/// How a node is used by its parent.
#[derive(Clone, Copy)]
struct Role<'a> {
    /// Arguments supplied when the node is the head of a Composition.
    applied_to: Option<&'a [Construction]>,
}

struct Classifier {
    out: Vec<ContextAnnotation>,
    /// Variables bound by unapplied closures, innermost last.
    generic: Vec<Var>,
    /// Variables of the top-level `\w \t`.
    exempt: BTreeSet<Var>,
}

/// Annotates every node of `c`, in preorder.
pub fn classify(c: &Construction) -> Vec<ContextAnnotation> {
    let mut k = Classifier { out: Vec::new(), generic: Vec::new(), exempt: top_pair(c).into_iter().collect() };
    k.executed(c, &NodePath::root(), Role { applied_to: None });
    k.out
}

fn top_pair(c: &Construction) -> Vec<Var> {
    let is = |v: &Var, b: BaseType| v.ty == TilType::Base(b);
    match c {
        Construction::Closure(ws, body) => match (ws.as_slice(), body.as_ref()) {
            ([w, t], _) if is(w, BaseType::World) && is(t, BaseType::Real) => vec![w.clone(), t.clone()],
            ([w], Construction::Closure(ts, _)) if is(w, BaseType::World) => match ts.as_slice() {
                [t] if is(t, BaseType::Real) => vec![w.clone(), t.clone()],
                _ => Vec::new(),
            },
            _ => Vec::new(),
        },
        _ => Vec::new(),
    }
}

/// The body under a top-level `\w \t`, with its path; `c` itself otherwise.
pub fn matrix(c: &Construction) -> (NodePath, &Construction) {
    if top_pair(c).is_empty() {
        return (NodePath::root(), c);
    }
    match c {
        Construction::Closure(ps, body) if ps.len() == 2 => (NodePath::root().child(0), body),
        Construction::Closure(_, body) => match body.as_ref() {
            Construction::Closure(_, inner) => (NodePath::root().child(0).child(0), inner),
            _ => unreachable!("top_pair checked the shape"),
        },
        _ => unreachable!("top_pair checked the shape"),
    }
}

impl Classifier {
    fn push(&mut self, path: &NodePath, kind: ContextKind, supposition: Supposition, generic: bool) {
        self.out.push(ContextAnnotation { path: path.clone(), kind, supposition, generic });
    }

    fn is_generic(&self, args: &[Construction]) -> bool {
        args.iter().any(|a| a.free_variables().iter().any(|v| self.generic.contains(v) && !self.exempt.contains(v)))
    }

    fn executed(&mut self, c: &Construction, path: &NodePath, role: Role<'_>) {
        let (supposition, generic) = match role.applied_to {
            Some(args) => (Supposition::Extensional, self.is_generic(args)),
            None => (Supposition::Intensional, false),
        };
        let kind = if supposition == Supposition::Extensional && !generic {
            ContextKind::Extensional
        } else {
            ContextKind::Intensional
        };
        self.push(path, kind, supposition, generic);
        match c {
            Construction::Var(_) => {}
            Construction::Triv(Entity::Construction(inner)) => self.displayed(inner, &path.child(0)),
            Construction::Triv(_) => {}
            Construction::Exec1(Entity::Construction(inner)) => self.executed(inner, &path.child(0), role),
            Construction::Exec1(_) => {}
            Construction::Comp(h, args) => {
                self.executed(h, &path.child(0), Role { applied_to: Some(args) });
                for (i, a) in args.iter().enumerate() {
                    self.executed(a, &path.child(i + 1), Role { applied_to: None });
                }
            }
            Construction::Closure(ps, body) => {
                let n = self.generic.len();
                if role.applied_to.is_none() {
                    self.generic.extend(ps.iter().cloned());
                }
                self.executed(body, &path.child(0), Role { applied_to: None });
                self.generic.truncate(n);
            }
            Construction::Exec2(x) => match x.as_ref() {
                Construction::Triv(Entity::Construction(inner)) => {
                    // the Trivialization is executed to yield `inner`, which is executed in turn
                    self.push(&path.child(0), ContextKind::Intensional, Supposition::Intensional, false);
                    self.executed(inner, &path.child(0).child(0), role);
                }
                _ => self.executed(x, &path.child(0), Role { applied_to: None }),
            },
        }
    }

    fn displayed(&mut self, c: &Construction, path: &NodePath) {
        self.push(path, ContextKind::Hyperintensional, Supposition::NotApplicable, false);
        for (i, ch) in c.children().into_iter().enumerate() {
            self.displayed(ch, &path.child(i));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Xml,
    Text,
    JsonLines,
}

fn element(c: &Construction) -> &'static str {
    match c {
        Construction::Var(_) => "Variable",
        Construction::Triv(_) => "Trivialisation",
        Construction::Comp(..) => "Composition",
        Construction::Closure(..) => "Closure",
        Construction::Exec1(_) => "Execution",
        Construction::Exec2(_) => "DoubleExecution",
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

/// Renders the annotations of the subtree of `c` rooted at `from`.
pub fn export_annotations(
    c: &Construction,
    annotations: &[ContextAnnotation],
    from: &NodePath,
    format: ExportFormat,
    symbols: &SymbolTable,
) -> String {
    let mut out = String::new();
    let Some(node) = c.node_at(from) else { return out };
    let kind_at = |p: &NodePath| annotations.iter().find(|a| &a.path == p);
    match format {
        ExportFormat::JsonLines => {
            for (rel, n) in node.subconstructions() {
                let mut path = from.clone();
                path.0.extend(rel.0);
                let Some(a) = kind_at(&path) else { continue };
                let obj = serde_json::json!({
                    "path": path.to_string(),
                    "node": element(n),
                    "context": a.kind.label(),
                    "supposition": a.supposition.label(),
                    "generic": a.generic,
                    "construction": print_with(n, symbols),
                });
                out.push_str(&obj.to_string());
                out.push('\n');
            }
        }
        _ => render_tree(node, from, 0, format, &kind_at, symbols, &mut out),
    }
    out
}

fn render_tree<'a>(
    c: &Construction,
    path: &NodePath,
    depth: usize,
    format: ExportFormat,
    kind_at: &dyn Fn(&NodePath) -> Option<&'a ContextAnnotation>,
    symbols: &SymbolTable,
    out: &mut String,
) {
    let indent = "  ".repeat(depth);
    let ctx = kind_at(path).map(|a| a.kind.label()).unwrap_or("?");
    let text = print_with(c, symbols);
    let children = c.children();
    match format {
        ExportFormat::Xml => {
            let attr = match c {
                Construction::Var(v) => format!("name=\"{}\"", xml_escape(&v.name)),
                _ => format!("construction=\"{}\"", xml_escape(&text)),
            };
            if children.is_empty() {
                out.push_str(&format!("{indent}<{} context=\"{ctx}\" {attr}/>\n", element(c)));
            } else {
                out.push_str(&format!("{indent}<{} context=\"{ctx}\" {attr}>\n", element(c)));
                for (i, ch) in children.into_iter().enumerate() {
                    render_tree(ch, &path.child(i), depth + 1, format, kind_at, symbols, out);
                }
                out.push_str(&format!("{indent}</{}>\n", element(c)));
            }
        }
        _ => {
            out.push_str(&format!("{indent}{} {ctx} {text}\n", element(c)));
            for (i, ch) in children.into_iter().enumerate() {
                render_tree(ch, &path.child(i), depth + 1, format, kind_at, symbols, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::standard();
        t.declare("Tom", TilType::iota()).unwrap();
        t.declare("Calculate", TilType::intension(TilType::func(TilType::o(), vec![TilType::iota(), TilType::order(1)])))
            .unwrap();
        t.declare("P", TilType::func(TilType::o(), vec![TilType::iota()])).unwrap();
        t.declare_var(Var::new("x", TilType::iota())).unwrap();
        t
    }

    fn kinds(src: &str) -> Vec<(String, ContextKind)> {
        let t = table();
        let c = parse(src, &t).unwrap();
        let (from, _) = matrix(&c);
        classify(&c)
            .into_iter()
            .filter(|a| a.path.starts_with(&from))
            .map(|a| (print_with(c.node_at(&a.path).unwrap(), &t), a.kind))
            .collect()
    }

    #[test]
    fn calculate_sentence_labels() {
        use ContextKind::*;
        let got = kinds("\\w \\t ['Calculate_wt 'Tom '['Cot 'pi]]");
        let want = [
            ("[[['Calculate w] t] 'Tom '['Cot 'pi]]", Intensional),
            ("[['Calculate w] t]", Extensional),
            ("['Calculate w]", Extensional),
            ("'Calculate", Extensional),
            ("w", Intensional),
            ("t", Intensional),
            ("'Tom", Intensional),
            ("'['Cot 'pi]", Intensional),
            ("['Cot 'pi]", Hyperintensional),
            ("'Cot", Hyperintensional),
            ("'pi", Hyperintensional),
        ];
        let want: Vec<(String, ContextKind)> = want.iter().map(|(s, k)| (s.to_string(), *k)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn double_execution_cancels_display() {
        let got = kinds("^2 '['Cot 'pi]");
        assert!(got.iter().all(|(_, k)| *k != ContextKind::Hyperintensional));
        let nested = kinds("''pi");
        assert_eq!(nested[1].1, ContextKind::Hyperintensional);
    }

    #[test]
    fn unapplied_closure_is_generic() {
        let got = kinds("\\x ['P x]");
        assert_eq!(got[2], ("'P".to_string(), ContextKind::Intensional));
        let applied = kinds("[\\x ['P x] 'Tom]");
        assert_eq!(applied[3], ("'P".to_string(), ContextKind::Extensional));
    }

    #[test]
    fn xml_of_a_variable() {
        let t = table();
        let c = parse("x", &t).unwrap();
        let a = classify(&c);
        let xml = export_annotations(&c, &a, &NodePath::root(), ExportFormat::Xml, &t);
        assert_eq!(xml, "<Variable context=\"INTENSIONAL\" name=\"x\"/>\n");
    }
}
