//! Line-oriented command interpreter over a [`Session`].

use crate::session::{answer_name, Format, Session, SessionError};

pub const HELP: &str = "\
load PATH                 replace the session with a knowledge base
save PATH                 write the knowledge base
assert (LABEL) C          add a statement
retract LABEL             remove a statement
list                      show the knowledge base
clauses                   show its clausal form
ask C                     answer a yes/no question
who VAR C                 list the values of VAR answering C
typecheck C | context C | clausal C | eval C
format text|xml|json-lines
history | help | quit
";

/// What the caller should do after a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Output(String),
    Quit,
}

/// A session plus the lines entered so far.
#[derive(Debug, Default)]
pub struct Repl {
    pub session: Session,
    pub history: Vec<String>,
}

impl Repl {
    pub fn new(session: Session) -> Self {
        Repl { session, history: Vec::new() }
    }

    pub fn execute(&mut self, line: &str) -> Result<Outcome, SessionError> {
        let line = line.trim();
        if line.is_empty() {
            return Ok(Outcome::Output(String::new()));
        }
        self.history.push(line.to_string());
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let s = &mut self.session;
        let out = match cmd {
            "quit" | "exit" => return Ok(Outcome::Quit),
            "help" => HELP.to_string(),
            "history" => self.history.iter().enumerate().map(|(i, h)| format!("{:>4}  {h}\n", i + 1)).collect(),
            "load" => {
                let settings = s.settings;
                *s = Session::load(rest)?;
                s.settings = settings;
                format!("loaded {} statement(s)\n", s.assertions().len())
            }
            "save" => {
                s.save(rest)?;
                format!("saved {rest}\n")
            }
            "assert" => {
                let (label, c) = labelled(rest).ok_or_else(|| usage("assert (LABEL) C"))?;
                s.assert(label, c)?;
                String::new()
            }
            "retract" => {
                s.retract(rest.trim_matches(|c| c == '(' || c == ')'))?;
                String::new()
            }
            "list" => s.to_text(),
            "clauses" => s.clause_listing()?,
            "ask" => s.ask(rest)?.render(s.settings.format),
            "who" => {
                let (var, q) = rest.split_once(char::is_whitespace).ok_or_else(|| usage("who VAR C"))?;
                let names: Vec<String> = s.who(q.trim(), var)?.iter().map(answer_name).collect();
                names.iter().map(|n| format!("{n}\n")).collect()
            }
            "typecheck" => s.typecheck(rest)?,
            "context" => s.context(rest)?,
            "clausal" => s.clausal(rest)?,
            "eval" => s.eval(rest)?,
            "format" => {
                s.settings.format = parse_format(rest).ok_or_else(|| usage("format text|xml|json-lines"))?;
                String::new()
            }
            other => return Err(SessionError::UnknownCommand(other.to_string())),
        };
        Ok(Outcome::Output(out))
    }
}

fn usage(u: &str) -> SessionError {
    SessionError::Usage(u.to_string())
}

fn labelled(text: &str) -> Option<(&str, &str)> {
    let rest = text.strip_prefix('(')?;
    let (label, c) = rest.split_once(')')?;
    Some((label.trim(), c.trim()))
}

pub fn parse_format(s: &str) -> Option<Format> {
    match s {
        "text" => Some(Format::Text),
        "xml" => Some(Format::Xml),
        "json-lines" => Some(Format::JsonLines),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(r: &mut Repl, line: &str) -> String {
        match r.execute(line).unwrap() {
            Outcome::Output(s) => s,
            Outcome::Quit => panic!("unexpected quit"),
        }
    }

    #[test]
    fn declares_asks_and_remembers() {
        let kb = "entity Tom : iota\nentity Skier : (o iota)@tw\n";
        let mut r = Repl::new(Session::from_text(kb, "t.til").unwrap());
        out(&mut r, "assert (a) \\w \\t ['Skier_wt 'Tom]");
        assert_eq!(out(&mut r, "clauses"), "A) ['Skier_wt 'Tom]\n");
        assert!(out(&mut r, "ask \\w \\t ['Skier_wt 'Tom]").starts_with("YES\n"));
        assert!(out(&mut r, "history").contains("   2  clauses"));
        assert_eq!(r.execute("quit").unwrap(), Outcome::Quit);
    }

    #[test]
    fn rejects_unknown_commands() {
        let mut r = Repl::default();
        assert!(matches!(r.execute("frobnicate"), Err(SessionError::UnknownCommand(_))));
        assert!(matches!(r.execute("format yaml"), Err(SessionError::Usage(_))));
    }
}
