use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tilk::repl::{Outcome, Repl};
use tilk::resolve::Limits;
use tilk::session::{answer_name, Format, Session, SessionError};

const INPUT_ERROR: u8 = 4;

#[derive(Parser)]
#[command(name = "tilk", version, about = "Question answering over TIL knowledge bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Xml,
    JsonLines,
}

#[derive(Args)]
struct Common {
    /// Knowledge-base file.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Largest number of clauses the prover keeps.
    #[arg(long, env = "TILK_MAX_CLAUSES")]
    max_clauses: Option<usize>,
    /// Deepest resolvent the prover derives.
    #[arg(long, env = "TILK_MAX_DEPTH")]
    max_depth: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Interactive session.
    Repl(Common),
    /// Answer a yes/no question; the knowledge base's query when omitted.
    Ask {
        #[command(flatten)]
        common: Common,
        /// Label of a stored query to ask instead.
        #[arg(short = 'q', long = "query", conflicts_with = "question")]
        query: Option<String>,
        question: Option<String>,
    },
    /// List the values of a question variable.
    Who {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'v', long = "var")]
        var: String,
        #[arg(short = 'q', long = "query", conflicts_with = "question")]
        query: Option<String>,
        question: Option<String>,
    },
    /// Type derivation of a construction.
    Typecheck {
        #[command(flatten)]
        common: Common,
        construction: String,
    },
    /// Context annotations of a construction.
    Context {
        #[command(flatten)]
        common: Common,
        construction: String,
    },
    /// Clausal transformation of a statement; the knowledge base's clauses when omitted.
    Clausal {
        #[command(flatten)]
        common: Common,
        construction: Option<String>,
    },
    /// Evaluate a construction in the knowledge base's model.
    Eval {
        #[command(flatten)]
        common: Common,
        construction: String,
    },
}

fn session(c: &Common) -> Result<Session, SessionError> {
    let mut s = match &c.file {
        Some(p) => Session::load(p)?,
        None => Session::new(),
    };
    let d = Limits::default();
    s.settings.limits = Limits {
        max_clauses: c.max_clauses.unwrap_or(d.max_clauses),
        max_depth: c.max_depth.unwrap_or(d.max_depth),
    };
    s.settings.format = match c.format {
        FormatArg::Text => Format::Text,
        FormatArg::Xml => Format::Xml,
        FormatArg::JsonLines => Format::JsonLines,
    };
    Ok(s)
}

fn question(s: &Session, q: Option<String>, label: Option<String>) -> Result<String, SessionError> {
    match q {
        Some(q) => Ok(q),
        None => s.query_text(label.as_deref()),
    }
}

fn run(cmd: Command) -> Result<(String, u8), SessionError> {
    match cmd {
        Command::Repl(c) => repl(session(&c)?).map(|()| (String::new(), 0)),
        Command::Ask { common, query, question: q } => {
            let mut s = session(&common)?;
            let q = question(&s, q, query)?;
            let r = s.ask(&q)?;
            Ok((r.render(s.settings.format), r.answer.exit_code() as u8))
        }
        Command::Who { common, var, query, question: q } => {
            let mut s = session(&common)?;
            let q = question(&s, q, query)?;
            let names: String = s.who(&q, &var)?.iter().map(|t| format!("{}\n", answer_name(t))).collect();
            Ok((names, 0))
        }
        Command::Typecheck { common, construction } => Ok((session(&common)?.typecheck(&construction)?, 0)),
        Command::Context { common, construction } => Ok((session(&common)?.context(&construction)?, 0)),
        Command::Clausal { common, construction } => {
            let mut s = session(&common)?;
            let out = match construction {
                Some(c) => s.clausal(&c)?,
                None => s.clause_listing()?,
            };
            Ok((out, 0))
        }
        Command::Eval { common, construction } => Ok((session(&common)?.eval(&construction)?, 0)),
    }
}

fn repl(session: Session) -> Result<(), SessionError> {
    let mut r = Repl::new(session);
    let stdin = io::stdin();
    let mut out = io::stdout();
    loop {
        print!("tilk> ");
        let _ = out.flush();
        let mut line = String::new();
        if stdin.lock().read_line(&mut line).unwrap_or(0) == 0 {
            return Ok(());
        }
        match r.execute(&line) {
            Ok(Outcome::Quit) => return Ok(()),
            Ok(Outcome::Output(text)) => print!("{text}"),
            Err(e) => eprintln!("error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
