//! The sport club scenario in clausal form, and one statement stage by stage.
use tilk::session::Session;

fn main() {
    let mut s = Session::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/sportclub.til")).expect("bundled KB");
    print!("{}", s.clause_listing().expect("clausal"));
    let q = s.query_text(None).unwrap();
    println!("\nquestion: {q}");
    print!("{}", s.clausal(&q).expect("clausal"));
}
