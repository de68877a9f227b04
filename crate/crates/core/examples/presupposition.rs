//! "All John's children are asleep" in three situations.
use tilk::session::Session;

fn main() {
    for kind in ["childless", "asleep", "awake"] {
        let path = format!("{}/data/strawson_{kind}.til", env!("CARGO_MANIFEST_DIR"));
        let mut s = Session::load(&path).expect("bundled KB");
        let mut answers = Vec::new();
        for label in ["s", "n", "u"] {
            let q = s.query_text(Some(label)).unwrap();
            let a = if label == "u" { s.eval(&q).unwrap().lines().last().unwrap().to_string() } else { s.ask(&q).unwrap().answer.to_string() };
            answers.push(format!("{label}: {a}"));
        }
        println!("{kind:<10} {}", answers.join("   "));
    }
}
