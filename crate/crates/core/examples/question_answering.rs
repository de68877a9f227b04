//! Is there a member of the club who climbs but does not ski? Who?
use tilk::session::{answer_name, Format, Session};

fn main() {
    let mut s = Session::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/sportclub.til")).expect("bundled KB");
    let q = s.query_text(None).unwrap();
    print!("{}", s.ask(&q).expect("answerable").render(Format::Text));
    let who: Vec<String> = s.who(&q, "x").expect("answerable").iter().map(answer_name).collect();
    println!("who: {}", who.join(", "));
}
