//! Hyperintensional, intensional and extensional occurrences, as XML.
use tilk::session::{Format, Session};

fn main() {
    let mut s = Session::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/calculate.til")).expect("bundled KB");
    s.settings.format = Format::Xml;
    print!("{}", s.context(r"\w \t ['Calculate_wt 'Tom '['Cot 'pi]]").expect("well typed"));
}
