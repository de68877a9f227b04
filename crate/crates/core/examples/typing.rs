//! Type derivation of "Tom calculates the cotangent of pi".
use tilk::session::Session;

fn main() {
    let s = Session::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/calculate.til")).expect("bundled KB");
    let sentence = r"\w \t ['Calculate_wt 'Tom '['Cot 'pi]]";
    print!("{}", s.typecheck(sentence).expect("well typed"));
}
