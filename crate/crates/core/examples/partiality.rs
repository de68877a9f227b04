//! Improper constructions: the cotangent of pi and everything built on it.
use tilk::session::Session;

fn main() {
    let s = Session::new();
    for c in ["['Cot 'pi]", "['+ '1 ['Cot 'pi]]", "['= ['Cot 'pi] ['Cot 'pi]]", "['Cot ['/ 'pi '4]]", "['Cot ['/ 'pi '2]]"] {
        println!("{c:<28} {}", s.eval(c).expect("well typed").trim_end());
    }
}
