//! From "Tom calculates the cotangent of pi" to "Tom calculates the
//! cotangent of something", checked in a finite model.
use tilk::reduce::{quantify_in, Evaluator, Valuation};
use tilk::session::Session;
use tilk::{Entity, Number};

fn main() {
    let s = Session::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/calculate.til")).expect("bundled KB");
    let premise = s.assertions()[0].1.clone();
    let symbols = &s.kb().symbols;
    let (y, x) = (symbols.var("y").unwrap(), symbols.var("x").unwrap());
    let conclusion = quantify_in(&premise, &Entity::Number(Number::pi()), y, x).expect("pi is displayed");
    println!("premise:    {}", s.print(&premise));
    println!("conclusion: {}", s.print(&conclusion));
    let model = s.model().expect("the KB has a model");
    let (w, t) = model.actual.clone().unwrap();
    let ev = Evaluator::new(&model);
    for c in [&premise, &conclusion] {
        let v = ev.at_point(c, &Valuation::new(), &w, &t).expect("proper");
        println!("at {w} {t}: {}", tilk::syntax::print_value(Some(&v), symbols));
    }
}
