//! Beta reduction by value keeps improperness that reduction by name loses.
use tilk::reduce::{beta_by_value, evaluate, sub, Model, Valuation};
use tilk::Construction;
use tilk::session::Session;
use tilk::syntax::print_value;

fn main() {
    let s = Session::from_text("entity Tom : iota\n", "inline").expect("declares Tom");
    let text = r"[\x:tau 'Tom ['Cot 'pi]]";
    let redex = s.parse(text).expect("parses");
    let model = Model::default();
    let show = |c| match evaluate(c, &Valuation::new(), &model) {
        Ok(e) => print_value(Some(&e), &s.kb().symbols),
        Err(i) => i.to_string(),
    };
    let by_value = beta_by_value(&redex).expect("a redex");
    // by name: the argument construction itself replaces the variable
    let Construction::Comp(head, args) = &redex else { unreachable!() };
    let Construction::Closure(params, body) = head.as_ref() else { unreachable!() };
    let by_name = sub(&args[0], &Construction::var(&params[0]), body);
    println!("original   {:<44} {}", s.print(&redex), show(&redex));
    println!("by value   {:<44} {}", s.print(&by_value), show(&by_value));
    println!("by name    {:<44} {}", s.print(&by_name), show(&by_name));
}
