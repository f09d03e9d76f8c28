use cfkit::catalog;
use cfkit::cf::{Bindings, Evaluator};
use cfkit::rational::{qi, to_decimal_string};
use num_traits::Signed;

fn main() {
    let e = catalog::entry("catalan_companion").unwrap();
    let bind = Bindings::new();
    let oracle = e.reference_value(&bind, 45).unwrap();
    for n in [0i64, 1, 2, 3, 5, 8] {
        print!("companion n={n}:");
        let partial = e.term.partial_sum(n, &bind).unwrap();
        let w = e.weight.value_at(n, &bind).unwrap();
        let tb = bind.clone().set_named("x", qi(n));
        let mut ev = Evaluator::new(&e.cf_tail, &tb).unwrap();
        for depth in [256i64, 512, 1024, 2048, 4096, 8192, 16384] {
            ev.advance_to(depth).unwrap();
            let v = ev.value(50).unwrap();
            let res = (&oracle - (&partial + &w * v)).abs();
            print!("  {}", to_decimal_string(&res, 3));
        }
        println!();
    }
}
