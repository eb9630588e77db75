//! Complementing a cotree swaps unions and joins; the join of two cographs
//! is the complement of the union of their complements.

use cosec::generators::{random_cotree, RandomSpec};
use cosec::Cotree;

fn main() {
    let a = random_cotree(RandomSpec::new(5, 11).unwrap());
    let b = random_cotree(RandomSpec::new(4, 12).unwrap())
        .map_labels(|l| format!("w{l}"))
        .unwrap();
    println!("a = {a}");
    println!("b = {b}");
    println!("complement of a = {}", a.complement());
    assert_eq!(a.complement().materialize(), a.materialize().complement());

    let join = Cotree::join(vec![a.clone(), b.clone()])
        .unwrap()
        .normalize();
    let rewritten = Cotree::union(vec![a.complement(), b.complement()])
        .unwrap()
        .complement()
        .normalize();
    println!("a + b            = {join}");
    println!("co(co a u co b)  = {rewritten}");
    println!(
        "same graph: {}",
        join.materialize().same_by_labels(&rewritten.materialize())
    );
}
