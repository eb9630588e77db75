//! Brute-force domination and secure domination numbers of a few small
//! cographs, next to the values the linear pass reads off the cotree.

use cosec::annotate::annotate;
use cosec::generators::{g_k, GkSpec};
use cosec::graph::VertexSet;
use cosec::oracles::{self, OracleBudget};
use cosec::Cotree;

fn main() {
    let budget = OracleBudget::default();
    let samples = [
        ("K_4", "(J a b c d)"),
        ("4K_1", "(U a b c d)"),
        ("C_4", "(J (U a b) (U c d))"),
        ("K_3,3", "(J (U a b c) (U d e f))"),
        ("K_2 u K_3", "(U (J a b) (J c d e))"),
        ("G_1", "(J (U c d e) (U a1 b))"),
    ];
    println!(
        "{:<10} {:>3} {:>5} {:>7} {:>10}",
        "graph", "n", "gamma", "pass", "gamma_s"
    );
    for (name, text) in samples {
        let t: Cotree = text.parse().expect("valid cotree");
        let g = t.materialize();
        let gamma = oracles::domination_number(&g, &budget).expect("within budget");
        let secure = oracles::secure_domination_number(&g, &budget).expect("within budget");
        let pass = annotate(&t).expect("normalized").root().gamma;
        println!("{name:<10} {:>3} {gamma:>5} {pass:>7} {secure:>10}", g.n());
    }

    // a dominating set that is not secure: one hub of a star
    let star: Cotree = "(J h (U x y z))".parse().unwrap();
    let g = star.materialize();
    let hub = VertexSet::from_labels(&g, &["h"]).unwrap();
    println!(
        "star, {{h}}: dominating {}, secure {}",
        oracles::is_dominating(&g, &hub).unwrap(),
        oracles::is_secure_dominating(&g, &hub).unwrap()
    );

    // past the cap the oracle refuses instead of guessing
    let tight = OracleBudget::uniform(8).unwrap();
    let big = g_k(GkSpec::new(6).unwrap()).materialize();
    match oracles::secure_domination_number(&big, &tight) {
        Ok(v) => println!("G_6: gamma_s = {v}"),
        Err(e) => println!("G_6 with a cap of 8: {e}"),
    }
}
