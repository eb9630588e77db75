//! Walk the G_k family: the root join always has a dominating pair, the
//! two-children rule says it does not, the corrected rule agrees with the
//! brute-force witness search.
//!
//!     cargo run --example counterexample_family -- 6

use cosec::annotate::annotate;
use cosec::generators::{g_k, GkSpec};
use cosec::oracles;

fn main() {
    let max_k: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    println!(
        "{:>3}  {:>6}  {:>8}  {:>9}  {:>8}  cotree",
        "k", "leaves", "witness", "corrected", "original"
    );
    for k in 1..=max_k {
        let t = g_k(GkSpec::new(k).expect("k >= 1"));
        let ann = annotate(&t).expect("g_k is normalized");
        let witness = oracles::property_p_witness(&t).expect("root is a join");
        let g = t.materialize();
        let pair = witness.map(|(u, v)| format!("{}+{}", g.label(u), g.label(v)));
        let root = ann.root();
        println!(
            "{k:>3}  {:>6}  {:>8}  {:>9}  {:>8}  {t}",
            t.leaf_count(),
            pair.as_deref().unwrap_or("-"),
            root.p_corrected.unwrap(),
            root.p_original.unwrap(),
        );
    }
}
