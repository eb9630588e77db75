//! Median annotation time on random cotrees of growing size.
//!
//!     cargo run --release --example linear_pass_timing

use cosec::bench::bench;

fn main() {
    let sizes = [1_000, 10_000, 100_000, 1_000_000];
    let rows = bench(&sizes, 7, 5);
    println!(
        "{:>9} {:>9} {:>10} {:>8}",
        "leaves", "nodes", "median_ms", "ns/node"
    );
    for r in &rows {
        println!(
            "{:>9} {:>9} {:>10.3} {:>8.1}",
            r.size, r.nodes, r.median_ms, r.ns_per_node
        );
    }
    for w in rows.windows(2) {
        println!(
            "t({}) / t({}) = {:.2}",
            w[1].size,
            w[0].size,
            w[1].median_ms / w[0].median_ms
        );
    }
}
