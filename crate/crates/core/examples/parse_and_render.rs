//! Parse a cotree, normalize it and print it as text, DOT and an edge list.
//!
//!     cargo run --example parse_and_render -- "(U a (U b c) (J d e))"

use cosec::Cotree;

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "(J (U c d e) (U (J a1 a2) b))".to_owned());
    let tree: Cotree = match text.parse() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let normal = tree.normalize();
    println!("as written: {tree}");
    println!("normalized: {normal}");
    println!("{} leaves, {} nodes", normal.leaf_count(), normal.len());

    let g = normal.materialize();
    println!("edges:");
    for (u, v) in g.edges() {
        println!("  {} - {}", g.label(u), g.label(v));
    }
    print!("{}", normal.to_dot());
}
