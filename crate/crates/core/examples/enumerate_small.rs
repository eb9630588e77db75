//! Count cographs by vertex count with the exhaustive enumerator and print
//! the four-vertex ones.

use cosec::generators::enumerate_cotrees;

fn main() {
    let max = 9;
    let mut per_size = vec![0usize; max + 1];
    for t in enumerate_cotrees(max).expect("within the enumeration guard") {
        if t.leaf_count() == 4 {
            let g = t.materialize();
            println!(
                "{t:<24} {} edges, connected {}",
                g.edge_count(),
                g.is_connected()
            );
        }
        per_size[t.leaf_count()] += 1;
    }
    for (n, count) in per_size.iter().enumerate().skip(1) {
        println!("n = {n}: {count}");
    }
}
