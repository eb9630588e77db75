//! Timing of the annotation pass on random cotrees.

use std::time::Instant;

use serde::Serialize;

use crate::annotate::annotate;
use crate::generators::{random_cotree, RandomSpec};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    /// Leaf count.
    pub size: usize,
    /// Cotree node count, leaves included.
    pub nodes: usize,
    pub median_ms: f64,
    pub ns_per_node: f64,
}

/// Annotates a random cotree of every size `repeats` times and reports the
/// median. Tree generation is not timed. Panics if a size or `repeats` is 0.
pub fn bench(sizes: &[usize], seed: u64, repeats: usize) -> Vec<BenchRow> {
    assert!(repeats > 0, "repeats must be positive");
    sizes
        .iter()
        .map(|&size| {
            let tree = random_cotree(RandomSpec::new(size, seed).expect("positive size"));
            let mut times: Vec<f64> = (0..repeats)
                .map(|_| {
                    let start = Instant::now();
                    let ann = annotate(&tree).expect("generator output is normalized");
                    let elapsed = start.elapsed().as_secs_f64() * 1e3;
                    assert_eq!(ann.visits(), tree.len());
                    elapsed
                })
                .collect();
            times.sort_by(f64::total_cmp);
            let median_ms = if repeats % 2 == 1 {
                times[repeats / 2]
            } else {
                (times[repeats / 2 - 1] + times[repeats / 2]) / 2.0
            };
            BenchRow {
                size,
                nodes: tree.len(),
                median_ms,
                ns_per_node: median_ms * 1e6 / tree.len() as f64,
            }
        })
        .collect()
}
