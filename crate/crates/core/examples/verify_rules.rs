//! Cross-check the linear pass against the brute-force oracles on every
//! cotree with at most `max_n` leaves plus a batch of random ones, and list
//! the distinct shapes on which the published rule goes wrong.
//!
//!     cargo run --release --example verify_rules -- 7 500

use cosec::oracles::OracleBudget;
use cosec::verify::{verify, VerifyConfig};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("number"));
    let config = VerifyConfig {
        max_n: args.next().unwrap_or(6),
        random_count: args.next().unwrap_or(200),
        random_leaves: 12,
        seed: 1,
        budget: OracleBudget::default(),
    };
    let report = verify(&config).expect("corpus within budget");
    print!("{report}");
    std::process::exit(if report.passed() { 0 } else { 3 });
}
