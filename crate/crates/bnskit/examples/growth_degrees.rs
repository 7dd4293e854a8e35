//! Conjugacy growth of free-group automorphisms: iterate, record cyclic
//! lengths, classify the growth and check the degree bound d <= rank - 1.
//!
//! ```bash
//! cargo run -p bnskit --example growth_degrees
//! ```

use bnskit::{
    check_levitt_bound, estimate_degree, growth_sequence, parse_word, AutomorphismSpec,
};

fn survey(name: &str, spec: &str, word: &str) {
    let auto = AutomorphismSpec::parse(spec).unwrap();
    let g = parse_word(word, auto.names()).unwrap();
    let seq = growth_sequence(&auto, &g, 64, 1_000_000).unwrap();
    let estimate = estimate_degree(&seq).unwrap();
    let head: Vec<String> = seq.lengths.iter().take(9).map(|l| l.to_string()).collect();
    println!("{name} on `{word}`:");
    println!("  verified automorphism: {}", auto.verified());
    println!("  lengths: {} ...{}", head.join(", "), if seq.truncated { " (truncated)" } else { "" });
    println!("  classification: {:?}", estimate.classification);
    println!("  degree bound d <= rank-1 holds: {}", check_levitt_bound(&auto, &estimate));
    println!();
}

fn main() {
    survey("identity", "x -> x\ny -> y\ninverse:\nx -> x\ny -> y", "y");
    survey(
        "linear (x -> x, y -> y x)",
        "x -> x\ny -> y x\ninverse:\nx -> x\ny -> y x^-1",
        "y",
    );
    survey(
        "quadratic (a -> a, b -> b a, c -> c b)",
        "a -> a\nb -> b a\nc -> c b\ninverse:\na -> a\nb -> b a^-1\nc -> c a b^-1",
        "c",
    );
    survey(
        "exponential (x -> y, y -> x y)",
        "x -> y\ny -> x y\ninverse:\nx -> y x^-1\ny -> x",
        "x",
    );
}
