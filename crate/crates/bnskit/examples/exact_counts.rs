//! Exact counts of cyclically reduced words via the transfer matrix, and a
//! quick empirical check that the sampler matches them.
//!
//! ```bash
//! cargo run -p bnskit --example exact_counts
//! ```

use std::collections::HashMap;

use bnskit::{count_cyclically_reduced, trial_rng, WordSampler};

fn main() {
    for m in [2usize, 3] {
        let counts: Vec<String> = (1..=10)
            .map(|k| count_cyclically_reduced(m, k).to_string())
            .collect();
        println!("rank {m}: {}", counts.join(", "));
    }
    println!(
        "rank 2, length 120: {} cyclically reduced words",
        count_cyclically_reduced(2, 120)
    );

    // Draw 40k words of length <= 3 and compare the per-length frequencies
    // with the exact proportions.
    let sampler = WordSampler::new(2, 3);
    let mut rng = trial_rng(1, 0);
    let draws = 40_000;
    let mut by_length: HashMap<usize, u64> = HashMap::new();
    for _ in 0..draws {
        *by_length.entry(sampler.sample(&mut rng).len()).or_default() += 1;
    }
    println!("\nsampler marginals over lengths (m=2, l=3), {draws} draws:");
    let total = 4.0 + 12.0 + 28.0;
    for k in 1..=3usize {
        let expected = [4.0, 12.0, 28.0][k - 1] / total;
        let observed = *by_length.get(&k).unwrap_or(&0) as f64 / draws as f64;
        println!("  length {k}: observed {observed:.4}, exact {expected:.4}");
    }
}
