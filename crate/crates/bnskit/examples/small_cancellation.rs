//! Piece analysis over the symmetrized relator set and the metric C'(1/6)
//! check, on fixed presentations and on random length-100 tuples where the
//! condition holds with overwhelming frequency.
//!
//! ```bash
//! cargo run -p bnskit --example small_cancellation
//! ```

use num_rational::Rational64;

use bnskit::{small_cancellation_check, trial_rng, Presentation, WordSampler};

fn report(pres: &Presentation) {
    let report = small_cancellation_check(pres, Rational64::new(1, 6));
    println!("{pres}");
    println!("  max piece ratio: {}", report.max_piece_ratio);
    println!("  C'(1/6): {}", if report.passes { "passes" } else { "fails" });
    if let Some(w) = &report.witness {
        println!(
            "  longest piece `{}` at (r{}, inv={}, start {}) and (r{}, inv={}, start {})",
            pres.display_word(&w.piece),
            w.first.relator + 1,
            w.first.inverted,
            w.first.start,
            w.second.relator + 1,
            w.second.inverted,
            w.second.start
        );
    }
}

fn main() {
    report(&Presentation::parse("<x1,x2 | [x1,x2]>").unwrap());
    report(&Presentation::parse("<x1,x2,x3 | x1 x2 x3^2, x1 x2 x3^2>").unwrap());
    report(&Presentation::parse("<i,j,k,l | [i,j], [j,k], [k,l]>").unwrap());

    let sampler = WordSampler::new(3, 100);
    let trials = 200;
    let mut passes = 0;
    for trial in 0..trials {
        let mut rng = trial_rng(8, trial);
        let relators = vec![
            sampler.sample_of_length(100, &mut rng),
            sampler.sample_of_length(100, &mut rng),
        ];
        let pres = Presentation::new(3, relators).unwrap();
        if small_cancellation_check(&pres, Rational64::new(1, 6)).passes {
            passes += 1;
        }
    }
    println!("\nrandom n=2, m=3, length-100 tuples: {passes}/{trials} pass C'(1/6)");
}
