//! Membership verdicts for integral characters in the BNS invariant.
//!
//! Runs the decision procedure on three presentations: the free abelian
//! commutator presentation (everything is in Sigma), its squared relator
//! (the repeated minimum pushes the character out, assuming no zero
//! divisors), and BS(1,2) where the plus direction is out of reach of the
//! criterion while the minus direction is certified inside.
//!
//! ```bash
//! cargo run -p bnskit --example sigma_verdict
//! ```

use bnskit::{decide, symmetry_report, Character, Presentation};

fn show(pres: &Presentation, chi: &Character, flag: bool) {
    let verdict = decide(pres, chi, flag).unwrap();
    println!("{pres}  with character ({chi})");
    println!("  membership: {}", verdict.membership);
    for step in &verdict.justification {
        println!("    - {step}");
    }
    println!();
}

fn main() {
    let chi = Character::new(vec![1, -1]);

    let commutator = Presentation::parse("<x1,x2 | [x1,x2]>").unwrap();
    show(&commutator, &chi, false);

    let squared = Presentation::parse("<x1,x2 | [x1,x2]^2>").unwrap();
    show(&squared, &chi, true);

    let bs12 = Presentation::parse("<x1,x2 | x1 x2 x1^-1 x2^-2>").unwrap();
    show(&bs12, &Character::new(vec![1, 0]), true);
    show(&bs12, &Character::new(vec![-1, 0]), true);

    // With first Betti number 1, both signs of the primitive character give a
    // symmetry report with the separability and fibering consequences.
    println!("symmetry report for BS(1,2):");
    let report = symmetry_report(&bs12, true).unwrap();
    println!("  plus  ({}): {}", report.character, report.plus.membership);
    println!(
        "  minus ({}): {}",
        report.character.negated(),
        report.minus.membership
    );
    println!("  nonsymmetric: {}", report.nonsymmetric);
    println!("  not LERF:     {}", report.not_lerf);
    println!("  not fibering: {}", report.not_fibering);
}
