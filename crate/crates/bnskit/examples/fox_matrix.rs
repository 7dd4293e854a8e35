//! Fox derivatives of a presentation and their graded leading terms.
//!
//! The derivative of a relator with respect to a generator is a signed sum of
//! prefixes; grading by a character exposes the lowest-degree piece, whose
//! shape drives the non-invertibility certificate on repeated-minimum inputs.
//!
//! ```bash
//! cargo run -p bnskit --example fox_matrix
//! ```

use bnskit::{
    fox_derivative, grade, structural_verify, classify, Character, Presentation,
};

fn main() {
    let pres = Presentation::parse("<x1,x2 | [x1,x2]^2>").unwrap();
    let chi = Character::new(vec![1, -1]);
    println!("presentation: {pres}");
    println!("character:    ({chi})\n");

    for (i, relator) in pres.relators().iter().enumerate() {
        for gen in 1..=pres.rank() as u32 {
            let derivative = fox_derivative(relator, gen);
            println!("d r{} / d x{gen} = {derivative}", i + 1);
            let graded = grade(&derivative, &chi).unwrap();
            for (degree, piece) in graded.pieces() {
                println!("  degree {degree}: {piece}");
            }
            println!("  t-order: {:?}", graded.min_degree());
        }
    }

    // The repeated-minimum classification makes the diagonal leading piece a
    // two-term pattern u + u*v with v of value zero: a non-unit over the
    // Novikov ring once the group ring is assumed to have no zero divisors.
    let report = classify(&pres, &chi).unwrap();
    println!("\nclassification: {:?}", report.status);
    let structure = structural_verify(&pres, &chi, &report, true).unwrap();
    println!("row minima:     {:?}", structure.min_heights);
    let cert = structure.nonunit_certificate.unwrap();
    println!("certificate:    base {} , loop {} ({:?})", cert.base, cert.kernel_loop, cert.verdict);
}
