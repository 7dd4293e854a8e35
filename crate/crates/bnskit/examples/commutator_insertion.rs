//! The commutator-insertion map: turns any normalized relator tuple into one
//! satisfying the unique minimum condition for the character and the repeated
//! minimum condition for its negative, then undoes it with the left inverse.
//!
//! ```bash
//! cargo run -p bnskit --example commutator_insertion
//! ```

use bnskit::{
    classify, classify_up_to_normalization, insert_commutators, remove_commutators, Character,
    CyclicWord, NameTable, Presentation,
};

fn main() {
    let names = NameTable::default();
    let tuple = vec![
        CyclicWord::from_word(&bnskit::parse_word("x1 x2", &names).unwrap()).unwrap(),
    ];
    let chi = Character::new(vec![1, -1]);

    println!("input tuple: {}", tuple[0]);
    println!("character:   ({chi})");

    let record = insert_commutators(&tuple, &chi).unwrap();
    for log in &record.insertions {
        println!(
            "relator {}: lower commutator at vertex {}, eps = {}, upper at vertex {}",
            log.relator + 1,
            log.min_vertex,
            log.epsilon,
            log.max_vertex
        );
    }
    println!("image:       {}  (length {} = {} + 12)", record.output[0], record.output[0].len(), tuple[0].len());

    let image = Presentation::new(2, record.output.clone()).unwrap();
    let plus = classify(&image, &chi).unwrap();
    println!("classification for  chi: {:?}", plus.status);
    let (_, minus) = classify_up_to_normalization(&image, &chi.negated()).unwrap();
    println!(
        "classification for -chi: {:?} (repeated relator r{})",
        minus.status,
        minus.repeated_relator.unwrap() + 1
    );

    let recovered = remove_commutators(&record.output, &chi).unwrap();
    println!("left inverse recovers: {}", recovered[0]);
    assert_eq!(recovered, tuple);

    // The map is undefined where an insertion would freely cancel; such
    // inputs abort loudly instead of being silently repaired.
    let witness = vec![
        CyclicWord::from_word(&bnskit::parse_word("x1 x2 x1 x2^-1", &names).unwrap()).unwrap(),
    ];
    let err = insert_commutators(&witness, &Character::new(vec![0, -1])).unwrap_err();
    println!("cancellation witness: {err}");
}
