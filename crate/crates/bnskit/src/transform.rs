//! The commutator-insertion map on normalized relator tuples and its left
//! inverse.
//!
//! Given a tuple `(r_1, .., r_n)` over generators `x_1, .., x_{n+1}` in the
//! sign convention (values >= 0 on the first n generators, < 0 on the last)
//! with every relator balanced, relator `r_i` receives the commutator
//! `[x_{n+1}, x_i^eps]` at its first minimal vertex and `[x_{n+1}^-1,
//! x_i^-eps]` (squared for `i = 1`) at the first maximal vertex of the
//! intermediate relator, where `eps = -1` if the character is positive on
//! `x_i` and `+1` otherwise. The output satisfies the unique minimum
//! condition for the character and the repeated minimum condition for its
//! negative.
//!
//! Insertions that would freely cancel against an adjacent letter abort with
//! a `FreeCancellation` error; the map is not defined there and repairing the
//! input would break the left-inverse contract.

use serde::Serialize;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::sections::cycle_walk;
use crate::word::{CyclicWord, Letter};

/// Where the two commutators went in one relator.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InsertionLog {
    pub relator: usize,
    pub min_vertex: usize,
    pub epsilon: i8,
    pub max_vertex: usize,
}

/// Full record of one application of the insertion map.
#[derive(Clone, Debug, Serialize)]
pub struct TransformRecord {
    pub input: Vec<CyclicWord>,
    pub character: Character,
    pub insertions: Vec<InsertionLog>,
    pub output: Vec<CyclicWord>,
}

fn commutator(a: Letter, b: Letter) -> [Letter; 4] {
    [a, b, a.inverse(), b.inverse()]
}

fn validate_normalized_tuple(tuple: &[CyclicWord], chi: &Character) -> Result<()> {
    let n = tuple.len();
    let m = chi.len();
    if n == 0 || m != n + 1 {
        return Err(Error::NotDeficiencyOne { rank: m, relators: n });
    }
    if chi.values()[..n].iter().any(|&v| v < 0) || chi.values()[n] >= 0 {
        return Err(Error::NotNormalized(format!(
            "character {chi} violates the sign convention"
        )));
    }
    for (index, r) in tuple.iter().enumerate() {
        if r.is_empty() {
            return Err(Error::EmptyRelator { index });
        }
        let max = r.max_generator();
        if max as usize > m {
            return Err(Error::RankMismatch { gen: max, rank: m });
        }
        let value = chi.evaluate_cyclic(r);
        if value != 0 {
            return Err(Error::NonVanishing { index, value });
        }
    }
    Ok(())
}

/// Splices `block` in at vertex `at` of the cyclic letter sequence, rejecting
/// free cancellation at either junction.
fn insert_block(
    letters: &[Letter],
    at: usize,
    block: &[Letter],
    relator: usize,
) -> Result<Vec<Letter>> {
    let len = letters.len();
    debug_assert!(at < len);
    let left = letters[(at + len - 1) % len];
    let right = letters[at];
    if left.is_inverse_of(&block[0]) || block[block.len() - 1].is_inverse_of(&right) {
        return Err(Error::FreeCancellation { relator, vertex: at });
    }
    let mut out = Vec::with_capacity(len + block.len());
    out.extend_from_slice(&letters[..at]);
    out.extend_from_slice(block);
    out.extend_from_slice(&letters[at..]);
    Ok(out)
}

/// Applies the insertion map to a normalized tuple.
pub fn insert_commutators(tuple: &[CyclicWord], chi: &Character) -> Result<TransformRecord> {
    validate_normalized_tuple(tuple, chi)?;
    let n = tuple.len();
    let last = (n + 1) as u32;

    let mut output = Vec::with_capacity(n);
    let mut insertions = Vec::with_capacity(n);
    for (i, r) in tuple.iter().enumerate() {
        let gen = (i + 1) as u32;
        let epsilon: i8 = if chi.value(gen) > 0 { -1 } else { 1 };
        let xi = Letter::new(gen, epsilon);
        let xl = Letter::positive(last);

        let walk = cycle_walk(r, chi)?;
        let min_vertex = walk.first_min_vertex();
        let lower_block = commutator(xl, xi);
        let intermediate = insert_block(r.letters(), min_vertex, &lower_block, i)?;
        let intermediate = CyclicWord::from_letters(intermediate)
            .expect("junction checks keep the relator cyclically reduced");

        let walk = cycle_walk(&intermediate, chi)?;
        let max_vertex = walk.first_max_vertex();
        let upper = commutator(xl.inverse(), xi.inverse());
        let block: Vec<Letter> = if i == 0 {
            upper.iter().chain(upper.iter()).copied().collect()
        } else {
            upper.to_vec()
        };
        let letters = insert_block(intermediate.letters(), max_vertex, &block, i)?;
        let result = CyclicWord::from_letters(letters)
            .expect("junction checks keep the relator cyclically reduced");

        debug_assert_eq!(result.len(), r.len() + if i == 0 { 12 } else { 8 });
        insertions.push(InsertionLog { relator: i, min_vertex, epsilon, max_vertex });
        output.push(result);
    }

    Ok(TransformRecord {
        input: tuple.to_vec(),
        character: chi.clone(),
        insertions,
        output,
    })
}

/// Removes one block, verifying the expected letters.
fn remove_block(
    letters: &[Letter],
    start: usize,
    expected: &[Letter],
    what: &str,
) -> Result<Vec<Letter>> {
    let end = start + expected.len();
    if end > letters.len() {
        return Err(Error::NotTransformImage(format!(
            "{what} block would extend past the relator end"
        )));
    }
    if &letters[start..end] != expected {
        return Err(Error::NotTransformImage(format!(
            "{what} block letters do not match the expected commutator"
        )));
    }
    let mut out = Vec::with_capacity(letters.len() - expected.len());
    out.extend_from_slice(&letters[..start]);
    out.extend_from_slice(&letters[end..]);
    Ok(out)
}

/// Left inverse of [`insert_commutators`]: locates the inserted commutators
/// at the extremal vertices, removes them, and certifies the result by
/// re-applying the map. Errors whenever the input is not recognized as an
/// image.
pub fn remove_commutators(tuple: &[CyclicWord], chi: &Character) -> Result<Vec<CyclicWord>> {
    validate_normalized_tuple(tuple, chi)?;
    let n = tuple.len();
    let last = (n + 1) as u32;

    let mut recovered = Vec::with_capacity(n);
    for (i, r) in tuple.iter().enumerate() {
        let gen = (i + 1) as u32;
        let epsilon: i8 = if chi.value(gen) > 0 { -1 } else { 1 };
        let xi = Letter::new(gen, epsilon);
        let xl = Letter::positive(last);
        // The extremal vertex sits this many letters into the inserted block:
        // two for a strictly positive generator value, one for a flat edge.
        let offset = if chi.value(gen) > 0 { 2 } else { 1 };

        let upper = commutator(xl.inverse(), xi.inverse());
        let upper_block: Vec<Letter> = if i == 0 {
            upper.iter().chain(upper.iter()).copied().collect()
        } else {
            upper.to_vec()
        };
        let walk = cycle_walk(r, chi)?;
        let max_vertex = walk.first_max_vertex();
        let start = max_vertex.checked_sub(offset).ok_or_else(|| {
            Error::NotTransformImage("maximal vertex too close to the base point".into())
        })?;
        let letters = remove_block(r.letters(), start, &upper_block, "upper")?;
        let intermediate = CyclicWord::from_letters(letters)
            .map_err(|_| Error::NotTransformImage("upper removal left an unreduced word".into()))?;
        if intermediate.is_empty() {
            return Err(Error::NotTransformImage("upper removal emptied the relator".into()));
        }

        let lower_block = commutator(xl, xi);
        let walk = cycle_walk(&intermediate, chi)
            .map_err(|_| Error::NotTransformImage("intermediate relator is unbalanced".into()))?;
        let min_vertex = walk.first_min_vertex();
        let start = min_vertex.checked_sub(offset).ok_or_else(|| {
            Error::NotTransformImage("minimal vertex too close to the base point".into())
        })?;
        let letters = remove_block(intermediate.letters(), start, &lower_block, "lower")?;
        let core = CyclicWord::from_letters(letters)
            .map_err(|_| Error::NotTransformImage("lower removal left an unreduced word".into()))?;
        if core.is_empty() {
            return Err(Error::NotTransformImage("lower removal emptied the relator".into()));
        }
        recovered.push(core);
    }

    // Certify: the candidate must map back to the input exactly.
    let record = insert_commutators(&recovered, chi)
        .map_err(|e| Error::NotTransformImage(format!("re-insertion failed: {e}")))?;
    if record.output != tuple {
        return Err(Error::NotTransformImage(
            "re-insertion does not reproduce the input".into(),
        ));
    }
    Ok(recovered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sections::{classify, ConditionStatus, SectionShape};
    use crate::presentation::Presentation;
    use crate::sigma::classify_up_to_normalization;
    use crate::word::{parse_word, NameTable};

    fn cyc(text: &str) -> CyclicWord {
        CyclicWord::from_word(&parse_word(text, &NameTable::default()).unwrap()).unwrap()
    }

    #[test]
    fn worked_example_single_commutator() {
        let tuple = vec![cyc("[x1,x2]")];
        let chi = Character::new(vec![1, -1]);
        let record = insert_commutators(&tuple, &chi).unwrap();

        assert_eq!(record.insertions[0].epsilon, -1);
        assert_eq!(record.insertions[0].min_vertex, 3);
        assert_eq!(record.insertions[0].max_vertex, 1);
        assert_eq!(record.output[0].len(), 16);
        // r' = x1 x2 x1^-1 [x2,x1^-1] x2^-1; r'' inserts [x2^-1,x1]^2 at vertex 1.
        let expected = cyc(
            "x1 [x2^-1,x1]^2 x2 x1^-1 [x2,x1^-1] x2^-1",
        );
        assert_eq!(record.output[0], expected);

        let p = Presentation::new(2, record.output.clone()).unwrap();
        assert_eq!(classify(&p, &chi).unwrap().status, ConditionStatus::Unique);
        let (_, minus) = classify_up_to_normalization(&p, &chi.negated()).unwrap();
        assert_eq!(minus.status, ConditionStatus::Repeated);
    }

    #[test]
    fn round_trip_recovers_input() {
        let tuple = vec![cyc("[x1,x2]")];
        let chi = Character::new(vec![1, -1]);
        let record = insert_commutators(&tuple, &chi).unwrap();
        let recovered = remove_commutators(&record.output, &chi).unwrap();
        assert_eq!(recovered, tuple);
    }

    #[test]
    fn zero_value_generator_gives_edge_shape() {
        // n = 2 over x1,x2,x3 with phi = (1, 0, -1): relator 2 gets eps = +1
        // and its transformed lower section is a single full edge.
        let tuple = vec![cyc("[x1,x3]"), cyc("x1 x2 x3")];
        let chi = Character::new(vec![1, 0, -1]);
        let record = insert_commutators(&tuple, &chi).unwrap();
        assert_eq!(record.insertions[1].epsilon, 1);

        let p = Presentation::new(3, record.output.clone()).unwrap();
        let report = classify(&p, &chi).unwrap();
        assert_eq!(report.status, ConditionStatus::Unique);
        assert_eq!(report.witnesses[1].shape, Some((SectionShape::UniqueEdge, 2)));
        assert_eq!(report.witnesses[0].shape, Some((SectionShape::UniqueVertex, 1)));

        let recovered = remove_commutators(&record.output, &chi).unwrap();
        assert_eq!(recovered, tuple);
    }

    #[test]
    fn free_cancellation_witness() {
        // First minimal vertex is followed by x1 with value 0; the inserted
        // commutator would cancel against it.
        let tuple = vec![cyc("x1 x2 x1 x2^-1")];
        let chi = Character::new(vec![0, -1]);
        let err = insert_commutators(&tuple, &chi).unwrap_err();
        assert!(matches!(err, Error::FreeCancellation { relator: 0, vertex: 2 }));
    }

    #[test]
    fn unnormalized_input_rejected() {
        let tuple = vec![cyc("[x1,x2]")];
        assert!(matches!(
            insert_commutators(&tuple, &Character::new(vec![-1, 1])),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            insert_commutators(&tuple, &Character::new(vec![1, 1])),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn remove_rejects_non_images() {
        let chi = Character::new(vec![1, -1]);
        assert!(matches!(
            remove_commutators(&[cyc("[x1,x2]")], &chi),
            Err(Error::NotTransformImage(_))
        ));
        assert!(matches!(
            remove_commutators(&[cyc("[x1,x2]^2")], &chi),
            Err(Error::NotTransformImage(_))
        ));
    }

    #[test]
    fn length_accounting() {
        let tuple = vec![cyc("[x1,x3]"), cyc("x1 x2 x3")];
        let chi = Character::new(vec![1, 0, -1]);
        let record = insert_commutators(&tuple, &chi).unwrap();
        let total_in: usize = tuple.iter().map(|r| r.len()).sum();
        let total_out: usize = record.output.iter().map(|r| r.len()).sum();
        assert_eq!(total_out, total_in + 8 * tuple.len() + 4);
        let max_in = tuple.iter().map(|r| r.len()).max().unwrap();
        let max_out = record.output.iter().map(|r| r.len()).max().unwrap();
        assert!(max_out <= max_in + 12);
    }

    #[test]
    fn new_minimum_sits_inside_the_inserted_commutator() {
        let tuple = vec![cyc("[x1,x2]")];
        let chi = Character::new(vec![1, -1]);
        let record = insert_commutators(&tuple, &chi).unwrap();
        let old = cycle_walk(&tuple[0], &chi).unwrap();
        let new = cycle_walk(&record.output[0], &chi).unwrap();
        // Dropping by the last generator's value and, for a strictly positive
        // generator value, by that value too.
        let gen_drop = chi.value(1).max(0);
        assert_eq!(new.min_height, old.min_height + chi.value(2) - gen_drop);
    }
}
