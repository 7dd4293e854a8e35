//! Metric small cancellation: piece enumeration over the symmetrized relator
//! set and the C'(lambda) check.
//!
//! A piece is a common subword occurring at two distinct positions of the
//! symmetrized set (all cyclic rotations of all relators and their inverses).
//! An occurrence is identified by (relator, orientation, start offset); the
//! identical occurrence is excluded, overlaps of a relator with its own
//! distinct rotations or inverse are included.

use num_rational::Rational64;
use serde::Serialize;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

/// Location of one occurrence of a piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceLocation {
    pub relator: usize,
    pub inverted: bool,
    pub start: usize,
}

/// The longest piece found, with its two witnessing occurrences.
#[derive(Clone, Debug, Serialize)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: PieceLocation,
    pub second: PieceLocation,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallCancellationReport {
    /// Threshold lambda of the metric condition C'(lambda).
    pub lambda: Rational64,
    /// max over pieces p and relators r containing p of |p| / |r|.
    pub max_piece_ratio: Rational64,
    /// True iff every piece p in every relator r satisfies |p| < lambda * |r|.
    pub passes: bool,
    pub witness: Option<PieceWitness>,
}

struct Occurrence {
    relator: usize,
    inverted: bool,
    start: usize,
}

/// Checks the metric condition C'(lambda) (default lambda = 1/6 at call sites).
pub fn small_cancellation_check(p: &Presentation, lambda: Rational64) -> SmallCancellationReport {
    // Materialize both orientations of every relator once.
    let oriented: Vec<(Vec<Letter>, Vec<Letter>)> = p
        .relators()
        .iter()
        .map(|r| (r.letters().to_vec(), r.inverse().letters().to_vec()))
        .collect();

    let mut occurrences: Vec<Occurrence> = Vec::new();
    for (i, r) in p.relators().iter().enumerate() {
        for inverted in [false, true] {
            for start in 0..r.len() {
                occurrences.push(Occurrence { relator: i, inverted, start });
            }
        }
    }

    let word_of = |o: &Occurrence| -> &[Letter] {
        let (fwd, rev) = &oriented[o.relator];
        if o.inverted { rev } else { fwd }
    };

    let mut max_ratio = Rational64::new(0, 1);
    let mut witness: Option<PieceWitness> = None;
    let mut longest = 0usize;

    for a in 0..occurrences.len() {
        for b in a + 1..occurrences.len() {
            let (oa, ob) = (&occurrences[a], &occurrences[b]);
            let (wa, wb) = (word_of(oa), word_of(ob));
            let cap = wa.len().min(wb.len());
            let mut l = 0;
            while l < cap && wa[(oa.start + l) % wa.len()] == wb[(ob.start + l) % wb.len()] {
                l += 1;
            }
            if l == 0 {
                continue;
            }
            let ratio = Rational64::new(l as i64, wa.len() as i64)
                .max(Rational64::new(l as i64, wb.len() as i64));
            if ratio > max_ratio {
                max_ratio = ratio;
            }
            if l > longest {
                longest = l;
                let letters: Vec<Letter> = (0..l).map(|t| wa[(oa.start + t) % wa.len()]).collect();
                witness = Some(PieceWitness {
                    // A subword of a cyclically reduced word is reduced.
                    piece: Word::from_reduced_unchecked(letters),
                    first: PieceLocation {
                        relator: oa.relator,
                        inverted: oa.inverted,
                        start: oa.start,
                    },
                    second: PieceLocation {
                        relator: ob.relator,
                        inverted: ob.inverted,
                        start: ob.start,
                    },
                });
            }
        }
    }

    SmallCancellationReport { lambda, max_piece_ratio: max_ratio, passes: max_ratio < lambda, witness }
}
