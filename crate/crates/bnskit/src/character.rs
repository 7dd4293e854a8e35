//! Integral characters on a presentation's generators, the lattice of
//! characters vanishing on all relators, and normalization into the sign
//! convention used by the minimum-condition checkers: after reordering and
//! inverting generators, the first n generators have non-negative value and
//! the last has strictly negative value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg;
use crate::presentation::Presentation;
use crate::word::{CyclicWord, Letter, Word};

/// Integer vector of values on the generators; extends linearly to words by
/// exponent sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    values: Vec<i64>,
}

impl Character {
    pub fn new(values: Vec<i64>) -> Character {
        Character { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Value on generator `gen` (1-based).
    pub fn value(&self, gen: u32) -> i64 {
        self.values[(gen - 1) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn negated(&self) -> Character {
        Character { values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn scaled(&self, k: i64) -> Character {
        Character { values: self.values.iter().map(|v| v * k).collect() }
    }

    /// Greatest common divisor of the entries (0 for the zero character).
    pub fn content(&self) -> i64 {
        self.values.iter().fold(0i64, |acc, &v| num_integer::gcd(acc, v.abs()))
    }

    /// The character divided by its content, preserving sign.
    pub fn primitive(&self) -> Character {
        let c = self.content();
        if c <= 1 {
            return self.clone();
        }
        Character { values: self.values.iter().map(|v| v / c).collect() }
    }

    fn check_rank(&self, max_gen: u32) -> Result<()> {
        if max_gen as usize > self.values.len() {
            return Err(Error::RankMismatch { gen: max_gen, rank: self.values.len() });
        }
        Ok(())
    }

    /// Sum of `sign * value(gen)` over the letters.
    pub fn evaluate(&self, w: &Word) -> i64 {
        self.evaluate_letters(w.letters())
    }

    pub fn evaluate_cyclic(&self, w: &CyclicWord) -> i64 {
        self.evaluate_letters(w.letters())
    }

    pub(crate) fn evaluate_letters(&self, letters: &[Letter]) -> i64 {
        letters
            .iter()
            .map(|l| l.sign() as i64 * self.values[l.gen_index()])
            .sum()
    }

    pub fn evaluate_checked(&self, w: &Word) -> Result<i64> {
        self.check_rank(w.max_generator())?;
        Ok(self.evaluate(w))
    }

    /// Errors unless the character vanishes on every relator.
    pub fn require_vanishing(&self, p: &Presentation) -> Result<()> {
        if self.values.len() != p.rank() {
            return Err(Error::CharacterLength { got: self.values.len(), rank: p.rank() });
        }
        for (index, r) in p.relators().iter().enumerate() {
            let value = self.evaluate_cyclic(r);
            if value != 0 {
                return Err(Error::NonVanishing { index, value });
            }
        }
        Ok(())
    }

    /// Parses the CLI syntax `1,0,-1`.
    pub fn parse(text: &str) -> Result<Character> {
        let values = text
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Syntax(format!("invalid character entry: {e}")))?;
        if values.is_empty() {
            return Err(Error::Syntax("empty character".into()));
        }
        Ok(Character { values })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Basis of the lattice of integral characters vanishing on all relators,
/// i.e. the integer kernel of the abelianization matrix. Basis vectors are
/// primitive.
pub fn character_lattice(p: &Presentation) -> Vec<Character> {
    intlinalg::kernel_basis(&p.abelianization_matrix(), p.rank())
        .into_iter()
        .map(Character::new)
        .collect()
}

/// When the first Betti number is 1, the lattice has a single primitive
/// generator up to sign; this returns the representative whose first non-zero
/// entry is positive.
pub fn primitive_character(p: &Presentation) -> Result<Character> {
    let b1 = p.first_betti();
    if b1 != 1 {
        return Err(Error::BettiNotOne { b1 });
    }
    let basis = character_lattice(p);
    debug_assert_eq!(basis.len(), 1);
    let chi = basis.into_iter().next().unwrap();
    match chi.values().iter().find(|&&v| v != 0) {
        Some(&v) if v < 0 => Ok(chi.negated()),
        _ => Ok(chi),
    }
}

/// A change of free basis (generator reordering plus generator inversions)
/// bringing a character into the sign convention, applied consistently to the
/// presentation.
#[derive(Clone, Debug, Serialize)]
pub struct Normalization {
    /// `permutation[k]` is the old (0-based) generator sitting in new slot `k`.
    pub permutation: Vec<usize>,
    /// Indexed by old generator: whether it was replaced by its inverse.
    pub inverted: Vec<bool>,
    pub presentation: Presentation,
    pub character: Character,
}

impl Normalization {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(k, &old)| k == old)
            && self.inverted.iter().all(|&b| !b)
    }

    /// Maps a word over the normalized generators back to the original ones.
    pub fn to_original(&self, w: &Word) -> Word {
        let letters = w
            .letters()
            .iter()
            .map(|l| {
                let old = self.permutation[l.gen_index()];
                let sign = if self.inverted[old] { -l.sign() } else { l.sign() };
                Letter::new(old as u32 + 1, sign)
            })
            .collect();
        Word::from_reduced_unchecked(letters)
    }

    /// Maps a word over the original generators into normalized coordinates.
    pub fn from_original(&self, w: &Word) -> Word {
        let mut slot_of = vec![0usize; self.permutation.len()];
        for (k, &old) in self.permutation.iter().enumerate() {
            slot_of[old] = k;
        }
        let letters = w
            .letters()
            .iter()
            .map(|l| {
                let old = l.gen_index();
                let sign = if self.inverted[old] { -l.sign() } else { l.sign() };
                Letter::new(slot_of[old] as u32 + 1, sign)
            })
            .collect();
        Word::from_reduced_unchecked(letters)
    }
}

fn validate_for_normalization(p: &Presentation, chi: &Character) -> Result<()> {
    p.require_deficiency_one()?;
    if chi.len() != p.rank() {
        return Err(Error::CharacterLength { got: chi.len(), rank: p.rank() });
    }
    if chi.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    chi.require_vanishing(p)
}

/// Normalizes with a forced choice of the last-slot generator (0-based
/// `last`), which must have non-zero value. The chosen generator is inverted
/// if its value is positive; every other generator with negative value is
/// inverted; the remaining generators keep their relative order.
pub fn normalize_with_last(p: &Presentation, chi: &Character, last: usize) -> Result<Normalization> {
    validate_for_normalization(p, chi)?;
    let m = p.rank();
    if last >= m || chi.values()[last] == 0 {
        return Err(Error::InvalidInput(format!(
            "generator {} cannot go in the negative slot (value {})",
            last + 1,
            chi.values().get(last).copied().unwrap_or(0)
        )));
    }

    let inverted: Vec<bool> = (0..m)
        .map(|i| {
            if i == last {
                chi.values()[i] > 0
            } else {
                chi.values()[i] < 0
            }
        })
        .collect();
    let mut permutation: Vec<usize> = (0..m).filter(|&i| i != last).collect();
    permutation.push(last);

    let new_values: Vec<i64> = permutation
        .iter()
        .map(|&old| {
            let v = chi.values()[old];
            if inverted[old] {
                -v
            } else {
                v
            }
        })
        .collect();

    let mut slot_of = vec![0usize; m];
    for (k, &old) in permutation.iter().enumerate() {
        slot_of[old] = k;
    }
    // Inversion flips letter signs in place and reordering renames generators;
    // both preserve free and cyclic reducedness.
    let relators: Vec<CyclicWord> = p
        .relators()
        .iter()
        .map(|r| {
            let letters = r
                .letters()
                .iter()
                .map(|l| {
                    let old = l.gen_index();
                    let sign = if inverted[old] { -l.sign() } else { l.sign() };
                    Letter::new(slot_of[old] as u32 + 1, sign)
                })
                .collect();
            CyclicWord::from_letters(letters).expect("normalization preserves reducedness")
        })
        .collect();

    let presentation = Presentation::new(m, relators)?;
    let character = Character::new(new_values);
    debug_assert!(character.values()[..m - 1].iter().all(|&v| v >= 0));
    debug_assert!(character.values()[m - 1] < 0);
    Ok(Normalization { permutation, inverted, presentation, character })
}

/// Deterministic choice of the last-slot generator: among the generators with
/// negative value pick the one of largest |value| (ties to the lowest index);
/// if none is negative, the same rule over the non-zero values.
pub(crate) fn deterministic_last(chi: &Character) -> Option<usize> {
    let negatives: Vec<usize> = (0..chi.len()).filter(|&i| chi.values()[i] < 0).collect();
    let pool: Vec<usize> = if negatives.is_empty() {
        (0..chi.len()).filter(|&i| chi.values()[i] != 0).collect()
    } else {
        negatives
    };
    pool.into_iter().max_by_key(|&i| (chi.values()[i].abs(), std::cmp::Reverse(i)))
}

/// Normalizes `(p, chi)` into the sign convention with the deterministic
/// tie-break rule.
pub fn normalize(p: &Presentation, chi: &Character) -> Result<Normalization> {
    validate_for_normalization(p, chi)?;
    let last = deterministic_last(chi).ok_or(Error::ZeroCharacter)?;
    normalize_with_last(p, chi, last)
}

/// All valid normalizations of `(p, chi)`, one per admissible last-slot
/// generator, deterministic-rule choice first and the rest in index order.
///
/// The minimum conditions quantify over normalizations, so decision
/// procedures must consider every candidate, not just the canonical one.
pub fn candidate_normalizations(p: &Presentation, chi: &Character) -> Result<Vec<Normalization>> {
    validate_for_normalization(p, chi)?;
    let preferred = deterministic_last(chi).ok_or(Error::ZeroCharacter)?;
    let mut order = vec![preferred];
    order.extend((0..chi.len()).filter(|&i| i != preferred && chi.values()[i] != 0));
    order
        .into_iter()
        .map(|last| normalize_with_last(p, chi, last))
        .collect()
}
