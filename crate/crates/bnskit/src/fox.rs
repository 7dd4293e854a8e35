//! Free differential calculus on relators and the graded leading-term
//! analysis that certifies non-invertibility of the restricted Fox matrix
//! over the Novikov ring.
//!
//! Everything stays in the free-group ring: the leading-term conclusions are
//! statements about prefixes of relators, so no quotient arithmetic or word
//! problem is ever needed. The degree variable `t` is never materialized;
//! degrees are tracked abstractly through the character.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::sections::{cycle_walk, ConditionReport, ConditionStatus};
use crate::word::{CyclicWord, Word};

/// Finite formal sum of free-group words with rational coefficients.
/// Zero coefficients are never stored; words are freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, Rational64>,
}

impl GroupRingElement {
    pub fn zero() -> GroupRingElement {
        GroupRingElement::default()
    }

    pub fn one() -> GroupRingElement {
        GroupRingElement::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> GroupRingElement {
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational64::new(1, 1));
        GroupRingElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational64)>>(iter: I) -> GroupRingElement {
        let mut e = GroupRingElement::zero();
        for (w, c) in iter {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational64 {
        self.terms.get(w).copied().unwrap_or_else(Rational64::zero)
    }

    fn add_term(&mut self, w: Word, c: Rational64) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -*c);
        }
        out
    }

    pub fn neg(&self) -> GroupRingElement {
        GroupRingElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -*c)).collect(),
        }
    }

    pub fn scale(&self, k: Rational64) -> GroupRingElement {
        if k.is_zero() {
            return GroupRingElement::zero();
        }
        GroupRingElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), *c * k)).collect(),
        }
    }

    /// Group-ring product: words multiply by reduced concatenation.
    pub fn mul(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), *a * *b);
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})*{w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Fox derivative of a relator with respect to generator `gen`, read from the
/// relator's base point.
///
/// The derivative is the signed sum of prefixes: `+v` for every prefix `v`
/// immediately preceding an occurrence of the generator, and `-u` for every
/// prefix `u` ending in its inverse. This is the closed form of the product
/// rule with `d(x)/dx = 1` and `d(x^-1)/dx = -x^-1`.
pub fn fox_derivative(r: &CyclicWord, gen: u32) -> GroupRingElement {
    let letters = r.letters();
    let mut out = GroupRingElement::zero();
    for (k, l) in letters.iter().enumerate() {
        if l.gen() != gen {
            continue;
        }
        if l.sign() > 0 {
            let prefix = Word::from_reduced_unchecked(letters[..k].to_vec());
            out.add_term(prefix, Rational64::new(1, 1));
        } else {
            let prefix = Word::from_reduced_unchecked(letters[..=k].to_vec());
            out.add_term(prefix, Rational64::new(-1, 1));
        }
    }
    out
}

/// A group-ring element bucketed by the character value of its words.
#[derive(Clone, Debug, Default)]
pub struct GradedDecomposition {
    pieces: BTreeMap<i64, GroupRingElement>,
}

impl GradedDecomposition {
    /// The t-order: least degree carrying a non-zero piece, `None` for the
    /// zero element (the infinity sentinel).
    pub fn min_degree(&self) -> Option<i64> {
        self.pieces.keys().next().copied()
    }

    pub fn piece(&self, degree: i64) -> Option<&GroupRingElement> {
        self.pieces.get(&degree)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&i64, &GroupRingElement)> {
        self.pieces.iter()
    }

    pub fn leading(&self) -> Option<(i64, &GroupRingElement)> {
        self.pieces.iter().next().map(|(d, e)| (*d, e))
    }
}

/// Buckets the terms of `e` by their character value.
pub fn grade(e: &GroupRingElement, chi: &Character) -> Result<GradedDecomposition> {
    let mut pieces: BTreeMap<i64, GroupRingElement> = BTreeMap::new();
    for (w, c) in e.terms() {
        let d = chi.evaluate_checked(w)?;
        pieces
            .entry(d)
            .or_insert_with(GroupRingElement::zero)
            .add_term(w.clone(), *c);
    }
    Ok(GradedDecomposition { pieces })
}

/// Verdict of the leading-term unit test over the Novikov ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnitVerdict {
    #[serde(rename = "UNIT")]
    Unit,
    #[serde(rename = "NONUNIT")]
    NonUnit,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

/// Decides invertibility of a homogeneous piece from its term pattern.
///
/// A single term `c*w` is a unit (group elements are units, non-zero scalars
/// too). A two-term piece `a*u + b*uv` with `v` a non-trivial word of value 0
/// is a non-unit when the group ring is assumed to have no zero-divisors:
/// `u*(a + b*v)` and `a + b*v = b*(v - (-a/b))` fails the Novikov unit
/// criterion because `v` has value 0. Anything else is not certified.
pub fn leading_unit_test(
    piece: &GroupRingElement,
    chi: &Character,
    assume_no_zero_divisors: bool,
) -> Result<UnitVerdict> {
    let mut degrees = piece
        .terms()
        .map(|(w, _)| chi.evaluate_checked(w))
        .collect::<Result<Vec<_>>>()?;
    degrees.dedup();
    if degrees.len() > 1 {
        return Err(Error::NotHomogeneous);
    }
    Ok(match piece.term_count() {
        1 => UnitVerdict::Unit,
        2 if assume_no_zero_divisors => UnitVerdict::NonUnit,
        _ => UnitVerdict::Unknown,
    })
}

/// Leading piece of one diagonal entry of the restricted Fox matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LeadingPattern {
    /// A single term `c * word`: a unit times a kernel element.
    Single { word: Word },
    /// Two terms `a*base + b*(base.loop)` with the loop word of value 0.
    Pair { base: Word, kernel_loop: Word },
}

/// Certificate that the repeated relator's diagonal entry is a non-unit,
/// carrying the hypotheses it rests on.
#[derive(Clone, Debug, Serialize)]
pub struct NonUnitCertificate {
    pub base: Word,
    pub kernel_loop: Word,
    pub verdict: UnitVerdict,
    pub assumed_no_zero_divisors: bool,
}

/// Verified leading-term structure of the restricted Fox matrix.
///
/// Rows and columns are permuted so that the repeated relator and its matched
/// generator sit in slot 0; `relator_order[i]` and `column_gens[i]` record the
/// permutation.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub relator_order: Vec<usize>,
    pub column_gens: Vec<u32>,
    /// Per-slot minimum height of the relator's cycle walk.
    pub min_heights: Vec<i64>,
    /// Entry `(i, j)`, `i != j`: every term of the off-diagonal derivative has
    /// value strictly above the row minimum.
    pub offdiag_ok: Vec<Vec<bool>>,
    pub diag_leading: Vec<LeadingPattern>,
    pub nonunit_certificate: Option<NonUnitCertificate>,
}

/// Checks the leading-term structure of the restricted Fox matrix implied by
/// a REPEATED classification (or, in diagnostics mode, a UNIQUE one).
///
/// For every row `i` with minimum height `P_i`: off-diagonal entries must
/// have all terms strictly above `P_i`; diagonal entries must attain `P_i`
/// with a single-term piece, except the repeated slot which must show the
/// two-term pattern. Any violation is a loud error: it would falsify the
/// leading-term lemma on this input.
pub fn structural_verify(
    p: &Presentation,
    chi: &Character,
    report: &ConditionReport,
    assume_no_zero_divisors: bool,
) -> Result<StructureReport> {
    if report.status == ConditionStatus::Neither {
        return Err(Error::InvalidInput(
            "structural verification needs a UNIQUE or REPEATED classification".into(),
        ));
    }
    let matching = report
        .matching
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("classification carries no matching".into()))?;
    let n = p.relator_count();

    let mut relator_order: Vec<usize> = (0..n).collect();
    if let Some(j) = report.repeated_relator {
        relator_order.retain(|&i| i != j);
        relator_order.insert(0, j);
    }
    let column_gens: Vec<u32> = relator_order.iter().map(|&i| matching[i]).collect();

    let mut min_heights = Vec::with_capacity(n);
    for &ri in &relator_order {
        min_heights.push(cycle_walk(&p.relators()[ri], chi)?.min_height);
    }

    let repeated_slot = report.repeated_relator.map(|_| 0usize);
    let mut offdiag_ok = vec![vec![true; n]; n];
    let mut diag_leading = Vec::with_capacity(n);
    let mut certificate = None;

    for (i, &ri) in relator_order.iter().enumerate() {
        let relator = &p.relators()[ri];
        for (j, &gen) in column_gens.iter().enumerate() {
            let derivative = fox_derivative(relator, gen);
            let graded = grade(&derivative, chi)?;
            if i != j {
                let ok = graded.min_degree().is_none_or(|d| d > min_heights[i]);
                offdiag_ok[i][j] = ok;
                if !ok {
                    return Err(Error::StructureVerification {
                        place: format!("relator {ri}, generator x{gen}"),
                        detail: format!(
                            "off-diagonal entry reaches the row minimum {} (degree {:?})",
                            min_heights[i],
                            graded.min_degree()
                        ),
                    });
                }
                continue;
            }

            // Diagonal entry: it must attain the row minimum exactly.
            let place = format!("relator {ri}, diagonal generator x{gen}");
            let (degree, piece) = graded.leading().ok_or_else(|| Error::StructureVerification {
                place: place.clone(),
                detail: "diagonal derivative vanishes".into(),
            })?;
            if degree != min_heights[i] {
                return Err(Error::StructureVerification {
                    place,
                    detail: format!(
                        "diagonal leading degree {degree} differs from the row minimum {}",
                        min_heights[i]
                    ),
                });
            }
            let expect_pair = repeated_slot == Some(i);
            match piece.term_count() {
                1 if !expect_pair => {
                    let word = piece.terms().next().unwrap().0.clone();
                    diag_leading.push(LeadingPattern::Single { word });
                }
                2 if expect_pair => {
                    let mut words: Vec<&Word> = piece.terms().map(|(w, _)| w).collect();
                    words.sort_by_key(|w| w.len());
                    let base = words[0].clone();
                    let kernel_loop = base.invert().concat(words[1]);
                    if kernel_loop.is_empty() || chi.evaluate(&kernel_loop) != 0 {
                        return Err(Error::StructureVerification {
                            place,
                            detail: "pair words do not differ by a value-0 loop".into(),
                        });
                    }
                    let verdict = leading_unit_test(piece, chi, assume_no_zero_divisors)?;
                    if assume_no_zero_divisors && verdict != UnitVerdict::NonUnit {
                        return Err(Error::StructureVerification {
                            place,
                            detail: format!("expected a NONUNIT verdict, got {verdict:?}"),
                        });
                    }
                    certificate = Some(NonUnitCertificate {
                        base: base.clone(),
                        kernel_loop: kernel_loop.clone(),
                        verdict,
                        assumed_no_zero_divisors: assume_no_zero_divisors,
                    });
                    diag_leading.push(LeadingPattern::Pair { base, kernel_loop });
                }
                count => {
                    return Err(Error::StructureVerification {
                        place,
                        detail: format!(
                            "diagonal leading piece has {count} terms, expected {}",
                            if expect_pair { 2 } else { 1 }
                        ),
                    });
                }
            }
        }
    }

    Ok(StructureReport {
        relator_order,
        column_gens,
        min_heights,
        offdiag_ok,
        diag_leading,
        nonunit_certificate: certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sections::classify;
    use crate::word::{parse_word, NameTable};
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        parse_word(text, &NameTable::default()).unwrap()
    }

    fn cyc(text: &str) -> CyclicWord {
        CyclicWord::from_word(&w(text)).unwrap()
    }

    fn gre(pairs: &[(&str, i64)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            pairs
                .iter()
                .map(|(t, c)| (w(t), Rational64::new(*c, 1))),
        )
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(fox_derivative(&cyc("[x1,x2]"), 1), gre(&[("1", 1), ("x1 x2 x1^-1", -1)]));
        assert_eq!(
            fox_derivative(&cyc("[x1,x2]"), 2),
            gre(&[("x1", 1), ("x1 x2 x1^-1 x2^-1", -1)])
        );
        assert_eq!(fox_derivative(&cyc("x1^3"), 1), gre(&[("1", 1), ("x1", 1), ("x1^2", 1)]));
        assert_eq!(fox_derivative(&cyc("x1"), 1), GroupRingElement::one());
    }

    /// Recursive product-rule oracle: d(l w) = d(l) + l * d(w).
    fn derivative_oracle(letters: &[crate::word::Letter], gen: u32) -> GroupRingElement {
        match letters.split_first() {
            None => GroupRingElement::zero(),
            Some((l, rest)) => {
                let head = if l.gen() != gen {
                    GroupRingElement::zero()
                } else if l.sign() > 0 {
                    GroupRingElement::one()
                } else {
                    GroupRingElement::from_word(Word::from_reduced_unchecked(vec![*l])).neg()
                };
                let tail = GroupRingElement::from_word(Word::from_reduced_unchecked(vec![*l]))
                    .mul(&derivative_oracle(rest, gen));
                head.add(&tail)
            }
        }
    }

    #[test]
    fn grade_examples() {
        let chi = Character::new(vec![1, -1]);
        let g = grade(&gre(&[("1", 1), ("x1 x2 x1^-1", -1)]), &chi).unwrap();
        assert_eq!(g.min_degree(), Some(-1));
        assert_eq!(g.piece(0).unwrap().term_count(), 1);
        assert_eq!(g.piece(-1).unwrap().coefficient(&w("x1 x2 x1^-1")), Rational64::new(-1, 1));

        let g = grade(&GroupRingElement::zero(), &chi).unwrap();
        assert_eq!(g.min_degree(), None);

        let g = grade(&gre(&[("x1", 1), ("x2", 1)]), &chi).unwrap();
        let degrees: Vec<i64> = g.pieces().map(|(d, _)| *d).collect();
        assert_eq!(degrees, vec![-1, 1]);
    }

    #[test]
    fn unit_test_examples() {
        let chi = Character::new(vec![1, -1]);
        let single = gre(&[("x1 x2 x1^-1", 3)]);
        assert_eq!(leading_unit_test(&single, &chi, false).unwrap(), UnitVerdict::Unit);

        // u + u*v with phi(v) = 0.
        let pair = gre(&[("x1", 1), ("x1 x1 x2 x1^-1 x2^-1", 1)]);
        assert_eq!(leading_unit_test(&pair, &chi, true).unwrap(), UnitVerdict::NonUnit);
        assert_eq!(leading_unit_test(&pair, &chi, false).unwrap(), UnitVerdict::Unknown);

        let triple = gre(&[("x1", 1), ("x1 x1 x2 x1^-1 x2^-1", 1), ("x2 x1 x1", 1)]);
        assert_eq!(leading_unit_test(&triple, &chi, true).unwrap(), UnitVerdict::Unknown);

        let mixed = gre(&[("x1", 1), ("x2", 1)]);
        assert!(matches!(leading_unit_test(&mixed, &chi, true), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn structural_verify_repeated_example() {
        let p = Presentation::parse("<x1,x2 | [x1,x2]^2>").unwrap();
        let chi = Character::new(vec![1, -1]);
        let report = classify(&p, &chi).unwrap();
        assert_eq!(report.status, ConditionStatus::Repeated);

        let sr = structural_verify(&p, &chi, &report, true).unwrap();
        assert_eq!(sr.min_heights, vec![-1]);
        match &sr.diag_leading[0] {
            LeadingPattern::Pair { base, kernel_loop } => {
                assert_eq!(base, &w("x1 x2 x1^-1"));
                assert_eq!(kernel_loop, &w("x2^-1 x1 x2 x1^-1"));
                assert_eq!(chi.evaluate(kernel_loop), 0);
            }
            other => panic!("expected a pair, got {other:?}"),
        }
        let cert = sr.nonunit_certificate.unwrap();
        assert_eq!(cert.verdict, UnitVerdict::NonUnit);

        // The leading piece itself has both terms with coefficient -1.
        let graded = grade(&fox_derivative(&p.relators()[0], 1), &chi).unwrap();
        let piece = graded.piece(-1).unwrap();
        assert_eq!(piece.coefficient(&w("x1 x2 x1^-1")), Rational64::new(-1, 1));
        assert_eq!(
            piece.coefficient(&w("x1 x2 x1^-1 x2^-1 x1 x2 x1^-1")),
            Rational64::new(-1, 1)
        );
    }

    #[test]
    fn structural_verify_unique_diagnostics() {
        let p = Presentation::parse("<x1,x2 | [x1,x2]>").unwrap();
        let chi = Character::new(vec![1, -1]);
        let report = classify(&p, &chi).unwrap();
        let sr = structural_verify(&p, &chi, &report, false).unwrap();
        assert!(matches!(sr.diag_leading[0], LeadingPattern::Single { .. }));
        assert!(sr.nonunit_certificate.is_none());
    }

    fn arb_relator(rank: u32, maxlen: usize) -> impl Strategy<Value = CyclicWord> {
        prop::collection::vec((1..=rank, prop::bool::ANY), 1..=maxlen).prop_filter_map(
            "nonempty cyclic word",
            |raw| {
                let word = Word::reduce(
                    raw.into_iter()
                        .map(|(g, s)| crate::word::Letter::new(g, if s { 1 } else { -1 })),
                );
                let (core, _) = word.cyclic_reduce();
                (!core.is_empty()).then_some(core)
            },
        )
    }

    proptest! {
        /// Fundamental identity: sum_j dr/dx_j * (x_j - 1) = r - 1.
        #[test]
        fn fundamental_identity(r in arb_relator(3, 20)) {
            let mut lhs = GroupRingElement::zero();
            for gen in 1..=3u32 {
                let factor = GroupRingElement::from_word(
                    Word::from_reduced_unchecked(vec![crate::word::Letter::positive(gen)])
                ).sub(&GroupRingElement::one());
                lhs = lhs.add(&fox_derivative(&r, gen).mul(&factor));
            }
            let rhs = GroupRingElement::from_word(r.as_word()).sub(&GroupRingElement::one());
            prop_assert_eq!(lhs, rhs);
        }

        /// Prefix-rule derivative agrees with the recursive product rule.
        #[test]
        fn derivative_matches_product_rule(r in arb_relator(3, 16), gen in 1..=3u32) {
            prop_assert_eq!(fox_derivative(&r, gen), derivative_oracle(r.letters(), gen));
        }

        /// Graded multiplicativity of the t-order; equality for single-term
        /// leading pieces (the free-group ring has no zero divisors).
        #[test]
        fn grade_respects_multiplication(
            a in arb_relator(2, 8),
            b in arb_relator(2, 8),
        ) {
            let chi = Character::new(vec![2, -1]);
            let e = fox_derivative(&a, 1);
            let f = fox_derivative(&b, 2);
            let ge = grade(&e, &chi).unwrap();
            let gf = grade(&f, &chi).unwrap();
            let gp = grade(&e.mul(&f), &chi).unwrap();
            match (ge.min_degree(), gf.min_degree(), gp.min_degree()) {
                (Some(de), Some(df), Some(dp)) => {
                    prop_assert!(dp >= de + df);
                    let single = ge.piece(de).unwrap().term_count() == 1
                        && gf.piece(df).unwrap().term_count() == 1;
                    if single {
                        prop_assert_eq!(dp, de + df);
                    }
                }
                (Some(_), Some(_), None) => {
                    // Full cancellation cannot happen in the free-group ring
                    // unless one factor was zero.
                    prop_assert!(e.is_zero() || f.is_zero());
                }
                _ => {}
            }
        }
    }
}
