//! Membership verdicts for integral characters in the BNS invariant of a
//! deficiency-1 presentation, assembled from the minimum-condition
//! classification and the Fox-matrix leading-term certificate, plus the
//! derived symmetry / separability / fibering report.
//!
//! The criterion is sufficient, not complete: UNKNOWN is an honest outcome,
//! and every verdict carries the chain of results it rests on.

use serde::Serialize;

use crate::character::{
    candidate_normalizations, primitive_character, Character, Normalization,
};
use crate::error::{Error, Result};
use crate::fox::{structural_verify, StructureReport, UnitVerdict};
use crate::presentation::Presentation;
use crate::sections::{classify, ConditionReport, ConditionStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    #[serde(rename = "IN_SIGMA")]
    In,
    #[serde(rename = "NOT_IN_SIGMA")]
    NotIn,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Membership::In => "IN_SIGMA",
            Membership::NotIn => "NOT_IN_SIGMA",
            Membership::Unknown => "UNKNOWN",
        })
    }
}

/// A membership decision with its justification chain.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaVerdict {
    pub membership: Membership,
    pub justification: Vec<String>,
    pub character: Character,
}

/// One normalized classification of `(p, chi)`.
#[derive(Clone, Debug)]
pub struct NormalizedClassification {
    pub normalization: Normalization,
    pub report: ConditionReport,
}

/// Classifies `(p, chi)` over every admissible normalization.
///
/// The minimum conditions quantify over reorderings and inversions of the
/// generators; heights and sections are invariant under those moves, so only
/// the choice of the negative-slot generator matters. This evaluates every
/// choice and returns the decisive one (UNIQUE first, then REPEATED). Finding
/// both for the same character would contradict the membership dichotomy and
/// aborts loudly.
pub fn classify_up_to_normalization(
    p: &Presentation,
    chi: &Character,
) -> Result<(Normalization, ConditionReport)> {
    let mut unique = None;
    let mut repeated = None;
    let mut first = None;
    for norm in candidate_normalizations(p, chi)? {
        let report = classify(&norm.presentation, &norm.character)?;
        match report.status {
            ConditionStatus::Unique if unique.is_none() => unique = Some((norm, report)),
            ConditionStatus::Repeated if repeated.is_none() => repeated = Some((norm, report)),
            _ if first.is_none() => first = Some((norm, report)),
            _ => {}
        }
    }
    if unique.is_some() && repeated.is_some() {
        return Err(Error::ClassificationConflict(format!(
            "character {chi} classifies as UNIQUE and REPEATED under different normalizations"
        )));
    }
    unique
        .or(repeated)
        .or(first)
        .ok_or_else(|| Error::InvalidInput("no admissible normalization".into()))
}

fn describe_normalization(norm: &Normalization) -> String {
    if norm.is_identity() {
        "normalization: identity".to_string()
    } else {
        let inverted: Vec<String> = norm
            .inverted
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| format!("x{}", i + 1))
            .collect();
        format!(
            "normalization: order ({}), inverted {{{}}}",
            norm.permutation
                .iter()
                .map(|&i| format!("x{}", i + 1))
                .collect::<Vec<_>>()
                .join(","),
            inverted.join(",")
        )
    }
}

fn describe_matching(report: &ConditionReport) -> String {
    match &report.matching {
        Some(m) => m
            .iter()
            .enumerate()
            .map(|(i, g)| format!("r{} -> x{}", i + 1, g))
            .collect::<Vec<_>>()
            .join(", "),
        None => "-".to_string(),
    }
}

/// Decides membership of `chi` in the BNS invariant of the group presented
/// by `p`, using the minimum conditions as a sufficient criterion.
pub fn decide(
    p: &Presentation,
    chi: &Character,
    assume_no_zero_divisors: bool,
) -> Result<SigmaVerdict> {
    let (norm, report) = classify_up_to_normalization(p, chi)?;
    let mut justification = vec![describe_normalization(&norm)];
    match report.status {
        ConditionStatus::Unique => {
            justification.push(format!(
                "condition status: UNIQUE (matching {})",
                describe_matching(&report)
            ));
            justification
                .push("unique minimum condition certifies membership in Sigma".to_string());
            Ok(SigmaVerdict {
                membership: Membership::In,
                justification,
                character: chi.clone(),
            })
        }
        ConditionStatus::Repeated => {
            justification.push(format!(
                "condition status: REPEATED (repeated relator r{}, matching {})",
                report.repeated_relator.unwrap() + 1,
                describe_matching(&report)
            ));
            let structure: StructureReport = structural_verify(
                &norm.presentation,
                &norm.character,
                &report,
                assume_no_zero_divisors,
            )?;
            justification.push(
                "Fox-matrix leading terms verified: off-diagonal entries above the row minima, \
                 single-term diagonal units off the repeated slot, two-term piece on it"
                    .to_string(),
            );
            let cert = structure
                .nonunit_certificate
                .as_ref()
                .expect("repeated verification always produces a certificate");
            if assume_no_zero_divisors && cert.verdict == UnitVerdict::NonUnit {
                justification.push(
                    "hypothesis asserted: group ring without zero divisors; the repeated slot \
                     carries a non-unit, so the restricted Fox matrix is not invertible over \
                     the Novikov ring"
                        .to_string(),
                );
                justification.push(
                    "first Novikov homology is non-zero; by Sikorav's criterion the character \
                     is not in Sigma"
                        .to_string(),
                );
                Ok(SigmaVerdict {
                    membership: Membership::NotIn,
                    justification,
                    character: chi.clone(),
                })
            } else {
                justification.push(
                    "no-zero-divisor hypothesis not asserted: the two-term certificate is \
                     recorded but the verdict stays UNKNOWN"
                        .to_string(),
                );
                Ok(SigmaVerdict {
                    membership: Membership::Unknown,
                    justification,
                    character: chi.clone(),
                })
            }
        }
        ConditionStatus::Neither => {
            justification.push("condition status: NEITHER under every normalization".to_string());
            justification.push("the minimum-condition criterion is silent here".to_string());
            Ok(SigmaVerdict {
                membership: Membership::Unknown,
                justification,
                character: chi.clone(),
            })
        }
    }
}

/// Symmetry of the BNS invariant along the rank-1 character lattice, with the
/// separability and fibering consequences.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub b1: usize,
    pub character: Character,
    pub plus: SigmaVerdict,
    pub minus: SigmaVerdict,
    /// The two sign classes received opposite certified verdicts.
    pub nonsymmetric: bool,
    /// A non-symmetric integral BNS invariant obstructs subgroup
    /// separability.
    pub not_lerf: bool,
    /// With b1 = 1 and a non-symmetric invariant the group does not fibre
    /// algebraically.
    pub not_fibering: bool,
}

/// Runs [`decide`] on both signs of the primitive character. Requires first
/// Betti number 1.
pub fn symmetry_report(p: &Presentation, assume_no_zero_divisors: bool) -> Result<SymmetryReport> {
    p.require_deficiency_one()?;
    let b1 = p.first_betti();
    if b1 != 1 {
        return Err(Error::BettiNotOne { b1 });
    }
    let chi = primitive_character(p)?;
    let plus = decide(p, &chi, assume_no_zero_divisors)?;
    let minus = decide(p, &chi.negated(), assume_no_zero_divisors)?;
    let nonsymmetric = matches!(
        (plus.membership, minus.membership),
        (Membership::In, Membership::NotIn) | (Membership::NotIn, Membership::In)
    );
    Ok(SymmetryReport {
        b1,
        character: chi,
        plus,
        minus,
        nonsymmetric,
        not_lerf: nonsymmetric,
        not_fibering: nonsymmetric,
    })
}
