//! Combinatorial toolkit for the Bieri-Neumann-Strebel (BNS) invariant of
//! deficiency-1 group presentations.
//!
//! The library decides membership of integral characters in the BNS invariant
//! through the unique/repeated minimum conditions on relator cycle graphs and
//! the Fox-calculus leading-term obstruction over the Novikov ring, and runs
//! Monte Carlo experiments over the few-relator random model: random
//! deficiency-1 groups with first Betti number 1 whose invariant comes out
//! non-symmetric are neither subgroup separable nor algebraically fibering.
//!
//! Capabilities, one runnable example each (`cargo run -p bnskit --example <name>`):
//!
//! - `sigma_verdict` - membership verdicts with justification chains
//! - `commutator_insertion` - the insertion map and its left inverse
//! - `fox_matrix` - Fox derivatives and their graded leading terms
//! - `small_cancellation` - piece analysis and the C'(1/6) check
//! - `random_survey` - frequencies over the few-relator model
//! - `exact_counts` - transfer-matrix counts vs. uniform sampling
//! - `growth_degrees` - automorphism iteration and degree estimation
//!
//! The `bnskit` binary exposes the same operations as subcommands
//! (`analyze`, `sample`, `transform`, `fox`, `growth`, `count`).

pub mod character;
pub mod error;
pub mod fox;
pub mod growth;
mod intlinalg;
pub mod presentation;
pub mod random;
pub mod sections;
pub mod sigma;
pub mod smallcancel;
pub mod transform;
pub mod word;

pub use character::{
    candidate_normalizations, character_lattice, normalize, normalize_with_last,
    primitive_character, Character, Normalization,
};
pub use error::{Error, Result};
pub use fox::{
    fox_derivative, grade, leading_unit_test, structural_verify, GradedDecomposition,
    GroupRingElement, LeadingPattern, NonUnitCertificate, StructureReport, UnitVerdict,
};
pub use growth::{
    check_levitt_bound, estimate_degree, growth_sequence, AutomorphismSpec, GrowthClass,
    GrowthEstimate, GrowthSequence,
};
pub use presentation::Presentation;
pub use random::{
    count_cyclically_reduced, run_experiment, run_experiment_with_log, sample_cyclic_word,
    sample_presentation, trial_rng, wilson_interval, EstimateReport, Measures, PropertyEstimate,
    SampleConfig, SampleLogEntry, WordSampler,
};
pub use sections::{
    classify, cycle_walk, lower_section, upper_section, ConditionReport, ConditionStatus,
    CycleWalk, SectionDescriptor, SectionShape,
};
pub use sigma::{
    classify_up_to_normalization, decide, symmetry_report, Membership, SigmaVerdict,
    SymmetryReport,
};
pub use smallcancel::{small_cancellation_check, PieceWitness, SmallCancellationReport};
pub use transform::{insert_commutators, remove_commutators, InsertionLog, TransformRecord};
pub use word::{parse_letters, parse_word, CyclicWord, Letter, NameTable, Word};
