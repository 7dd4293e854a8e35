use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("relator {index} is empty")]
    EmptyRelator { index: usize },
    #[error("relator {index} is not cyclically reduced")]
    RelatorNotReduced { index: usize },
    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("prefix length {k} exceeds word length {len}")]
    PrefixOutOfRange { k: usize, len: usize },
    #[error("letter sequence is not freely reduced")]
    NotReduced,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("generator index {gen} exceeds rank {rank}")]
    RankMismatch { gen: u32, rank: usize },
    #[error("character has {got} entries but the rank is {rank}")]
    CharacterLength { got: usize, rank: usize },
    #[error("character is zero")]
    ZeroCharacter,
    #[error("character does not vanish on relator {index} (value {value})")]
    NonVanishing { index: usize, value: i64 },
    #[error("character does not vanish on the word (value {0})")]
    UnbalancedWord(i64),
    #[error("presentation is not of deficiency 1: {rank} generators, {relators} relators")]
    NotDeficiencyOne { rank: usize, relators: usize },
    #[error("presentation and character are not normalized: {0}")]
    NotNormalized(String),
    #[error("first Betti number is {b1}, expected 1")]
    BettiNotOne { b1: usize },
    #[error("free cancellation at relator {relator}, vertex {vertex}: inserted commutator collides with an adjacent letter")]
    FreeCancellation { relator: usize, vertex: usize },
    #[error("tuple is not an image of the commutator-insertion map: {0}")]
    NotTransformImage(String),
    #[error("group ring element is not supported at a single degree")]
    NotHomogeneous,
    #[error("leading-term structure verification failed at {place}: {detail}")]
    StructureVerification { place: String, detail: String },
    #[error("classification conflict: the same character satisfies both minimum conditions ({0})")]
    ClassificationConflict(String),
    #[error("growth sequence too short: need {need} untruncated entries, have {have}")]
    InsufficientData { need: usize, have: usize },
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
