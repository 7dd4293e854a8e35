//! Group presentations: parsing, validation, abelianization and Betti number.
//!
//! The parser accepts presentations of any shape; workflows that require
//! deficiency 1 (one more generator than relators) enforce it separately.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlinalg;
use crate::word::{parse_letters, CyclicWord, NameTable, Word};

/// A finite presentation with cyclically reduced, non-empty relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    rank: usize,
    generator_names: NameTable,
    relators: Vec<CyclicWord>,
}

impl Presentation {
    pub fn new(rank: usize, relators: Vec<CyclicWord>) -> Result<Presentation> {
        Presentation::with_names(NameTable::numbered(rank), relators)
    }

    pub fn with_names(names: NameTable, relators: Vec<CyclicWord>) -> Result<Presentation> {
        let rank = names.rank();
        if relators.is_empty() {
            return Err(Error::InvalidInput("a presentation needs at least one relator".into()));
        }
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::EmptyRelator { index: i });
            }
            let max = r.max_generator();
            if max as usize > rank {
                return Err(Error::RankMismatch { gen: max, rank });
            }
        }
        Ok(Presentation { rank, generator_names: names, relators })
    }

    /// Parses the text format `<g1,...,gm | r1, ..., rn>`.
    ///
    /// Lines starting with `#` are comments. Relators must be cyclically
    /// reduced exactly as written; unreduced input is rejected, never fixed up.
    pub fn parse(text: &str) -> Result<Presentation> {
        let body: String = text
            .lines()
            .filter(|line| !line.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n");
        let body = body.trim();
        let inner = body
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| Error::Syntax("expected `<generators | relators>`".into()))?;
        let mut parts = inner.splitn(2, '|');
        let gens_part = parts.next().unwrap_or("");
        let rels_part = parts
            .next()
            .ok_or_else(|| Error::Syntax("missing `|` separator".into()))?;
        if rels_part.contains('|') {
            return Err(Error::Syntax("more than one `|` separator".into()));
        }

        let names = NameTable::new(
            gens_part
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        )?;
        if names.rank() == 0 {
            return Err(Error::Syntax("no generators declared".into()));
        }

        let mut relators = Vec::new();
        for (index, rel_text) in split_top_level(rels_part).into_iter().enumerate() {
            let rel_text = rel_text.trim();
            if rel_text.is_empty() {
                return Err(Error::EmptyRelator { index });
            }
            let raw = parse_letters(rel_text, &names)?;
            if raw.is_empty() {
                return Err(Error::EmptyRelator { index });
            }
            let relator = validate_relator(raw, index)?;
            let max = relator.max_generator();
            if max as usize > names.rank() {
                return Err(Error::RankMismatch { gen: max, rank: names.rank() });
            }
            relators.push(relator);
        }
        if relators.is_empty() {
            return Err(Error::Syntax("no relators declared".into()));
        }
        Ok(Presentation { rank: names.rank(), generator_names: names, relators })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn relators(&self) -> &[CyclicWord] {
        &self.relators
    }

    pub fn names(&self) -> &NameTable {
        &self.generator_names
    }

    /// The presentation's deficiency `m - n`.
    pub fn deficiency(&self) -> i64 {
        self.rank as i64 - self.relators.len() as i64
    }

    pub fn require_deficiency_one(&self) -> Result<()> {
        if self.rank != self.relators.len() + 1 {
            return Err(Error::NotDeficiencyOne {
                rank: self.rank,
                relators: self.relators.len(),
            });
        }
        Ok(())
    }

    /// Exponent-sum matrix: entry `(i, j)` is the signed count of generator
    /// `j+1` in relator `i`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| (1..=self.rank as u32).map(|g| r.exponent_sum(g)).collect())
            .collect()
    }

    /// First Betti number `m - rank_Q(abelianization)`, exact.
    pub fn first_betti(&self) -> usize {
        self.rank - intlinalg::rank(&self.abelianization_matrix())
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.generator_names)
    }

    pub fn display_relator(&self, r: &CyclicWord) -> String {
        r.display_with(&self.generator_names)
    }

    /// Text form re-parseable by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        format!(
            "<{} | {}>",
            self.generator_names.names().join(","),
            self.relators
                .iter()
                .map(|r| r.display_with(&self.generator_names))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn validate_relator(raw: Vec<crate::word::Letter>, index: usize) -> Result<CyclicWord> {
    CyclicWord::from_letters(raw).map_err(|e| match e {
        Error::NotReduced | Error::NotCyclicallyReduced => Error::RelatorNotReduced { index },
        other => other,
    })
}

/// Splits on commas at bracket depth 0, so commutator shorthand survives.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '[' => {
                depth += 1;
                cur.push(c);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}
