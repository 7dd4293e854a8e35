//! The labeled cycle graph of a relator with its piecewise-linear height map,
//! lower/upper sections, and the unique/repeated minimum-condition classifier.
//!
//! For a cyclically reduced relator `r = w_1 .. w_L`, vertex `k` (0-based,
//! clockwise from the marked base vertex) is labeled by the prefix of length
//! `k` and carries height `phi(prefix)`. Edge `k` joins vertex `k` to vertex
//! `k+1 mod L` and is labeled by `w_{k+1}`. The lower section is the preimage
//! of the minimum height: all minimal vertices, together with every edge whose
//! letter has value 0 joining two minimal vertices.

use serde::Serialize;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::CyclicWord;

/// Heights of the cycle graph of one relator.
#[derive(Clone, Debug, Serialize)]
pub struct CycleWalk {
    /// `heights[k]` is the height of vertex `k`; `heights[0] = 0`.
    pub heights: Vec<i64>,
    pub min_height: i64,
    pub max_height: i64,
}

impl CycleWalk {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Lowest vertex index attaining the minimum.
    pub fn first_min_vertex(&self) -> usize {
        self.heights.iter().position(|&h| h == self.min_height).unwrap()
    }

    /// Lowest vertex index attaining the maximum.
    pub fn first_max_vertex(&self) -> usize {
        self.heights.iter().position(|&h| h == self.max_height).unwrap()
    }
}

/// Walks the cycle graph. Errors unless the character vanishes on the relator
/// (the height map is well-defined exactly then).
pub fn cycle_walk(r: &CyclicWord, chi: &Character) -> Result<CycleWalk> {
    if r.is_empty() {
        return Err(Error::InvalidInput("cycle walk of an empty relator".into()));
    }
    let max = r.max_generator();
    if max as usize > chi.len() {
        return Err(Error::RankMismatch { gen: max, rank: chi.len() });
    }
    let total = chi.evaluate_cyclic(r);
    if total != 0 {
        return Err(Error::UnbalancedWord(total));
    }
    let mut heights = Vec::with_capacity(r.len());
    let mut h = 0i64;
    for l in r.letters() {
        heights.push(h);
        h += l.sign() as i64 * chi.values()[l.gen_index()];
    }
    debug_assert_eq!(h, 0);
    let min_height = *heights.iter().min().unwrap();
    let max_height = *heights.iter().max().unwrap();
    Ok(CycleWalk { heights, min_height, max_height })
}

/// The preimage of an extremal height: extremal vertices plus the full edges
/// (letter value 0, both endpoints extremal) between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionDescriptor {
    /// Sorted vertex indices at the extremal height.
    pub vertices: Vec<usize>,
    /// Sorted edge indices contained in the section (edge `k` starts at
    /// vertex `k`).
    pub full_edges: Vec<usize>,
    /// Number of connected components (arcs, or 1 for the whole circle).
    pub components: usize,
}

pub fn lower_section(r: &CyclicWord, chi: &Character) -> Result<SectionDescriptor> {
    let walk = cycle_walk(r, chi)?;
    Ok(section_at(r, chi, &walk, walk.min_height))
}

pub fn upper_section(r: &CyclicWord, chi: &Character) -> Result<SectionDescriptor> {
    lower_section(r, &chi.negated())
}

fn section_at(r: &CyclicWord, chi: &Character, walk: &CycleWalk, level: i64) -> SectionDescriptor {
    let n = r.len();
    let vertices: Vec<usize> = (0..n).filter(|&k| walk.heights[k] == level).collect();
    // A flat edge at the extremal level has both endpoints there.
    let full_edges: Vec<usize> = (0..n)
        .filter(|&k| {
            walk.heights[k] == level && chi.values()[r.letters()[k].gen_index()] == 0
        })
        .collect();
    let components = if full_edges.len() == n {
        1 // the entire circle
    } else {
        vertices.len() - full_edges.len()
    };
    SectionDescriptor { vertices, full_edges, components }
}

/// Status of the minimum-condition classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionStatus {
    #[serde(rename = "UNIQUE")]
    Unique,
    #[serde(rename = "REPEATED")]
    Repeated,
    #[serde(rename = "NEITHER")]
    Neither,
}

/// Shape of one relator's lower section relative to its matched generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SectionShape {
    /// A single vertex whose adjacent edges are labeled by the matched
    /// generator and the last generator (up to sign).
    UniqueVertex,
    /// A single edge labeled by the matched generator whose adjacent edges
    /// are labeled by the last generator.
    UniqueEdge,
    /// Two vertices, each of the unique-vertex shape for the same generator.
    RepeatedVertex,
    /// Two edges, each of the unique-edge shape for the same generator.
    RepeatedEdge,
}

impl SectionShape {
    pub fn is_repeated(&self) -> bool {
        matches!(self, SectionShape::RepeatedVertex | SectionShape::RepeatedEdge)
    }
}

/// Adjacent-edge labels of one extremal vertex, for report output.
#[derive(Clone, Debug, Serialize)]
pub struct VertexAdjacency {
    pub vertex: usize,
    pub incoming: String,
    pub outgoing: String,
}

/// Per-relator diagnostics attached to every classification.
#[derive(Clone, Debug, Serialize)]
pub struct RelatorWitness {
    pub relator: usize,
    pub heights: Vec<i64>,
    pub min_height: i64,
    pub section: SectionDescriptor,
    /// Shape and matched generator, when the section fits one of the four
    /// recognized shapes.
    pub shape: Option<(SectionShape, u32)>,
    pub adjacency: Vec<VertexAdjacency>,
}

/// Result of classifying a normalized pair `(presentation, character)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub status: ConditionStatus,
    /// For each relator, the generator (1-based) it is matched to; present
    /// unless the status is NEITHER.
    pub matching: Option<Vec<u32>>,
    /// Index of the relator with the repeated minimum (REPEATED only).
    pub repeated_relator: Option<usize>,
    pub witnesses: Vec<RelatorWitness>,
}

/// Classifies a normalized pair against the unique/repeated minimum
/// conditions.
///
/// Preconditions: deficiency 1, `chi` vanishing on all relators, and the sign
/// convention holding literally (`chi >= 0` on the first n generators,
/// `chi < 0` on the last). UNIQUE means some bijection of relators to the
/// first n generators gives every relator an allowed lower-section shape;
/// REPEATED means exactly one relator instead shows the doubled shape. Each
/// relator's section determines at most one compatible generator, so the
/// bijection, when it exists, is unique.
pub fn classify(p: &Presentation, chi: &Character) -> Result<ConditionReport> {
    p.require_deficiency_one()?;
    if chi.len() != p.rank() {
        return Err(Error::CharacterLength { got: chi.len(), rank: p.rank() });
    }
    let m = p.rank();
    let n = m - 1;
    if chi.values()[..n].iter().any(|&v| v < 0) || chi.values()[n] >= 0 {
        return Err(Error::NotNormalized(format!(
            "character {chi} violates the sign convention"
        )));
    }
    chi.require_vanishing(p)?;

    let mut witnesses = Vec::with_capacity(p.relator_count());
    for (i, r) in p.relators().iter().enumerate() {
        let walk = cycle_walk(r, chi)?;
        let section = section_at(r, chi, &walk, walk.min_height);
        let shape = section_shape(r, &section, m as u32);
        let adjacency = section
            .vertices
            .iter()
            .map(|&v| {
                let len = r.len();
                let incoming = r.letters()[(v + len - 1) % len];
                let outgoing = r.letters()[v];
                VertexAdjacency {
                    vertex: v,
                    incoming: incoming_label(p, incoming),
                    outgoing: incoming_label(p, outgoing),
                }
            })
            .collect();
        witnesses.push(RelatorWitness {
            relator: i,
            heights: walk.heights.clone(),
            min_height: walk.min_height,
            section,
            shape,
            adjacency,
        });
    }

    let shapes: Vec<Option<(SectionShape, u32)>> = witnesses.iter().map(|w| w.shape).collect();
    let repeated: Vec<usize> = shapes
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some_and(|(k, _)| k.is_repeated()))
        .map(|(i, _)| i)
        .collect();

    let status;
    let mut matching = None;
    let mut repeated_relator = None;
    if shapes.iter().all(|s| s.is_some()) {
        let gens: Vec<u32> = shapes.iter().map(|s| s.unwrap().1).collect();
        let bijective = {
            let mut seen = vec![false; n];
            gens.iter().all(|&g| {
                let idx = (g - 1) as usize;
                idx < n && !std::mem::replace(&mut seen[idx], true)
            })
        };
        if bijective && repeated.is_empty() {
            status = ConditionStatus::Unique;
            matching = Some(gens);
        } else if bijective && repeated.len() == 1 {
            status = ConditionStatus::Repeated;
            matching = Some(gens);
            repeated_relator = Some(repeated[0]);
        } else {
            status = ConditionStatus::Neither;
        }
    } else {
        status = ConditionStatus::Neither;
    }

    Ok(ConditionReport { status, matching, repeated_relator, witnesses })
}

fn incoming_label(p: &Presentation, l: crate::word::Letter) -> String {
    let name = p.names().name(l.gen());
    if l.sign() > 0 {
        name
    } else {
        format!("{name}^-1")
    }
}

/// The adjacent-edge generator pair of a vertex: incoming and outgoing edge
/// labels compared up to sign, in the clockwise orientation from the marked
/// vertex.
fn vertex_adjacent_gens(r: &CyclicWord, v: usize) -> (u32, u32) {
    let len = r.len();
    let incoming = r.letters()[(v + len - 1) % len].gen();
    let outgoing = r.letters()[v].gen();
    (incoming, outgoing)
}

/// Matches a section against the four recognized shapes. Returns the shape
/// and the compatible generator, which is determined by the section itself.
fn section_shape(r: &CyclicWord, s: &SectionDescriptor, last: u32) -> Option<(SectionShape, u32)> {
    let len = r.len();
    match (s.vertices.len(), s.full_edges.len()) {
        (1, 0) => {
            let g = vertex_unique_gen(r, s.vertices[0], last)?;
            Some((SectionShape::UniqueVertex, g))
        }
        (2, 0) => {
            let g0 = vertex_unique_gen(r, s.vertices[0], last)?;
            let g1 = vertex_unique_gen(r, s.vertices[1], last)?;
            // Both occurrences must match the vertex shape for the same
            // generator; mixed generators are not recognized.
            (g0 == g1).then_some((SectionShape::RepeatedVertex, g0))
        }
        (2, 1) => {
            let e = s.full_edges[0];
            let endpoints = [e, (e + 1) % len];
            let mut sorted = endpoints;
            sorted.sort_unstable();
            if sorted.to_vec() != s.vertices {
                return None;
            }
            let g = edge_unique_gen(r, e, last)?;
            Some((SectionShape::UniqueEdge, g))
        }
        (4, 2) => {
            let (e0, e1) = (s.full_edges[0], s.full_edges[1]);
            let mut endpoints = vec![e0, (e0 + 1) % len, e1, (e1 + 1) % len];
            endpoints.sort_unstable();
            endpoints.dedup();
            if endpoints != s.vertices {
                return None;
            }
            let g0 = edge_unique_gen(r, e0, last)?;
            let g1 = edge_unique_gen(r, e1, last)?;
            (g0 == g1).then_some((SectionShape::RepeatedEdge, g0))
        }
        _ => None,
    }
}

/// Vertex shape: one adjacent edge labeled by some generator `g < last`, the
/// other by `last`.
fn vertex_unique_gen(r: &CyclicWord, v: usize, last: u32) -> Option<u32> {
    let (a, b) = vertex_adjacent_gens(r, v);
    match (a == last, b == last) {
        (true, false) if b < last => Some(b),
        (false, true) if a < last => Some(a),
        _ => None,
    }
}

/// Edge shape: the edge labeled by `g < last`, both adjacent edges labeled by
/// `last`.
fn edge_unique_gen(r: &CyclicWord, e: usize, last: u32) -> Option<u32> {
    let len = r.len();
    let g = r.letters()[e].gen();
    if g >= last {
        return None;
    }
    let before = r.letters()[(e + len - 1) % len].gen();
    let after = r.letters()[(e + 1) % len].gen();
    (before == last && after == last).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, NameTable};
    use proptest::prelude::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn cyc(text: &str) -> CyclicWord {
        let w = parse_word(text, &NameTable::default()).unwrap();
        CyclicWord::from_word(&w).unwrap()
    }

    #[test]
    fn cycle_walk_examples() {
        let chi = Character::new(vec![1, -1]);
        let walk = cycle_walk(&cyc("[x1,x2]"), &chi).unwrap();
        assert_eq!(walk.heights, vec![0, 1, 0, -1]);
        assert_eq!(walk.min_height, -1);

        let walk = cycle_walk(&cyc("x1 x2"), &chi).unwrap();
        assert_eq!(walk.heights, vec![0, 1]);
        assert_eq!(walk.min_height, 0);

        let walk = cycle_walk(&cyc("[x1,x2]"), &Character::new(vec![0, 0])).unwrap();
        assert_eq!(walk.heights, vec![0; 4]);
    }

    #[test]
    fn cycle_walk_rejects_unbalanced() {
        let chi = Character::new(vec![1, -1]);
        assert!(matches!(
            cycle_walk(&cyc("x1 x1"), &chi),
            Err(Error::UnbalancedWord(2))
        ));
    }

    #[test]
    fn lower_section_examples() {
        let chi = Character::new(vec![1, -1]);
        let s = lower_section(&cyc("[x1,x2]"), &chi).unwrap();
        assert_eq!(s.vertices, vec![3]);
        assert!(s.full_edges.is_empty());
        assert_eq!(s.components, 1);

        let s = lower_section(&cyc("[x1,x2]^2"), &chi).unwrap();
        assert_eq!(s.vertices, vec![3, 7]);
        assert!(s.full_edges.is_empty());
        assert_eq!(s.components, 2);

        let s = lower_section(&cyc("x1 x2 x1 x2^-1"), &Character::new(vec![0, -1])).unwrap();
        assert_eq!(s.vertices, vec![2, 3]);
        assert_eq!(s.full_edges, vec![2]);
        assert_eq!(s.components, 1);
    }

    #[test]
    fn upper_section_examples() {
        let chi = Character::new(vec![1, -1]);
        let s = upper_section(&cyc("[x1,x2]"), &chi).unwrap();
        assert_eq!(s.vertices, vec![1]);

        let s = upper_section(&cyc("[x1,x2]^2"), &chi).unwrap();
        assert_eq!(s.vertices, vec![1, 5]);

        // Zero character: the entire circle.
        let s = upper_section(&cyc("[x1,x2]"), &Character::new(vec![0, 0])).unwrap();
        assert_eq!(s.vertices.len(), 4);
        assert_eq!(s.full_edges.len(), 4);
        assert_eq!(s.components, 1);
    }

    #[test]
    fn classify_examples() {
        let chi = Character::new(vec![1, -1]);

        let report = classify(&pres("<x1,x2 | [x1,x2]>"), &chi).unwrap();
        assert_eq!(report.status, ConditionStatus::Unique);
        assert_eq!(report.matching, Some(vec![1]));
        assert_eq!(report.witnesses[0].shape, Some((SectionShape::UniqueVertex, 1)));

        let report = classify(&pres("<x1,x2 | [x1,x2]^2>"), &chi).unwrap();
        assert_eq!(report.status, ConditionStatus::Repeated);
        assert_eq!(report.repeated_relator, Some(0));
        assert_eq!(report.witnesses[0].shape, Some((SectionShape::RepeatedVertex, 1)));

        // Normalized BS(1,2): lower section is a two-edge arc.
        let bs = pres("<x1,x2 | x2^-1 x1 x2 x1^-2>");
        let report = classify(&bs, &Character::new(vec![0, -1])).unwrap();
        assert_eq!(report.status, ConditionStatus::Neither);
        assert_eq!(report.witnesses[0].section.components, 1);
        assert_eq!(report.witnesses[0].section.full_edges.len(), 2);
    }

    #[test]
    fn classify_rejects_unnormalized() {
        let p = pres("<x1,x2 | [x1,x2]>");
        assert!(matches!(
            classify(&p, &Character::new(vec![-1, 1])),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn classify_scale_invariant() {
        let chi = Character::new(vec![1, -1]);
        for text in ["<x1,x2 | [x1,x2]>", "<x1,x2 | [x1,x2]^2>"] {
            let p = pres(text);
            let base = classify(&p, &chi).unwrap();
            for lambda in [2, 3, 7] {
                let scaled = classify(&p, &chi.scaled(lambda)).unwrap();
                assert_eq!(scaled.status, base.status);
                assert_eq!(scaled.matching, base.matching);
            }
        }
    }

    /// Independent direct scan: recompute heights through Word::prefix and
    /// Character::evaluate, then list extremal vertices and flat edges.
    fn oracle_section(r: &CyclicWord, chi: &Character) -> SectionDescriptor {
        let word = r.as_word();
        let heights: Vec<i64> = (0..r.len())
            .map(|k| chi.evaluate(&word.prefix(k).unwrap()))
            .collect();
        let min = *heights.iter().min().unwrap();
        let vertices: Vec<usize> = (0..r.len()).filter(|&k| heights[k] == min).collect();
        let full_edges: Vec<usize> = (0..r.len())
            .filter(|&k| {
                let next = (k + 1) % r.len();
                heights[k] == min
                    && heights[next] == min
                    && chi.values()[r.letters()[k].gen_index()] == 0
            })
            .collect();
        let components = if full_edges.len() == r.len() {
            1
        } else {
            // Count arcs by walking the cycle.
            let in_section: Vec<bool> = (0..r.len()).map(|k| heights[k] == min).collect();
            let edge_in: Vec<bool> = (0..r.len()).map(|k| full_edges.contains(&k)).collect();
            let mut comps = 0;
            for k in 0..r.len() {
                let prev = (k + r.len() - 1) % r.len();
                if in_section[k] && !edge_in[prev] {
                    comps += 1;
                }
            }
            comps
        };
        SectionDescriptor { vertices, full_edges, components }
    }

    fn arb_balanced(rank: u32, maxlen: usize) -> impl Strategy<Value = (CyclicWord, Character)> {
        let letters = prop::collection::vec((1..=rank, prop::bool::ANY), 1..=maxlen);
        let values = prop::collection::vec(-2i64..=2, rank as usize);
        (letters, values).prop_filter_map("balanced nonempty relator", |(raw, values)| {
            let word = crate::word::Word::reduce(
                raw.into_iter()
                    .map(|(g, s)| crate::word::Letter::new(g, if s { 1 } else { -1 })),
            );
            let (core, _) = word.cyclic_reduce();
            if core.is_empty() {
                return None;
            }
            let chi = Character::new(values);
            (chi.evaluate_cyclic(&core) == 0).then_some((core, chi))
        })
    }

    proptest! {
        /// Euler check and agreement with the independent scan.
        #[test]
        fn section_matches_bruteforce((r, chi) in arb_balanced(3, 13)) {
            let main = lower_section(&r, &chi).unwrap();
            let oracle = oracle_section(&r, &chi);
            prop_assert_eq!(main.clone(), oracle);
            if main.full_edges.len() != r.len() {
                prop_assert_eq!(main.components, main.vertices.len() - main.full_edges.len());
            }
        }
    }
}
