//! Iteration of free-group automorphisms and numeric estimation of the
//! polynomial growth degree of a conjugacy class, with the rank-1 bound
//! (degree at most rank minus one) as a sanity alarm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{parse_word, NameTable, Word};

/// An endomorphism of a free group given by generator images. It counts as a
/// verified automorphism when user-supplied inverse images compose to the
/// identity in both directions; otherwise it is flagged as an unverified
/// endomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismSpec {
    names: NameTable,
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
    verified: bool,
}

impl AutomorphismSpec {
    pub fn new(names: NameTable, images: Vec<Word>, inverse_images: Option<Vec<Word>>) -> Result<AutomorphismSpec> {
        let rank = names.rank();
        if images.len() != rank {
            return Err(Error::InvalidInput(format!(
                "{} images for rank {rank}",
                images.len()
            )));
        }
        for w in &images {
            if w.max_generator() as usize > rank {
                return Err(Error::RankMismatch { gen: w.max_generator(), rank });
            }
        }
        if let Some(inv) = &inverse_images {
            if inv.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "{} inverse images for rank {rank}",
                    inv.len()
                )));
            }
            for w in inv {
                if w.max_generator() as usize > rank {
                    return Err(Error::RankMismatch { gen: w.max_generator(), rank });
                }
            }
        }
        let mut spec = AutomorphismSpec { names, images, inverse_images, verified: false };
        spec.verified = spec.check_inverse();
        Ok(spec)
    }

    pub fn identity(rank: usize) -> AutomorphismSpec {
        let images: Vec<Word> = (1..=rank as u32)
            .map(|g| Word::from_reduced_unchecked(vec![crate::word::Letter::positive(g)]))
            .collect();
        AutomorphismSpec::new(NameTable::numbered(rank), images.clone(), Some(images)).unwrap()
    }

    fn check_inverse(&self) -> bool {
        let Some(inv) = &self.inverse_images else { return false };
        (1..=self.rank() as u32).all(|g| {
            let gen = Word::from_reduced_unchecked(vec![crate::word::Letter::positive(g)]);
            let fwd = self.apply_images(&inv[(g - 1) as usize], &self.images);
            let bwd = self.apply_images(&self.images[(g - 1) as usize], inv);
            fwd == gen && bwd == gen
        })
    }

    pub fn rank(&self) -> usize {
        self.names.rank()
    }

    pub fn names(&self) -> &NameTable {
        &self.names
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// True when the inverse images verified this map as an automorphism.
    pub fn verified(&self) -> bool {
        self.verified
    }

    fn apply_images(&self, w: &Word, images: &[Word]) -> Word {
        let mut stack: Vec<crate::word::Letter> = Vec::new();
        for l in w.letters() {
            let image = &images[l.gen_index()];
            if l.sign() > 0 {
                for &x in image.letters() {
                    push_reduced(&mut stack, x);
                }
            } else {
                for x in image.letters().iter().rev() {
                    push_reduced(&mut stack, x.inverse());
                }
            }
        }
        Word::from_reduced_unchecked(stack)
    }

    /// Homomorphic image of `w`, freely reduced.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.max_generator() as usize > self.rank() {
            return Err(Error::RankMismatch { gen: w.max_generator(), rank: self.rank() });
        }
        Ok(self.apply_images(w, &self.images))
    }

    /// Image under the supplied inverse, when present.
    pub fn apply_inverse(&self, w: &Word) -> Result<Word> {
        let inv = self
            .inverse_images
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no inverse images supplied".into()))?;
        if w.max_generator() as usize > self.rank() {
            return Err(Error::RankMismatch { gen: w.max_generator(), rank: self.rank() });
        }
        Ok(self.apply_images(w, inv))
    }

    /// Parses the file format
    ///
    /// ```text
    /// x -> x
    /// y -> y x
    /// inverse:
    /// x -> x
    /// y -> y x^-1
    /// ```
    ///
    /// The left-hand sides of the first block declare the generators in
    /// order; mappings may also be separated by `;`. Lines starting with `#`
    /// are comments.
    pub fn parse(text: &str) -> Result<AutomorphismSpec> {
        let mut forward: Vec<(String, String)> = Vec::new();
        let mut inverse: Vec<(String, String)> = Vec::new();
        let mut in_inverse = false;
        for raw_line in text.lines() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for chunk in line.split(';') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                if chunk.eq_ignore_ascii_case("inverse:") {
                    in_inverse = true;
                    continue;
                }
                let (lhs, rhs) = chunk
                    .split_once("->")
                    .ok_or_else(|| Error::Syntax(format!("expected `name -> word` in `{chunk}`")))?;
                let entry = (lhs.trim().to_string(), rhs.trim().to_string());
                if in_inverse {
                    inverse.push(entry);
                } else {
                    forward.push(entry);
                }
            }
        }
        if forward.is_empty() {
            return Err(Error::Syntax("no generator mappings found".into()));
        }
        let names = NameTable::new(forward.iter().map(|(n, _)| n.clone()).collect())?;
        let images = forward
            .iter()
            .map(|(_, rhs)| parse_word(rhs, &names))
            .collect::<Result<Vec<_>>>()?;
        let inverse_images = if inverse.is_empty() {
            None
        } else {
            let mut by_gen: Vec<Option<Word>> = vec![None; names.rank()];
            for (lhs, rhs) in &inverse {
                let gen = names
                    .resolve(lhs)
                    .ok_or_else(|| Error::UndeclaredGenerator(lhs.clone()))?;
                by_gen[(gen - 1) as usize] = Some(parse_word(rhs, &names)?);
            }
            Some(
                by_gen
                    .into_iter()
                    .enumerate()
                    .map(|(i, w)| {
                        w.ok_or_else(|| {
                            Error::Syntax(format!("inverse block misses generator {}", i + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        AutomorphismSpec::new(names, images, inverse_images)
    }
}

fn push_reduced(stack: &mut Vec<crate::word::Letter>, l: crate::word::Letter) {
    if stack.last().is_some_and(|t| t.is_inverse_of(&l)) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Conjugacy-class lengths of the iterates, with a memory cap.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthSequence {
    /// `lengths[n]` is the cyclic length of the n-th iterate.
    pub lengths: Vec<usize>,
    /// True when the iteration stopped early because a word exceeded the cap.
    pub truncated: bool,
}

/// Iterates the automorphism on the conjugacy class of `g`, recording cyclic
/// lengths for `n = 0..=iterations`. Each step iterates on the cyclically
/// reduced representative, which is again a representative of the image
/// class. Words beyond `cap` letters stop the iteration with a truncation
/// marker instead of exhausting memory.
pub fn growth_sequence(
    auto: &AutomorphismSpec,
    g: &Word,
    iterations: usize,
    cap: usize,
) -> Result<GrowthSequence> {
    let mut current = g.cyclic_reduce().0.as_word();
    let mut lengths = vec![current.len()];
    let mut truncated = false;
    for _ in 0..iterations {
        let image = auto.apply(&current)?;
        let reduced = image.cyclic_reduce().0.as_word();
        if reduced.len() > cap {
            truncated = true;
            break;
        }
        lengths.push(reduced.len());
        current = reduced;
    }
    Ok(GrowthSequence { lengths, truncated })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthClass {
    #[serde(rename = "POLYNOMIAL")]
    Polynomial(u32),
    #[serde(rename = "EXPONENTIAL")]
    Exponential,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitDiagnostics {
    /// Geometric mean of consecutive length ratios over the last quarter.
    pub tail_ratio_geomean: f64,
    /// Least-squares slope of the log-ratios over the last quarter.
    pub ratio_trend_slope: f64,
    /// log2(len(2n)/len(n)) over the tail window.
    pub doubling_estimates: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    pub classification: GrowthClass,
    /// (iteration, cyclic length) samples.
    pub samples: Vec<(usize, usize)>,
    pub diagnostics: FitDiagnostics,
}

const MIN_ENTRIES: usize = 16;
const EXPONENTIAL_RATIO: f64 = 1.05;
const TREND_TOLERANCE: f64 = -1e-4;
const DOUBLING_SPREAD: f64 = 0.4;
const DOUBLING_ROUND: f64 = 0.3;

/// Classifies a growth sequence.
///
/// Exponential when the tail ratios have geometric mean at least 1.05 and a
/// non-decreasing trend (polynomials of modest degree show ratios decaying
/// towards 1, genuine exponentials a stable ratio above it). Otherwise the
/// degree is fitted as the rounded limit of `log2(len(2n)/len(n))` over the
/// tail; inconclusive when neither stabilizes. The thresholds are loose on
/// purpose: at desk scale the separation between small-degree polynomials and
/// exponentials is wide.
pub fn estimate_degree(seq: &GrowthSequence) -> Result<GrowthEstimate> {
    let v = &seq.lengths;
    if v.len() < MIN_ENTRIES {
        return Err(Error::InsufficientData { need: MIN_ENTRIES, have: v.len() });
    }
    let n = v.len();
    let samples: Vec<(usize, usize)> = v.iter().copied().enumerate().collect();
    let tail_start = n - n / 4;

    if v[tail_start..].iter().all(|&x| x == v[tail_start]) {
        return Ok(GrowthEstimate {
            classification: GrowthClass::Polynomial(0),
            samples,
            diagnostics: FitDiagnostics {
                tail_ratio_geomean: 1.0,
                ratio_trend_slope: 0.0,
                doubling_estimates: Vec::new(),
            },
        });
    }
    if v[tail_start..].contains(&0) {
        return Ok(GrowthEstimate {
            classification: GrowthClass::Inconclusive,
            samples,
            diagnostics: FitDiagnostics {
                tail_ratio_geomean: 0.0,
                ratio_trend_slope: 0.0,
                doubling_estimates: Vec::new(),
            },
        });
    }

    let log_ratios: Vec<f64> = (tail_start..n - 1)
        .map(|i| (v[i + 1] as f64 / v[i] as f64).ln())
        .collect();
    let geomean = (log_ratios.iter().sum::<f64>() / log_ratios.len() as f64).exp();
    let slope = least_squares_slope(&log_ratios);

    let doubling: Vec<f64> = ((n - 1) / 4..=(n - 1) / 2)
        .filter(|&i| i >= 1 && v[i] > 0)
        .map(|i| (v[2 * i] as f64 / v[i] as f64).log2())
        .collect();

    let diagnostics = FitDiagnostics {
        tail_ratio_geomean: geomean,
        ratio_trend_slope: slope,
        doubling_estimates: doubling.clone(),
    };

    if geomean >= EXPONENTIAL_RATIO && slope >= TREND_TOLERANCE {
        return Ok(GrowthEstimate {
            classification: GrowthClass::Exponential,
            samples,
            diagnostics,
        });
    }

    if let (Some(&last), Some(min), Some(max)) = (
        doubling.last(),
        doubling.iter().copied().reduce(f64::min),
        doubling.iter().copied().reduce(f64::max),
    ) {
        let rounded = last.round();
        if max - min <= DOUBLING_SPREAD && (last - rounded).abs() <= DOUBLING_ROUND && rounded >= 0.0
        {
            return Ok(GrowthEstimate {
                classification: GrowthClass::Polynomial(rounded as u32),
                samples,
                diagnostics,
            });
        }
    }

    Ok(GrowthEstimate { classification: GrowthClass::Inconclusive, samples, diagnostics })
}

fn least_squares_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mean_x = (ys.len() - 1) as f64 / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        num += dx * (y - mean_y);
        den += dx * dx;
    }
    num / den
}

/// True iff a polynomial estimate respects the bound `d <= rank - 1`.
/// A violation on a verified automorphism indicates an estimator bug.
/// Vacuously true for non-polynomial classifications.
pub fn check_levitt_bound(auto: &AutomorphismSpec, estimate: &GrowthEstimate) -> bool {
    match estimate.classification {
        GrowthClass::Polynomial(d) => (d as usize) <= auto.rank().saturating_sub(1),
        _ => true,
    }
}
