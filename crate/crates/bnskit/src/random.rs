//! The few-relator random model: exact counting of cyclically reduced words,
//! exactly uniform sampling, and Monte Carlo experiments over random
//! deficiency-1 presentations.
//!
//! Sampling is an exact two-stage scheme: the length is drawn proportionally
//! to the count of cyclically reduced words of that length, then a word of
//! that length is drawn uniformly by walking the adjacency structure with
//! big-integer path counts conditioned on the last letter not cancelling the
//! first. The RNG is ChaCha8 with one substream per trial (stream id = trial
//! index), so serial and parallel runs produce identical results.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{candidate_normalizations, primitive_character};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::sigma::{decide, Membership};
use crate::smallcancel::small_cancellation_check;
use crate::transform::remove_commutators;
use crate::word::{CyclicWord, Letter};

/// Exact number of cyclically reduced words of length `k` over rank `m`,
/// computed as the trace of the k-th power of the 2m x 2m transfer matrix
/// `T[a][b] = 1` iff `b != a^-1`.
pub fn count_cyclically_reduced(m: usize, k: usize) -> BigUint {
    assert!(m >= 1, "rank must be at least 1");
    assert!(k >= 1, "length must be at least 1");
    let dim = 2 * m;
    let t: Vec<Vec<BigUint>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| if b == a ^ 1 { BigUint::zero() } else { BigUint::one() })
                .collect()
        })
        .collect();
    let mut power = t.clone();
    for _ in 1..k {
        power = mat_mul(&power, &t);
    }
    (0..dim).map(|i| power[i][i].clone()).sum()
}

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let dim = a.len();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Letter with index `l` in `0..2m`: generator `l/2 + 1`, inverse iff `l` odd.
fn letter_of_index(l: usize) -> Letter {
    Letter::new((l / 2 + 1) as u32, if l.is_multiple_of(2) { 1 } else { -1 })
}

const CLASS_FORBIDDEN: usize = 0;
const CLASS_FORBIDDEN_INV: usize = 1;
const CLASS_OTHER: usize = 2;

/// Completion counts by symmetry class relative to the forbidden final
/// letter `f` (the inverse of the first letter): `v[t][class]` counts the
/// ways to append `t` more letters after a letter of that class such that
/// adjacent letters never cancel and the final letter is not `f`.
fn completion_table(m: usize, max_t: usize) -> Vec<[BigUint; 3]> {
    let mut v: Vec<[BigUint; 3]> = Vec::with_capacity(max_t + 1);
    v.push([BigUint::zero(), BigUint::one(), BigUint::one()]);
    for t in 1..=max_t {
        let prev = &v[t - 1];
        let sum: BigUint = &prev[CLASS_FORBIDDEN]
            + &prev[CLASS_FORBIDDEN_INV]
            + &prev[CLASS_OTHER] * BigUint::from(2 * m - 2);
        // The excluded next letter is the inverse of the current one, which
        // swaps the two special classes and fixes the rest.
        v.push([
            &sum - &prev[CLASS_FORBIDDEN_INV],
            &sum - &prev[CLASS_FORBIDDEN],
            &sum - &prev[CLASS_OTHER],
        ]);
    }
    v
}

/// Uniform big integer below `bound`, by rejection on masked random bits.
fn biguint_below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = if bits.is_multiple_of(8) { 0xff } else { (1u8 << (bits % 8)) - 1 };
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let candidate = BigUint::from_bytes_be(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Exactly uniform sampler over cyclically reduced words of length `1..=l`
/// on `m` generators. Tables are precomputed once and shared.
pub struct WordSampler {
    m: usize,
    completions: Vec<[BigUint; 3]>,
    /// `length_weights[k-1]` = count of cyclically reduced words of length k.
    length_weights: Vec<BigUint>,
    total: BigUint,
}

impl WordSampler {
    pub fn new(m: usize, l: usize) -> WordSampler {
        assert!(m >= 2, "the model needs at least 2 generators");
        assert!(l >= 1, "the model needs length at least 1");
        let completions = completion_table(m, l.saturating_sub(1));
        // Fixing the first letter splits the count evenly over 2m letters;
        // the first letter sits in the class of the forbidden letter's
        // inverse.
        let length_weights: Vec<BigUint> = (1..=l)
            .map(|k| &completions[k - 1][CLASS_FORBIDDEN_INV] * BigUint::from(2 * m))
            .collect();
        let total = length_weights.iter().sum();
        WordSampler { m, completions, length_weights, total }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    /// Count of cyclically reduced words of length `k`, from the completion
    /// table (cross-checked against the transfer-matrix trace in tests).
    pub fn count(&self, k: usize) -> &BigUint {
        &self.length_weights[k - 1]
    }

    /// Draws a word of length exactly `k`, uniformly.
    pub fn sample_of_length(&self, k: usize, rng: &mut impl RngCore) -> CyclicWord {
        debug_assert!(k >= 1 && k <= self.length_weights.len());
        let dim = 2 * self.m;
        let first = rng.gen_range(0..dim);
        let forbidden = first ^ 1;
        let class_of = |l: usize| {
            if l == forbidden {
                CLASS_FORBIDDEN
            } else if l == first {
                CLASS_FORBIDDEN_INV
            } else {
                CLASS_OTHER
            }
        };
        let mut letters = vec![first];
        for j in 2..=k {
            let prev = *letters.last().unwrap();
            let remaining = k - j;
            let weights: Vec<BigUint> = (0..dim)
                .map(|c| {
                    if c == prev ^ 1 {
                        BigUint::zero()
                    } else {
                        self.completions[remaining][class_of(c)].clone()
                    }
                })
                .collect();
            let total: BigUint = weights.iter().sum();
            let mut draw = biguint_below(rng, &total);
            let mut chosen = 0;
            for (c, w) in weights.iter().enumerate() {
                if &draw < w {
                    chosen = c;
                    break;
                }
                draw -= w;
            }
            letters.push(chosen);
        }
        CyclicWord::from_letters(letters.into_iter().map(letter_of_index).collect())
            .expect("path-counted walks are cyclically reduced")
    }

    /// Draws a word of length `1..=l`, exactly uniformly over the whole set.
    pub fn sample(&self, rng: &mut impl RngCore) -> CyclicWord {
        let mut draw = biguint_below(rng, &self.total);
        for (idx, w) in self.length_weights.iter().enumerate() {
            if &draw < w {
                return self.sample_of_length(idx + 1, rng);
            }
            draw -= w;
        }
        unreachable!("draw below the total always lands in a bucket")
    }

    /// Draws `n` independent relators.
    pub fn sample_presentation(&self, n: usize, rng: &mut impl RngCore) -> Presentation {
        let relators = (0..n).map(|_| self.sample(rng)).collect();
        Presentation::new(self.m, relators).expect("sampled relators are valid")
    }
}

/// One-shot convenience samplers.
pub fn sample_cyclic_word(m: usize, l: usize, rng: &mut impl RngCore) -> CyclicWord {
    WordSampler::new(m, l).sample(rng)
}

pub fn sample_presentation(m: usize, n: usize, l: usize, rng: &mut impl RngCore) -> Presentation {
    WordSampler::new(m, l).sample_presentation(n, rng)
}

/// Which measurements an experiment takes per sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Measures {
    pub betti: bool,
    pub small_cancellation: bool,
    pub classification: bool,
    pub transform_image: bool,
}

impl Default for Measures {
    fn default() -> Measures {
        Measures {
            betti: true,
            small_cancellation: true,
            classification: true,
            transform_image: true,
        }
    }
}

/// Configuration of one Monte Carlo experiment.
#[derive(Clone, Debug, Serialize)]
pub struct SampleConfig {
    pub generators: usize,
    pub relators: usize,
    pub max_length: usize,
    pub trials: u64,
    pub seed: u64,
    pub measures: Measures,
    pub threads: usize,
}

impl SampleConfig {
    pub fn new(generators: usize, relators: usize, max_length: usize, trials: u64, seed: u64) -> SampleConfig {
        SampleConfig {
            generators,
            relators,
            max_length,
            trials,
            seed,
            measures: Measures::default(),
            threads: 1,
        }
    }
}

/// Point estimate with a 95% Wilson interval.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyEstimate {
    pub name: String,
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Aggregated experiment outcome.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub config: SampleConfig,
    pub seed: u64,
    pub properties: Vec<PropertyEstimate>,
    pub runtime_seconds: f64,
}

impl EstimateReport {
    /// CSV with one row per property. Excludes the runtime, so repeated runs
    /// with the same seed are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("property,successes,trials,estimate,ci_low,ci_high\n");
        for p in &self.properties {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{:.6}\n",
                p.name, p.successes, p.trials, p.estimate, p.ci_low, p.ci_high
            ));
        }
        out
    }
}

/// 95% Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Per-sample log entry (JSONL when enabled on the CLI).
#[derive(Clone, Debug, Serialize)]
pub struct SampleLogEntry {
    pub trial: u64,
    pub presentation: String,
    pub b1: usize,
    pub small_cancellation: Option<bool>,
    pub plus: Option<Membership>,
    pub minus: Option<Membership>,
    pub nonsymmetric: Option<bool>,
    pub not_lerf: Option<bool>,
    pub not_fibering: Option<bool>,
    pub unknown_both: Option<bool>,
    pub transform_image: Option<bool>,
    pub free_cancellation_abort: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Default)]
struct Counters {
    b1_one: u64,
    small_cancellation: u64,
    nonsymmetric: u64,
    not_lerf: u64,
    not_fibering: u64,
    unknown_both: u64,
    transform_image: u64,
    errors: u64,
}

impl Counters {
    fn merge(&mut self, other: &Counters) {
        self.b1_one += other.b1_one;
        self.small_cancellation += other.small_cancellation;
        self.nonsymmetric += other.nonsymmetric;
        self.not_lerf += other.not_lerf;
        self.not_fibering += other.not_fibering;
        self.unknown_both += other.unknown_both;
        self.transform_image += other.transform_image;
        self.errors += other.errors;
    }
}

/// The RNG for one trial: ChaCha8 keyed by the seed on substream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(sampler: &WordSampler, cfg: &SampleConfig, trial: u64) -> (Counters, SampleLogEntry) {
    let mut rng = trial_rng(cfg.seed, trial);
    let pres = sampler.sample_presentation(cfg.relators, &mut rng);
    let mut counters = Counters::default();
    let mut log = SampleLogEntry {
        trial,
        presentation: pres.to_text(),
        b1: 0,
        small_cancellation: None,
        plus: None,
        minus: None,
        nonsymmetric: None,
        not_lerf: None,
        not_fibering: None,
        unknown_both: None,
        transform_image: None,
        free_cancellation_abort: None,
        error: None,
    };

    let b1 = pres.first_betti();
    log.b1 = b1;
    if b1 == 1 {
        counters.b1_one += 1;
    }

    let needs_sc = cfg.measures.small_cancellation || cfg.measures.classification;
    let sc_pass = if needs_sc {
        let report = small_cancellation_check(&pres, num_rational::Rational64::new(1, 6));
        if report.passes {
            counters.small_cancellation += 1;
        }
        log.small_cancellation = Some(report.passes);
        report.passes
    } else {
        false
    };

    if cfg.measures.classification && b1 == 1 {
        // The no-zero-divisor hypothesis is asserted exactly when the metric
        // small cancellation check passes.
        match run_classification(&pres, sc_pass) {
            Ok((plus, minus)) => {
                let nonsym = matches!(
                    (plus, minus),
                    (Membership::In, Membership::NotIn) | (Membership::NotIn, Membership::In)
                );
                let unknown_both =
                    plus == Membership::Unknown && minus == Membership::Unknown;
                log.plus = Some(plus);
                log.minus = Some(minus);
                log.nonsymmetric = Some(nonsym);
                log.not_lerf = Some(nonsym);
                log.not_fibering = Some(nonsym);
                log.unknown_both = Some(unknown_both);
                if nonsym {
                    counters.nonsymmetric += 1;
                    counters.not_lerf += 1;
                    counters.not_fibering += 1;
                }
                if unknown_both {
                    counters.unknown_both += 1;
                }
            }
            Err(e) => {
                counters.errors += 1;
                log.error = Some(e.to_string());
            }
        }
    }

    if cfg.measures.transform_image && b1 == 1 {
        match detect_transform_image(&pres) {
            Ok(found) => {
                log.transform_image = Some(found);
                if found {
                    counters.transform_image += 1;
                }
            }
            Err(e) => {
                counters.errors += 1;
                log.error = Some(e.to_string());
            }
        }
    }

    (counters, log)
}

fn run_classification(pres: &Presentation, flag: bool) -> Result<(Membership, Membership)> {
    let chi = primitive_character(pres)?;
    let plus = decide(pres, &chi, flag)?;
    let minus = decide(pres, &chi.negated(), flag)?;
    Ok((plus.membership, minus.membership))
}

/// Whether the sampled presentation is an image of the commutator-insertion
/// map under some admissible normalization of either sign of its primitive
/// character.
fn detect_transform_image(pres: &Presentation) -> Result<bool> {
    let chi = primitive_character(pres)?;
    for sign in [chi.clone(), chi.negated()] {
        for norm in candidate_normalizations(pres, &sign)? {
            if remove_commutators(norm.presentation.relators(), &norm.character).is_ok() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Runs the experiment, optionally collecting the per-sample log.
/// Deterministic given the configuration: per-trial substreams make the
/// outcome independent of the thread count.
pub fn run_experiment_with_log(
    cfg: &SampleConfig,
    want_log: bool,
) -> (EstimateReport, Vec<SampleLogEntry>) {
    let start = Instant::now();
    let sampler = WordSampler::new(cfg.generators, cfg.max_length);

    let threads = cfg.threads.max(1);
    let mut counters = Counters::default();
    let mut logs: Vec<SampleLogEntry> = Vec::new();

    if threads == 1 {
        for trial in 0..cfg.trials {
            let (c, log) = run_trial(&sampler, cfg, trial);
            counters.merge(&c);
            if want_log {
                logs.push(log);
            }
        }
    } else {
        let chunk = cfg.trials.div_ceil(threads as u64);
        let results: Vec<(Counters, Vec<SampleLogEntry>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|w| {
                    let sampler = &sampler;
                    scope.spawn(move || {
                        let lo = w * chunk;
                        let hi = ((w + 1) * chunk).min(cfg.trials);
                        let mut local = Counters::default();
                        let mut local_logs = Vec::new();
                        for trial in lo..hi {
                            let (c, log) = run_trial(sampler, cfg, trial);
                            local.merge(&c);
                            if want_log {
                                local_logs.push(log);
                            }
                        }
                        (local, local_logs)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for (c, l) in results {
            counters.merge(&c);
            logs.extend(l);
        }
    }

    let trials = cfg.trials;
    let mut properties = Vec::new();
    let mut push = |name: &str, successes: u64| {
        let (lo, hi) = wilson_interval(successes, trials);
        properties.push(PropertyEstimate {
            name: name.to_string(),
            successes,
            trials,
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low: lo,
            ci_high: hi,
        });
    };
    if cfg.measures.betti {
        push("b1_eq_1", counters.b1_one);
    }
    if cfg.measures.small_cancellation {
        push("small_cancellation_c_prime_1_6", counters.small_cancellation);
    }
    if cfg.measures.classification {
        push("nonsymmetric", counters.nonsymmetric);
        push("not_lerf", counters.not_lerf);
        push("not_fibering", counters.not_fibering);
        push("unknown_both_directions", counters.unknown_both);
    }
    if cfg.measures.transform_image {
        push("transform_image", counters.transform_image);
    }
    push("sample_error", counters.errors);

    let report = EstimateReport {
        config: cfg.clone(),
        seed: cfg.seed,
        properties,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    (report, logs)
}

pub fn run_experiment(cfg: &SampleConfig) -> EstimateReport {
    run_experiment_with_log(cfg, false).0
}
