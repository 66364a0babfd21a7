//! Weight-enumerator BER approximation.
//!
//! For reference codeword `x` and competitor `R`, the probability that the
//! decoder prefers `R` is estimated by enumerating crossover vectors of
//! bounded level and support, applying each to `x` to collect the distinct
//! received frames `y_j`, and weighting the event `D(x, y_j) > D(R, y_j)` by
//! `prod P_c(l_k)` over the minimum crossover vector of `(x, y_j)`. Each event
//! costs the number of information bits in which `x` and `R` differ.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::channel::{build_weights_auto, CrossoverWeights};
use crate::convcode::ConvCode;
use crate::crossover::{crossover_distance, min_crossover_vector, BijectiveMatch};
use crate::error::{Error, Result};
use crate::ig::IgParams;
use crate::seed::{derive_seed, stable_hash, TrialRng};

/// Longest information block for exhaustive codeword enumeration.
const MAX_INFO_LEN: usize = 16;

/// Relative tolerance under which two distances count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// A competitor codeword and its information-bit distance from the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorEvent {
    pub reference: Vec<u8>,
    pub competitor: Vec<u8>,
    pub info_weight: usize,
}

fn word_bits(word: u64, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((word >> (len - 1 - i)) & 1) as u8).collect()
}

fn hamming_weight(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Every competitor of the codeword of `reference_info` within Hamming
/// distance `max_hamming_weight`.
pub fn error_events_for(code: &ConvCode, reference_info: &[u8], max_hamming_weight: usize) -> Result<Vec<ErrorEvent>> {
    let len = reference_info.len();
    if len == 0 || len > MAX_INFO_LEN {
        return Err(Error::SizeGuard(format!(
            "exhaustive enumeration needs 1..={MAX_INFO_LEN} information bits, got {len}"
        )));
    }
    let reference = code.encode(reference_info);
    let mut events = Vec::new();
    for word in 0..(1u64 << len) {
        let info = word_bits(word, len);
        let info_weight = hamming_weight(&info, reference_info);
        if info_weight == 0 {
            continue;
        }
        let competitor = code.encode(&info);
        if hamming_weight(&competitor, &reference) <= max_hamming_weight {
            events.push(ErrorEvent { reference: reference.clone(), competitor, info_weight });
        }
    }
    Ok(events)
}

/// Error events against the all-zero codeword.
pub fn enumerate_error_events(code: &ConvCode, info_len: usize, max_hamming_weight: usize) -> Result<Vec<ErrorEvent>> {
    error_events_for(code, &vec![0; info_len], max_hamming_weight)
}

/// Which reference codewords the approximation averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceWords {
    /// Only the all-zero codeword.
    Zero,
    /// Uniformly drawn information words.
    Sampled { count: usize, seed: u64 },
    /// Every information word.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxLimits {
    pub info_len: usize,
    /// Largest enumerated crossover level.
    pub max_level: usize,
    /// Largest number of nonzero entries per crossover vector.
    pub max_crossovers: usize,
    /// Competitors farther than this in Hamming distance are ignored.
    pub max_hamming_weight: Option<usize>,
    pub references: ReferenceWords,
    /// Cap on `references x vectors x competitors` distance evaluations.
    pub budget: u64,
}

impl Default for ApproxLimits {
    fn default() -> Self {
        Self {
            info_len: 8,
            max_level: 4,
            max_crossovers: 2,
            max_hamming_weight: None,
            references: ReferenceWords::Sampled { count: 64, seed: 1 },
            budget: 2_000_000_000,
        }
    }
}

/// Arrival order (0-based transmit indices) realizing `levels`, if any.
///
/// Bit `k` with level `l` arrives right after bit `k + l`; bits sharing an
/// anchor arrive in transmit order. The order is accepted only if it yields
/// exactly `levels` back.
fn realize(levels: &[u32]) -> Option<Vec<usize>> {
    let n = levels.len();
    if levels.iter().enumerate().any(|(k, &l)| k + l as usize >= n) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (k + levels[k] as usize, levels[k] > 0, k));
    let mapping = BijectiveMatch::from_arrival_order(&order).ok()?;
    (mapping.levels() == levels).then_some(order)
}

fn count_vectors(len: usize, max_level: usize, max_crossovers: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for r in 0..=max_crossovers.min(len) {
        if r > 0 {
            binom = binom * (len - r + 1) as u64 / r as u64;
        }
        total = total.saturating_add(binom.saturating_mul((max_level as u64).saturating_pow(r as u32)));
    }
    total
}

/// Arrival orders of every realizable nonzero crossover vector within the limits.
fn realizable_orders(len: usize, limits: &ApproxLimits) -> Vec<Vec<usize>> {
    fn recurse(levels: &mut Vec<u32>, start: usize, left: usize, max_level: u32, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            return;
        }
        for k in start..levels.len() {
            for l in 1..=max_level {
                levels[k] = l;
                if let Some(order) = realize(levels) {
                    out.push(order);
                }
                recurse(levels, k + 1, left - 1, max_level, out);
            }
            levels[k] = 0;
        }
    }
    let mut out = Vec::new();
    recurse(&mut vec![0; len], 0, limits.max_crossovers, limits.max_level as u32, &mut out);
    out
}

/// Distinct frames other than `x` reachable through `orders`, each with the
/// probability of its minimum crossover vector.
fn received_frames(x: &[u8], orders: &[Vec<usize>], w: &CrossoverWeights) -> Vec<(Vec<u8>, f64)> {
    let mut frames: Vec<Vec<u8>> = orders.iter().map(|o| o.iter().map(|&i| x[i]).collect()).collect();
    frames.sort_unstable();
    frames.dedup();
    frames
        .into_iter()
        .filter(|y| y.as_slice() != x)
        .map(|y| {
            let v = min_crossover_vector(x, &y).expect("equal composition");
            let ln_p: f64 = v.levels().iter().map(|&l| w.ln_probability(l as usize)).sum();
            (y, ln_p.exp())
        })
        .collect()
}

fn reference_infos(limits: &ApproxLimits) -> Result<Vec<Vec<u8>>> {
    let n = limits.info_len;
    Ok(match limits.references {
        ReferenceWords::Zero => vec![vec![0; n]],
        ReferenceWords::All => (0..(1u64 << n)).map(|w| word_bits(w, n)).collect(),
        ReferenceWords::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::validation("references", "sample count must be positive"));
            }
            (0..count as u64)
                .map(|i| {
                    let mut rng = TrialRng::seed_from_u64(derive_seed(&[seed, stable_hash("approx"), i]));
                    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
                })
                .collect()
        }
    })
}

fn distance(x: &[u8], y: &[u8], w: &CrossoverWeights) -> f64 {
    crossover_distance(&min_crossover_vector(x, y).expect("equal composition"), w)
}

fn zeros(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b == 0).count()
}

/// Approximate information BER of crossover-distance decoding of `code` at
/// information bit interval `tb`.
///
/// Distance ties count as half an error.
pub fn approx_ber(code: &ConvCode, ig: IgParams, tb: f64, limits: &ApproxLimits) -> Result<f64> {
    if !(tb.is_finite() && tb > 0.0) {
        return Err(Error::validation("tb", format!("must be positive, got {tb}")));
    }
    if limits.info_len == 0 || limits.info_len > MAX_INFO_LEN {
        return Err(Error::SizeGuard(format!("info_len must lie in 1..={MAX_INFO_LEN}, got {}", limits.info_len)));
    }
    if limits.max_level == 0 {
        return Err(Error::validation("max_level", "must be positive"));
    }
    let references = reference_infos(limits)?;
    let len = code.codeword_len(limits.info_len);
    let competitors = (1u64 << limits.info_len) - 1;
    let work = count_vectors(len, limits.max_level, limits.max_crossovers)
        .saturating_mul(competitors)
        .saturating_mul(references.len() as u64);
    if work > limits.budget {
        return Err(Error::SizeGuard(format!("{work} distance evaluations exceed the budget of {}", limits.budget)));
    }
    if limits.max_crossovers == 0 {
        return Ok(0.0);
    }
    let w = build_weights_auto(ig, tb * code.rate(), limits.max_level)?;
    let orders = realizable_orders(len, limits);
    let max_hw = limits.max_hamming_weight.unwrap_or(usize::MAX);

    let per_reference = references
        .par_iter()
        .map(|info| {
            let events = error_events_for(code, info, max_hw)?;
            let x = code.encode(info);
            let events: Vec<&ErrorEvent> = events.iter().filter(|e| zeros(&e.competitor) == zeros(&x)).collect();
            let mut total = 0.0;
            for (y, p) in received_frames(&x, &orders, &w) {
                let dx = distance(&x, &y, &w);
                for e in &events {
                    let dr = distance(&e.competitor, &y, &w);
                    let tol = TIE_TOLERANCE * dx.abs().max(1.0);
                    let indicator = if dx > dr + tol {
                        1.0
                    } else if (dx - dr).abs() <= tol {
                        0.5
                    } else {
                        0.0
                    };
                    total += e.info_weight as f64 * p * indicator;
                }
            }
            Ok(total)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per_reference.iter().sum::<f64>() / references.len() as f64)
}
