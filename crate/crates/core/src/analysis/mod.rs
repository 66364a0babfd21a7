//! Matched-throughput Monte Carlo BER experiments.
//!
//! Every scheme is compared at the same information bit interval `T_b`: a
//! rate-`R` scheme transmits at slot interval `T_s = T_b R`. Tail bits of
//! terminated convolutional frames are pure overhead; they cost channel time
//! but are excluded from the error count.

mod approx;
pub mod report;

pub use approx::{approx_ber, enumerate_error_events, error_events_for, ApproxLimits, ErrorEvent, ReferenceWords};

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{build_weights_auto, transmit, ChannelConfig, CrossoverWeights, DEFAULT_MAX_LEVEL};
use crate::convcode::ConvCode;
use crate::decoder::{hamming_viterbi_decode, viterbi_decode_with, DecoderOptions, Metric};
use crate::error::{Error, Result};
use crate::hamming;
use crate::ig::{derive_params, IgParams, PhysicalConfig};
use crate::seed::trial_rng;

/// Frames simulated per parallel batch before the stop rule is checked.
const BATCH_FRAMES: u64 = 16;

/// A transmission scheme under comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Uncoded,
    Hamming74,
    /// Convolutional code, hard-decision Hamming-metric Viterbi.
    ConvHd(ConvCode),
    /// Convolutional code, crossover-distance Viterbi.
    ConvCd(ConvCode),
    /// Convolutional code, level-sum Viterbi.
    ConvLsd(ConvCode),
}

impl Scheme {
    /// Parses `uncoded`, `hamming74`, `conv_hd`, `conv_cd` or `conv_lsd`;
    /// the convolutional variants use `code`.
    pub fn parse(name: &str, code: &ConvCode) -> Result<Self> {
        match name.trim() {
            "uncoded" => Ok(Scheme::Uncoded),
            "hamming74" => Ok(Scheme::Hamming74),
            "conv_hd" => Ok(Scheme::ConvHd(code.clone())),
            "conv_cd" => Ok(Scheme::ConvCd(code.clone())),
            "conv_lsd" => Ok(Scheme::ConvLsd(code.clone())),
            other => Err(Error::validation("scheme", format!("unknown scheme {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Uncoded => "uncoded",
            Scheme::Hamming74 => "hamming74",
            Scheme::ConvHd(_) => "conv_hd",
            Scheme::ConvCd(_) => "conv_cd",
            Scheme::ConvLsd(_) => "conv_lsd",
        }
    }

    /// Unique identifier, e.g. `conv_cd_k3`. Also feeds the trial seeds.
    pub fn id(&self) -> String {
        match self.code() {
            Some(code) => format!("{}_k{}", self.name(), code.constraint_length()),
            None => self.name().to_string(),
        }
    }

    pub fn metric_name(&self) -> &'static str {
        match self {
            Scheme::Uncoded => "none",
            Scheme::Hamming74 | Scheme::ConvHd(_) => "hamming",
            Scheme::ConvCd(_) => "crossover",
            Scheme::ConvLsd(_) => "level_sum",
        }
    }

    pub fn code(&self) -> Option<&ConvCode> {
        match self {
            Scheme::ConvHd(c) | Scheme::ConvCd(c) | Scheme::ConvLsd(c) => Some(c),
            _ => None,
        }
    }

    pub fn rate(&self) -> f64 {
        match self {
            Scheme::Uncoded => 1.0,
            Scheme::Hamming74 => hamming::DATA_BITS as f64 / hamming::BLOCK_BITS as f64,
            Scheme::ConvHd(c) | Scheme::ConvCd(c) | Scheme::ConvLsd(c) => c.rate(),
        }
    }

    /// Slot interval at information bit interval `tb`.
    pub fn slot_interval(&self, tb: f64) -> f64 {
        tb * self.rate()
    }

    /// Channel bits sent for one frame of `info_len` information bits.
    pub fn frame_len(&self, info_len: usize) -> usize {
        match self {
            Scheme::Uncoded => info_len,
            Scheme::Hamming74 => info_len / hamming::DATA_BITS * hamming::BLOCK_BITS,
            Scheme::ConvHd(c) | Scheme::ConvCd(c) | Scheme::ConvLsd(c) => c.codeword_len(info_len),
        }
    }

    fn needs_weights(&self) -> bool {
        matches!(self, Scheme::ConvCd(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<Scheme>,
    pub physical: PhysicalConfig,
    /// Information bit intervals `T_b`, s.
    pub tb_grid: Vec<f64>,
    /// Frame limit per point.
    pub frames: u64,
    pub info_bits_per_frame: usize,
    pub base_seed: u64,
    /// A point stops early once this many bit errors are seen.
    pub min_bit_errors: u64,
    /// Smallest `l_max` for the crossover weight tables.
    pub max_level: usize,
    pub decoder: DecoderOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let k3 = ConvCode::from_octal(3, ["5", "7"]).expect("valid table code");
        Self {
            schemes: vec![Scheme::Uncoded, Scheme::ConvHd(k3.clone()), Scheme::ConvCd(k3.clone()), Scheme::ConvLsd(k3)],
            physical: PhysicalConfig::default(),
            tb_grid: vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            frames: 2000,
            info_bits_per_frame: 1000,
            base_seed: 1,
            min_bit_errors: 200,
            max_level: DEFAULT_MAX_LEVEL,
            decoder: DecoderOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        if self.schemes.is_empty() {
            return Err(Error::validation("schemes", "at least one scheme is required"));
        }
        if self.tb_grid.is_empty() {
            return Err(Error::validation("tb_grid", "grid is empty"));
        }
        if let Some(&tb) = self.tb_grid.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::validation("tb_grid", format!("values must be positive, got {tb}")));
        }
        if self.frames == 0 {
            return Err(Error::validation("frames", "must be positive"));
        }
        if self.info_bits_per_frame == 0 {
            return Err(Error::validation("info_bits_per_frame", "must be positive"));
        }
        if self.min_bit_errors == 0 {
            return Err(Error::validation("min_bit_errors", "must be positive"));
        }
        if self.max_level == 0 {
            return Err(Error::validation("max_level", "must be positive"));
        }
        if self.schemes.contains(&Scheme::Hamming74) && !self.info_bits_per_frame.is_multiple_of(hamming::DATA_BITS) {
            return Err(Error::validation(
                "info_bits_per_frame",
                format!("hamming74 needs a multiple of {}", hamming::DATA_BITS),
            ));
        }
        Ok(())
    }
}

/// One estimated point of a BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub scheme: String,
    pub metric: String,
    pub tb_seconds: f64,
    pub slot_interval: f64,
    pub frames: u64,
    /// Information bits sent.
    pub bits: u64,
    pub bit_errors: u64,
    /// Frames without a feasible survivor; all their bits count as errors.
    pub decode_failures: u64,
    pub ber: f64,
    pub stderr: f64,
    /// Channel time per delivered information bit, tail overhead included.
    pub channel_time_per_info_bit: f64,
}

struct PointRunner<'a> {
    scheme: &'a Scheme,
    channel: ChannelConfig,
    weights: Option<Arc<CrossoverWeights>>,
    cfg: &'a ExperimentConfig,
    tb: f64,
    id: String,
}

#[derive(Clone, Copy)]
struct Trial {
    errors: u64,
    failed: bool,
}

impl PointRunner<'_> {
    fn trial(&self, frame: u64) -> Result<Trial> {
        let mut rng = trial_rng(self.cfg.base_seed, &self.id, self.tb, frame);
        let n = self.cfg.info_bits_per_frame;
        let info: Vec<u8> = (0..n).map(|_| rng.random_range(0..=1u8)).collect();
        let decoded = match self.scheme {
            Scheme::Uncoded => Some(transmit(&info, &self.channel, &mut rng)),
            Scheme::Hamming74 => {
                let rx = transmit(&hamming::encode_blocks(&info)?, &self.channel, &mut rng);
                Some(hamming::decode_blocks(&rx)?)
            }
            Scheme::ConvHd(code) => {
                let rx = transmit(&code.encode(&info), &self.channel, &mut rng);
                Some(hamming_viterbi_decode(code, &rx)?.info)
            }
            Scheme::ConvCd(code) | Scheme::ConvLsd(code) => {
                let rx = transmit(&code.encode(&info), &self.channel, &mut rng);
                let metric = match &self.weights {
                    Some(w) => Metric::CrossoverDistance(w),
                    None => Metric::LevelSum,
                };
                match viterbi_decode_with(code, &rx, &metric, &self.cfg.decoder) {
                    Ok(d) => Some(d.info),
                    Err(Error::DecodeFailure) => None,
                    Err(e) => return Err(e),
                }
            }
        };
        Ok(match decoded {
            Some(out) => Trial { errors: out.iter().zip(&info).filter(|(a, b)| a != b).count() as u64, failed: false },
            None => Trial { errors: n as u64, failed: true },
        })
    }

    fn run(&self) -> Result<BerPoint> {
        let mut frames = 0u64;
        let mut errors = 0u64;
        let mut failures = 0u64;
        let mut next = 0u64;
        'outer: while next < self.cfg.frames {
            let end = (next + BATCH_FRAMES).min(self.cfg.frames);
            let batch = (next..end).into_par_iter().map(|f| self.trial(f)).collect::<Result<Vec<_>>>()?;
            // Sequential scan so the stop point does not depend on scheduling.
            for t in batch {
                frames += 1;
                errors += t.errors;
                failures += u64::from(t.failed);
                if errors >= self.cfg.min_bit_errors {
                    break 'outer;
                }
            }
            next = end;
        }
        let n = self.cfg.info_bits_per_frame;
        let bits = frames * n as u64;
        let ber = errors as f64 / bits as f64;
        Ok(BerPoint {
            scheme: self.id.clone(),
            metric: self.scheme.metric_name().to_string(),
            tb_seconds: self.tb,
            slot_interval: self.channel.slot_interval,
            frames,
            bits,
            bit_errors: errors,
            decode_failures: failures,
            ber,
            stderr: (ber * (1.0 - ber) / bits as f64).sqrt(),
            channel_time_per_info_bit: self.scheme.frame_len(n) as f64 * self.channel.slot_interval / n as f64,
        })
    }
}

fn point_with(
    cfg: &ExperimentConfig,
    ig: IgParams,
    scheme: &Scheme,
    tb: f64,
    weights: Option<Arc<CrossoverWeights>>,
) -> Result<BerPoint> {
    let channel = ChannelConfig::new(ig, scheme.slot_interval(tb), cfg.max_level)?;
    PointRunner { scheme, channel, weights, cfg, tb, id: scheme.id() }.run()
}

/// Simulates `scheme` at information bit interval `tb`.
pub fn run_ber_point(cfg: &ExperimentConfig, scheme: &Scheme, tb: f64) -> Result<BerPoint> {
    cfg.validate()?;
    if !(tb.is_finite() && tb > 0.0) {
        return Err(Error::validation("tb", format!("must be positive, got {tb}")));
    }
    let (ig, _) = derive_params(&cfg.physical)?;
    let weights = if scheme.needs_weights() {
        Some(Arc::new(build_weights_auto(ig, scheme.slot_interval(tb), cfg.max_level)?))
    } else {
        None
    };
    point_with(cfg, ig, scheme, tb, weights)
}

/// One point per `(scheme, T_b)`, scheme-major.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<BerPoint>> {
    cfg.validate()?;
    let (ig, _) = derive_params(&cfg.physical)?;
    let mut slots: Vec<u64> = cfg
        .schemes
        .iter()
        .filter(|s| s.needs_weights())
        .flat_map(|s| cfg.tb_grid.iter().map(|&tb| s.slot_interval(tb).to_bits()))
        .collect();
    slots.sort_unstable();
    slots.dedup();
    let tables: HashMap<u64, Arc<CrossoverWeights>> = slots
        .par_iter()
        .map(|&bits| Ok((bits, Arc::new(build_weights_auto(ig, f64::from_bits(bits), cfg.max_level)?))))
        .collect::<Result<_>>()?;
    let jobs: Vec<(&Scheme, f64)> =
        cfg.schemes.iter().flat_map(|s| cfg.tb_grid.iter().map(move |&tb| (s, tb))).collect();
    jobs.par_iter()
        .map(|&(scheme, tb)| {
            let weights = scheme.needs_weights().then(|| tables[&scheme.slot_interval(tb).to_bits()].clone());
            point_with(cfg, ig, scheme, tb, weights)
        })
        .collect()
}
