//! MoSK diffusion channel with one particle per slot.
//!
//! Each slot releases a single particle whose type encodes the bit. Particles
//! travel independently with inverse Gaussian delays, so the receiver sees the
//! transmitted bits reordered by arrival time. This module simulates that
//! reordering and tabulates the stationary crossover probabilities `P_c(l)`
//! together with the distance weights `W_c(l) = ln P_c(0) - ln P_c(l)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ig::IgParams;
use crate::quadrature::adaptive_simpson;

/// Default truncation level for `P_c` tables.
pub const DEFAULT_MAX_LEVEL: usize = 8;

/// Largest `P_c(l_max)` accepted as a negligible truncation.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// Tail mass beyond the upper integration limit.
const UPPER_TAIL: f64 = 1e-13;

const RELATIVE_TOLERANCE: f64 = 1e-9;

/// Hard ceiling for automatic level selection.
const AUTO_LEVEL_CEILING: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ig: IgParams,
    /// Slot interval `T_s`, s.
    pub slot_interval: f64,
    /// Truncation level `l_max` of the probability table.
    pub max_level: usize,
}

impl ChannelConfig {
    pub fn new(ig: IgParams, slot_interval: f64, max_level: usize) -> Result<Self> {
        let cfg = Self { ig, slot_interval, max_level };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.slot_interval.is_finite() && self.slot_interval > 0.0) {
            return Err(Error::validation(
                "slot_interval",
                format!("must be positive, got {}", self.slot_interval),
            ));
        }
        if self.max_level < 1 {
            return Err(Error::validation("max_level", "must be at least 1"));
        }
        Ok(())
    }
}

/// Stationary probability that a mid-sequence particle suffers a level-`level`
/// crossover: it arrives after particle `i + level` but before every particle
/// `i + k`, `k > level`.
///
/// Evaluates
/// `∫ f(u) F(u - l T_s) ∏_{k > l} [1 - F(u - k T_s)] du`
/// with the integrand in log space. The product only has factors for
/// `k T_s < u`, and the integrand has derivative kinks at multiples of `T_s`,
/// so every slot boundary becomes a panel edge.
pub fn crossover_probability(level: usize, cfg: &ChannelConfig) -> Result<f64> {
    if level == 0 {
        return Err(Error::validation("level", "crossover levels start at 1"));
    }
    cfg.validate()?;
    let ig = cfg.ig;
    let ts = cfg.slot_interval;
    let upper = ig.upper_quantile(UPPER_TAIL)?;
    let start = level as f64 * ts;
    if start >= upper {
        return Ok(0.0);
    }

    let integrand = |u: f64| -> f64 {
        let mut ln_value = ig.ln_pdf(u) + ig.ln_cdf(u - start);
        let mut k = level + 1;
        while (k as f64) * ts < u {
            ln_value += ig.ln_sf(u - k as f64 * ts);
            k += 1;
        }
        if ln_value.is_nan() {
            0.0
        } else {
            ln_value.exp()
        }
    };

    let mut edges = vec![start];
    let mut k = level + 1;
    while (k as f64) * ts < upper {
        edges.push(k as f64 * ts);
        k += 1;
    }
    edges.push(upper);

    // Coarse composite Simpson pass fixes the absolute tolerance budget.
    let coarse: f64 = edges
        .windows(2)
        .map(|w| composite_simpson(&integrand, w[0], w[1], 16))
        .sum();
    if coarse <= 0.0 {
        return Ok(0.0);
    }
    let span = upper - start;
    let budget = RELATIVE_TOLERANCE * coarse;
    let mut total = 0.0;
    for w in edges.windows(2) {
        let tol = budget * (w[1] - w[0]) / span;
        let part = adaptive_simpson(&integrand, w[0], w[1], tol).map_err(|e| {
            Error::Numerical(format!("P_c({level}) with T_s = {ts}: {e}"))
        })?;
        total += part.value;
    }
    Ok(total.clamp(0.0, 1.0))
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / (2 * panels) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..2 * panels {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Crossover probabilities and distance weights for one channel configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverWeights {
    pc: Vec<f64>,
    wc: Vec<f64>,
    extension_slope: f64,
}

impl CrossoverWeights {
    /// Builds a table from `P_c(1..=l_max)`; `P_c(0)` is the complement.
    pub fn from_tail_probabilities(tail: &[f64]) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::validation("max_level", "must be at least 1"));
        }
        if let Some(bad) = tail.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::validation("pc", format!("P_c({}) = {} outside [0, 1]", bad + 1, tail[bad])));
        }
        let p0 = 1.0 - tail.iter().sum::<f64>();
        let mut pc = Vec::with_capacity(tail.len() + 1);
        pc.push(p0);
        pc.extend_from_slice(tail);
        for (level, &pl) in pc.iter().enumerate().skip(1) {
            if !(p0 > pl) {
                return Err(Error::WeightOrdering { level, p0, pl });
            }
        }
        let ln_p0 = p0.ln();
        let wc: Vec<f64> = pc
            .iter()
            .enumerate()
            .map(|(l, &p)| if l == 0 { 0.0 } else { ln_p0 - p.max(f64::MIN_POSITIVE).ln() })
            .collect();
        let l_max = wc.len() - 1;
        let mut extension_slope = wc[l_max] - wc[l_max - 1];
        if !(extension_slope.is_finite() && extension_slope > 0.0) {
            extension_slope = wc[l_max] / l_max as f64;
        }
        if !(extension_slope.is_finite() && extension_slope > 0.0) {
            return Err(Error::Numerical(format!(
                "cannot extend weights beyond l_max = {l_max} (W_c(l_max) = {})",
                wc[l_max]
            )));
        }
        Ok(Self { pc, wc, extension_slope })
    }

    pub fn max_level(&self) -> usize {
        self.pc.len() - 1
    }

    /// Tabulated `P_c(0..=l_max)`.
    pub fn probabilities(&self) -> &[f64] {
        &self.pc
    }

    /// Tabulated `W_c(0..=l_max)`.
    pub fn weights(&self) -> &[f64] {
        &self.wc
    }

    pub fn extension_slope(&self) -> f64 {
        self.extension_slope
    }

    /// `W_c(level)`, linearly extended beyond the table.
    pub fn weight(&self, level: usize) -> f64 {
        match self.wc.get(level) {
            Some(&w) => w,
            None => {
                let l_max = self.max_level();
                self.wc[l_max] + (level - l_max) as f64 * self.extension_slope
            }
        }
    }

    /// `ln P_c(level)`, consistent with the weight extension.
    pub fn ln_probability(&self, level: usize) -> f64 {
        self.pc[0].ln() - self.weight(level)
    }

    pub fn probability(&self, level: usize) -> f64 {
        match self.pc.get(level) {
            Some(&p) => p,
            None => self.ln_probability(level).exp(),
        }
    }
}

/// Tabulates `P_c(0..=l_max)` and `W_c` for `cfg`.
pub fn build_weights(cfg: &ChannelConfig) -> Result<CrossoverWeights> {
    cfg.validate()?;
    let tail = (1..=cfg.max_level)
        .map(|l| crossover_probability(l, cfg))
        .collect::<Result<Vec<_>>>()?;
    let last = tail[cfg.max_level - 1];
    if last > TRUNCATION_LIMIT {
        return Err(Error::Truncation { max_level: cfg.max_level, tail: last, limit: TRUNCATION_LIMIT });
    }
    CrossoverWeights::from_tail_probabilities(&tail)
}

/// Tabulates `P_c(0..=l_max)` without the negligible-truncation check.
pub fn build_weights_truncated(cfg: &ChannelConfig) -> Result<CrossoverWeights> {
    cfg.validate()?;
    let tail = (1..=cfg.max_level)
        .map(|l| crossover_probability(l, cfg))
        .collect::<Result<Vec<_>>>()?;
    CrossoverWeights::from_tail_probabilities(&tail)
}

/// Like [`build_weights`], but grows `l_max` past `min_level` until the
/// truncated tail is negligible. Small slot intervals need deep tables.
pub fn build_weights_auto(ig: IgParams, slot_interval: f64, min_level: usize) -> Result<CrossoverWeights> {
    let cfg = ChannelConfig::new(ig, slot_interval, min_level.max(1))?;
    let mut tail = Vec::new();
    for level in 1..=AUTO_LEVEL_CEILING {
        let p = crossover_probability(level, &cfg)?;
        tail.push(p);
        if level >= cfg.max_level && p <= TRUNCATION_LIMIT {
            return CrossoverWeights::from_tail_probabilities(&tail);
        }
    }
    Err(Error::Truncation {
        max_level: AUTO_LEVEL_CEILING,
        tail: *tail.last().unwrap_or(&1.0),
        limit: TRUNCATION_LIMIT,
    })
}

/// Transmit indices (0-based) in order of arrival at the receiver.
///
/// Particle `i` is released at `i T_s`; ties are broken by transmit index.
pub fn arrival_order<R: Rng + ?Sized>(len: usize, cfg: &ChannelConfig, rng: &mut R) -> Vec<usize> {
    let arrivals: Vec<f64> = (0..len)
        .map(|i| i as f64 * cfg.slot_interval + cfg.ig.sample(rng))
        .collect();
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| arrivals[a].total_cmp(&arrivals[b]).then(a.cmp(&b)));
    order
}

/// Passes `bits` through the channel, returning the bits in arrival order.
pub fn transmit<R: Rng + ?Sized>(bits: &[u8], cfg: &ChannelConfig, rng: &mut R) -> Vec<u8> {
    arrival_order(bits.len(), cfg, rng).into_iter().map(|i| bits[i]).collect()
}
