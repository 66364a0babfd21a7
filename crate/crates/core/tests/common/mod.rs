//! Shared oracles for the integration tests.
#![allow(dead_code)]

use mocc_core::{derive_params, BijectiveMatch, ChannelConfig, ConvCode, IgParams, PhysicalConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn table_ig() -> IgParams {
    derive_params(&PhysicalConfig::default()).unwrap().0
}

pub fn k3() -> ConvCode {
    ConvCode::from_octal(3, ["5", "7"]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bits(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
}

pub fn info_word(word: u64, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((word >> (len - 1 - i)) & 1) as u8).collect()
}

/// Every `(info, codeword)` pair of the terminated code.
pub fn all_codewords(code: &ConvCode, info_len: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    (0..1u64 << info_len)
        .map(|w| {
            let info = info_word(w, info_len);
            let c = code.encode(&info);
            (info, c)
        })
        .collect()
}

/// Inverse Gaussian density written out directly.
pub fn ig_pdf(mu: f64, lambda: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (lambda / (2.0 * std::f64::consts::PI * t.powi(3))).sqrt() * (-lambda * (t - mu).powi(2) / (2.0 * mu * mu * t)).exp()
}

/// Nodes and weights of `n`-point Gauss-Legendre on [-1, 1], by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = p1;
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre over `panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            let mid = lo + h / 2.0;
            rule.iter().map(|&(x, w)| w * f(mid + x * h / 2.0)).sum::<f64>() * h / 2.0
        })
        .sum()
}

/// Empirical per-bit level counts from physically simulated arrivals.
///
/// Levels come from the true arrival bijection; the last `guard` bits of
/// each block are skipped so truncation at the block end cannot bias them.
pub fn empirical_level_counts(ig: IgParams, ts: f64, bits_wanted: usize, seed: u64) -> (Vec<u64>, u64) {
    const BLOCK: usize = 400;
    const GUARD: usize = 60;
    let cfg = ChannelConfig::new(ig, ts, 8).unwrap();
    let mut r = rng(seed);
    let mut counts = vec![0u64; GUARD];
    let mut total = 0u64;
    while (total as usize) < bits_wanted {
        let order = mocc_core::channel::arrival_order(BLOCK, &cfg, &mut r);
        let levels = BijectiveMatch::from_arrival_order(&order).unwrap().levels();
        for &l in &levels[..BLOCK - GUARD] {
            counts[(l as usize).min(GUARD - 1)] += 1;
            total += 1;
        }
    }
    (counts, total)
}
