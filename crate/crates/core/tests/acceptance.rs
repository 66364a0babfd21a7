//! Acceptance checks. Each criterion prints one PASS/FAIL line; the binary
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use common::*;
use mocc_core::analysis::report::sweep_csv;
use mocc_core::crossover::for_each_value_preserving;
use mocc_core::decoder::{extend_survivor, ReceivedFrame};
use mocc_core::{
    approx_ber, build_weights_auto, crossover_distance, crossover_probability, derive_params, level_sum_distance,
    min_crossover_vector, sweep, transmit, viterbi_decode, ApproxLimits, BerPoint, ChannelConfig, CrossoverVector,
    CrossoverWeights, ExperimentConfig, Metric, PhysicalConfig, Scheme, SurvivorState,
};
use rand::seq::SliceRandom;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_physical_derivation() -> Outcome {
    let (ig, d) = derive_params(&PhysicalConfig::default()).unwrap();
    let d_hand = 1.380649e-23 * 298.0 / (6.0 * std::f64::consts::PI * 0.894e-3 * 10e-9);
    let (distance, velocity) = (10e-6, 10e-6);
    let mu_hand = distance / velocity;
    let lambda_hand = (10e-6f64).powi(2) / (2.0 * d_hand);
    let pass = rel(d, 2.44e-11) < 5e-3 && rel(ig.mu(), mu_hand) < 1e-3 && rel(ig.lambda(), lambda_hand) < 1e-3;
    outcome(pass, format!("D = {d:.4e} m^2/s, mu = {:.4} s, lambda = {:.4} s", ig.mu(), ig.lambda()))
}

fn c2_worked_examples() -> Outcome {
    let cases = [
        ("0100010", "0001100", vec![0, 2, 0, 0, 1, 0, 0]),
        ("010001", "001010", vec![0, 1, 0, 0, 1, 0]),
        ("010001", "000101", vec![0, 2, 0, 0, 0, 0]),
    ];
    let mut got = Vec::new();
    let mut pass = true;
    for (x, y, want) in cases {
        let v = min_crossover_vector(&bits(x), &bits(y)).unwrap();
        pass &= v.levels() == want.as_slice();
        got.push(format!("{:?}", v.levels()));
    }
    outcome(pass, got.join(" "))
}

fn c3_minimality_oracle() -> Outcome {
    let mut r = rng(31);
    let mut mismatches = 0;
    let instances = 2000;
    for case in 0..instances {
        let n = 1 + case % 8;
        let x = random_bits(&mut r, n);
        let mut y = x.clone();
        y.shuffle(&mut r);
        let v0 = min_crossover_vector(&x, &y).unwrap();
        let (mut s, mut m) = (u64::MAX, u32::MAX);
        for_each_value_preserving(&x, &y, |l| {
            let v = CrossoverVector::from(l);
            s = s.min(v.sum());
            m = m.min(v.max());
        })
        .unwrap();
        mismatches += usize::from(v0.sum() != s || v0.max() != m);
    }
    outcome(mismatches == 0, format!("{instances} instances with N <= 8, {mismatches} mismatches"))
}

fn c4_channel_consistency() -> Outcome {
    let ig = table_ig();
    let cfg = ChannelConfig::new(ig, 1.0, 8).unwrap();
    let (counts, n) = empirical_level_counts(ig, 1.0, 200_000, 41);
    let mut pass = true;
    let mut parts = Vec::new();
    for level in 1..=2 {
        let p = crossover_probability(level, &cfg).unwrap();
        let f = counts[level] as f64 / n as f64;
        let z = (f - p) / (p * (1.0 - p) / n as f64).sqrt();
        pass &= z.abs() < 3.0;
        parts.push(format!("P_c({level}) = {p:.5} vs empirical {f:.5} (z = {z:+.2})"));
    }
    let tail: Vec<f64> = (1..=8).map(|l| crossover_probability(l, &cfg).unwrap()).collect();
    let table = CrossoverWeights::from_tail_probabilities(&tail).unwrap();
    let sum: f64 = table.probabilities().iter().sum();
    let sum_ok = (sum - 1.0).abs() <= 4.0 * f64::EPSILON;
    pass &= sum_ok;
    parts.push(format!("sum_(l=0..8) P_c = 1 {:+.1e}", sum - 1.0));
    let p8 = tail[7];
    let tail_ok = p8 < 1e-10;
    pass &= tail_ok;
    parts.push(format!("P_c(8) = {p8:.3e} ({} 1e-10)", if tail_ok { "<" } else { "NOT <" }));
    outcome(pass, parts.join("; "))
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn c5_ig_correctness() -> Outcome {
    let ig = table_ig();
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let t = i as f64 * 0.08;
        let q = integrate(|u| ig.pdf(u), 0.0, t, 20 * i);
        worst = worst.max((ig.cdf(t) - q).abs());
    }
    let n = 1_000_000;
    let mut r = rng(0);
    let d = ks_statistic((0..n).map(|_| ig.sample(&mut r)).collect(), |x| ig.cdf(x));
    let critical = 1.628 / (n as f64).sqrt();
    outcome(
        worst < 1e-8 && d < critical,
        format!("max |cdf - quadrature| = {worst:.2e}; KS D = {d:.2e} (1% critical {critical:.2e}, n = {n})"),
    )
}

fn block_distance(x: &[u8], y: &[u8], metric: &Metric<'_>) -> f64 {
    if x.iter().filter(|&&b| b == 0).count() != y.iter().filter(|&&b| b == 0).count() {
        return f64::INFINITY;
    }
    let v = min_crossover_vector(x, y).unwrap();
    match metric {
        Metric::CrossoverDistance(w) => crossover_distance(&v, w),
        _ => level_sum_distance(&v) as f64,
    }
}

fn c6_decoder_ml() -> Outcome {
    let code = k3();
    let ig = table_ig();
    let w = build_weights_auto(ig, 1.0, 8).unwrap();
    let cfg = ChannelConfig::new(ig, 1.0, 8).unwrap();
    let words = all_codewords(&code, 6);
    let mut r = rng(61);
    let frames = 300;
    let mut violations = [0usize; 2];
    for _ in 0..frames {
        let info = random_bits(&mut r, 6);
        let y = transmit(&code.encode(&info), &cfg, &mut r);
        for (i, metric) in [Metric::CrossoverDistance(&w), Metric::LevelSum].iter().enumerate() {
            let best = words.iter().map(|(_, c)| block_distance(c, &y, metric)).fold(f64::INFINITY, f64::min);
            let got = viterbi_decode(&code, &y, metric)
                .map(|d| block_distance(&code.encode(&d.info), &y, metric))
                .unwrap_or(f64::INFINITY);
            violations[i] += usize::from(got > best + 1e-9 * best.max(1.0));
        }
    }
    outcome(
        violations == [0, 0],
        format!("{frames} frames: crossover {} and level-sum {} worse than the exhaustive optimum", violations[0], violations[1]),
    )
}

fn c7_block_incremental() -> Outcome {
    let code = k3();
    let ig = table_ig();
    let mut r = rng(71);
    let mut worst: f64 = 0.0;
    let mut level_sum_mismatch = 0;
    let frames = 600;
    let slots = [0.5, 1.0, 2.0];
    let tables: Vec<CrossoverWeights> = slots.iter().map(|&ts| build_weights_auto(ig, ts, 8).unwrap()).collect();
    for f in 0..frames {
        let (ts, w) = (slots[f % 3], &tables[f % 3]);
        let cfg = ChannelConfig::new(ig, ts, 8).unwrap();
        let n = 4 + f % 40;
        let info = random_bits(&mut r, n);
        let y = transmit(&code.encode(&info), &cfg, &mut r);
        let rx = ReceivedFrame::new(&y);
        let decoded = viterbi_decode(&code, &y, &Metric::CrossoverDistance(w)).unwrap();
        // Both the transmitted path and the surviving decision.
        for path in [info, decoded.info] {
            let x = code.encode(&path);
            let v = min_crossover_vector(&x, &y).unwrap();
            for metric in [Metric::CrossoverDistance(w), Metric::LevelSum] {
                let mut s = SurvivorState::new();
                let mut total = 0.0;
                for branch in x.chunks(2) {
                    let (next, d) = extend_survivor(&s, branch, &rx, &metric);
                    total += d;
                    s = next;
                }
                match metric {
                    Metric::LevelSum => level_sum_mismatch += usize::from(total != v.sum() as f64),
                    _ => {
                        let block = crossover_distance(&v, w);
                        worst = worst.max((total - block).abs() / block.max(1.0));
                    }
                }
            }
        }
    }
    outcome(
        level_sum_mismatch == 0 && worst <= 1e-12,
        format!("{frames} frames: level-sum mismatches {level_sum_mismatch}, max relative crossover-distance gap {worst:.1e}"),
    )
}

fn sweep_config() -> ExperimentConfig {
    let code = k3();
    ExperimentConfig {
        schemes: vec![Scheme::Uncoded, Scheme::ConvHd(code.clone()), Scheme::ConvCd(code.clone()), Scheme::ConvLsd(code)],
        tb_grid: vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
        frames: 20_000,
        info_bits_per_frame: 1000,
        base_seed: 2024,
        min_bit_errors: 200,
        ..ExperimentConfig::default()
    }
}

fn reference_sweep() -> &'static Vec<BerPoint> {
    static POINTS: OnceLock<Vec<BerPoint>> = OnceLock::new();
    POINTS.get_or_init(|| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        pool.install(|| sweep(&sweep_config()).unwrap())
    })
}

fn point<'a>(points: &'a [BerPoint], scheme: &str, tb: f64) -> &'a BerPoint {
    points.iter().find(|p| p.scheme == scheme && p.tb_seconds == tb).unwrap()
}

fn c8_ber_ordering() -> Outcome {
    let points = reference_sweep();
    let mut fails = Vec::new();
    let mut rows = Vec::new();
    for &tb in &sweep_config().tb_grid {
        let (u, hd, cd) = (point(points, "uncoded", tb), point(points, "conv_hd_k3", tb), point(points, "conv_cd_k3", tb));
        for p in [u, hd, cd] {
            if p.bit_errors < 200 {
                fails.push(format!("{} at {tb} s has only {} errors", p.scheme, p.bit_errors));
            }
        }
        if !(cd.ber < u.ber) {
            fails.push(format!("conv_cd >= uncoded at {tb} s"));
        }
        if !(hd.ber >= 0.5 * u.ber) {
            fails.push(format!("conv_hd < 0.5 x uncoded at {tb} s"));
        }
        rows.push(format!("T_b {tb}: unc {:.2e} hd {:.2e} cd {:.2e}", u.ber, hd.ber, cd.ber));
    }
    let detail = if fails.is_empty() { rows.join("; ") } else { format!("{}; [{}]", fails.join(", "), rows.join("; ")) };
    outcome(fails.is_empty(), detail)
}

fn c9_level_sum() -> Outcome {
    let points = reference_sweep();
    let mut rows = Vec::new();
    let mut pass = true;
    for &tb in &sweep_config().tb_grid {
        let (cd, lsd) = (point(points, "conv_cd_k3", tb), point(points, "conv_lsd_k3", tb));
        if cd.bit_errors < 100 || lsd.bit_errors < 100 {
            continue;
        }
        let ratio = lsd.ber / cd.ber;
        pass &= (0.5..=2.0).contains(&ratio);
        rows.push(format!("T_b {tb}: lsd/cd = {ratio:.2}"));
    }
    outcome(pass && !rows.is_empty(), rows.join("; "))
}

fn c10_approximation() -> Outcome {
    let points = reference_sweep();
    let ig = table_ig();
    let code = k3();
    let mut rows = Vec::new();
    let mut pass = true;
    for tb in [2.0, 3.0] {
        let mc = point(points, "conv_cd_k3", tb).ber;
        let approx = approx_ber(&code, ig, tb, &ApproxLimits::default()).unwrap();
        let ratio = approx / mc;
        pass &= (0.1..=10.0).contains(&ratio);
        rows.push(format!("T_b {tb}: approx {approx:.2e} vs MC {mc:.2e} (ratio {ratio:.2})"));
    }
    outcome(pass, rows.join("; "))
}

fn c11_determinism() -> Outcome {
    let first = sweep_csv(reference_sweep());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let second = sweep_csv(&pool.install(|| sweep(&sweep_config()).unwrap()));
    outcome(first == second, format!("{} CSV bytes, 1 thread vs 8 threads", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("physical derivation", c1_physical_derivation),
        ("worked examples", c2_worked_examples),
        ("minimality oracle", c3_minimality_oracle),
        ("channel/probability consistency", c4_channel_consistency),
        ("IG correctness", c5_ig_correctness),
        ("decoder ML property", c6_decoder_ml),
        ("block/incremental equivalence", c7_block_incremental),
        ("BER ordering vs uncoded", c8_ber_ordering),
        ("level-sum vs crossover distance", c9_level_sum),
        ("weight-enumerator approximation", c10_approximation),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {:>2} {}: {} ({:.1} s) {}",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
