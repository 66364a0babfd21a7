mod common;

use common::*;
use mocc_core::channel::{arrival_order, build_weights_truncated, TRUNCATION_LIMIT};
use mocc_core::{build_weights, build_weights_auto, crossover_probability, transmit, ChannelConfig, CrossoverWeights, Error};
use proptest::prelude::*;

/// `P_c(l)` by composite Gauss-Legendre with panels aligned to slot edges.
fn pc_oracle(cfg: &ChannelConfig, level: usize) -> f64 {
    let ig = cfg.ig;
    let ts = cfg.slot_interval;
    let upper = 60.0 * ig.mu().max(ts);
    let f = |u: f64| {
        let mut v = ig_pdf(ig.mu(), ig.lambda(), u) * ig.cdf(u - level as f64 * ts);
        let mut k = level + 1;
        while (k as f64) * ts < u {
            v *= ig.sf(u - k as f64 * ts);
            k += 1;
        }
        v
    };
    let mut total = 0.0;
    let mut a = level as f64 * ts;
    while a < upper {
        let b = (a + ts).min(upper);
        total += integrate(f, a, b, 8);
        a = b;
    }
    total
}

#[test]
fn crossover_probability_matches_independent_quadrature() {
    let ig = table_ig();
    for ts in [0.5, 1.0, 2.0] {
        let cfg = ChannelConfig::new(ig, ts, 8).unwrap();
        for level in 1..=6 {
            let got = crossover_probability(level, &cfg).unwrap();
            let want = pc_oracle(&cfg, level);
            assert!((got - want).abs() <= 1e-8 * want + 1e-15, "ts {ts} l {level}: {got} vs {want}");
        }
    }
}

#[test]
fn table_values_at_unit_slot() {
    let w = build_weights_auto(table_ig(), 1.0, 8).unwrap();
    assert!((w.probability(1) - 0.0899).abs() < 5e-4);
    assert!((w.probability(2) - 0.0209).abs() < 5e-4);
    assert!(w.probabilities()[w.max_level()] <= TRUNCATION_LIMIT);
}

#[test]
fn probabilities_match_physical_arrivals() {
    let ig = table_ig();
    for (ts, seed) in [(1.0, 7), (2.0, 8)] {
        let w = build_weights_auto(ig, ts, 8).unwrap();
        let (counts, n) = empirical_level_counts(ig, ts, 200_000, seed);
        for level in 0..=3 {
            let p = w.probability(level);
            let se = (p * (1.0 - p) / n as f64).sqrt();
            let f = counts[level] as f64 / n as f64;
            assert!((f - p).abs() < 3.0 * se + 1e-12, "ts {ts} l {level}: {f} vs {p}");
        }
    }
}

#[test]
fn sums_to_one() {
    let ig = table_ig();
    for ts in [0.5, 1.0, 2.0, 4.0] {
        let w = build_weights_auto(ig, ts, 8).unwrap();
        let s: f64 = w.probabilities().iter().sum();
        assert!((s - 1.0).abs() <= 4.0 * f64::EPSILON, "ts {ts}: {s}");
        let t = build_weights_truncated(&ChannelConfig::new(ig, ts, 8).unwrap()).unwrap();
        assert!((t.probabilities().iter().sum::<f64>() - 1.0).abs() <= 4.0 * f64::EPSILON);
    }
}

#[test]
fn strict_builder_rejects_heavy_tails() {
    let ig = table_ig();
    let err = build_weights(&ChannelConfig::new(ig, 1.0, 8).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Truncation { max_level: 8, .. }));
    // Wide slots make l_max = 8 ample.
    let w = build_weights(&ChannelConfig::new(ig, 4.0, 8).unwrap()).unwrap();
    assert_eq!(w.max_level(), 8);
}

#[test]
fn auto_grows_the_table() {
    let ig = table_ig();
    let w = build_weights_auto(ig, 1.0, 8).unwrap();
    assert!(w.max_level() > 8);
    let cfg = ChannelConfig::new(ig, 1.0, w.max_level()).unwrap();
    assert!(build_weights(&cfg).is_ok());
}

#[test]
fn weights_are_log_ratios() {
    let w = build_weights_auto(table_ig(), 1.0, 8).unwrap();
    assert_eq!(w.weight(0), 0.0);
    for l in 1..=w.max_level() {
        let want = w.probability(0).ln() - w.probability(l).ln();
        assert!((w.weight(l) - want).abs() < 1e-12);
        assert!(w.weight(l) > 0.0);
    }
    let l = w.max_level();
    assert!((w.weight(l + 3) - w.weight(l) - 3.0 * w.extension_slope()).abs() < 1e-9);
}

#[test]
fn weight_table_validation() {
    assert!(CrossoverWeights::from_tail_probabilities(&[]).is_err());
    assert!(CrossoverWeights::from_tail_probabilities(&[1.5]).is_err());
    assert!(matches!(
        CrossoverWeights::from_tail_probabilities(&[0.6]),
        Err(Error::WeightOrdering { level: 1, .. })
    ));
}

#[test]
fn wide_slots_preserve_order() {
    let ig = table_ig();
    let cfg = ChannelConfig::new(ig, 100.0 * ig.mu(), 8).unwrap();
    let mut r = rng(3);
    let order = arrival_order(10_000, &cfg, &mut r);
    assert!(order.iter().enumerate().all(|(i, &j)| i == j));
}

#[test]
fn invalid_channel() {
    assert!(ChannelConfig::new(table_ig(), 0.0, 8).is_err());
    assert!(ChannelConfig::new(table_ig(), 1.0, 0).is_err());
}

proptest! {
    #[test]
    fn transmit_permutes(bits in proptest::collection::vec(0u8..=1, 0..200), seed in any::<u64>(), ts in 0.05f64..5.0) {
        let cfg = ChannelConfig::new(table_ig(), ts, 8).unwrap();
        let y = transmit(&bits, &cfg, &mut rng(seed));
        prop_assert_eq!(y.len(), bits.len());
        prop_assert_eq!(y.iter().filter(|&&b| b == 1).count(), bits.iter().filter(|&&b| b == 1).count());
    }
}
