//! Shared fixtures for the decoding benchmarks.

use mocc_core::{build_weights_auto, derive_params, transmit, ChannelConfig, ConvCode, CrossoverWeights, PhysicalConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Frame {
    pub code: ConvCode,
    pub weights: CrossoverWeights,
    pub info: Vec<u8>,
    pub codeword: Vec<u8>,
    pub received: Vec<u8>,
}

/// One K = 3 coded frame of `info_bits` bits sent at information bit interval `tb`.
pub fn frame(info_bits: usize, tb: f64, seed: u64) -> Frame {
    let (ig, _) = derive_params(&PhysicalConfig::default()).expect("default physics");
    let code = ConvCode::from_octal(3, ["5", "7"]).expect("valid generators");
    let ts = tb * code.rate();
    let weights = build_weights_auto(ig, ts, 8).expect("weights");
    let channel = ChannelConfig::new(ig, ts, weights.max_level()).expect("channel");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let info: Vec<u8> = (0..info_bits).map(|_| rng.random_range(0..=1u8)).collect();
    let codeword = code.encode(&info);
    let received = transmit(&codeword, &channel, &mut rng);
    Frame { code, weights, info, codeword, received }
}
