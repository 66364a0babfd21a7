//! Sends one coded frame through the diffusion channel and decodes it
//! under each metric.

use mocc_core::{
    build_weights_auto, derive_params, hamming_viterbi_decode, transmit, viterbi_decode, ChannelConfig, ConvCode,
    Metric, PhysicalConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn errors(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn main() -> mocc_core::Result<()> {
    let (ig, diffusion) = derive_params(&PhysicalConfig::default())?;
    println!("D = {diffusion:.3e} m^2/s, mu = {:.3} s, lambda = {:.3} s", ig.mu(), ig.lambda());

    let tb = 2.0;
    let code = ConvCode::from_octal(3, ["5", "7"])?;
    let ts = tb * code.rate();
    let weights = build_weights_auto(ig, ts, 8)?;
    let channel = ChannelConfig::new(ig, ts, weights.max_level())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let info: Vec<u8> = (0..200).map(|_| rng.random_range(0..=1u8)).collect();
    let received = transmit(&code.encode(&info), &channel, &mut rng);

    let cd = viterbi_decode(&code, &received, &Metric::CrossoverDistance(&weights))?;
    let lsd = viterbi_decode(&code, &received, &Metric::LevelSum)?;
    let hd = hamming_viterbi_decode(&code, &received)?;
    println!("T_b = {tb} s, {} info bits", info.len());
    println!("crossover distance: {} bit errors", errors(&cd.info, &info));
    println!("level-sum distance: {} bit errors", errors(&lsd.info, &info));
    println!("hamming distance:   {} bit errors", errors(&hd.info, &info));
    Ok(())
}
