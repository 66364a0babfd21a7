//! Crossover-distance decoding of convolutional codes over the diffusion-based
//! molecular communication channel.
//!
//! The channel releases one particle per slot (binary molecule shift keying)
//! and delivers them in arrival order, so errors are reorderings rather than
//! flips. [`crossover`] measures reorderings, [`decoder`] uses that measure as
//! a Viterbi path metric, and [`analysis`] runs matched-throughput BER
//! experiments and the weight-enumerator BER approximation.

pub mod analysis;
pub mod channel;
pub mod convcode;
pub mod crossover;
pub mod decoder;
pub mod error;
pub mod hamming;
pub mod ig;
pub mod quadrature;
pub mod seed;

pub use analysis::{
    approx_ber, enumerate_error_events, run_ber_point, sweep, ApproxLimits, BerPoint, ErrorEvent, ExperimentConfig,
    ReferenceWords, Scheme,
};
pub use channel::{build_weights, build_weights_auto, crossover_probability, transmit, ChannelConfig, CrossoverWeights};
pub use convcode::ConvCode;
pub use crossover::{
    brute_force_min_vector, crossover_distance, level_sum_distance, min_crossover_vector, vector_probability,
    BijectiveMatch, BitSeq, CrossoverVector, IndexVectors,
};
pub use decoder::{
    hamming_viterbi_decode, viterbi_decode, viterbi_decode_with, Decoded, DecoderOptions, Metric, SurvivorKeying,
    SurvivorState,
};
pub use error::{Error, Result};
pub use ig::{derive_params, IgParams, PhysicalConfig};
