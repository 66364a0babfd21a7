//! Systematic Hamming(7,4) block code, the classical baseline.
//!
//! Codeword layout is `d1 d2 d3 d4 p1 p2 p3` with
//! `p1 = d1+d2+d4`, `p2 = d1+d3+d4`, `p3 = d2+d3+d4` (mod 2).

use crate::error::{Error, Result};

pub const DATA_BITS: usize = 4;
pub const BLOCK_BITS: usize = 7;

/// Parity-check columns for positions 0..7; a single error at position `i`
/// produces syndrome `SYNDROMES[i]`.
const SYNDROMES: [u8; BLOCK_BITS] = [0b110, 0b101, 0b011, 0b111, 0b100, 0b010, 0b001];

pub fn hamming74_encode(info: &[u8]) -> Result<[u8; BLOCK_BITS]> {
    let d: [u8; DATA_BITS] = info
        .try_into()
        .map_err(|_| Error::validation("info", format!("expected {DATA_BITS} bits, got {}", info.len())))?;
    Ok([d[0], d[1], d[2], d[3], d[0] ^ d[1] ^ d[3], d[0] ^ d[2] ^ d[3], d[1] ^ d[2] ^ d[3]])
}

fn syndrome(word: &[u8; BLOCK_BITS]) -> u8 {
    word.iter()
        .zip(SYNDROMES)
        .filter(|&(&b, _)| b == 1)
        .fold(0, |acc, (_, s)| acc ^ s)
}

/// Syndrome decoding; corrects any single bit flip.
pub fn hamming74_decode(word: &[u8]) -> Result<[u8; DATA_BITS]> {
    let mut w: [u8; BLOCK_BITS] = word
        .try_into()
        .map_err(|_| Error::validation("word", format!("expected {BLOCK_BITS} bits, got {}", word.len())))?;
    let s = syndrome(&w);
    if s != 0 {
        if let Some(pos) = SYNDROMES.iter().position(|&c| c == s) {
            w[pos] ^= 1;
        }
    }
    Ok([w[0], w[1], w[2], w[3]])
}

/// Encodes a multiple of four bits block by block.
pub fn encode_blocks(info: &[u8]) -> Result<Vec<u8>> {
    if !info.len().is_multiple_of(DATA_BITS) {
        return Err(Error::validation("info", format!("length {} is not a multiple of {DATA_BITS}", info.len())));
    }
    let mut out = Vec::with_capacity(info.len() / DATA_BITS * BLOCK_BITS);
    for chunk in info.chunks(DATA_BITS) {
        out.extend_from_slice(&hamming74_encode(chunk)?);
    }
    Ok(out)
}

pub fn decode_blocks(received: &[u8]) -> Result<Vec<u8>> {
    if !received.len().is_multiple_of(BLOCK_BITS) {
        return Err(Error::validation("word", format!("length {} is not a multiple of {BLOCK_BITS}", received.len())));
    }
    let mut out = Vec::with_capacity(received.len() / BLOCK_BITS * DATA_BITS);
    for chunk in received.chunks(BLOCK_BITS) {
        out.extend_from_slice(&hamming74_decode(chunk)?);
    }
    Ok(out)
}
