//! Crossover vectors between a transmitted and a received bit sequence.
//!
//! A value-preserving bijection `L` pairs every transmitted bit `x_i` with a
//! received bit `y_{L(i)}` of the same value. Under `L`, the crossover level of
//! bit `k` is `(max_{j <= L(k)} L^{-1}(j) - k)^+`: how many slots later the
//! latest transmitted bit received no later than `x_k` was sent. The
//! rank-matching bijection `L_0` (the `c`-th zero of `x` to the `c`-th zero of
//! `y`, likewise for ones) simultaneously minimises the sum and the maximum of
//! the levels over all admissible bijections.
//!
//! Indices in [`IndexVectors`] and [`BijectiveMatch`] are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::channel::CrossoverWeights;
use crate::error::{Error, Result};

/// Largest sequence length accepted by [`brute_force_min_vector`].
pub const BRUTE_FORCE_MAX_LEN: usize = 10;

/// A non-empty binary sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSeq(Vec<u8>);

impl BitSeq {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::validation("bits", "sequence must be non-empty"));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::validation("bits", format!("entry {} is {}, expected 0 or 1", pos, bits[pos])));
        }
        Ok(Self(bits))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::validation("bits", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BitSeq::new(bits)
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl AsRef<[u8]> for BitSeq {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Sorted 1-based positions of the zeros and ones of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexVectors {
    pub zeros_x: Vec<usize>,
    pub ones_x: Vec<usize>,
    pub zeros_y: Vec<usize>,
    pub ones_y: Vec<usize>,
}

impl IndexVectors {
    /// Positions of `value` in `x`.
    pub fn x(&self, value: u8) -> &[usize] {
        if value == 0 { &self.zeros_x } else { &self.ones_x }
    }

    /// Positions of `value` in `y`.
    pub fn y(&self, value: u8) -> &[usize] {
        if value == 0 { &self.zeros_y } else { &self.ones_y }
    }
}

fn positions(bits: &[u8], value: u8) -> Vec<usize> {
    bits.iter()
        .enumerate()
        .filter(|&(_, &b)| b == value)
        .map(|(i, _)| i + 1)
        .collect()
}

fn check_composition(x: &[u8], y: &[u8]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::validation("bits", "sequence must be non-empty"));
    }
    if x.len() != y.len() {
        return Err(Error::Composition { detail: format!("lengths {} and {}", x.len(), y.len()) });
    }
    let zeros = |s: &[u8]| s.iter().filter(|&&b| b == 0).count();
    let (zx, zy) = (zeros(x), zeros(y));
    if zx != zy {
        return Err(Error::Composition { detail: format!("{zx} zeros versus {zy} zeros") });
    }
    Ok(())
}

pub fn index_vectors(x: &[u8], y: &[u8]) -> Result<IndexVectors> {
    check_composition(x, y)?;
    Ok(IndexVectors {
        zeros_x: positions(x, 0),
        ones_x: positions(x, 1),
        zeros_y: positions(y, 0),
        ones_y: positions(y, 1),
    })
}

/// A bijection `L` on `1..=N` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectiveMatch {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl BijectiveMatch {
    /// `forward[i - 1] = L(i)`.
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![0usize; n];
        for (i, &j) in forward.iter().enumerate() {
            if j == 0 || j > n || inverse[j - 1] != 0 {
                return Err(Error::validation("mapping", format!("{forward:?} is not a permutation of 1..={n}")));
            }
            inverse[j - 1] = i + 1;
        }
        Ok(Self { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (1..=n).collect();
        Self { inverse: forward.clone(), forward }
    }

    /// The rank-matching bijection `L_0`.
    pub fn rank_matched(x: &[u8], y: &[u8]) -> Result<Self> {
        let idx = index_vectors(x, y)?;
        let mut forward = vec![0usize; x.len()];
        for value in [0u8, 1] {
            for (&i, &j) in idx.x(value).iter().zip(idx.y(value)) {
                forward[i - 1] = j;
            }
        }
        Self::new(forward)
    }

    /// The bijection induced by a physical arrival order (0-based transmit
    /// indices in order of arrival).
    pub fn from_arrival_order(order: &[usize]) -> Result<Self> {
        let mut forward = vec![0usize; order.len()];
        for (j, &i) in order.iter().enumerate() {
            if i >= order.len() || forward[i] != 0 {
                return Err(Error::validation("order", "not a permutation"));
            }
            forward[i] = j + 1;
        }
        Self::new(forward)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// `L(i)`, 1-based.
    pub fn forward(&self, i: usize) -> usize {
        self.forward[i - 1]
    }

    /// `L^{-1}(j)`, 1-based.
    pub fn inverse(&self, j: usize) -> usize {
        self.inverse[j - 1]
    }

    pub fn is_value_preserving(&self, x: &[u8], y: &[u8]) -> bool {
        x.len() == self.len() && y.len() == self.len()
            && self.forward.iter().enumerate().all(|(i, &j)| x[i] == y[j - 1])
    }

    /// Crossover levels of every position, via a prefix maximum of `L^{-1}`.
    pub fn levels(&self) -> Vec<u32> {
        let mut prefix_max = Vec::with_capacity(self.len());
        let mut running = 0usize;
        for &i in &self.inverse {
            running = running.max(i);
            prefix_max.push(running);
        }
        self.forward
            .iter()
            .enumerate()
            .map(|(i, &j)| prefix_max[j - 1].saturating_sub(i + 1) as u32)
            .collect()
    }

    /// Swaps the images of `i1` and `i2`.
    pub fn transposed(&self, i1: usize, i2: usize) -> Self {
        let mut forward = self.forward.clone();
        forward.swap(i1 - 1, i2 - 1);
        Self::new(forward).expect("a transposition of a permutation is a permutation")
    }
}

/// Crossover level of bit `k` under `mapping`.
pub fn crossover_level(mapping: &BijectiveMatch, k: usize) -> u32 {
    let latest = (1..=mapping.forward(k)).map(|j| mapping.inverse(j)).max().unwrap_or(0);
    latest.saturating_sub(k) as u32
}

/// Per-bit crossover levels with their sum and maximum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossoverVector {
    levels: Vec<u32>,
    sum: u64,
    max: u32,
}

impl CrossoverVector {
    pub fn new(levels: Vec<u32>) -> Self {
        let sum = levels.iter().map(|&l| u64::from(l)).sum();
        let max = levels.iter().copied().max().unwrap_or(0);
        Self { levels, sum, max }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0; len])
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `S_v`.
    pub fn sum(&self) -> u64 {
        self.sum
    }

    /// `M_v`.
    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn is_zero(&self) -> bool {
        self.max == 0
    }

    pub fn concat(&self, other: &CrossoverVector) -> Self {
        let mut levels = self.levels.clone();
        levels.extend_from_slice(&other.levels);
        Self::new(levels)
    }
}

impl From<&BijectiveMatch> for CrossoverVector {
    fn from(mapping: &BijectiveMatch) -> Self {
        CrossoverVector::new(mapping.levels())
    }
}

/// Minimum crossover vector from the index vectors of `x` and `y`.
///
/// Bit `i` of value `b` and value-rank `c` lands at `j = b^{(y,b)}_c`; the
/// opposite-valued bits received before `j` are ranks `1..=m` of the
/// opposite value, and under rank matching the latest of them was sent at
/// `b^{(x,!b)}_m`.
pub fn min_crossover_vector(x: &[u8], y: &[u8]) -> Result<CrossoverVector> {
    let idx = index_vectors(x, y)?;
    let mut rank = [0usize; 2];
    let levels = x
        .iter()
        .enumerate()
        .map(|(pos, &b)| {
            let i = pos + 1;
            let own = usize::from(b);
            let c = rank[own];
            rank[own] += 1;
            let j = idx.y(b)[c];
            let opposite = 1 - b;
            // Number of opposite-valued received bits strictly before j.
            let m = idx.y(opposite).partition_point(|&p| p < j);
            match m.checked_sub(1).map(|k2| idx.x(opposite)[k2]) {
                Some(latest) if latest > i => (latest - i) as u32,
                _ => 0,
            }
        })
        .collect();
    Ok(CrossoverVector::new(levels))
}

/// Exhaustive minimum over every value-preserving bijection.
///
/// Returns a vector minimising `S_v`, ties broken by smaller `M_v` and then
/// lexicographically smaller levels.
pub fn brute_force_min_vector(x: &[u8], y: &[u8]) -> Result<CrossoverVector> {
    if x.len() > BRUTE_FORCE_MAX_LEN {
        return Err(Error::SizeGuard(format!(
            "brute-force enumeration limited to N <= {BRUTE_FORCE_MAX_LEN}, got {}",
            x.len()
        )));
    }
    let mut best: Option<(u64, u32, Vec<u32>)> = None;
    for_each_value_preserving(x, y, |mapping| {
        let v = CrossoverVector::from(mapping);
        let key = (v.sum(), v.max(), v.levels);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    })?;
    let (_, _, levels) = best.expect("at least one admissible bijection exists");
    Ok(CrossoverVector::new(levels))
}

/// Calls `visit` with every value-preserving bijection between `x` and `y`.
pub fn for_each_value_preserving<F>(x: &[u8], y: &[u8], mut visit: F) -> Result<()>
where
    F: FnMut(&BijectiveMatch),
{
    let idx = index_vectors(x, y)?;
    let zeros_y = idx.zeros_y.clone();
    let ones_y = idx.ones_y.clone();
    let mut zero_perm = zeros_y.clone();
    let mut forward = vec![0usize; x.len()];
    permutations(&mut zero_perm, 0, &mut |zp| {
        for (&i, &j) in idx.zeros_x.iter().zip(zp) {
            forward[i - 1] = j;
        }
        let mut one_perm = ones_y.clone();
        permutations(&mut one_perm, 0, &mut |op| {
            for (&i, &j) in idx.ones_x.iter().zip(op) {
                forward[i - 1] = j;
            }
            let mapping = BijectiveMatch::new(forward.clone()).expect("assembled from disjoint position sets");
            visit(&mapping);
        });
    });
    Ok(())
}

fn permutations<F: FnMut(&[usize])>(items: &mut [usize], start: usize, visit: &mut F) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// `ln P_v = sum_k ln P_c(l_k)`.
pub fn ln_vector_probability(v: &CrossoverVector, w: &CrossoverWeights) -> f64 {
    v.levels().iter().map(|&l| w.ln_probability(l as usize)).sum()
}

/// `P_v = prod_k P_c(l_k)`, assuming independent crossovers.
pub fn vector_probability(v: &CrossoverVector, w: &CrossoverWeights) -> f64 {
    ln_vector_probability(v, w).exp()
}

/// `D_v = sum_k W_c(l_k)`.
pub fn crossover_distance(v: &CrossoverVector, w: &CrossoverWeights) -> f64 {
    v.levels().iter().map(|&l| w.weight(l as usize)).sum()
}

/// `sum_k l_k`.
pub fn level_sum_distance(v: &CrossoverVector) -> u64 {
    v.sum()
}
