//! Viterbi decoding under crossover, level-sum, or Hamming distance.
//!
//! For the crossover metrics every survivor carries the state of an
//! incrementally built rank-matching bijection between its hypothesised
//! codeword prefix and the (fully buffered) received frame. A transmitted bit
//! `k` of value `b` and value-rank `c` maps to the received position `j` of
//! the `c`-th `b` in `y`. If `m = j - c` opposite-valued bits precede `j` in
//! `y`, the level of `k` is `(pos_x(!b, m) - k)^+`. When the prefix already
//! holds `m` opposite bits that position lies before `k` and the level is 0;
//! otherwise the entry waits in a pending queue until the `m`-th opposite bit
//! is hypothesised, at which point its level is known exactly.
//!
//! Survivors are ranked by finalized weight plus a lower bound on their
//! pending weight: an entry waiting since bit `k` will end with level at least
//! `t + 1 - k` once the prefix has length `t`. By default one survivor is kept
//! per (trellis state, zero count) pair; under the level-sum metric that
//! grouping and ranking make the search exact. A survivor whose prefix uses
//! more zeros or ones than the frame holds is dropped.

use std::collections::{HashMap, VecDeque};

use crate::channel::CrossoverWeights;
use crate::convcode::{ConvCode, OUTPUTS_PER_STEP};
use crate::error::{Error, Result};

/// Branch metric used by [`viterbi_decode`].
#[derive(Debug, Clone, Copy)]
pub enum Metric<'a> {
    /// `W_c(l) = ln P_c(0) - ln P_c(l)`.
    CrossoverDistance(&'a CrossoverWeights),
    /// `W_c(l) = l`.
    LevelSum,
    /// Classical per-position Hamming distance.
    Hamming,
}

impl Metric<'_> {
    pub fn level_weight(&self, level: usize) -> f64 {
        match self {
            Metric::CrossoverDistance(w) => w.weight(level),
            Metric::LevelSum => level as f64,
            Metric::Hamming => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::CrossoverDistance(_) => "crossover",
            Metric::LevelSum => "level_sum",
            Metric::Hamming => "hamming",
        }
    }
}

/// A received frame with the 1-based positions of its zeros and ones.
#[derive(Debug, Clone)]
pub struct ReceivedFrame<'a> {
    bits: &'a [u8],
    positions: [Vec<usize>; 2],
}

impl<'a> ReceivedFrame<'a> {
    pub fn new(bits: &'a [u8]) -> Self {
        let mut positions = [Vec::new(), Vec::new()];
        for (i, &b) in bits.iter().enumerate() {
            positions[usize::from(b & 1)].push(i + 1);
        }
        Self { bits, positions }
    }

    pub fn bits(&self) -> &'a [u8] {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count(&self, value: u8) -> usize {
        self.positions[usize::from(value)].len()
    }

    /// Position of the `rank`-th (1-based) bit of `value`.
    fn position(&self, value: u8, rank: usize) -> usize {
        self.positions[usize::from(value)][rank - 1]
    }
}

/// A transmitted bit whose level awaits the `rank`-th opposite-valued bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingLevel {
    /// 1-based transmit index `k`.
    pub index: usize,
    /// Opposite-value rank `m` still to be hypothesised.
    pub rank: usize,
}

/// Decoding state of one trellis path.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivorState {
    metric: f64,
    len: usize,
    counts: [usize; 2],
    /// `pending[b]` holds bits of value `b`, sorted by rank.
    pending: [VecDeque<PendingLevel>; 2],
    read_frontier: usize,
}

impl Default for SurvivorState {
    fn default() -> Self {
        Self::new()
    }
}

impl SurvivorState {
    pub fn new() -> Self {
        Self {
            metric: 0.0,
            len: 0,
            counts: [0, 0],
            pending: [VecDeque::new(), VecDeque::new()],
            read_frontier: 0,
        }
    }

    /// Accumulated finalized weight `d_i`; infinite once infeasible.
    pub fn metric(&self) -> f64 {
        self.metric
    }

    pub fn is_feasible(&self) -> bool {
        self.metric.is_finite()
    }

    /// Length of the hypothesised prefix.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Zeros and ones consumed by the prefix.
    pub fn counts(&self) -> [usize; 2] {
        self.counts
    }

    pub fn pending(&self, value: u8) -> impl Iterator<Item = &PendingLevel> {
        self.pending[usize::from(value)].iter()
    }

    pub fn pending_count(&self) -> usize {
        self.pending[0].len() + self.pending[1].len()
    }

    /// Smallest weight the pending entries can still contribute.
    pub fn pending_lower_bound(&self, metric: &Metric<'_>) -> f64 {
        let next = self.len + 1;
        self.pending
            .iter()
            .flatten()
            .map(|p| metric.level_weight(next - p.index))
            .sum()
    }

    /// Ranking key used when survivors merge into one trellis state.
    pub fn ranking_key(&self, metric: &Metric<'_>) -> f64 {
        self.metric + self.pending_lower_bound(metric)
    }

    /// Highest received position matched so far.
    pub fn read_frontier(&self) -> usize {
        self.read_frontier
    }

    /// Whole frame hypothesised, composition matched and every level finalized.
    pub fn is_complete(&self, rx: &ReceivedFrame<'_>) -> bool {
        self.is_feasible()
            && self.len == rx.len()
            && self.pending_count() == 0
            && self.counts == [rx.count(0), rx.count(1)]
    }

    fn mark_infeasible(&mut self) {
        self.metric = f64::INFINITY;
    }

    /// Appends one hypothesised bit, returning the weight it finalizes.
    fn push_bit(&mut self, bit: u8, rx: &ReceivedFrame<'_>, metric: &Metric<'_>) -> f64 {
        self.len += 1;
        if !self.is_feasible() {
            return f64::INFINITY;
        }
        if let Metric::Hamming = metric {
            let delta = f64::from(u8::from(rx.bits.get(self.len - 1) != Some(&bit)));
            self.metric += delta;
            return delta;
        }
        let k = self.len;
        let own = usize::from(bit);
        let opposite = 1 - own;
        self.counts[own] += 1;
        let rank = self.counts[own];
        if rank > rx.count(bit) {
            self.mark_infeasible();
            return f64::INFINITY;
        }

        let mut delta = 0.0;
        // This bit is the `rank`-th of its value: release waiters of the other value.
        while let Some(&front) = self.pending[opposite].front() {
            if front.rank != rank {
                break;
            }
            self.pending[opposite].pop_front();
            delta += metric.level_weight(k - front.index);
        }

        let j = rx.position(bit, rank);
        self.read_frontier = self.read_frontier.max(j);
        let m = j - rank;
        if m > self.counts[opposite] {
            self.pending[own].push_back(PendingLevel { index: k, rank: m });
        }
        self.metric += delta;
        delta
    }

    fn push_bits(&mut self, bits: &[u8], rx: &ReceivedFrame<'_>, metric: &Metric<'_>) -> f64 {
        bits.iter().map(|&b| self.push_bit(b, rx, metric)).sum()
    }
}

/// Extends `state` by `branch_bits`, returning the new state and `Δ`, the
/// weight of the levels finalized by this extension.
pub fn extend_survivor(
    state: &SurvivorState,
    branch_bits: &[u8],
    rx: &ReceivedFrame<'_>,
    metric: &Metric<'_>,
) -> (SurvivorState, f64) {
    let mut next = state.clone();
    let delta = next.push_bits(branch_bits, rx, metric);
    (next, delta)
}

/// Outcome of a successful decode.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub info: Vec<u8>,
    /// Total distance of the chosen path to the received frame.
    pub metric: f64,
}

fn check_frame(code: &ConvCode, received: &[u8]) -> Result<usize> {
    code.info_len_for(received.len()).ok_or_else(|| {
        Error::validation(
            "received",
            format!(
                "length {} is not 2 * (N_info + {}) for any N_info >= 1",
                received.len(),
                code.tail_len()
            ),
        )
    })
}

fn traceback(decisions: &[Vec<u16>], info_len: usize) -> Vec<u8> {
    let mut state = 0usize;
    let mut inputs = vec![0u8; decisions.len()];
    for (t, row) in decisions.iter().enumerate().rev() {
        let prev = usize::from(row[state]);
        // The new state's top memory bit is the input that entered it.
        inputs[t] = u8::from(state != prev >> 1);
        state = prev;
    }
    inputs.truncate(info_len);
    inputs
}

/// How merging paths are grouped into survivors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurvivorKeying {
    /// One survivor per trellis state (classical structure).
    PerState,
    /// One survivor per trellis state and prefix zero-count. Paths sharing
    /// both also share their pending ranks and remaining composition, so only
    /// the pending transmit indices distinguish their futures.
    #[default]
    StateAndComposition,
}

/// Default cap on survivors per trellis step.
pub const DEFAULT_MAX_SURVIVORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderOptions {
    pub keying: SurvivorKeying,
    /// Keep at most this many best-ranked survivors per step.
    pub max_survivors: Option<usize>,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        Self { keying: SurvivorKeying::default(), max_survivors: Some(DEFAULT_MAX_SURVIVORS) }
    }
}

impl DecoderOptions {
    /// No survivor cap; exact for the level-sum metric.
    pub fn unbounded() -> Self {
        Self { keying: SurvivorKeying::StateAndComposition, max_survivors: None }
    }
}

struct Node {
    state: usize,
    survivor: SurvivorState,
    key: f64,
}

/// Back-pointer of one survivor: index into the previous step and the input bit.
#[derive(Clone, Copy)]
struct Link {
    parent: u32,
    input: u8,
}

/// Modified Viterbi decoding of a terminated frame with default options.
///
/// The path must end in the zero state with full composition match and no
/// pending levels; if no such survivor remains, returns
/// [`Error::DecodeFailure`].
pub fn viterbi_decode(code: &ConvCode, received: &[u8], metric: &Metric<'_>) -> Result<Decoded> {
    viterbi_decode_with(code, received, metric, &DecoderOptions::default())
}

pub fn viterbi_decode_with(
    code: &ConvCode,
    received: &[u8],
    metric: &Metric<'_>,
    options: &DecoderOptions,
) -> Result<Decoded> {
    let info_len = check_frame(code, received)?;
    if let Metric::Hamming = metric {
        return hamming_viterbi_decode(code, received);
    }
    let rx = ReceivedFrame::new(received);
    let trellis = code.trellis();
    let steps = info_len + code.tail_len();

    let mut current = vec![Node { state: 0, survivor: SurvivorState::new(), key: 0.0 }];
    let mut history: Vec<Vec<Link>> = Vec::with_capacity(steps);
    let mut slots: HashMap<(usize, usize), usize> = HashMap::new();

    for t in 0..steps {
        let tail = t >= info_len;
        let mut next: Vec<(Node, Link)> = Vec::with_capacity(2 * current.len());
        slots.clear();
        // `current` is sorted by (state, zeros), so ties keep the smaller predecessor.
        for (parent, node) in current.iter().enumerate() {
            for input in 0..=u8::from(!tail) {
                let (candidate, _) = extend_survivor(&node.survivor, &trellis.outputs(node.state, input), &rx, metric);
                if !candidate.is_feasible() {
                    continue;
                }
                let state = trellis.next_state(node.state, input);
                let group = match options.keying {
                    SurvivorKeying::PerState => 0,
                    SurvivorKeying::StateAndComposition => candidate.counts()[0],
                };
                let key = candidate.ranking_key(metric);
                let entry = (Node { state, survivor: candidate, key }, Link { parent: parent as u32, input });
                match slots.get(&(state, group)) {
                    Some(&i) => {
                        if key < next[i].0.key {
                            next[i] = entry;
                        }
                    }
                    None => {
                        slots.insert((state, group), next.len());
                        next.push(entry);
                    }
                }
            }
        }
        if let Some(limit) = options.max_survivors {
            if next.len() > limit {
                next.sort_by(|a, b| a.0.key.total_cmp(&b.0.key).then(a.0.state.cmp(&b.0.state)));
                next.truncate(limit);
            }
        }
        next.sort_by_key(|(n, _)| (n.state, n.survivor.counts()[0]));
        let (nodes, links): (Vec<Node>, Vec<Link>) = next.into_iter().unzip();
        current = nodes;
        history.push(links);
    }

    let end = current
        .iter()
        .enumerate()
        .filter(|(_, n)| n.state == 0 && n.survivor.is_complete(&rx))
        .min_by(|(_, a), (_, b)| a.key.total_cmp(&b.key))
        .map(|(i, _)| i)
        .ok_or(Error::DecodeFailure)?;
    let metric_value = current[end].survivor.metric();

    let mut inputs = vec![0u8; steps];
    let mut index = end;
    for (t, links) in history.iter().enumerate().rev() {
        inputs[t] = links[index].input;
        index = links[index].parent as usize;
    }
    inputs.truncate(info_len);
    Ok(Decoded { info: inputs, metric: metric_value })
}

/// Classical terminated hard-decision Viterbi decoding.
pub fn hamming_viterbi_decode(code: &ConvCode, received: &[u8]) -> Result<Decoded> {
    let info_len = check_frame(code, received)?;
    let trellis = code.trellis();
    let states = trellis.state_count();
    let steps = info_len + code.tail_len();

    let mut metrics = vec![u32::MAX; states];
    metrics[0] = 0;
    let mut decisions: Vec<Vec<u16>> = Vec::with_capacity(steps);
    for t in 0..steps {
        let tail = t >= info_len;
        let pair = &received[OUTPUTS_PER_STEP * t..OUTPUTS_PER_STEP * (t + 1)];
        let mut next = vec![u32::MAX; states];
        let mut row = vec![0u16; states];
        for s in 0..states {
            for &(p, input) in trellis.predecessors(s) {
                if (tail && input == 1) || metrics[p] == u32::MAX {
                    continue;
                }
                let out = trellis.outputs(p, input);
                let branch = u32::from(out[0] != pair[0]) + u32::from(out[1] != pair[1]);
                let candidate = metrics[p] + branch;
                if candidate < next[s] {
                    next[s] = candidate;
                    row[s] = p as u16;
                }
            }
        }
        metrics = next;
        decisions.push(row);
    }
    Ok(Decoded { info: traceback(&decisions, info_len), metric: f64::from(metrics[0]) })
}
