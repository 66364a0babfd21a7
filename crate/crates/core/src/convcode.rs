//! Rate-1/2 feedforward convolutional codes and their trellis.
//!
//! Generators are octal tap masks over `K` bits. The most significant tap
//! multiplies the current input, so `7` (octal) is `111` and `5` is `101`.
//! Output bits of one step are emitted in generator order. Frames are
//! terminated with `K - 1` zero tail bits.

use crate::error::{Error, Result};

pub const OUTPUTS_PER_STEP: usize = 2;

/// A rate-1/2 feedforward convolutional code with its tabulated trellis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvCode {
    constraint_length: usize,
    generators: [u32; 2],
    trellis: Trellis,
}

/// Branch `(state, input) -> (next_state, outputs)` for every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    next: Vec<[usize; 2]>,
    outputs: Vec<[[u8; 2]; 2]>,
    /// `predecessors[s]` lists `(previous_state, input)` for both incoming branches.
    predecessors: Vec<[(usize, u8); 2]>,
}

impl Trellis {
    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn next_state(&self, state: usize, input: u8) -> usize {
        self.next[state][usize::from(input)]
    }

    pub fn outputs(&self, state: usize, input: u8) -> [u8; 2] {
        self.outputs[state][usize::from(input)]
    }

    /// Incoming branches of `state`, ordered by predecessor state index.
    pub fn predecessors(&self, state: usize) -> &[(usize, u8); 2] {
        &self.predecessors[state]
    }

    pub fn branch_count(&self) -> usize {
        2 * self.state_count()
    }
}

/// Parses an octal generator such as `"155"`.
pub fn parse_octal(text: &str) -> Result<u32> {
    u32::from_str_radix(text.trim(), 8)
        .map_err(|_| Error::validation("generator", format!("{text:?} is not an octal number")))
}

fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

impl ConvCode {
    /// Builds the code from `K` and two tap masks (already converted from octal).
    pub fn new(constraint_length: usize, generators: [u32; 2]) -> Result<Self> {
        if !(2..=10).contains(&constraint_length) {
            return Err(Error::validation(
                "constraint_length",
                format!("must lie in 2..=10, got {constraint_length}"),
            ));
        }
        let width_mask = (1u32 << constraint_length) - 1;
        for &g in &generators {
            if g == 0 {
                return Err(Error::validation("generator", "zero generator gives a degenerate code"));
            }
            if g & !width_mask != 0 {
                return Err(Error::validation(
                    "generator",
                    format!("{g:o} (octal) is wider than K = {constraint_length} bits"),
                ));
            }
        }
        let memory = constraint_length - 1;
        let states = 1usize << memory;
        let mut next = vec![[0usize; 2]; states];
        let mut outputs = vec![[[0u8; 2]; 2]; states];
        let mut incoming: Vec<Vec<(usize, u8)>> = vec![Vec::new(); states];
        for state in 0..states {
            for input in 0..2u8 {
                // Register: current input at bit `memory`, most recent past input just below.
                let register = (u32::from(input) << memory) | state as u32;
                let to = (register >> 1) as usize;
                next[state][usize::from(input)] = to;
                outputs[state][usize::from(input)] = [parity(register & generators[0]), parity(register & generators[1])];
                incoming[to].push((state, input));
            }
        }
        let predecessors = incoming
            .into_iter()
            .map(|mut v| {
                v.sort();
                [v[0], v[1]]
            })
            .collect();
        Ok(Self { constraint_length, generators, trellis: Trellis { next, outputs, predecessors } })
    }

    /// Builds the code from octal generator strings, e.g. `("5", "7")`.
    pub fn from_octal(constraint_length: usize, generators: [&str; 2]) -> Result<Self> {
        Self::new(constraint_length, [parse_octal(generators[0])?, parse_octal(generators[1])?])
    }

    pub fn constraint_length(&self) -> usize {
        self.constraint_length
    }

    pub fn generators(&self) -> [u32; 2] {
        self.generators
    }

    pub fn state_count(&self) -> usize {
        self.trellis.state_count()
    }

    pub fn tail_len(&self) -> usize {
        self.constraint_length - 1
    }

    pub fn rate(&self) -> f64 {
        0.5
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }

    /// Codeword length for `info_len` information bits, tail included.
    pub fn codeword_len(&self, info_len: usize) -> usize {
        OUTPUTS_PER_STEP * (info_len + self.tail_len())
    }

    /// Number of information bits carried by a codeword of `codeword_len` bits.
    pub fn info_len_for(&self, codeword_len: usize) -> Option<usize> {
        if !codeword_len.is_multiple_of(OUTPUTS_PER_STEP) {
            return None;
        }
        (codeword_len / OUTPUTS_PER_STEP).checked_sub(self.tail_len()).filter(|&n| n > 0)
    }

    /// Terminated encoding from the zero state.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.codeword_len(info.len()));
        let mut state = 0usize;
        for &bit in info.iter().chain(std::iter::repeat_n(&0u8, self.tail_len())) {
            out.extend_from_slice(&self.trellis.outputs(state, bit));
            state = self.trellis.next_state(state, bit);
        }
        debug_assert_eq!(state, 0);
        out
    }

    /// Name in `K:g1:g2` form, generators in octal.
    pub fn label(&self) -> String {
        format!("{}:{:o}:{:o}", self.constraint_length, self.generators[0], self.generators[1])
    }
}

/// Minimum Hamming weight over nonzero terminated codewords with up to
/// `max_info_len` information bits, by exhaustive enumeration.
pub fn free_distance(code: &ConvCode, max_info_len: usize) -> usize {
    let mut best = usize::MAX;
    for len in 1..=max_info_len {
        // Leading one: shorter supports are covered by smaller `len`.
        for word in (1u64 << (len - 1))..(1u64 << len) {
            let info: Vec<u8> = (0..len).map(|i| ((word >> (len - 1 - i)) & 1) as u8).collect();
            let weight = code.encode(&info).iter().filter(|&&b| b == 1).count();
            best = best.min(weight);
        }
    }
    best
}
