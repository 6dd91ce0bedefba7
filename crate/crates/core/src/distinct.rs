//! Estimating the number of distinct symbols in a pattern, used to size the
//! shift-table approximator.
//!
//! Long patterns go through probabilistic counting with stochastic averaging
//! (Flajolet-Martin PCSA over 16 bitmaps); short ones just report their
//! length, which is always a valid upper bound.

use std::collections::HashSet;
use std::hash::Hash;

use crate::hash::{mix64, Key};

/// Patterns up to this length skip the sketch and report their length.
pub const SHORT_PATTERN_LEN: usize = 64;

const REGISTERS: usize = 16;
const REGISTER_BITS: u32 = 4;
/// Flajolet-Martin bias correction.
const PHI: f64 = 0.773_51;
const SALT: u64 = 0x452_821e_638d_0137;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    LengthBound,
    Probabilistic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinctEstimate {
    pub estimate: f64,
    pub upper_bound: usize,
    pub method: EstimateMethod,
}

impl DistinctEstimate {
    /// The support size to size an approximator with: the estimate rounded
    /// up, clamped to `[1, upper_bound]` (0 only for an empty pattern).
    pub fn n(&self) -> usize {
        if self.upper_bound == 0 {
            return 0;
        }
        (self.estimate.ceil() as usize).clamp(1, self.upper_bound)
    }
}

/// Exact count by hashing every symbol.
pub fn exact_distinct<T: Eq + Hash>(pattern: &[T]) -> usize {
    pattern.iter().collect::<HashSet<_>>().len()
}

/// Constant-space single-pass estimate. Deterministic for a given seed.
pub fn estimate_distinct<T: Key>(pattern: &[T], seed: u64) -> DistinctEstimate {
    let len = pattern.len();
    if len <= SHORT_PATTERN_LEN {
        return DistinctEstimate {
            estimate: len as f64,
            upper_bound: len,
            method: EstimateMethod::LengthBound,
        };
    }

    let salt = mix64(seed ^ SALT);
    let mut bitmaps = [0u64; REGISTERS];
    for symbol in pattern {
        let h = symbol.digest(salt);
        let register = (h & (REGISTERS as u64 - 1)) as usize;
        let rank = (h >> REGISTER_BITS).trailing_zeros().min(63);
        bitmaps[register] |= 1 << rank;
    }
    let mean_rank = bitmaps
        .iter()
        .map(|b| (!b).trailing_zeros() as f64)
        .sum::<f64>()
        / REGISTERS as f64;
    let raw = REGISTERS as f64 / PHI * mean_rank.exp2();

    DistinctEstimate {
        estimate: raw.clamp(1.0, len as f64),
        upper_bound: len,
        method: EstimateMethod::Probabilistic,
    }
}
