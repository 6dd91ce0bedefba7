//! Every random choice the CLI makes is keyed by the master seed and one of
//! these stream numbers.

use lattice_approx::hash::derive_seed;

pub const SEARCH: u64 = 1;
pub const SIMULATE: u64 = 2;
pub const PATTERN: u64 = 3;
pub const EXPERIMENT_HASH: u64 = 4;

pub fn sub_seed(master: u64, stream: u64, index: u64) -> u64 {
    derive_seed(derive_seed(master, stream), index)
}

/// Accepts decimal or `0x`-prefixed hex.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|_| format!("`{s}` is not a 64-bit seed"))
}
