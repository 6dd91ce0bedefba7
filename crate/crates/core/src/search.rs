//! Bad-character shift search over Unicode scalar values.
//!
//! A [`ShiftOracle`] answers `last(c)`: one plus the index of the last
//! occurrence of `c` in the pattern, or 0 when `c` does not occur. Exact
//! oracles use a direct-address table (small alphabets only) or a hash map;
//! the approximate oracle is a [`CompactApproximator`] over the naturals,
//! which may overestimate `last(c)`. Overestimates only shorten shifts, so
//! every engine finds exactly the same matches.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approximator::{choose_params, BuildParams, CompactApproximator, DEFAULT_M_FLOOR};
use crate::distinct::estimate_distinct;
use crate::error::{Error, Result};
use crate::hash::{derive_seed, HashFamily};
use crate::lattice::NatLattice;

/// Direct-address tables cover code points below this bound by default.
pub const DEFAULT_DIRECT_BOUND: u32 = 256;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_1e55_ba11_ad5e;

/// Decodes UTF-8 into scalar values, rejecting malformed input.
pub fn decode_text(bytes: &[u8]) -> Result<Vec<char>> {
    std::str::from_utf8(bytes)
        .map(|s| s.chars().collect())
        .map_err(|e| Error::Decode {
            offset: e.valid_up_to(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Shift on the rightmost mismatching text character.
    BoyerMoore,
    /// Shift on the text character just past the window (Sunday).
    QuickSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backing {
    DirectAddress,
    Associative,
    Approximator,
}

/// Settings for the approximator-backed oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxConfig {
    pub d: usize,
    pub m_floor: usize,
    pub seed: u64,
    /// Use this support size instead of estimating it.
    pub n: Option<usize>,
    /// Use `m = ceil(factor * n)` instead of `ceil(n d / ln 2)`; `m_floor`
    /// still applies.
    pub buckets_per_symbol: Option<f64>,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self {
            d: 3,
            m_floor: DEFAULT_M_FLOOR,
            seed: DEFAULT_SEED,
            n: None,
            buckets_per_symbol: None,
        }
    }
}

impl ApproxConfig {
    pub fn with_d(d: usize, seed: u64) -> Self {
        Self {
            d,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
enum Table {
    Direct(Vec<u32>),
    Associative(HashMap<char, u32>),
    Approximate {
        approx: CompactApproximator<NatLattice, HashFamily>,
        params: BuildParams,
    },
}

/// Source of `last(c)` for one pattern.
#[derive(Debug, Clone)]
pub struct ShiftOracle {
    pattern: Vec<char>,
    table: Table,
}

fn check_pattern(pattern: &[char]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::InvalidPattern("pattern is empty".into()));
    }
    if pattern.len() > u32::MAX as usize {
        return Err(Error::InvalidPattern("pattern is too long".into()));
    }
    Ok(())
}

impl ShiftOracle {
    /// Exact oracle backed by a table indexed by code point. Every pattern
    /// character must lie below `bound`.
    pub fn direct(pattern: &[char], bound: u32) -> Result<Self> {
        check_pattern(pattern)?;
        let mut table = vec![0u32; bound as usize];
        for (i, &c) in pattern.iter().enumerate() {
            let cp = c as u32;
            if cp >= bound {
                return Err(Error::BackingUnsupported {
                    code_point: cp,
                    bound,
                });
            }
            table[cp as usize] = i as u32 + 1;
        }
        Ok(Self {
            pattern: pattern.to_vec(),
            table: Table::Direct(table),
        })
    }

    /// Exact oracle backed by a hash map from character to `last(c)`.
    pub fn associative(pattern: &[char]) -> Result<Self> {
        check_pattern(pattern)?;
        let mut table = HashMap::new();
        for (i, &c) in pattern.iter().enumerate() {
            table.insert(c, i as u32 + 1);
        }
        Ok(Self {
            pattern: pattern.to_vec(),
            table: Table::Associative(table),
        })
    }

    /// Exact oracle with the requested backing. `Approximator` is rejected;
    /// use [`approximate`](Self::approximate).
    pub fn exact(pattern: &[char], backing: Backing) -> Result<Self> {
        match backing {
            Backing::DirectAddress => Self::direct(pattern, DEFAULT_DIRECT_BOUND),
            Backing::Associative => Self::associative(pattern),
            Backing::Approximator => Err(Error::InvalidParameter(
                "the approximator backing is not exact".into(),
            )),
        }
    }

    /// Approximate oracle: the support size comes from the distinct-symbol
    /// estimator unless given, the sizing from [`choose_params`], and every
    /// pattern position `i` joins `i + 1` into the buckets of `pattern[i]`.
    pub fn approximate(pattern: &[char], config: &ApproxConfig) -> Result<Self> {
        check_pattern(pattern)?;
        let n = match config.n {
            Some(n) => n,
            None => estimate_distinct(pattern, derive_seed(config.seed, 1)).n(),
        };
        let mut params = choose_params(n, config.d, config.m_floor)?;
        if let Some(factor) = config.buckets_per_symbol {
            if !(factor.is_finite() && factor > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "buckets per symbol must be positive, got {factor}"
                )));
            }
            params.m = ((factor * n as f64).ceil() as usize).max(config.m_floor);
        }
        let family = params.family(config.seed)?;
        let mut approx = CompactApproximator::new(NatLattice, family);
        for (i, c) in pattern.iter().enumerate() {
            approx.insert(c, i as u32 + 1)?;
        }
        Ok(Self {
            pattern: pattern.to_vec(),
            table: Table::Approximate { approx, params },
        })
    }

    pub fn backing(&self) -> Backing {
        match self.table {
            Table::Direct(_) => Backing::DirectAddress,
            Table::Associative(_) => Backing::Associative,
            Table::Approximate { .. } => Backing::Approximator,
        }
    }

    pub fn pattern(&self) -> &[char] {
        &self.pattern
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    /// Sizing of the approximator, for approximate oracles.
    pub fn params(&self) -> Option<BuildParams> {
        match &self.table {
            Table::Approximate { params, .. } => Some(*params),
            _ => None,
        }
    }

    pub fn approximator(&self) -> Option<&CompactApproximator<NatLattice, HashFamily>> {
        match &self.table {
            Table::Approximate { approx, .. } => Some(approx),
            _ => None,
        }
    }

    /// One plus the index of the last occurrence of `c`, 0 if absent. The
    /// approximate backing may return more, never less, and never more than
    /// the pattern length.
    #[inline]
    pub fn last(&self, c: char) -> u32 {
        match &self.table {
            Table::Direct(t) => t.get(c as usize).copied().unwrap_or(0),
            Table::Associative(t) => t.get(&c).copied().unwrap_or(0),
            Table::Approximate { approx, .. } => approx.query(&c),
        }
    }

    /// `max(1, j - last(c) + 1)` for a mismatch on text character `c` at
    /// pattern index `j`.
    #[inline]
    pub fn shift_bm(&self, c: char, j: usize) -> usize {
        (j + 1).saturating_sub(self.last(c) as usize).max(1)
    }

    /// `P + 1 - last(c)` for the character `c` just past the window.
    #[inline]
    pub fn shift_qs(&self, c: char) -> usize {
        self.pattern.len() + 1 - self.last(c) as usize
    }
}

/// A pattern and a text, both as scalar values. The pattern is nonempty.
#[derive(Debug, Clone, Copy)]
pub struct SearchProblem<'a> {
    pattern: &'a [char],
    text: &'a [char],
}

impl<'a> SearchProblem<'a> {
    pub fn new(pattern: &'a [char], text: &'a [char]) -> Result<Self> {
        check_pattern(pattern)?;
        Ok(Self { pattern, text })
    }

    pub fn pattern(&self) -> &'a [char] {
        self.pattern
    }

    pub fn text(&self) -> &'a [char] {
        self.text
    }

    /// Number of window positions, `T - P + 1`, or 0 if the pattern is longer.
    pub fn windows(&self) -> usize {
        (self.text.len() + 1).saturating_sub(self.pattern.len())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Windows at which at least one comparison was made.
    pub candidates: u64,
    pub comparisons: u64,
    pub total_shift: u64,
    /// Match offsets in code points, increasing.
    pub matches: Vec<usize>,
}

/// A shift computed from the oracle during a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftEvent {
    pub position: usize,
    /// Text character the shift was computed from.
    pub character: char,
    /// Mismatch index for Boyer-Moore shifts; `None` for QuickSearch.
    pub mismatch: Option<usize>,
    pub shift: usize,
}

/// All occurrences of the pattern, overlapping ones included.
pub fn search(problem: &SearchProblem<'_>, oracle: &ShiftOracle, heuristic: Heuristic) -> Result<SearchStats> {
    search_observed(problem, oracle, heuristic, |_| {})
}

/// [`search`], reporting every oracle-derived shift to `observe`.
pub fn search_observed<F: FnMut(ShiftEvent)>(
    problem: &SearchProblem<'_>,
    oracle: &ShiftOracle,
    heuristic: Heuristic,
    mut observe: F,
) -> Result<SearchStats> {
    let (p, t) = (problem.pattern, problem.text);
    if oracle.pattern() != p {
        return Err(Error::OracleMismatch);
    }
    let plen = p.len();
    let mut stats = SearchStats::default();
    let mut k = 0usize;
    while k + plen <= t.len() {
        stats.candidates += 1;
        let window = &t[k..k + plen];
        let mut j = plen - 1;
        let mismatch = loop {
            stats.comparisons += 1;
            if p[j] != window[j] {
                break Some(j);
            }
            if j == 0 {
                break None;
            }
            j -= 1;
        };
        if mismatch.is_none() {
            stats.matches.push(k);
        }
        let shift = match heuristic {
            Heuristic::BoyerMoore => match mismatch {
                Some(j) => {
                    let c = window[j];
                    let shift = oracle.shift_bm(c, j);
                    observe(ShiftEvent {
                        position: k,
                        character: c,
                        mismatch: Some(j),
                        shift,
                    });
                    shift
                }
                None => 1,
            },
            Heuristic::QuickSearch => {
                let Some(&c) = t.get(k + plen) else {
                    break;
                };
                let shift = oracle.shift_qs(c);
                observe(ShiftEvent {
                    position: k,
                    character: c,
                    mismatch: None,
                    shift,
                });
                shift
            }
        };
        stats.total_shift += shift as u64;
        k += shift;
    }
    Ok(stats)
}

/// Tries every window, comparing left to right.
pub fn search_brute(problem: &SearchProblem<'_>) -> SearchStats {
    let (p, t) = (problem.pattern, problem.text);
    let mut stats = SearchStats::default();
    for k in 0..problem.windows() {
        stats.candidates += 1;
        let mut matched = true;
        for (a, b) in p.iter().zip(&t[k..]) {
            stats.comparisons += 1;
            if a != b {
                matched = false;
                break;
            }
        }
        if matched {
            stats.matches.push(k);
        }
        stats.total_shift += 1;
    }
    stats
}

/// Characters of `text` ordered by decreasing frequency, ties by code point.
pub fn characters_by_frequency(text: &[char]) -> Vec<(char, u64)> {
    let mut counts: HashMap<char, u64> = HashMap::new();
    for &c in text {
        *counts.entry(c).or_default() += 1;
    }
    let mut ranked: Vec<(char, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
}

fn pattern_from_pool(pool: Vec<char>, len: usize, seed: u64) -> Result<Vec<char>> {
    if len == 0 {
        return Err(Error::InvalidPattern("pattern length must be positive".into()));
    }
    if pool.is_empty() {
        return Err(Error::InvalidPattern("text is empty".into()));
    }
    let mut pattern: Vec<char> = pool.iter().copied().cycle().take(len).collect();
    pattern.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(pattern)
}

/// A pattern of `len` characters drawn from the `len` most frequent
/// characters of `text` (repeating them if the text has fewer), in a
/// seed-determined order.
pub fn frequent_pattern(text: &[char], len: usize, seed: u64) -> Result<Vec<char>> {
    let ranked = characters_by_frequency(text);
    let pool = ranked.iter().take(len).map(|r| r.0).collect();
    pattern_from_pool(pool, len, seed)
}

/// Like [`frequent_pattern`], from the least frequent characters.
pub fn rare_pattern(text: &[char], len: usize, seed: u64) -> Result<Vec<char>> {
    let ranked = characters_by_frequency(text);
    let pool = ranked.iter().rev().take(len).map(|r| r.0).collect();
    pattern_from_pool(pool, len, seed)
}

/// Candidate counts of the exact and approximate engines on one pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub pattern: String,
    pub d: usize,
    pub n: usize,
    pub m: usize,
    /// Candidates examined with the exact oracle.
    pub exact: u64,
    /// Candidates examined with the approximate oracle.
    pub approximate: u64,
    pub ratio: f64,
}

/// Runs every pattern through an exact and an approximate engine for each
/// `d`, checking that both report the same matches.
pub fn ratio_experiment(
    text: &[char],
    patterns: &[Vec<char>],
    ds: &[usize],
    buckets_per_symbol: Option<f64>,
    heuristic: Heuristic,
    seed: u64,
) -> Result<Vec<RatioRow>> {
    if patterns.is_empty() {
        return Err(Error::InvalidParameter("no patterns given".into()));
    }
    let mut rows = Vec::with_capacity(patterns.len() * ds.len());
    for pattern in patterns {
        let problem = SearchProblem::new(pattern, text)?;
        let exact = search(&problem, &ShiftOracle::associative(pattern)?, heuristic)?;
        for &d in ds {
            let config = ApproxConfig {
                buckets_per_symbol,
                ..ApproxConfig::with_d(d, seed)
            };
            let oracle = ShiftOracle::approximate(pattern, &config)?;
            let approx = search(&problem, &oracle, heuristic)?;
            let pattern_str: String = pattern.iter().collect();
            if approx.matches != exact.matches {
                return Err(Error::EngineMismatch(format!(
                    "pattern {pattern_str:?}, d = {d}: exact found {} matches, approximate {}",
                    exact.matches.len(),
                    approx.matches.len()
                )));
            }
            let params = oracle.params().expect("approximate oracle");
            rows.push(RatioRow {
                pattern: pattern_str,
                d,
                n: params.n,
                m: params.m,
                exact: exact.candidates,
                approximate: approx.candidates,
                ratio: if exact.candidates == 0 {
                    1.0
                } else {
                    approx.candidates as f64 / exact.candidates as f64
                },
            });
        }
    }
    Ok(rows)
}
