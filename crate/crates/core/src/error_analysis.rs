//! Closed-form error probabilities of the approximator and their Monte-Carlo
//! counterparts.
//!
//! * `phi`: probability that a key outside the support reads back non-bottom.
//! * `psi`: probability that a key in the support reads back a strictly
//!   larger value than the one stored.
//!
//! The closed forms treat the occupancy of distinct buckets as independent,
//! the same simplification as the textbook Bloom-filter false-positive
//! formula. They are accurate for `d = 1` and for large `m`; for tiny `m` and
//! `d > 1` real structures err slightly more often.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approximator::CompactApproximator;
use crate::error::{Error, Result};
use crate::hash::{derive_seed, HashFamily};
use crate::lattice::NatLattice;

/// Trials per parallel work unit. Results never depend on it.
const CHUNK: u64 = 4096;

/// Smallest universe, relative to the support, accepted by
/// [`measure_bottom_error`].
pub const MIN_UNIVERSE_FACTOR: u64 = 100;

/// Probability that a given bucket is non-bottom after `throws` uniform
/// writes into `m` buckets: `1 - (1 - 1/m)^throws`.
fn occupied(m: usize, throws: f64) -> f64 {
    if throws == 0.0 {
        return 0.0;
    }
    if m == 1 {
        return 1.0;
    }
    -(throws * (-1.0 / m as f64).ln_1p()).exp_m1()
}

fn check_md(m: usize, d: usize) {
    assert!(m >= 1, "m must be at least 1");
    assert!(d >= 1, "d must be at least 1");
}

/// `(1 - (1 - 1/m)^(dn))^d`.
///
/// # Panics
///
/// If `m` or `d` is zero.
pub fn phi_exact(n: usize, m: usize, d: usize) -> f64 {
    check_md(m, d);
    occupied(m, (d * n) as f64).powi(d as i32)
}

/// `(1 - e^(-dn/m))^d`.
///
/// # Panics
///
/// If `m` or `d` is zero.
pub fn phi_approx(n: usize, m: usize, d: usize) -> f64 {
    check_md(m, d);
    (-(-((d * n) as f64) / m as f64).exp_m1()).powi(d as i32)
}

/// `2^-d`, the value of [`phi_approx`] at `m = dn / ln 2`.
pub fn min_phi(d: usize) -> f64 {
    assert!(d >= 1, "d must be at least 1");
    0.5f64.powi(d as i32)
}

/// `(phi_exact, phi_approx)` for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub phi_exact: f64,
    pub phi_approx: f64,
}

impl ErrorEstimate {
    pub fn new(n: usize, m: usize, d: usize) -> Self {
        Self {
            n,
            m,
            d,
            phi_exact: phi_exact(n, m, d),
            phi_approx: phi_approx(n, m, d),
        }
    }
}

/// Distinct non-bottom values `v_1 < ... < v_s`, value `v_i` taken `a_i` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDistribution {
    levels: Vec<(u32, u64)>,
}

impl ValueDistribution {
    pub fn new(levels: Vec<(u32, u64)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("distribution has no values".into()));
        }
        let mut prev = 0u32;
        for &(v, a) in &levels {
            if v <= prev {
                return Err(Error::InvalidParameter(format!(
                    "values must be strictly increasing and above bottom, got {v} after {prev}"
                )));
            }
            if a == 0 {
                return Err(Error::InvalidParameter(format!(
                    "value {v} has zero multiplicity"
                )));
            }
            prev = v;
        }
        Ok(Self { levels })
    }

    /// Values `1..=n`, each taken once.
    pub fn uniform(n: u32) -> Result<Self> {
        Self::new((1..=n).map(|v| (v, 1)).collect())
    }

    /// Values `1..=s`, value `i` taken `2^(s-i)` times: every level is half as
    /// frequent as the one below it.
    pub fn geometric(s: u32) -> Result<Self> {
        if s > 32 {
            return Err(Error::InvalidParameter(format!("{s} levels is too many")));
        }
        Self::new((1..=s).map(|i| (i, 1u64 << (s - i))).collect())
    }

    pub fn levels(&self) -> &[(u32, u64)] {
        &self.levels
    }

    /// Support size `n = sum a_i`.
    pub fn n(&self) -> u64 {
        self.levels.iter().map(|l| l.1).sum()
    }

    /// One value per support element, in increasing order.
    pub fn expand(&self) -> Vec<u32> {
        self.levels
            .iter()
            .flat_map(|&(v, a)| std::iter::repeat_n(v, a as usize))
            .collect()
    }
}

/// `sum_i (a_i/n) (1 - (1 - 1/m)^(d T_i))^d` with `T_i = sum_{j>i} a_j`.
pub fn psi_general(dist: &ValueDistribution, m: usize, d: usize) -> f64 {
    check_md(m, d);
    let n = dist.n() as f64;
    let mut above = 0u64;
    let mut total = 0.0;
    for &(_, a) in dist.levels().iter().rev() {
        total += a as f64 / n * occupied(m, (d as u64 * above) as f64).powi(d as i32);
        above += a;
    }
    total
}

/// Error probability, scaled by `n`, for the `i`-th smallest of `n` values
/// each taken once: `(1 - (1 - 1/m)^(d(n-i)))^d`.
pub fn summand_uniform(i: usize, n: usize, m: usize, d: usize) -> Result<f64> {
    if i == 0 || i > n {
        return Err(Error::InvalidParameter(format!(
            "summand index {i} outside 1..={n}"
        )));
    }
    check_md(m, d);
    Ok(occupied(m, (d * (n - i)) as f64).powi(d as i32))
}

/// `psi` when the function takes each of `n` values exactly once.
pub fn psi_uniform(n: usize, m: usize, d: usize) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    check_md(m, d);
    (1..n)
        .map(|i| occupied(m, (d * (n - i)) as f64).powi(d as i32))
        .sum::<f64>()
        / n as f64
}

/// The integer `d` in `ds` minimising [`summand_uniform`]; ties go to the
/// smaller `d`.
pub fn summand_argmin_d(
    i: usize,
    n: usize,
    m: usize,
    ds: impl IntoIterator<Item = usize>,
) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for d in ds {
        let v = summand_uniform(i, n, m, d)?;
        if best.is_none_or(|(bv, _)| v < bv) {
            best = Some((v, d));
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| Error::InvalidParameter("empty d range".into()))
}

/// Support size `2^(s+1) - 1` of the exponential case.
pub fn exponential_support(s: u32) -> f64 {
    (s as f64 + 1.0).exp2() - 1.0
}

/// `sum_{i=0}^{s-1} (2^(s-i)/n) (1 - (1 - 1/m)^(d 2^(s-i+1)))^d`,
/// `n = 2^(s+1) - 1`. The `i = 0` term covers bottom-valued points.
pub fn psi_exponential(s: u32, m: usize, d: usize) -> f64 {
    assert!(s >= 1, "s must be at least 1");
    check_md(m, d);
    let n = exponential_support(s);
    (0..s)
        .map(|i| {
            let weight = ((s - i) as f64).exp2() / n;
            let throws = d as f64 * ((s - i + 1) as f64).exp2();
            weight * occupied(m, throws).powi(d as i32)
        })
        .sum()
}

/// The unweighted `i`-th term of [`psi_exponential`],
/// `(1 - (1 - 1/m)^(d 2^(s-i+1)))^d` for `0 <= i < s`.
pub fn summand_exponential(i: u32, s: u32, m: usize, d: usize) -> Result<f64> {
    if i >= s {
        return Err(Error::InvalidParameter(format!(
            "summand index {i} outside 0..{s}"
        )));
    }
    check_md(m, d);
    let throws = d as f64 * ((s - i + 1) as f64).exp2();
    Ok(occupied(m, throws).powi(d as i32))
}

/// Outcome of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub errors: u64,
    pub rate: f64,
    /// Closed-form probability the rate estimates.
    pub analytic: f64,
    /// Binomial standard error of the rate under the analytic probability.
    pub stderr: f64,
    pub seed: u64,
}

impl MonteCarloReport {
    fn new(trials: u64, errors: u64, analytic: f64, seed: u64) -> Self {
        Self {
            trials,
            errors,
            rate: errors as f64 / trials as f64,
            analytic,
            stderr: (analytic * (1.0 - analytic) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Distance between empirical and analytic value, in standard errors.
    /// Infinite when the analytic probability is 0 or 1 and the rate differs.
    pub fn z_score(&self) -> f64 {
        let diff = (self.rate - self.analytic).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Counts the trials for which `trial` reports an error. Trial `t` gets its
/// own generator seeded from `(seed, t)`, so the count does not depend on how
/// the work is split across threads.
fn count_errors<F>(trials: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(trials);
            (c * CHUNK..end)
                .filter(|&t| trial(&mut ChaCha8Rng::seed_from_u64(derive_seed(seed, t))))
                .count() as u64
        })
        .sum()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

/// Empirical bottom-case error. Each trial draws a fresh hash seed and a
/// random support of `n` keys from `[0, universe)`, with distinct values,
/// then queries one random key outside the support.
pub fn measure_bottom_error(
    n: usize,
    m: usize,
    d: usize,
    universe: u64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    check_trials(trials)?;
    HashFamily::new(0, d, m)?;
    let min_universe = (n as u64).saturating_mul(MIN_UNIVERSE_FACTOR).max(1);
    if universe < min_universe {
        return Err(Error::InvalidParameter(format!(
            "universe of {universe} keys is too small for a support of {n} (need at least {min_universe})"
        )));
    }
    let universe = usize::try_from(universe)
        .map_err(|_| Error::InvalidParameter("universe does not fit in memory indices".into()))?;

    let errors = count_errors(trials, seed, |rng| {
        let family = HashFamily::new(rng.random(), d, m).expect("validated");
        let keys = sample(rng, universe, n + 1);
        let mut approx = CompactApproximator::new(NatLattice, family);
        let mut value = 0u32;
        let mut probe = 0u64;
        for (idx, key) in keys.iter().enumerate() {
            if idx == n {
                probe = key as u64;
            } else {
                value += 1;
                approx.insert(&(key as u64), value).expect("non-bottom");
            }
        }
        approx.query(&probe) != 0
    });
    Ok(MonteCarloReport::new(trials, errors, phi_exact(n, m, d), seed))
}

/// Empirical non-bottom error. Each trial draws a fresh hash seed, assigns the
/// distribution's values to random distinct keys, and queries one support key
/// chosen uniformly.
pub fn measure_value_error(
    dist: &ValueDistribution,
    m: usize,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    check_trials(trials)?;
    HashFamily::new(0, d, m)?;
    let values = dist.expand();
    let n = values.len();
    if n as u64 > u32::MAX as u64 {
        return Err(Error::InvalidParameter("support too large".into()));
    }

    let errors = count_errors(trials, seed, |rng| {
        let family = HashFamily::new(rng.random(), d, m).expect("validated");
        let keys = sample(rng, u32::MAX as usize, n);
        let mut assigned = values.clone();
        assigned.shuffle(rng);
        let mut approx = CompactApproximator::new(NatLattice, family);
        for (key, &v) in keys.iter().zip(&assigned) {
            approx.insert(&(key as u32), v).expect("non-bottom");
        }
        let pick = rng.random_range(0..n);
        approx.query(&(keys.index(pick) as u32)) != assigned[pick]
    });
    Ok(MonteCarloReport::new(trials, errors, psi_general(dist, m, d), seed))
}

/// One row of a curve: a swept parameter, the closed-form value, and
/// optionally a measured value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub parameter: usize,
    pub analytic: f64,
    pub empirical: Option<f64>,
    pub stderr: Option<f64>,
}

impl CurvePoint {
    pub fn analytic(parameter: usize, analytic: f64) -> Self {
        Self {
            parameter,
            analytic,
            empirical: None,
            stderr: None,
        }
    }

    pub fn measured(parameter: usize, report: &MonteCarloReport) -> Self {
        Self {
            parameter,
            analytic: report.analytic,
            empirical: Some(report.rate),
            stderr: Some(report.stderr),
        }
    }
}

/// Evaluates `f` over a parameter range.
pub fn curve<F: Fn(usize) -> f64>(params: impl IntoIterator<Item = usize>, f: F) -> Vec<CurvePoint> {
    params
        .into_iter()
        .map(|p| CurvePoint::analytic(p, f(p)))
        .collect()
}
