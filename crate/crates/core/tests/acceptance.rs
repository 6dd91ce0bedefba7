//! Acceptance gate. Each test checks one criterion and prints a single
//! `criterion N: PASS|FAIL ...` line.
//!
//! Run with `cargo test -p lattice-approx --test acceptance`.

use std::collections::HashMap;
use std::f64::consts::LN_2;
use std::io::Write;
use std::time::{Duration, Instant};

use lattice_approx::error_analysis::{
    measure_bottom_error, measure_value_error, phi_approx, phi_exact, psi_exponential,
    psi_general, psi_uniform, summand_uniform, ValueDistribution,
};
use lattice_approx::search::{
    decode_text, frequent_pattern, search, search_brute, search_observed, ApproxConfig,
    Heuristic, SearchProblem, ShiftOracle, DEFAULT_DIRECT_BOUND, DEFAULT_SEED,
};
use lattice_approx::{
    choose_params, optimal_d, BoolLattice, CompactApproximator, FunctionSample, HashFamily,
    Lattice, NatLattice,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/moby_dick.txt");

fn report(criterion: u32, pass: bool, detail: &str) {
    // written to the raw handle so the line shows even when output is captured
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stdout().lock(), "criterion {criterion}: {verdict} {detail}");
}

fn corpus() -> Vec<char> {
    let bytes = std::fs::read(CORPUS).expect("corpus file");
    assert!(bytes.len() >= 1_000_000, "corpus must be at least 1 MB");
    decode_text(&bytes).expect("corpus is UTF-8")
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len().is_multiple_of(2) {
        (xs[mid - 1] + xs[mid]) / 2.0
    } else {
        xs[mid]
    }
}

/// Builds a random function on a small universe, then sweeps the whole
/// universe checking `f(x) <= query(x)`. Returns the number of violations.
fn upper_bound_sweep<L, G>(lattice: L, rng: &mut ChaCha8Rng, mut value: G) -> (u64, u64)
where
    L: Lattice + Copy,
    G: FnMut(&mut ChaCha8Rng) -> L::Value,
{
    let universe = rng.random_range(16..=4096usize);
    let support = rng.random_range(0..=universe / 4);
    let d = rng.random_range(1..=5usize);
    let m = rng.random_range(1..=(4 * support.max(4)));
    let keys = sample(rng, universe, support);
    let pairs: Vec<(u32, L::Value)> = keys.iter().map(|k| (k as u32, value(rng))).collect();
    let truth: HashMap<u32, L::Value> = pairs.iter().copied().collect();
    let f = FunctionSample::new(&lattice, pairs).unwrap().with_universe(universe as u64);
    let family = HashFamily::new(rng.random(), d, m).unwrap();
    let approx = CompactApproximator::build(lattice, family, &f).unwrap();
    let mut violations = 0;
    for x in 0..universe as u32 {
        let fx = truth.get(&x).copied().unwrap_or_else(|| lattice.bottom());
        if !lattice.leq(fx, approx.query(&x)) {
            violations += 1;
        }
    }
    (violations, universe as u64)
}

#[test]
fn criterion_1_upper_bound_holds_on_full_sweeps() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let builds = 10_000;
    let (mut violations, mut queries) = (0u64, 0u64);
    for b in 0..builds {
        let (v, q) = if b % 2 == 0 {
            upper_bound_sweep(NatLattice, &mut rng, |r| r.random_range(1..=1000u32))
        } else {
            upper_bound_sweep(BoolLattice, &mut rng, |_| true)
        };
        violations += v;
        queries += q;
    }
    let elapsed = start.elapsed();
    let pass = violations == 0 && elapsed < Duration::from_secs(60);
    report(
        1,
        pass,
        &format!("{builds} builds, {queries} queries, {violations} violations, {elapsed:.1?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_bottom_error_reproduces_one_eighth_and_one_fifth() {
    let start = Instant::now();
    let d3 = measure_bottom_error(100, 433, 3, 10_000, 100_000, 2).unwrap();
    let d1 = measure_bottom_error(100, 433, 1, 10_000, 100_000, 2).unwrap();
    let elapsed = start.elapsed();
    let pass = (d3.rate - 0.125).abs() <= 0.02
        && (d1.rate - 0.206).abs() <= 0.02
        && elapsed < Duration::from_secs(120);
    report(
        2,
        pass,
        &format!(
            "d=3 rate {:.5} (target 0.125 +- 0.02), d=1 rate {:.5} (target 0.206 +- 0.02), {elapsed:.1?}",
            d3.rate, d1.rate
        ),
    );
    assert!(pass);
}

/// Largest `|phi_approx(n, ceil(dn / ln 2), d) - 2^-d|` over `d` in 1..=10.
fn worst_tuned_gap(n: usize) -> (f64, usize) {
    (1..=10)
        .map(|d| {
            let m = (d as f64 * n as f64 / LN_2).ceil() as usize;
            ((phi_approx(n, m, d) - 0.5f64.powi(d as i32)).abs(), d)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
}

#[test]
fn criterion_3_tuning_identities() {
    // n = 100 is the support size the rest of this criterion uses
    let (worst, worst_d) = worst_tuned_gap(100);
    let (large_n_gap, _) = worst_tuned_gap(1000);
    let od = optimal_d(100, 433).unwrap();
    let m = choose_params(100, 3, 16).unwrap().m;
    let pass = worst <= 1e-3 && od == 3 && m == 433;
    report(
        3,
        pass,
        &format!(
            "n=100: max |phi_approx - 2^-d| = {worst:.2e} at d={worst_d} (tolerance 1e-3; n=1000 gives {large_n_gap:.2e}), optimal_d(100,433) = {od}, m = {m}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_psi_monte_carlo_agreement() {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for n in [2u32, 8, 16] {
        let m = (2.0 * n as f64 / LN_2).ceil() as usize;
        let dist = ValueDistribution::uniform(n).unwrap();
        for d in 1..=3 {
            let general = psi_general(&dist, m, d);
            let uniform = psi_uniform(n as usize, m, d);
            if (general - uniform).abs() > 4.0 * f64::EPSILON * uniform.max(f64::MIN_POSITIVE) {
                failures.push(format!("n={n} d={d}: psi_general {general} != psi_uniform {uniform}"));
            }
            let r = measure_value_error(&dist, m, d, 1_000_000, 40 + d as u64).unwrap();
            let z = (r.rate - uniform).abs() / r.stderr;
            lines.push(format!(
                "n={n} m={m} d={d}: empirical {:.5} closed form {uniform:.5} z {z:.1}",
                r.rate
            ));
            if z.is_nan() || z > 4.0 {
                failures.push(format!("n={n} m={m} d={d}: z = {z:.1}"));
            }
        }
    }
    let pass = failures.is_empty();
    report(4, pass, &format!("[{}] failures: {:?}", lines.join("; "), failures));
    assert!(pass);
}

#[test]
fn criterion_5_summand_and_exponential_shapes() {
    let (n, m) = (8usize, 24usize);
    let mut failures = Vec::new();
    for d in 1..=12 {
        if summand_uniform(n, n, m, d).unwrap() != 0.0 {
            failures.push(format!("summand(8, 8, 24, {d}) != 0"));
        }
    }
    for i in 1..n {
        let target = m as f64 * LN_2 / (n - i) as f64;
        let best = (1..=12)
            .min_by(|&a, &b| {
                summand_uniform(i, n, m, a)
                    .unwrap()
                    .total_cmp(&summand_uniform(i, n, m, b).unwrap())
            })
            .unwrap();
        if (best as f64 - target).abs() > 1.0 {
            failures.push(format!("i={i}: argmin over 1..=12 is {best}, m ln2/(n-i) = {target:.3}"));
        }
    }
    for d in 1..=10 {
        let mut prev = f64::INFINITY;
        for m in (1..=4000).step_by(7) {
            let v = psi_exponential(7, m, d);
            if !(0.0..=1.0).contains(&v) {
                failures.push(format!("psi_exponential(7, {m}, {d}) = {v} outside [0, 1]"));
            }
            if v > prev {
                failures.push(format!("psi_exponential(7, m, {d}) increases at m = {m}"));
            }
            prev = v;
        }
    }
    let pass = failures.is_empty();
    report(5, pass, &format!("failures: {failures:?}"));
    assert!(pass);
}

fn alphabet_char(alphabet: u32, i: u32) -> char {
    debug_assert!(i < alphabet);
    match alphabet {
        2 | 26 => char::from_u32('a' as u32 + i).unwrap(),
        _ => char::from_u32(0x4e00 + i).unwrap(),
    }
}

/// A random text with some planted copies of a random pattern.
fn random_problem(rng: &mut ChaCha8Rng, alphabet: u32) -> (Vec<char>, Vec<char>) {
    let plen = rng.random_range(1..=64usize);
    let tlen = rng.random_range(0..=4096usize);
    let pattern: Vec<char> = (0..plen)
        .map(|_| alphabet_char(alphabet, rng.random_range(0..alphabet)))
        .collect();
    let mut text: Vec<char> = (0..tlen)
        .map(|_| alphabet_char(alphabet, rng.random_range(0..alphabet)))
        .collect();
    if tlen >= plen {
        for _ in 0..rng.random_range(0..4) {
            let at = rng.random_range(0..=tlen - plen);
            text[at..at + plen].copy_from_slice(&pattern);
        }
    }
    (pattern, text)
}

#[test]
fn criterion_6_all_engines_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let heuristics = [Heuristic::BoyerMoore, Heuristic::QuickSearch];
    let (mut runs, mut shifts_checked, mut violations) = (0u64, 0u64, Vec::new());
    let mut matched_problems = 0u64;
    for alphabet in [2u32, 26, 10_000] {
        for _ in 0..1000 {
            let (pattern, text) = random_problem(&mut rng, alphabet);
            let problem = SearchProblem::new(&pattern, &text).unwrap();
            let reference = search_brute(&problem).matches;
            if !reference.is_empty() {
                matched_problems += 1;
            }
            let exact = ShiftOracle::associative(&pattern).unwrap();
            let mut oracles = vec![exact.clone()];
            match ShiftOracle::direct(&pattern, DEFAULT_DIRECT_BOUND) {
                Ok(direct) => oracles.push(direct),
                Err(_) => assert_eq!(alphabet, 10_000),
            }
            let seed = rng.random();
            for d in 1..=3 {
                oracles.push(ShiftOracle::approximate(&pattern, &ApproxConfig::with_d(d, seed)).unwrap());
            }
            for oracle in &oracles {
                let is_approx = oracle.approximator().is_some();
                for h in heuristics {
                    let stats = search_observed(&problem, oracle, h, |e| {
                        if !is_approx {
                            return;
                        }
                        shifts_checked += 1;
                        let exact_shift = match e.mismatch {
                            Some(j) => exact.shift_bm(e.character, j),
                            None => exact.shift_qs(e.character),
                        };
                        if e.shift < 1 || e.shift > exact_shift {
                            violations.push(format!("shift {e:?} exceeds exact {exact_shift}"));
                        }
                    })
                    .unwrap();
                    runs += 1;
                    if stats.matches != reference {
                        violations.push(format!(
                            "alphabet {alphabet}, {:?} {h:?}: {} matches vs {}",
                            oracle.backing(),
                            stats.matches.len(),
                            reference.len()
                        ));
                    }
                    if stats.candidates as usize > problem.windows() {
                        violations.push("candidate count above T - P + 1".into());
                    }
                }
            }
        }
    }
    let pass = violations.is_empty();
    report(
        6,
        pass,
        &format!(
            "{runs} engine runs, {matched_problems} problems with matches, {shifts_checked} approximate shifts checked, {} violations",
            violations.len()
        ),
    );
    assert!(pass, "{:?}", &violations[..violations.len().min(5)]);
}

const RATIO_LENGTHS: [usize; 3] = [9, 18, 27];
const RATIO_SEEDS: u64 = 32;

struct CorpusRun {
    len: usize,
    d: usize,
    exact: u64,
    approx: u64,
    windows: u64,
}

/// Frequent-character patterns on the corpus: one fixed pattern per length,
/// 32 hash seeds per `d`.
fn corpus_runs(text: &[char], ds: &[usize]) -> Vec<CorpusRun> {
    let mut runs = Vec::new();
    for len in RATIO_LENGTHS {
        let pattern = frequent_pattern(text, len, DEFAULT_SEED).unwrap();
        let problem = SearchProblem::new(&pattern, text).unwrap();
        let exact = search(&problem, &ShiftOracle::associative(&pattern).unwrap(), Heuristic::BoyerMoore).unwrap();
        for &d in ds {
            for seed in 0..RATIO_SEEDS {
                let oracle = ShiftOracle::approximate(&pattern, &ApproxConfig::with_d(d, seed)).unwrap();
                let approx = search(&problem, &oracle, Heuristic::BoyerMoore).unwrap();
                assert_eq!(approx.matches, exact.matches);
                runs.push(CorpusRun {
                    len,
                    d,
                    exact: exact.candidates,
                    approx: approx.candidates,
                    windows: problem.windows() as u64,
                });
            }
        }
    }
    runs
}

#[test]
fn criterion_7_candidate_ratio_on_english_text() {
    let text = corpus();
    let runs = corpus_runs(&text, &[2, 3]);
    let mut lines = Vec::new();
    let mut pass = true;
    for (d, limit) in [(2usize, 1.15), (3, 1.10)] {
        for len in RATIO_LENGTHS {
            let ratios: Vec<f64> = runs
                .iter()
                .filter(|r| r.d == d && r.len == len)
                .map(|r| r.approx as f64 / r.exact as f64)
                .collect();
            let med = median(ratios);
            pass &= med <= limit;
            lines.push(format!("d={d} len={len}: median {med:.4} (limit {limit})"));
        }
    }
    report(7, pass, &lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_8_bloom_filter_degeneracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 1000;
    let params = choose_params(n, 3, 16).unwrap();
    let mut bloom = CompactApproximator::new(BoolLattice, params.family(rng.random()).unwrap());
    let keys: Vec<u64> = (0..n).map(|_| rng.random::<u64>() | 1).collect();
    for k in &keys {
        bloom.insert(k, true).unwrap();
    }
    let false_negatives = keys.iter().filter(|k| !bloom.query(*k)).count();
    // inserted keys are odd, probes even
    let probes = 100_000;
    let false_positives = (0..probes)
        .filter(|_| bloom.query(&(rng.random::<u64>() & !1)))
        .count();
    let rate = false_positives as f64 / probes as f64;
    let expected = phi_exact(n, params.m, params.d);
    let pass = false_negatives == 0 && (rate - expected).abs() <= 0.02;
    report(
        8,
        pass,
        &format!(
            "m={} d={}: {false_negatives} false negatives, false-positive rate {rate:.5} vs phi_exact {expected:.5}",
            params.m, params.d
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_candidate_counts_against_exact_engine() {
    let text = corpus();
    let ds: Vec<usize> = (1..=6).collect();
    let runs = corpus_runs(&text, &ds);
    let total = runs.len();
    let not_worse = runs.iter().filter(|r| r.exact <= r.approx).count();
    let fewer: Vec<String> = runs
        .iter()
        .filter(|r| r.approx < r.exact)
        .map(|r| format!("len={} d={}: c_app {} < c {}", r.len, r.d, r.approx, r.exact))
        .collect();
    let over_ceiling = runs.iter().filter(|r| r.approx > r.windows).count();
    let share = not_worse as f64 / total as f64;
    let pass = share >= 0.95 && over_ceiling == 0;
    report(
        9,
        pass,
        &format!(
            "{not_worse}/{total} runs with c <= c_app ({:.1}%), {over_ceiling} above T - P + 1, runs with c_app < c: {fewer:?}",
            100.0 * share
        ),
    );
    assert!(pass);
}
