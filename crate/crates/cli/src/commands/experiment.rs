use std::io::Write;

use lattice_approx::search::{frequent_pattern, rare_pattern, ratio_experiment};

use super::positive;
use crate::args::{ExperimentCommand, RatioArgs};
use crate::error::CliError;
use crate::input::read_text;
use crate::output::{num, Table};
use crate::seeds;

const HEADER: [&str; 10] = ["class", "pattern", "length", "seed", "d", "n", "m", "c", "c_app", "ratio"];

pub fn run<W: Write>(cmd: &ExperimentCommand, master: u64, out: W) -> Result<(), CliError> {
    match cmd {
        ExperimentCommand::Ratio(args) => ratio(args, master, out),
    }
}

fn ratio<W: Write>(args: &RatioArgs, master: u64, out: W) -> Result<(), CliError> {
    positive("d", args.d.values())?;
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    if args.pattern.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage("patterns must not be empty".into()));
    }
    let lengths = args.lengths.as_ref().map_or(&[][..], |g| g.values());
    if (args.frequent || args.rare) && lengths.is_empty() {
        return Err(CliError::Usage("--frequent and --rare need --lengths".into()));
    }
    positive("lengths", lengths)?;
    let text = read_text(Some(&args.text))?;

    let mut patterns: Vec<(&str, Vec<char>)> = Vec::new();
    for (class, on) in [("frequent", args.frequent), ("rare", args.rare)] {
        if !on {
            continue;
        }
        for &len in lengths {
            let seed = seeds::sub_seed(master, seeds::PATTERN, len as u64);
            let p = if class == "frequent" {
                frequent_pattern(&text, len, seed)?
            } else {
                rare_pattern(&text, len, seed)?
            };
            patterns.push((class, p));
        }
    }
    for p in &args.pattern {
        patterns.push(("explicit", p.chars().collect()));
    }

    let mut t = Table::new(out, "ratio", &HEADER)?;
    for (class, pattern) in &patterns {
        for k in 0..args.seeds {
            let seed = seeds::sub_seed(master, seeds::EXPERIMENT_HASH, k);
            let rows = ratio_experiment(
                &text,
                std::slice::from_ref(pattern),
                args.d.values(),
                args.buckets_per_symbol,
                args.heuristic.into(),
                seed,
            )?;
            for r in rows {
                t.row([
                    class.to_string(),
                    r.pattern,
                    pattern.len().to_string(),
                    seed.to_string(),
                    r.d.to_string(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.exact.to_string(),
                    r.approximate.to_string(),
                    num(r.ratio),
                ])?;
            }
        }
    }
    t.finish()
}
