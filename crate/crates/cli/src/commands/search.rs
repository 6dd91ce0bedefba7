use std::fs::File;
use std::io::{BufWriter, Write};

use lattice_approx::search::{
    search, search_brute, ApproxConfig, SearchProblem, SearchStats, ShiftOracle,
};

use crate::args::{Engine, SearchArgs};
use crate::error::CliError;
use crate::input::read_text;
use crate::seeds;

pub fn run<W: Write>(args: &SearchArgs, seed: u64, out: W) -> Result<(), CliError> {
    if args.pattern.is_empty() {
        return Err(CliError::Usage("the pattern must not be empty".into()));
    }
    if args.save_table.is_some() && args.engine != Engine::Approx {
        return Err(CliError::Usage("--save-table needs --engine approx".into()));
    }
    let pattern: Vec<char> = args.pattern.chars().collect();
    let oracle = match args.engine {
        Engine::Brute => None,
        Engine::Direct => Some(ShiftOracle::direct(&pattern, args.direct_bound)?),
        Engine::Assoc => Some(ShiftOracle::associative(&pattern)?),
        Engine::Approx => {
            let config = ApproxConfig {
                n: args.n,
                m_floor: args.m_floor,
                ..ApproxConfig::with_d(args.d, seeds::sub_seed(seed, seeds::SEARCH, 0))
            };
            Some(ShiftOracle::approximate(&pattern, &config)?)
        }
    };
    if let (Some(path), Some(approx)) = (&args.save_table, oracle.as_ref().and_then(|o| o.approximator())) {
        let file = File::create(path).map_err(|source| CliError::File {
            path: path.clone(),
            source,
        })?;
        let mut file = BufWriter::new(file);
        approx.write_to(&mut file)?;
        file.flush().map_err(|source| CliError::File {
            path: path.clone(),
            source,
        })?;
    }

    let text = read_text(args.input.as_deref())?;
    let problem = SearchProblem::new(&pattern, &text)?;
    let stats = match &oracle {
        None => search_brute(&problem),
        Some(o) => search(&problem, o, args.heuristic.into())?,
    };
    write_matches(out, &stats, args.byte_offsets, &text, args.stats)
}

fn write_matches<W: Write>(
    mut out: W,
    stats: &SearchStats,
    byte_offsets: bool,
    text: &[char],
    with_stats: bool,
) -> Result<(), CliError> {
    if byte_offsets {
        // matches are increasing, so one forward pass converts them
        let (mut char_pos, mut byte_pos) = (0usize, 0usize);
        for &k in &stats.matches {
            byte_pos += text[char_pos..k].iter().map(|c| c.len_utf8()).sum::<usize>();
            char_pos = k;
            writeln!(out, "{k},{byte_pos}")?;
        }
    } else {
        for k in &stats.matches {
            writeln!(out, "{k}")?;
        }
    }
    if with_stats {
        writeln!(
            out,
            "# candidates={},comparisons={},total_shift={},matches={}",
            stats.candidates,
            stats.comparisons,
            stats.total_shift,
            stats.matches.len()
        )?;
    }
    out.flush()?;
    Ok(())
}
