use std::io::Write;

use lattice_approx::choose_params;
use lattice_approx::error_analysis::{
    measure_bottom_error, measure_value_error, MonteCarloReport, ValueDistribution,
    MIN_UNIVERSE_FACTOR,
};
use lattice_approx::DEFAULT_M_FLOOR;

use super::{positive, two_hash_m};
use crate::args::{DistKind, SimulateCommand};
use crate::error::CliError;
use crate::output::{num, Table};
use crate::seeds;

const HEADER: [&str; 12] = [
    "kind", "n", "m", "d", "trials", "errors", "empirical", "analytic", "stderr", "z", "seed",
    "universe",
];

struct Rows<W: Write> {
    table: Table<W>,
    master: u64,
    next: u64,
}

impl<W: Write> Rows<W> {
    /// Seed for the next row; rows are numbered in output order.
    fn seed(&mut self) -> u64 {
        let s = seeds::sub_seed(self.master, seeds::SIMULATE, self.next);
        self.next += 1;
        s
    }

    fn push(
        &mut self,
        kind: &str,
        n: u64,
        m: usize,
        d: usize,
        r: &MonteCarloReport,
        universe: Option<u64>,
    ) -> Result<(), CliError> {
        self.table.row([
            kind.to_string(),
            n.to_string(),
            m.to_string(),
            d.to_string(),
            r.trials.to_string(),
            r.errors.to_string(),
            num(r.rate),
            num(r.analytic),
            num(r.stderr),
            num(r.z_score()),
            r.seed.to_string(),
            universe.map_or_else(String::new, |u| u.to_string()),
        ])
    }
}

pub fn run<W: Write>(cmd: &SimulateCommand, master: u64, out: W) -> Result<(), CliError> {
    let table = Table::new(out, "simulate", &HEADER)?;
    let mut rows = Rows {
        table,
        master,
        next: 0,
    };
    match cmd {
        SimulateCommand::Bottom {
            n,
            m,
            d,
            universe,
            trials,
        } => {
            check_trials(*trials)?;
            positive("d", d.values())?;
            if let Some(m) = m {
                positive("m", m.values())?;
            }
            for &n in n.values() {
                let universe =
                    universe.unwrap_or_else(|| (n as u64).saturating_mul(MIN_UNIVERSE_FACTOR).max(1000));
                for &d in d.values() {
                    let ms = match m {
                        Some(g) => g.values().to_vec(),
                        None => vec![choose_params(n, d, DEFAULT_M_FLOOR)?.m],
                    };
                    for m in ms {
                        let seed = rows.seed();
                        let r = measure_bottom_error(n, m, d, universe, *trials, seed)?;
                        rows.push("bottom", n as u64, m, d, &r, Some(universe))?;
                    }
                }
            }
        }
        SimulateCommand::Values {
            dist,
            n,
            s,
            m,
            d,
            trials,
        } => {
            check_trials(*trials)?;
            positive("d", d.values())?;
            if let Some(m) = m {
                positive("m", m.values())?;
            }
            let (kind, params) = match dist {
                DistKind::Uniform => ("uniform", n.as_ref().expect("required by the parser")),
                DistKind::Geometric => ("geometric", s.as_ref().expect("required by the parser")),
            };
            for &p in params.values() {
                let p = u32::try_from(p).map_err(|_| CliError::Usage(format!("{p} is too large")))?;
                let distribution = match dist {
                    DistKind::Uniform => ValueDistribution::uniform(p)?,
                    DistKind::Geometric => ValueDistribution::geometric(p)?,
                };
                let support = distribution.n();
                let ms = match m {
                    Some(g) => g.values().to_vec(),
                    None => vec![two_hash_m(support as f64)],
                };
                for m in ms {
                    for &d in d.values() {
                        let seed = rows.seed();
                        let r = measure_value_error(&distribution, m, d, *trials, seed)?;
                        rows.push(kind, support, m, d, &r, None)?;
                    }
                }
            }
        }
    }
    rows.table.finish()
}

fn check_trials(trials: u64) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(())
}
