use std::io::Write;

use lattice_approx::choose_params;
use lattice_approx::error_analysis::{
    exponential_support, min_phi, phi_approx, phi_exact, psi_exponential, psi_uniform,
    summand_exponential, summand_uniform,
};

use super::{positive, two_hash_m};
use crate::args::{AnalyzeCommand, SummandCase};
use crate::error::CliError;
use crate::grid::Grid;
use crate::output::{num, Table};

fn ms_or(m: &Option<Grid>, default: usize) -> Result<Vec<usize>, CliError> {
    let ms = m.as_ref().map_or_else(|| vec![default], |g| g.values().to_vec());
    positive("m", &ms)?;
    Ok(ms)
}

pub fn run<W: Write>(cmd: &AnalyzeCommand, out: W) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::Phi { n, m, d } => {
            positive("d", d.values())?;
            if let Some(m) = m {
                positive("m", m.values())?;
            }
            let mut t = Table::new(out, "phi", &["n", "m", "d", "phi_exact", "phi_approx", "min_phi"])?;
            for &n in n.values() {
                for &d in d.values() {
                    let ms = match m {
                        Some(g) => g.values().to_vec(),
                        None => vec![choose_params(n, d, 1)?.m],
                    };
                    for m in ms {
                        t.row([
                            n.to_string(),
                            m.to_string(),
                            d.to_string(),
                            num(phi_exact(n, m, d)),
                            num(phi_approx(n, m, d)),
                            num(min_phi(d)),
                        ])?;
                    }
                }
            }
            t.finish()
        }
        AnalyzeCommand::PsiUniform { n, m, d } => {
            positive("n", n.values())?;
            positive("d", d.values())?;
            let mut t = Table::new(out, "psi-uniform", &["n", "m", "d", "psi"])?;
            for &n in n.values() {
                for m in ms_or(m, two_hash_m(n as f64))? {
                    for &d in d.values() {
                        t.row([n.to_string(), m.to_string(), d.to_string(), num(psi_uniform(n, m, d))])?;
                    }
                }
            }
            t.finish()
        }
        AnalyzeCommand::PsiExp { s, m, d } => {
            positive("s", s.values())?;
            positive("d", d.values())?;
            let mut t = Table::new(out, "psi-exp", &["s", "n", "m", "d", "psi"])?;
            for &s in s.values() {
                let s = u32::try_from(s)
                    .ok()
                    .filter(|&s| s <= 60)
                    .ok_or_else(|| CliError::Usage(format!("--s {s} is too large")))?;
                let n = exponential_support(s);
                for m in ms_or(m, two_hash_m(n))? {
                    for &d in d.values() {
                        t.row([
                            s.to_string(),
                            (n as u64).to_string(),
                            m.to_string(),
                            d.to_string(),
                            num(psi_exponential(s, m, d)),
                        ])?;
                    }
                }
            }
            t.finish()
        }
        AnalyzeCommand::Summands { case, n, s, m, d } => {
            positive("d", d.values())?;
            match case {
                SummandCase::Uniform => {
                    let n = n.expect("required by the parser");
                    positive("n", &[n])?;
                    let m = m.unwrap_or_else(|| two_hash_m(n as f64));
                    positive("m", &[m])?;
                    let mut t = Table::new(out, "summands-uniform", &["i", "n", "m", "d", "summand"])?;
                    for &d in d.values() {
                        for i in 1..=n {
                            t.row([
                                i.to_string(),
                                n.to_string(),
                                m.to_string(),
                                d.to_string(),
                                num(summand_uniform(i, n, m, d)?),
                            ])?;
                        }
                    }
                    t.finish()
                }
                SummandCase::Exponential => {
                    let s = s.expect("required by the parser");
                    if s == 0 || s > 60 {
                        return Err(CliError::Usage("--s must be in 1..=60".into()));
                    }
                    let n = exponential_support(s);
                    let m = m.unwrap_or_else(|| two_hash_m(n));
                    positive("m", &[m])?;
                    let mut t = Table::new(
                        out,
                        "summands-exponential",
                        &["i", "s", "n", "m", "d", "weight", "summand"],
                    )?;
                    for &d in d.values() {
                        for i in 0..s {
                            let weight = ((s - i) as f64).exp2() / n;
                            t.row([
                                i.to_string(),
                                s.to_string(),
                                (n as u64).to_string(),
                                m.to_string(),
                                d.to_string(),
                                num(weight),
                                num(summand_exponential(i, s, m, d)?),
                            ])?;
                        }
                    }
                    t.finish()
                }
            }
        }
    }
}
