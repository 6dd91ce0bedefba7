pub mod analyze;
pub mod experiment;
pub mod search;
pub mod simulate;

use crate::error::CliError;

/// Rejects grids containing zero for parameters that must be positive.
pub(crate) fn positive(name: &str, values: &[usize]) -> Result<(), CliError> {
    if values.contains(&0) {
        return Err(CliError::Usage(format!("--{name} values must be at least 1")));
    }
    Ok(())
}

/// `ceil(2n / ln 2)`, the bucket count of the paired-hash configuration.
pub(crate) fn two_hash_m(n: f64) -> usize {
    ((2.0 * n / std::f64::consts::LN_2).ceil() as usize).max(1)
}
