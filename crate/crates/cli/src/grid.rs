//! Parameter grids given on the command line: `7`, `1,2,5` or `1..10`
//! (inclusive; `1..=10` is accepted too).

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

impl Grid {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let values = if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Grid(values))
    }
}
