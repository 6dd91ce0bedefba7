use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use lattice_approx::search::decode_text;
use lattice_approx::Error as CoreError;

use crate::error::CliError;

/// Reads a file, or standard input for `None` and `-`.
pub fn read_bytes(path: Option<&Path>) -> Result<(Vec<u8>, PathBuf), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let bytes = fs::read(p).map_err(|source| CliError::File {
                path: p.to_path_buf(),
                source,
            })?;
            Ok((bytes, p.to_path_buf()))
        }
        _ => {
            let mut bytes = Vec::new();
            io::stdin()
                .lock()
                .read_to_end(&mut bytes)
                .map_err(|source| CliError::File {
                    path: "<stdin>".into(),
                    source,
                })?;
            Ok((bytes, "<stdin>".into()))
        }
    }
}

/// Decoded scalar values of a UTF-8 input.
pub fn read_text(path: Option<&Path>) -> Result<Vec<char>, CliError> {
    let (bytes, shown) = read_bytes(path)?;
    match decode_text(&bytes) {
        Ok(chars) => Ok(chars),
        Err(CoreError::Decode { offset }) => Err(CliError::Decode {
            path: shown,
            offset,
        }),
        Err(e) => Err(e.into()),
    }
}
