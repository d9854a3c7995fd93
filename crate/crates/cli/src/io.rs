use std::fs;
use std::io::Write;
use std::path::Path;

use aacc::{parse_code, Code, GeneratedWord, Rational};
use tempfile::NamedTempFile;

use crate::CliError;

fn file_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::File {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, msg: impl ToString) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        msg: msg.to_string(),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| file_err(path, e))
}

pub fn read_code(path: &Path) -> Result<Code, CliError> {
    parse_code(&read_text(path)?).map_err(|e| parse_err(path, e))
}

/// JSON as written by `attack`, or whitespace/comma separated fractions
/// such as `(0, 2/3, 2/3, 1/3)`.
pub fn read_word(path: &Path) -> Result<GeneratedWord, CliError> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(&text).map_err(|e| parse_err(path, e));
    }
    let entries = text
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '(' | ')'))
        .filter(|tok| !tok.is_empty())
        .map(|tok| parse_fraction(tok).ok_or_else(|| parse_err(path, format!("bad entry {tok:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratedWord::new(entries).map_err(|e| parse_err(path, e))
}

fn parse_fraction(tok: &str) -> Option<Rational> {
    let (num, den) = match tok.split_once('/') {
        Some((a, b)) => (a.trim().parse().ok()?, b.trim().parse().ok()?),
        None => (tok.parse().ok()?, 1),
    };
    Rational::new(num, den).ok()
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| file_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| file_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| file_err(path, e))?;
    tmp.persist(path).map_err(|e| file_err(path, e.error))?;
    Ok(())
}
