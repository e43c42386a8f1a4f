//! Plain-text phase files: four lines `a1`, `a2`, `b1`, `b2`, each a
//! comma-separated list of radians. Blank lines and `#` comments are skipped.

use std::io;
use std::path::{Path, PathBuf};

use bellnoise::{MultiportError, PhaseSettings, PhaseVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhaseFileError {
    #[error("phase file {0} does not exist")]
    Missing(PathBuf),
    #[error("cannot read phase file {path}: {source}")]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("phase file needs 4 lines (a1, a2, b1, b2), found {0}")]
    LineCount(usize),
    #[error("line {line}: {token:?} is not a number")]
    NotANumber { line: usize, token: String },
    #[error("line {line} has {found} phases but line 1 has {expected}")]
    LengthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: MultiportError },
}

pub fn parse_phases(text: &str) -> Result<PhaseSettings<f64>, PhaseFileError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.len() != 4 {
        return Err(PhaseFileError::LineCount(lines.len()));
    }

    let mut vectors = Vec::with_capacity(4);
    for (line, content) in lines {
        let values = content
            .split(',')
            .map(|token| {
                let token = token.trim();
                token
                    .parse::<f64>()
                    .map_err(|_| PhaseFileError::NotANumber {
                        line,
                        token: token.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = vectors.first().map(|v: &PhaseVector<f64>| v.len()) {
            if values.len() != first {
                return Err(PhaseFileError::LengthMismatch {
                    line,
                    expected: first,
                    found: values.len(),
                });
            }
        }
        vectors.push(
            PhaseVector::new(values).map_err(|source| PhaseFileError::Invalid { line, source })?,
        );
    }
    let mut v = vectors.into_iter();
    let (a1, a2, b1, b2) = (
        v.next().unwrap(),
        v.next().unwrap(),
        v.next().unwrap(),
        v.next().unwrap(),
    );
    PhaseSettings::new(a1, a2, b1, b2).map_err(|source| PhaseFileError::Invalid { line: 1, source })
}

pub fn load_phase_file(path: &Path) -> Result<PhaseSettings<f64>, PhaseFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => PhaseFileError::Missing(path.to_path_buf()),
        _ => PhaseFileError::Unreadable {
            path: path.to_path_buf(),
            source,
        },
    })?;
    parse_phases(&text)
}

/// Renders settings in the format [`parse_phases`] reads back exactly.
pub fn format_phases(settings: &PhaseSettings<f64>) -> String {
    [&settings.a1, &settings.a2, &settings.b1, &settings.b2]
        .iter()
        .map(|v| {
            v.as_slice()
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellnoise::{standard_settings, Dimension};

    #[test]
    fn round_trips_standard_settings() {
        let s = standard_settings(Dimension::new(3).unwrap());
        assert_eq!(parse_phases(&format_phases(&s)).unwrap(), s);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let s = parse_phases("# qubit\n0,0\n\n0, 1.5\n0,0.25\n0,-0.25\n").unwrap();
        assert_eq!(s.a2.as_slice(), &[0.0, 1.5]);
    }

    #[test]
    fn distinct_failures() {
        assert!(matches!(
            parse_phases("0,0\n0,0\n0,0\n"),
            Err(PhaseFileError::LineCount(3))
        ));
        assert!(matches!(
            parse_phases("0,0\n0,0\n0,0\n0,0,0\n"),
            Err(PhaseFileError::LengthMismatch {
                line: 4,
                expected: 2,
                found: 3
            })
        ));
        assert!(matches!(
            parse_phases("0,0\n0,x\n0,0\n0,0\n"),
            Err(PhaseFileError::NotANumber { line: 2, .. })
        ));
        assert!(matches!(
            parse_phases("0,0\n0,inf\n0,0\n0,0\n"),
            Err(PhaseFileError::Invalid { line: 2, .. })
        ));
        assert!(matches!(
            parse_phases("0\n0\n0\n0\n"),
            Err(PhaseFileError::Invalid { .. })
        ));
        assert!(matches!(
            load_phase_file(Path::new("/nonexistent/phases.txt")),
            Err(PhaseFileError::Missing(_))
        ));
    }
}
