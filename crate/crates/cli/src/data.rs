//! Two-column delimited data files.
//!
//! Fields are separated by commas and/or whitespace, `#` starts a comment,
//! and a first row that does not parse as two numbers is taken as a header.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("line {line}: expected 2 columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: `{field}` is not a number")]
    NotANumber { line: usize, field: String },
    #[error("row {row} (line {line}): values must be finite and positive, got ({x1}, {x2})")]
    NonPositive {
        row: usize,
        line: usize,
        x1: f64,
        x2: f64,
    },
    #[error("rescale factor must be finite and positive, got {0}")]
    Rescale(f64),
    #[error("no data rows")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub source: Option<PathBuf>,
    pub header: Option<[String; 2]>,
    /// Observations after rescaling.
    pub pairs: Vec<(f64, f64)>,
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Parses file contents, multiplying every value by `rescale`.
///
/// Rows are numbered from 1 in file order, header excluded.
pub fn parse(text: &str, rescale: f64) -> Result<Dataset, DataError> {
    if !(rescale.is_finite() && rescale > 0.0) {
        return Err(DataError::Rescale(rescale));
    }
    let mut header = None;
    let mut pairs = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let f = fields(content);
        let first = !seen_content;
        seen_content = true;
        if f.len() != 2 {
            return Err(DataError::Columns {
                line,
                found: f.len(),
            });
        }
        let parsed: Vec<Result<f64, _>> = f.iter().map(|s| s.parse::<f64>()).collect();
        if let Some(bad) = parsed.iter().position(|r| r.is_err()) {
            if first {
                header = Some([f[0].to_string(), f[1].to_string()]);
                continue;
            }
            return Err(DataError::NotANumber {
                line,
                field: f[bad].to_string(),
            });
        }
        let x1 = parsed[0].clone().unwrap() * rescale;
        let x2 = parsed[1].clone().unwrap() * rescale;
        if !(x1.is_finite() && x2.is_finite() && x1 > 0.0 && x2 > 0.0) {
            return Err(DataError::NonPositive {
                row: pairs.len() + 1,
                line,
                x1,
                x2,
            });
        }
        pairs.push((x1, x2));
    }
    if pairs.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(Dataset {
        source: None,
        header,
        pairs,
    })
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: DataError },
}

pub fn read(path: &Path, rescale: f64) -> Result<Dataset, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut data = parse(&text, rescale).map_err(|source| ReadError::Data {
        path: path.to_path_buf(),
        source,
    })?;
    data.source = Some(path.to_path_buf());
    Ok(data)
}

/// CSV with an `x1,x2` header. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn to_csv(pairs: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(16 + pairs.len() * 40);
    out.push_str("x1,x2\n");
    for (a, b) in pairs {
        writeln!(out, "{a},{b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separators_comments_and_header() {
        let text = "# UEFA\nkick, home\n26 20\n\n63,\t18 # tie below\n2.5,2.5\n";
        let d = parse(text, 1.0).unwrap();
        assert_eq!(d.header, Some(["kick".into(), "home".into()]));
        assert_eq!(d.pairs, vec![(26.0, 20.0), (63.0, 18.0), (2.5, 2.5)]);
    }

    #[test]
    fn rescale_divides_by_one_hundred() {
        let d = parse("250 300\n", 0.01).unwrap();
        assert_eq!(d.pairs, vec![(2.5, 3.0)]);
    }

    #[test]
    fn row_indexed_errors() {
        assert_eq!(
            parse("x1,x2\n1,2\n0,3\n", 1.0),
            Err(DataError::NonPositive {
                row: 2,
                line: 3,
                x1: 0.0,
                x2: 3.0
            })
        );
        assert_eq!(
            parse("1,2\n3,abc\n", 1.0),
            Err(DataError::NotANumber {
                line: 2,
                field: "abc".into()
            })
        );
        assert_eq!(
            parse("1,2,3\n", 1.0),
            Err(DataError::Columns { line: 1, found: 3 })
        );
        assert_eq!(parse("# nothing\n", 1.0), Err(DataError::Empty));
        assert_eq!(parse("1 2\n", 0.0), Err(DataError::Rescale(0.0)));
    }

    #[test]
    fn csv_round_trips() {
        let pairs = vec![(0.1 + 0.2, 1e-300), (123456.789, 2.0f64.sqrt())];
        let d = parse(&to_csv(&pairs), 1.0).unwrap();
        assert_eq!(d.pairs, pairs);
        assert_eq!(to_csv(&[]), "x1,x2\n");
    }
}
