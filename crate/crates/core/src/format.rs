//! Plain-text instance files.
//!
//! ```text
//! # optional comments
//! m n
//! a_11 … a_1n b_1
//! …
//! a_m1 … a_mn b_m
//! ```
//!
//! Each data row reads `a_i·x ≤ b_i`.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polytope::Polytope;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads and validates an instance.
pub fn parse_polytope<R: BufRead>(reader: R) -> Result<Polytope> {
    let mut header: Option<(usize, usize)> = None;
    let mut data = Vec::new();
    let mut b = Vec::new();
    let mut rows_seen = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| parse_err(lineno, e.to_string()))?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(parse_err(lineno, "header must be `m n`"));
                }
                let parse_dim = |t: &str| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&v| v > 0)
                        .ok_or_else(|| parse_err(lineno, format!("`{t}` is not a positive integer")))
                };
                let (m, n) = (parse_dim(tokens[0])?, parse_dim(tokens[1])?);
                data.reserve(m * n);
                b.reserve(m);
                header = Some((m, n));
            }
            Some((m, n)) => {
                if rows_seen == m {
                    return Err(parse_err(lineno, format!("more than the declared {m} rows")));
                }
                if tokens.len() != n + 1 {
                    return Err(parse_err(
                        lineno,
                        format!("expected {} numbers, found {}", n + 1, tokens.len()),
                    ));
                }
                let mut values = Vec::with_capacity(n + 1);
                for t in tokens {
                    let v: f64 = t
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("`{t}` is not a number")))?;
                    if !v.is_finite() {
                        return Err(parse_err(lineno, format!("`{t}` is not finite")));
                    }
                    values.push(v);
                }
                if values[..n].iter().all(|&v| v == 0.0) {
                    return Err(parse_err(lineno, "constraint normal is all zeros"));
                }
                b.push(values[n]);
                data.extend_from_slice(&values[..n]);
                rows_seen += 1;
            }
        }
    }
    let (m, n) = header.ok_or_else(|| parse_err(0, "missing `m n` header"))?;
    if rows_seen != m {
        return Err(parse_err(0, format!("declared {m} rows, found {rows_seen}")));
    }
    Polytope::new(Matrix::from_row_major(m, n, data), b)
}

pub fn parse_polytope_str(text: &str) -> Result<Polytope> {
    parse_polytope(text.as_bytes())
}

pub fn read_polytope(path: impl AsRef<Path>) -> Result<Polytope> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_polytope(std::io::BufReader::new(file))
}

/// Writes the instance with 17 significant digits per value.
pub fn emit_polytope(p: &Polytope) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", p.num_constraints(), p.dim());
    for (row, bi) in p.a().row_iter().zip(p.b()) {
        for v in row {
            let _ = write!(out, "{v:.16e} ");
        }
        let _ = writeln!(out, "{bi:.16e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;

    #[test]
    fn smallest_interval() {
        let p = parse_polytope_str("2 1\n1 1\n-1 1\n").unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.b(), &[1.0, 1.0]);
        assert!(p.contains(&[-1.0]).unwrap());
        assert!(!p.contains(&[1.5]).unwrap());
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_polytope_str("# interval\n\n2 1\n# upper\n1 1\n-1 1\n").unwrap();
        assert_eq!(p.num_constraints(), 2);
    }

    #[test]
    fn cube10_file() {
        let text = emit_polytope(&generators::gen_cube(10).unwrap());
        let p = parse_polytope_str(&text).unwrap();
        assert_eq!((p.num_constraints(), p.dim()), (20, 10));
    }

    #[test]
    fn zero_normal_reports_line() {
        let err = parse_polytope_str("3 2\n1 0 1\n0 0 5\n-1 -1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            ("x 2\n", 1),
            ("2\n", 1),
            ("2 1\n1 1\n-1\n", 3),
            ("2 1\n1 1\n-1 abc\n", 3),
            ("2 1\n1 1\n-1 1\n1 1\n", 4),
            ("3 1\n1 1\n-1 1\n", 0),
        ] {
            match parse_polytope_str(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn unbounded_is_a_validation_error() {
        let err = parse_polytope_str("2 1\n1 1\n2 3\n").unwrap_err();
        assert!(matches!(err, Error::Unbounded { .. }));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_polytope("/definitely/not/here.poly").unwrap_err();
        assert_eq!(err.code(), "file_not_found");
    }

    proptest! {
        #[test]
        fn emit_parse_round_trip(seed in any::<u64>(), n in 2usize..5) {
            let p = generators::gen_rh(n, 3 * n, seed).unwrap().polytope;
            let q = parse_polytope_str(&emit_polytope(&p)).unwrap();
            prop_assert_eq!(p, q);
        }
    }
}
