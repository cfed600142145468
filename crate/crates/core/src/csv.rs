//! CSV ingestion and emission for datasets.
//!
//! Schema: a header row `x1,...,xp,y` followed by one observation per line.
//! Values are decimal-point reals; the file must be UTF-8. Non-finite
//! values are rejected so a written dataset always parses back unchanged.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Parses raw CSV text into regressor rows and responses without applying
/// dataset invariants. Callers that need a validated [`Dataset`] should use
/// [`parse_dataset`].
pub fn parse_rows(text: &str) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Csv {
        line: 1,
        msg: "missing header row".into(),
    })?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.len() < 2 {
        return Err(Error::Csv {
            line: 1,
            msg: "header must be x1,...,xp,y with p >= 1".into(),
        });
    }
    let p = names.len() - 1;
    for (c, name) in names.iter().take(p).enumerate() {
        let expected = format!("x{}", c + 1);
        if *name != expected {
            return Err(Error::Csv {
                line: 1,
                msg: format!("expected column '{expected}', found '{name}'"),
            });
        }
    }
    if names[p] != "y" {
        return Err(Error::Csv {
            line: 1,
            msg: format!("expected final column 'y', found '{}'", names[p]),
        });
    }

    let mut x_rows = Vec::new();
    let mut y = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            return Err(Error::Csv {
                line: lineno,
                msg: "blank line".into(),
            });
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != p + 1 {
            return Err(Error::Csv {
                line: lineno,
                msg: format!("expected {} fields, found {}", p + 1, fields.len()),
            });
        }
        let mut row = Vec::with_capacity(p);
        for (c, field) in fields.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::Csv {
                line: lineno,
                msg: format!("field {} is not a number: '{field}'", c + 1),
            })?;
            if !value.is_finite() {
                return Err(Error::Csv {
                    line: lineno,
                    msg: format!("field {} is not finite", c + 1),
                });
            }
            if c < p {
                row.push(value);
            } else {
                y.push(value);
            }
        }
        x_rows.push(row);
    }
    if x_rows.is_empty() {
        return Err(Error::Csv {
            line: 1,
            msg: "no observation rows".into(),
        });
    }
    Ok((x_rows, y))
}

/// Parses CSV text into a validated dataset. Parse failures surface as
/// [`Error::Csv`]; invariant violations keep their own error variants so
/// callers can distinguish malformed input from inadmissible data.
pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let (x_rows, y) = parse_rows(text)?;
    Dataset::new(x_rows, y)
}

/// Writes a dataset in the canonical schema. Floats use the shortest
/// representation that round-trips, so `parse_dataset(write_dataset(d))`
/// reproduces `d` exactly.
pub fn write_dataset(data: &Dataset) -> String {
    let p = data.p();
    let mut out = String::new();
    for c in 0..p {
        out.push_str(&format!("x{},", c + 1));
    }
    out.push_str("y\n");
    for i in 0..data.n() {
        for v in data.row(i) {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{}\n", data.response(i)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "x1,y\n1,0\n1,1\n1,4\n1,5\n1,9\n";

    #[test]
    fn parses_the_intercept_example() {
        let d = parse_dataset(EXAMPLE).unwrap();
        assert_eq!(d.n(), 5);
        assert_eq!(d.p(), 1);
        assert_eq!(d.responses(), &[0.0, 1.0, 4.0, 5.0, 9.0]);
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(matches!(
            parse_dataset("a,y\n1,2\n"),
            Err(Error::Csv { line: 1, .. })
        ));
        assert!(matches!(
            parse_dataset("x1,x2\n1,2\n"),
            Err(Error::Csv { line: 1, .. })
        ));
        assert!(matches!(parse_dataset(""), Err(Error::Csv { .. })));
        assert!(matches!(parse_dataset("y\n1\n"), Err(Error::Csv { .. })));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            parse_dataset("x1,y\n1\n"),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            parse_dataset("x1,y\n1,abc\n"),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            parse_dataset("x1,y\n1,inf\n"),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            parse_dataset("x1,y\n1,1\n\n1,2\n"),
            Err(Error::Csv { line: 3, .. })
        ));
    }

    #[test]
    fn parse_failures_differ_from_invariant_failures() {
        // Well-formed CSV whose design matrix is rank deficient.
        let text = "x1,x2,y\n1,2,0\n2,4,1\n3,6,2\n4,8,3\n";
        assert!(matches!(
            parse_dataset(text),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn roundtrip_is_exact() {
        let d = parse_dataset(
            "x1,x2,y\n0.25,-3.5,1e-3\n1,2,3\n0.1,0.2,0.30000000000000004\n-7,0,2.5\n",
        )
        .unwrap();
        let text = write_dataset(&d);
        let d2 = parse_dataset(&text).unwrap();
        assert_eq!(d.x_rows(), d2.x_rows());
        assert_eq!(d.responses(), d2.responses());
        assert_eq!(text, write_dataset(&d2));
    }

    #[test]
    fn accepts_crlf_line_endings() {
        let d = parse_dataset("x1,y\r\n1,0\r\n1,2\r\n").unwrap();
        assert_eq!(d.n(), 2);
    }
}
