//! Text ingestion: one float per line, or one column of a comma-separated
//! file. Errors carry 1-based line numbers.

use std::io::BufRead;

use anyhow::{anyhow, bail, Context, Result};

/// Column selector for comma-separated input: an integer picks the 1-based
/// column position, anything else matches a header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    Name(String),
    Index(usize),
}

impl ColumnSel {
    pub fn parse(s: &str) -> Result<ColumnSel> {
        if let Ok(idx) = s.trim().parse::<usize>() {
            if idx == 0 {
                bail!("column positions are 1-based; 0 is not a valid column");
            }
            return Ok(ColumnSel::Index(idx));
        }
        Ok(ColumnSel::Name(s.trim().to_owned()))
    }
}

fn clean(cell: &str) -> &str {
    cell.trim().trim_matches('"')
}

fn parse_value(token: &str, line_no: usize) -> Result<f64> {
    let v: f64 = clean(token)
        .parse()
        .map_err(|_| anyhow!("line {line_no}: not a number: {token:?}"))?;
    if !v.is_finite() {
        bail!("line {line_no}: non-finite value: {token:?}");
    }
    Ok(v)
}

/// Reads a series from `reader`. Without a column selector every non-blank
/// line must hold exactly one float. With one, lines are split on commas;
/// a name selector resolves against the first non-blank line (the header),
/// a position selector skips that line only when its chosen cell does not
/// parse as a number.
pub fn read_series(reader: impl BufRead, column: Option<&ColumnSel>) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut col: Option<usize> = None;
    let mut saw_first = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.with_context(|| format!("reading line {line_no}"))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match column {
            None => out.push(parse_value(line, line_no)?),
            Some(sel) => {
                let cells: Vec<&str> = line.split(',').collect();
                if !saw_first {
                    saw_first = true;
                    match sel {
                        ColumnSel::Name(name) => {
                            let pos = cells
                                .iter()
                                .position(|c| clean(c) == name)
                                .ok_or_else(|| {
                                    anyhow!("line {line_no}: no column named {name:?} in header")
                                })?;
                            col = Some(pos);
                            continue; // header row carries no data
                        }
                        ColumnSel::Index(i) => {
                            col = Some(i - 1);
                            let c = col.unwrap();
                            let cell = cells.get(c).copied().unwrap_or("");
                            if clean(cell).parse::<f64>().is_err() {
                                continue; // header row
                            }
                        }
                    }
                }
                let c = col.expect("resolved on first line");
                let cell = cells.get(c).ok_or_else(|| {
                    anyhow!("line {line_no}: only {} columns, need column {}", cells.len(), c + 1)
                })?;
                out.push(parse_value(cell, line_no)?);
            }
        }
    }
    if out.is_empty() {
        bail!("input holds no data values");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, col: Option<ColumnSel>) -> Result<Vec<f64>> {
        read_series(text.as_bytes(), col.as_ref())
    }

    #[test]
    fn plain_one_value_per_line() {
        assert_eq!(read("1\n2\n3\n", None).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(read("  1.5 \n\n-2e3\n", None).unwrap(), vec![1.5, -2000.0]);
    }

    #[test]
    fn plain_errors_carry_line_numbers() {
        let err = read("1\nabc\n3\n", None).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = read("1\ninf\n", None).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("non-finite"), "{err}");
        let err = read("1\nnan\n", None).unwrap_err().to_string();
        assert!(err.contains("non-finite"), "{err}");
    }

    #[test]
    fn csv_by_header_name() {
        let text = "t,v\n0,1.5\n1,2.5\n";
        let got = read(text, Some(ColumnSel::parse("v").unwrap())).unwrap();
        assert_eq!(got, vec![1.5, 2.5]);
    }

    #[test]
    fn csv_by_position_with_and_without_header() {
        let sel = ColumnSel::parse("2").unwrap();
        assert_eq!(sel, ColumnSel::Index(2));
        let with_header = "time,value\n0,10\n1,20\n";
        assert_eq!(read(with_header, Some(sel.clone())).unwrap(), vec![10.0, 20.0]);
        let headerless = "0,10\n1,20\n";
        assert_eq!(read(headerless, Some(sel)).unwrap(), vec![10.0, 20.0]);
    }

    #[test]
    fn csv_missing_column_is_an_error() {
        let err = read("a,b\n1,2\n", Some(ColumnSel::parse("c").unwrap()))
            .unwrap_err()
            .to_string();
        assert!(err.contains("no column named"), "{err}");
        let err = read("1,2\n3\n", Some(ColumnSel::parse("2").unwrap()))
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn quoted_headers_and_crlf_are_tolerated() {
        let text = "\"t\",\"v\"\r\n0,1.25\r\n1,2.75\r\n";
        let got = read(text, Some(ColumnSel::parse("v").unwrap())).unwrap();
        assert_eq!(got, vec![1.25, 2.75]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(read("", None).is_err());
        assert!(read("t,v\n", Some(ColumnSel::parse("v").unwrap())).is_err());
    }

    #[test]
    fn zero_column_position_is_rejected() {
        assert!(ColumnSel::parse("0").is_err());
    }
}
