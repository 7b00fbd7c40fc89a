//! CSV serialization of run results.
//!
//! One row per grid point, fixed column order, every float printed with 17
//! significant digits so files are byte-identical across reruns and parse
//! back to the exact same bits. Model-based runs carry 7 columns; model-free
//! runs add `F_forecast` for 8.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scenario::RunResult;

const BASE_HEADER: [&str; 6] = ["t", "u", "y", "y_ref", "d", "d_forecast"];

/// 17 significant digits: enough for bit-exact f64 round trips.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn header(result: &RunResult) -> Vec<&'static str> {
    let mut cols: Vec<&'static str> = BASE_HEADER.to_vec();
    if result.series.f_forecast.is_some() {
        cols.push("F_forecast");
    }
    cols.push("warmup");
    cols
}

pub fn write_csv<W: Write>(result: &RunResult, mut out: W) -> Result<()> {
    out.write_all(csv_string(result).as_bytes())?;
    Ok(())
}

pub fn csv_string(result: &RunResult) -> String {
    let s = &result.series;
    let mut text = header(result).join(",");
    text.push('\n');
    for i in 0..s.u.len() {
        text.push_str(&fmt_float(s.u.time_at(i)));
        for v in [s.u[i], s.y[i], s.y_ref[i], s.d[i], s.d_forecast[i]] {
            text.push(',');
            text.push_str(&fmt_float(v));
        }
        if let Some(f) = &s.f_forecast {
            text.push(',');
            text.push_str(&fmt_float(f[i]));
        }
        text.push(',');
        text.push_str(if s.warmup[i] { "1" } else { "0" });
        text.push('\n');
    }
    text
}

/// Parsed CSV: header names plus rows of floats (the warmup column parses
/// as 0/1).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_csv(input: &str) -> Result<CsvData> {
    let mut lines = input.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(Error::Csv {
        line: 1,
        message: "missing header".into(),
    })?;
    let header: Vec<String> = header_line.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(header.len());
        for field in line.split(',') {
            row.push(field.parse::<f64>().map_err(|e| Error::Csv {
                line: idx + 1,
                message: format!("bad float '{field}': {e}"),
            })?);
        }
        if row.len() != header.len() {
            return Err(Error::Csv {
                line: idx + 1,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok(CsvData { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{fixtures, run_scenario};
    use proptest::prelude::*;

    #[test]
    fn smith_runs_have_seven_columns_ip_runs_eight() {
        let s1 = run_scenario(&fixtures::builtin("S1").unwrap()).unwrap();
        let s4 = run_scenario(&fixtures::builtin("S4").unwrap()).unwrap();
        assert_eq!(header(&s1).len(), 7);
        assert_eq!(
            header(&s1),
            vec!["t", "u", "y", "y_ref", "d", "d_forecast", "warmup"]
        );
        assert_eq!(header(&s4).len(), 8);
        assert!(header(&s4).contains(&"F_forecast"));
    }

    #[test]
    fn row_count_matches_duration() {
        let s1 = run_scenario(&fixtures::builtin("S1").unwrap()).unwrap();
        let text = csv_string(&s1);
        let parsed = read_csv(&text).unwrap();
        assert_eq!(parsed.rows.len(), 201); // duration / dt + 1
    }

    #[test]
    fn empty_series_yield_header_only() {
        let mut result = run_scenario(&fixtures::builtin("S1").unwrap()).unwrap();
        result.series.u = crate::series::TimeSeries::zeros(0.0, 1.0, 0).unwrap();
        let text = csv_string(&result);
        assert_eq!(text.lines().count(), 1);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s4 = run_scenario(&fixtures::builtin("S8").unwrap()).unwrap();
        let text = csv_string(&s4);
        let parsed = read_csv(&text).unwrap();
        for (i, row) in parsed.rows.iter().enumerate() {
            assert_eq!(row[1].to_bits(), s4.series.u[i].to_bits());
            assert_eq!(row[2].to_bits(), s4.series.y[i].to_bits());
            assert_eq!(row[5].to_bits(), s4.series.d_forecast[i].to_bits());
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(read_csv("t,u\n1.0").is_err());
        assert!(read_csv("t,u\n1.0,abc").is_err());
    }

    proptest! {
        // Any finite f64 survives the print/parse cycle bit-for-bit.
        #[test]
        fn float_format_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = fmt_float(v).parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
