use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 12] = [
    "matrix_id",
    "n",
    "ratio",
    "alpha",
    "m",
    "s_direct",
    "s_scaled",
    "err_direct",
    "err_scaled",
    "oracle",
    "runtime_direct_ms",
    "runtime_scaled_ms",
];

/// Marker written in place of an error that could not be computed.
pub const MISSING: &str = "n/a";

/// One row of an experiment: counts and relative errors with and without
/// scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub matrix_id: String,
    pub n: usize,
    /// `||N||_F / ||D||_F` of the input.
    pub ratio: f64,
    pub alpha: f64,
    pub m: usize,
    pub s_direct: u32,
    pub s_scaled: u32,
    pub err_direct: Option<f64>,
    pub err_scaled: Option<f64>,
    /// `closed`, `parlett`, `cross`, `cross-flagged`, or `error:<tag>`.
    pub oracle: String,
    pub runtime_direct_ms: f64,
    pub runtime_scaled_ms: f64,
}

impl ExperimentRecord {
    pub fn failed(&self) -> bool {
        self.oracle.starts_with("error:")
    }

    fn fields(&self) -> [String; 12] {
        let opt = |e: Option<f64>| e.map_or_else(|| MISSING.to_string(), |v| format!("{v:e}"));
        [
            self.matrix_id.clone(),
            self.n.to_string(),
            format!("{:e}", self.ratio),
            format!("{:e}", self.alpha),
            self.m.to_string(),
            self.s_direct.to_string(),
            self.s_scaled.to_string(),
            opt(self.err_direct),
            opt(self.err_scaled),
            self.oracle.clone(),
            format!("{:e}", self.runtime_direct_ms),
            format!("{:e}", self.runtime_scaled_ms),
        ]
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record(r.fields()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let bad = |col: &str, v: &str| Error::Parse {
            line,
            message: format!("bad {col} `{v}`"),
        };
        let num =
            |k: usize| -> Result<f64> { row[k].parse().map_err(|_| bad(CSV_COLUMNS[k], &row[k])) };
        let int =
            |k: usize| -> Result<u64> { row[k].parse().map_err(|_| bad(CSV_COLUMNS[k], &row[k])) };
        let opt = |k: usize| -> Result<Option<f64>> {
            if &row[k] == MISSING {
                Ok(None)
            } else {
                num(k).map(Some)
            }
        };
        out.push(ExperimentRecord {
            matrix_id: row[0].to_string(),
            n: int(1)? as usize,
            ratio: num(2)?,
            alpha: num(3)?,
            m: int(4)? as usize,
            s_direct: int(5)? as u32,
            s_scaled: int(6)? as u32,
            err_direct: opt(7)?,
            err_scaled: opt(8)?,
            oracle: row[9].to_string(),
            runtime_direct_ms: num(10)?,
            runtime_scaled_ms: num(11)?,
        });
    }
    Ok(out)
}

/// Fixed-width table of the records, one line per row.
pub fn summary_table(records: &[ExperimentRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<16} {:>4} {:>10} {:>10} {:>3} {:>4} {:>4} {:>10} {:>10}  oracle",
        "matrix", "n", "ratio", "alpha", "m", "s", "s~", "e", "e~"
    );
    let err = |e: Option<f64>| e.map_or_else(|| MISSING.to_string(), |v| format!("{v:.2e}"));
    for r in records {
        let _ = writeln!(
            s,
            "{:<16} {:>4} {:>10.3e} {:>10.3e} {:>3} {:>4} {:>4} {:>10} {:>10}  {}",
            r.matrix_id,
            r.n,
            r.ratio,
            r.alpha,
            r.m,
            r.s_direct,
            r.s_scaled,
            err(r.err_direct),
            err(r.err_scaled),
            r.oracle
        );
    }
    s
}
