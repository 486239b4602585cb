//! Per-iteration telemetry and its CSV encoding.
//!
//! Columns: `iter,op_evals,prox_evals,residual,lambda,phi,flg,wall_nanos`.
//! Reals are written in scientific notation with 17 significant digits, so a
//! trace read back compares equal bit for bit. `phi` is `inf` for passes
//! without momentum.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const TRACE_HEADER: [&str; 8] =
    ["iter", "op_evals", "prox_evals", "residual", "lambda", "phi", "flg", "wall_nanos"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: u64,
    pub op_evals: u64,
    pub prox_evals: u64,
    pub residual: f64,
    pub lambda: f64,
    pub phi: f64,
    pub flg: u8,
    pub wall_nanos: u64,
}

pub type TracePoint = TraceRow;

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct MergedRow {
    method: String,
    iter: u64,
    op_evals: u64,
    prox_evals: u64,
    residual: f64,
    lambda: f64,
    phi: f64,
    flg: u8,
    wall_nanos: u64,
}

impl MergedRow {
    fn split(self) -> (String, TraceRow) {
        let row = TraceRow {
            iter: self.iter,
            op_evals: self.op_evals,
            prox_evals: self.prox_evals,
            residual: self.residual,
            lambda: self.lambda,
            phi: self.phi,
            flg: self.flg,
            wall_nanos: self.wall_nanos,
        };
        (self.method, row)
    }
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fields(r: &TraceRow) -> [String; 8] {
    [
        r.iter.to_string(),
        r.op_evals.to_string(),
        r.prox_evals.to_string(),
        real(r.residual),
        real(r.lambda),
        real(r.phi),
        r.flg.to_string(),
        r.wall_nanos.to_string(),
    ]
}

fn csv_err(e: csv::Error) -> crate::error::VIError {
    invalid(format!("trace csv: {e}"))
}

pub fn write_trace_csv<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(TRACE_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(fields(r)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| invalid(format!("trace csv: {e}")))
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != TRACE_HEADER {
        return Err(invalid(format!("unexpected trace header {header:?}")));
    }
    rd.deserialize().map(|r| r.map_err(csv_err)).collect()
}

/// Long format: one `method` column in front of the trace columns.
pub fn write_merged_csv<W: Write>(out: W, traces: &[(String, Vec<TraceRow>)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["method"];
    header.extend(TRACE_HEADER);
    w.write_record(&header).map_err(csv_err)?;
    for (method, rows) in traces {
        for r in rows {
            let mut rec = vec![method.clone()];
            rec.extend(fields(r));
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| invalid(format!("trace csv: {e}")))
}

/// Groups rows by method, preserving first-appearance order.
pub fn read_merged_csv<R: Read>(input: R) -> Result<Vec<(String, Vec<TraceRow>)>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out: Vec<(String, Vec<TraceRow>)> = Vec::new();
    for rec in rd.deserialize::<MergedRow>() {
        let (method, row) = rec.map_err(csv_err)?.split();
        match out.iter_mut().find(|(m, _)| *m == method) {
            Some((_, rows)) => rows.push(row),
            None => out.push((method, vec![row])),
        }
    }
    Ok(out)
}
