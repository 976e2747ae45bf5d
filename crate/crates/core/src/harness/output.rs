//! CSV, JSON and plot-data persistence of experiment results.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::experiment::ExperimentConfig;
use super::stats::ExperimentStats;
use crate::error::Result;
use crate::protocols::{analytic_pout, ProtocolKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub protocol: String,
    pub d: usize,
    pub p_circuit: f64,
    pub p_in: f64,
    pub shots: u64,
    pub accepted: u64,
    pub errors: u64,
    pub p_out: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub discard_ratio: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "protocol,d,p_circuit,p_in,shots,accepted,errors,p_out,ci_lo,ci_hi,discard_ratio,seed";

impl ResultRow {
    pub fn new(config: &ExperimentConfig, d: usize, p_in: f64, stats: &ExperimentStats) -> Self {
        Self {
            protocol: config.protocol.label().to_string(),
            d,
            p_circuit: config.p_circuit,
            p_in,
            shots: stats.shots_total,
            accepted: stats.shots_accepted,
            errors: stats.output_errors,
            p_out: stats.p_out_hat,
            ci_lo: stats.ci_lo,
            ci_hi: stats.ci_hi,
            discard_ratio: stats.discard_ratio,
            seed: config.seed,
        }
    }
}

/// One row per `p_in` of `config`, paired with `stats` in order.
pub fn rows_for(config: &ExperimentConfig, stats: &[ExperimentStats]) -> Vec<ResultRow> {
    config
        .p_in
        .iter()
        .zip(stats)
        .map(|(&p, s)| ResultRow::new(config, config.d, p, s))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub fn csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config: &'a ExperimentConfig,
    results: &'a [ResultRow],
}

pub fn json_string(config: &ExperimentConfig, rows: &[ResultRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&JsonReport {
        config,
        results: rows,
    })?)
}

/// Plot-ready table: `p_in`, the analytic curve, then one `p_out` column per
/// distance (empty where that distance has no point).
pub fn plot_data(kind: ProtocolKind, rows: &[ResultRow]) -> String {
    let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
    ds.sort_unstable();
    ds.dedup();
    let mut ps: Vec<f64> = rows.iter().map(|r| r.p_in).collect();
    ps.sort_by(|a, b| a.total_cmp(b));
    ps.dedup();
    let mut out = String::from("p_in,analytic");
    for d in &ds {
        out.push_str(&format!(",d{d}"));
    }
    out.push('\n');
    for p in ps {
        out.push_str(&format!("{p},{}", analytic_pout(kind, &p)));
        for &d in &ds {
            out.push(',');
            if let Some(r) = rows.iter().find(|r| r.d == d && r.p_in == p) {
                out.push_str(&r.p_out.to_string());
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            protocol: "7to1".into(),
            d: 3,
            p_circuit: 0.001,
            p_in: 0.05,
            shots: 1000,
            accepted: 700,
            errors: 1,
            p_out: 1.0 / 700.0,
            ci_lo: 0.0002,
            ci_hi: 0.008,
            discard_ratio: 0.3,
            seed: 7,
        }
    }

    #[test]
    fn empty_sweep_is_header_only() {
        assert_eq!(csv_string(&[]).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let text = csv_string(&[row()]).unwrap();
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, vec![row()]);
        assert_eq!(csv_string(&back).unwrap(), text);
    }

    #[test]
    fn plot_data_has_series_per_distance() {
        let mut r5 = row();
        r5.d = 5;
        r5.p_in = 0.1;
        let text = plot_data(ProtocolKind::SevenToOne, &[row(), r5]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p_in,analytic,d3,d5");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.05,0.0010194"));
        assert!(lines[1].ends_with(','));
    }
}
