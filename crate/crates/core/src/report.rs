//! Run reports shaped like results tables: one row per attempted length,
//! plus a summary row for certifications. JSON and CSV output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, LengthOutcome, LengthRun};
use crate::error::{GolombError, Result};
use crate::ruler::Ruler;
use crate::stats::SolveStats;

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "method",
    "L_from",
    "L_to",
    "btt_s",
    "ot_s",
    "tt_s",
    "nodes",
    "cuts_golomb",
    "cuts_clique",
    "cuts_nogood",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    /// A single engine run at one length bound.
    Single,
    /// An optimal-length certification over consecutive lengths.
    Certify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthRow {
    pub length: u32,
    pub status: String,
    pub stats: SolveStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruler: Option<Ruler>,
}

impl LengthRow {
    pub fn new(length: u32, status: &str, stats: SolveStats, ruler: Option<Ruler>) -> LengthRow {
        LengthRow {
            length,
            status: status.to_string(),
            stats: round_stats(stats),
            ruler,
        }
    }

    pub fn from_run(run: &LengthRun) -> LengthRow {
        let ruler = match &run.outcome {
            LengthOutcome::Feasible { ruler } => Some(ruler.clone()),
            _ => None,
        };
        LengthRow::new(run.length, run.outcome.tag(), run.stats, ruler)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub kind: ReportKind,
    pub n: usize,
    pub method: String,
    pub l_from: u32,
    pub l_to: u32,
    pub per_length: Vec<LengthRow>,
    /// Certification only: the run that found the optimal ruler.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LengthRow>,
    /// Sum over `per_length`.
    pub aggregate: SolveStats,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum: Option<u32>,
    pub config: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
}

fn round_ms(t: f64) -> f64 {
    (t * 1000.0).round() / 1000.0
}

fn round_stats(mut s: SolveStats) -> SolveStats {
    s.bound_tighten_time = round_ms(s.bound_tighten_time);
    s.optimize_time = round_ms(s.optimize_time);
    s.total_time = round_ms(s.total_time);
    s
}

fn sum_rows(rows: &[LengthRow]) -> SolveStats {
    let mut s = SolveStats::default();
    for r in rows {
        s.absorb(&r.stats);
    }
    round_stats(s)
}

impl RunReport {
    fn new(
        kind: ReportKind,
        n: usize,
        method: &str,
        rows: Vec<LengthRow>,
        status: &str,
        config: BTreeMap<String, String>,
    ) -> RunReport {
        let l_from = rows.first().map_or(0, |r| r.length);
        let l_to = rows.last().map_or(0, |r| r.length);
        RunReport {
            kind,
            n,
            method: method.to_string(),
            l_from,
            l_to,
            aggregate: sum_rows(&rows),
            per_length: rows,
            witness: None,
            status: status.to_string(),
            optimum: None,
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// Report of one run at one length bound.
    pub fn single(n: usize, method: &str, row: LengthRow, config: BTreeMap<String, String>) -> RunReport {
        let status = row.status.clone();
        RunReport::new(ReportKind::Single, n, method, vec![row], &status, config)
    }

    pub fn from_certificate(cert: &Certificate, config: BTreeMap<String, String>) -> RunReport {
        let rows = cert.runs.iter().map(LengthRow::from_run).collect();
        let status = if cert.witness.is_some() { "optimal" } else { "unknown" };
        let mut r = RunReport::new(ReportKind::Certify, cert.n, cert.method.tag(), rows, status, config);
        r.witness = cert.witness.as_ref().map(LengthRow::from_run);
        r.optimum = cert.optimum();
        if r.per_length.is_empty() {
            // n = 2: nothing to refute below the witness
            if let Some(w) = &r.witness {
                r.l_from = w.length;
                r.l_to = w.length - 1;
            }
        }
        r
    }

    /// Exit status convention: proven results are 0, budget-limited 2.
    pub fn is_proven(&self) -> bool {
        self.status != "unknown" && self.status != "error"
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GolombError::InvalidReport(m));
        if self.per_length.is_empty() && self.witness.is_none() {
            return bad(format!("no per-length entries (status {})", self.status));
        }
        for (k, row) in self.per_length.iter().enumerate() {
            if row.length != self.l_from + k as u32 {
                return bad(format!(
                    "length {} breaks the range starting at {}",
                    row.length, self.l_from
                ));
            }
        }
        if let Some(last) = self.per_length.last() {
            if last.length != self.l_to {
                return bad(format!(
                    "range ends at {} but entries end at {}",
                    self.l_to, last.length
                ));
            }
        }
        let sum = sum_rows(&self.per_length);
        let slack = 1e-3 * (self.per_length.len() as f64 + 1.0);
        let close = |a: f64, b: f64| (a - b).abs() <= slack;
        if sum.effort() != self.aggregate.effort()
            || !close(sum.total_time, self.aggregate.total_time)
            || !close(sum.optimize_time, self.aggregate.optimize_time)
            || !close(sum.bound_tighten_time, self.aggregate.bound_tighten_time)
        {
            return bad("aggregate does not match the per-length entries".into());
        }
        if let Some(w) = &self.witness {
            if self.optimum != Some(w.length) || w.ruler.is_none() {
                return bad("witness does not match the optimum".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        serde_json::to_string_pretty(self).map_err(|e| GolombError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<RunReport> {
        let r: RunReport = serde_json::from_str(text).map_err(|e| GolombError::Parse(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    fn csv_record(&self, l_from: u32, l_to: u32, s: &SolveStats, status: &str) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.method.clone(),
            l_from.to_string(),
            l_to.to_string(),
            format!("{:.3}", s.bound_tighten_time),
            format!("{:.3}", s.optimize_time),
            format!("{:.3}", s.total_time),
            s.nodes.to_string(),
            s.cuts.golomb.to_string(),
            s.cuts.clique.to_string(),
            s.cuts.nogood.to_string(),
            status.to_string(),
        ]
    }

    /// Data rows: one per length, then a summary row for certifications.
    pub fn csv_records(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .per_length
            .iter()
            .map(|r| self.csv_record(r.length, r.length, &r.stats, &r.status))
            .collect();
        if self.kind == ReportKind::Certify {
            out.push(self.csv_record(self.l_from, self.l_to, &self.aggregate, &self.status));
        }
        out
    }
}

/// Reports as CSV under one header.
pub fn to_csv(reports: &[RunReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| GolombError::Parse(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in reports {
        r.validate()?;
        for rec in r.csv_records() {
            w.write_record(&rec).map_err(err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| GolombError::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| GolombError::Parse(e.to_string()))
}

/// Reports as one JSON array.
pub fn to_json_array(reports: &[RunReport]) -> Result<String> {
    for r in reports {
        r.validate()?;
    }
    serde_json::to_string_pretty(reports).map_err(|e| GolombError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_optimal_length, CertifyConfig, Method};
    use crate::ruler::OptimaTable;
    use crate::stats::CutCounts;
    use proptest::prelude::*;

    fn stats(nodes: u64, t: f64) -> SolveStats {
        SolveStats {
            optimize_time: t,
            total_time: t,
            nodes,
            cuts: CutCounts {
                golomb: nodes / 2,
                ..CutCounts::default()
            },
            ..SolveStats::default()
        }
    }

    #[test]
    fn empty_report_is_rejected() {
        let mut r = RunReport::single(
            4,
            "cp",
            LengthRow::new(6, "error", SolveStats::default(), None),
            BTreeMap::new(),
        );
        r.per_length.clear();
        assert!(matches!(r.validate(), Err(GolombError::InvalidReport(_))));
        assert!(to_csv(&[r]).is_err());
    }

    #[test]
    fn single_report_has_one_row() {
        let r = RunReport::single(
            4,
            "qip",
            LengthRow::new(6, "feasible", stats(12, 0.01234), None),
            BTreeMap::new(),
        );
        let text = to_csv(&[r]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "4,qip,6,6,0.000,0.012,0.012,12,6,0,0,feasible");
    }

    #[test]
    fn certification_rows_cover_refuted_range() {
        let cert = certify_optimal_length(6, OptimaTable::standard(), &CertifyConfig::default()).unwrap();
        let r = RunReport::from_certificate(&cert, BTreeMap::new());
        assert_eq!((r.l_from, r.l_to, r.optimum), (12, 16, Some(17)));
        let recs = r.csv_records();
        assert_eq!(recs.len(), 6);
        assert!(recs[..5].iter().all(|rec| rec[11] == "infeasible"));
        assert_eq!(recs[5][2..4], ["12".to_string(), "16".to_string()]);
        assert_eq!(recs[5][11], "optimal");
        assert_eq!(RunReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn two_marks_report_is_valid() {
        let config = CertifyConfig {
            method: Method::Qip,
            ..CertifyConfig::default()
        };
        let cert = certify_optimal_length(2, OptimaTable::standard(), &config).unwrap();
        let r = RunReport::from_certificate(&cert, BTreeMap::new());
        r.validate().unwrap();
        assert_eq!(r.csv_records().len(), 1);
    }

    #[test]
    fn gap_in_lengths_is_rejected() {
        let cert = certify_optimal_length(5, OptimaTable::standard(), &CertifyConfig::default()).unwrap();
        let mut r = RunReport::from_certificate(&cert, BTreeMap::new());
        r.per_length.remove(1);
        assert!(r.validate().is_err());
    }

    #[test]
    fn tampered_aggregate_is_rejected() {
        let cert = certify_optimal_length(5, OptimaTable::standard(), &CertifyConfig::default()).unwrap();
        let mut r = RunReport::from_certificate(&cert, BTreeMap::new());
        r.aggregate.nodes += 1;
        assert!(r.validate().is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(rows in proptest::collection::vec((0u64..1_000_000, 0.0f64..10_000.0), 1..12), from in 1u32..100) {
            let per: Vec<LengthRow> = rows
                .iter()
                .enumerate()
                .map(|(k, &(nodes, t))| LengthRow::new(from + k as u32, "infeasible", stats(nodes, t), None))
                .collect();
            let mut r = RunReport::new(ReportKind::Certify, 7, "cp", per, "unknown", BTreeMap::from([("budget".to_string(), "60".to_string())]));
            r.l_to = from + rows.len() as u32 - 1;
            let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
