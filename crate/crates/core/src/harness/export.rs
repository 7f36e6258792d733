use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::ConfidenceInterval;
use super::{AggregateResult, AggregateRow};
use crate::error::{MarketError, Result};

pub const CSV_HEADER: [&str; 19] = [
    "algorithm",
    "budget",
    "trials",
    "stability_rate",
    "stability_ci_lo",
    "stability_ci_hi",
    "avg_regret_opt",
    "avg_regret_opt_ci_lo",
    "avg_regret_opt_ci_hi",
    "max_regret_opt",
    "max_regret_opt_ci_lo",
    "max_regret_opt_ci_hi",
    "avg_regret_pess",
    "avg_regret_pess_ci_lo",
    "avg_regret_pess_ci_hi",
    "max_regret_pess",
    "max_regret_pess_ci_lo",
    "max_regret_pess_ci_hi",
    "mean_total_pulls",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    algorithm: String,
    budget: u64,
    trials: usize,
    stability_rate: f64,
    stability_ci_lo: f64,
    stability_ci_hi: f64,
    avg_regret_opt: f64,
    avg_regret_opt_ci_lo: f64,
    avg_regret_opt_ci_hi: f64,
    max_regret_opt: f64,
    max_regret_opt_ci_lo: f64,
    max_regret_opt_ci_hi: f64,
    avg_regret_pess: f64,
    avg_regret_pess_ci_lo: f64,
    avg_regret_pess_ci_hi: f64,
    max_regret_pess: f64,
    max_regret_pess_ci_lo: f64,
    max_regret_pess_ci_hi: f64,
    mean_total_pulls: f64,
}

impl From<&AggregateRow> for CsvRow {
    fn from(r: &AggregateRow) -> Self {
        CsvRow {
            algorithm: r.algorithm.clone(),
            budget: r.budget,
            trials: r.trials,
            stability_rate: r.stability.mean,
            stability_ci_lo: r.stability.lo,
            stability_ci_hi: r.stability.hi,
            avg_regret_opt: r.avg_regret_opt.mean,
            avg_regret_opt_ci_lo: r.avg_regret_opt.lo,
            avg_regret_opt_ci_hi: r.avg_regret_opt.hi,
            max_regret_opt: r.max_regret_opt.mean,
            max_regret_opt_ci_lo: r.max_regret_opt.lo,
            max_regret_opt_ci_hi: r.max_regret_opt.hi,
            avg_regret_pess: r.avg_regret_pess.mean,
            avg_regret_pess_ci_lo: r.avg_regret_pess.lo,
            avg_regret_pess_ci_hi: r.avg_regret_pess.hi,
            max_regret_pess: r.max_regret_pess.mean,
            max_regret_pess_ci_lo: r.max_regret_pess.lo,
            max_regret_pess_ci_hi: r.max_regret_pess.hi,
            mean_total_pulls: r.mean_total_pulls,
        }
    }
}

impl From<CsvRow> for AggregateRow {
    fn from(r: CsvRow) -> Self {
        let degenerate = r.trials < 2;
        let ci = |mean, lo, hi| ConfidenceInterval {
            mean,
            lo,
            hi,
            degenerate,
        };
        AggregateRow {
            algorithm: r.algorithm,
            budget: r.budget,
            trials: r.trials,
            stability: ci(r.stability_rate, r.stability_ci_lo, r.stability_ci_hi),
            avg_regret_opt: ci(r.avg_regret_opt, r.avg_regret_opt_ci_lo, r.avg_regret_opt_ci_hi),
            max_regret_opt: ci(r.max_regret_opt, r.max_regret_opt_ci_lo, r.max_regret_opt_ci_hi),
            avg_regret_pess: ci(r.avg_regret_pess, r.avg_regret_pess_ci_lo, r.avg_regret_pess_ci_hi),
            max_regret_pess: ci(r.max_regret_pess, r.max_regret_pess_ci_lo, r.max_regret_pess_ci_hi),
            mean_total_pulls: r.mean_total_pulls,
        }
    }
}

/// Writes one row per `(algorithm, budget)` cell; an empty result yields the header alone.
pub fn write_results(result: &AggregateResult, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for row in &result.rows {
        w.serialize(CsvRow::from(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: impl AsRef<Path>) -> Result<AggregateResult> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(MarketError::Schema(format!(
            "expected columns {}, found {}",
            CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let rows = r
        .deserialize::<CsvRow>()
        .map(|row| row.map(AggregateRow::from).map_err(MarketError::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(AggregateResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(alg: &str, budget: u64) -> AggregateRow {
        let ci = ConfidenceInterval {
            mean: 0.5,
            lo: 0.25,
            hi: 0.75,
            degenerate: false,
        };
        AggregateRow {
            algorithm: alg.into(),
            budget,
            trials: 10,
            stability: ci,
            avg_regret_opt: ci,
            max_regret_opt: ci,
            avg_regret_pess: ci,
            max_regret_pess: ci,
            mean_total_pulls: 123.5,
        }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let agg = AggregateResult {
            rows: vec![row("ae-arm-da", 400), row("uniform-arm-da", 800)],
        };
        write_results(&agg, &path).unwrap();
        assert_eq!(read_results(&path).unwrap(), agg);
    }

    #[test]
    fn empty_result_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(&AggregateResult::default(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.trim_end(), CSV_HEADER.join(","));
        assert!(read_results(&path).unwrap().rows.is_empty());
    }

    #[test]
    fn wrong_header_is_a_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        std::fs::write(&path, "algorithm,budget\nx,1\n").unwrap();
        assert!(matches!(read_results(&path), Err(MarketError::Schema(_))));
    }
}
