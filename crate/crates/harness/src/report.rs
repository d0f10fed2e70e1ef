//! Experiment reports: per-trial records plus aggregates recomputable from them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Pipeline};
use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    /// Best-advice agreement (tensor pipelines) or worst per-coordinate
    /// success frequency (compose).
    pub agreement: Option<f64>,
    /// Largest number of queries a single local call made.
    pub max_queries: Option<usize>,
    pub query_bound: Option<u128>,
    /// Oracle reads summed over the stages of the instrumented calls.
    pub stage_queries: Option<usize>,
    /// Reads counted by the oracle itself over the same calls.
    pub oracle_queries: Option<usize>,
    pub list_size: Option<u128>,
    pub output_size: Option<usize>,
    pub distance: Option<usize>,
    pub wall_ms: f64,
    /// Pipeline-specific numbers, one CSV column each.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl TrialRecord {
    pub fn new(trial: usize, seed: u64) -> Self {
        TrialRecord {
            trial,
            seed,
            success: false,
            agreement: None,
            max_queries: None,
            query_bound: None,
            stage_queries: None,
            oracle_queries: None,
            list_size: None,
            output_size: None,
            distance: None,
            wall_ms: 0.0,
            extra: BTreeMap::new(),
        }
    }

    /// True unless both query counters are present and differ.
    pub fn counters_agree(&self) -> bool {
        match (self.stage_queries, self.oracle_queries) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub p10: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles; `None` for an empty sample.
    pub fn of(mut xs: Vec<f64>) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        xs.sort_by(f64::total_cmp);
        let at = |p: f64| xs[((p * xs.len() as f64).ceil() as usize).clamp(1, xs.len()) - 1];
        Some(Quantiles {
            min: xs[0],
            p10: at(0.1),
            median: at(0.5),
            p90: at(0.9),
            max: xs[xs.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: Option<f64>,
    pub max_queries: Option<usize>,
    pub max_list_size: Option<u128>,
    pub max_output_size: Option<usize>,
    pub counters_agree: bool,
    pub agreement: Option<Quantiles>,
    pub distance: Option<Quantiles>,
    pub wall_ms: Option<Quantiles>,
}

impl Aggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let successes = records.iter().filter(|r| r.success).count();
        Aggregates {
            trials: records.len(),
            successes,
            success_rate: (!records.is_empty()).then(|| successes as f64 / records.len() as f64),
            max_queries: records.iter().filter_map(|r| r.max_queries).max(),
            max_list_size: records.iter().filter_map(|r| r.list_size).max(),
            max_output_size: records.iter().filter_map(|r| r.output_size).max(),
            counters_agree: records.iter().all(TrialRecord::counters_agree),
            agreement: Quantiles::of(records.iter().filter_map(|r| r.agreement).collect()),
            distance: Quantiles::of(records.iter().filter_map(|r| r.distance.map(|d| d as f64)).collect()),
            wall_ms: Quantiles::of(records.iter().map(|r| r.wall_ms).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub pipeline: Pipeline,
    pub config: ExperimentConfig,
    /// Setup facts shared by every trial (schedule radius, list size, ...).
    pub setup: BTreeMap<String, serde_json::Value>,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, setup: BTreeMap<String, serde_json::Value>, records: Vec<TrialRecord>) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            pipeline: config.pipeline,
            aggregates: Aggregates::from_records(&records),
            config,
            setup,
            records,
        }
    }

    /// Copy with every wall-clock measurement zeroed, for comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.wall_ms = 0.0;
        }
        r.aggregates = Aggregates::from_records(&r.records);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("report: {e}")))
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), HarnessError> {
        let extra_keys: Vec<&String> = {
            let mut keys: Vec<_> = self.records.iter().flat_map(|r| r.extra.keys()).collect();
            keys.sort();
            keys.dedup();
            keys
        };
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = [
            "trial",
            "seed",
            "success",
            "agreement",
            "max_queries",
            "query_bound",
            "stage_queries",
            "oracle_queries",
            "list_size",
            "output_size",
            "distance",
            "wall_ms",
        ]
        .map(String::from)
        .to_vec();
        header.extend(extra_keys.iter().map(|k| k.to_string()));
        w.write_record(&header).map_err(csv_err)?;
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        for r in &self.records {
            let mut row = vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.success.to_string(),
                opt(r.agreement),
                opt(r.max_queries),
                opt(r.query_bound),
                opt(r.stage_queries),
                opt(r.oracle_queries),
                opt(r.list_size),
                opt(r.output_size),
                opt(r.distance),
                format!("{:.3}", r.wall_ms),
            ];
            row.extend(extra_keys.iter().map(|k| opt(r.extra.get(*k))));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| HarnessError::Io(e.to_string()))
    }

    /// Writes the JSON report to `path` and the CSV table next to it.
    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(path, self.to_json()).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        let csv_path = path.with_extension("csv");
        let f = std::fs::File::create(&csv_path).map_err(|e| HarnessError::Io(format!("{}: {e}", csv_path.display())))?;
        self.write_csv(f)
    }
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_nearest_rank() {
        let q = Quantiles::of((1..=10).map(f64::from).collect()).unwrap();
        assert_eq!((q.min, q.p10, q.median, q.p90, q.max), (1.0, 1.0, 5.0, 9.0, 10.0));
        assert!(Quantiles::of(vec![]).is_none());
    }

    #[test]
    fn aggregates_follow_records() {
        let mut a = TrialRecord::new(0, 1);
        a.success = true;
        a.max_queries = Some(7);
        a.stage_queries = Some(3);
        a.oracle_queries = Some(3);
        let mut b = TrialRecord::new(1, 2);
        b.max_queries = Some(4);
        let agg = Aggregates::from_records(&[a.clone(), b.clone()]);
        assert_eq!((agg.trials, agg.successes, agg.success_rate), (2, 1, Some(0.5)));
        assert_eq!(agg.max_queries, Some(7));
        assert!(agg.counters_agree);
        b.stage_queries = Some(1);
        b.oracle_queries = Some(2);
        assert!(!Aggregates::from_records(&[a, b]).counters_agree);
        let empty = Aggregates::from_records(&[]);
        assert_eq!((empty.trials, empty.success_rate), (0, None));
    }
}
