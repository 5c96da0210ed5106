// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Benchmark harness: QAOA MaxCut circuits on a line, many instances per
//! size, mean and sample standard deviation per strategy.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qaoa::{qaoa_circuit, random_regular_graph, QaoaParams};
use crate::scheduler::{best_of_prepared, PreparedCircuit, Strategy, StrategyKind};
use crate::seed;
use crate::topology::ConnectivityGraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub strategies: Vec<StrategyKind>,
    /// Seeded runs per strategy; `None` means `4N`.
    pub repetitions: Option<usize>,
    pub degree: usize,
    pub t_x: u32,
    pub t_zz: u32,
    pub t_swap: u32,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![10, 20, 30, 40, 60, 80, 100],
            instances: 100,
            strategies: StrategyKind::ALL.to_vec(),
            repetitions: None,
            degree: 3,
            t_x: 1,
            t_zz: 1,
            t_swap: 1,
            master_seed: 0,
            threads: None,
        }
    }
}

impl BenchConfig {
    pub fn repetitions_for(&self, n: usize) -> usize {
        self.repetitions.unwrap_or(4 * n).max(1)
    }
}

/// One instance scheduled with one strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub n: usize,
    pub strategy: StrategyKind,
    pub instance: usize,
    pub seed: u64,
    /// Two-qubit gates: one per problem edge plus the SWAPs.
    pub gates: usize,
    pub swaps: usize,
    pub depth: u64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub strategy: StrategyKind,
    pub count: usize,
    pub mean_gates: f64,
    pub std_gates: f64,
    pub mean_depth: f64,
    pub std_depth: f64,
    pub mean_swaps: f64,
    pub std_swaps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<InstanceRow>,
    pub summaries: Vec<Summary>,
}

impl BenchReport {
    pub fn summary(&self, n: usize, strategy: StrategyKind) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.n == n && s.strategy == strategy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidParams(format!("unknown format `{other}`"))),
        }
    }
}

/// Mean and sample (n - 1) standard deviation; zero spread below two samples.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn instance_seed(master: u64, n: usize, instance: usize) -> u64 {
    seed::derive(&[master, n as u64, instance as u64])
}

pub fn strategy_seed(master: u64, n: usize, instance: usize, strategy: StrategyKind) -> u64 {
    seed::derive(&[master, n as u64, instance as u64, strategy as u64 + 1])
}

fn run_instance(config: &BenchConfig, n: usize, instance: usize) -> Vec<InstanceRow> {
    let iseed = instance_seed(config.master_seed, n, instance);
    let row = |strategy, result: Result<(usize, usize, u64)>| {
        let (gates, swaps, depth, error) = match result {
            Ok((g, s, d)) => (g, s, d, None),
            Err(e) => (0, 0, 0, Some(e.to_string())),
        };
        InstanceRow {
            n,
            strategy,
            instance,
            seed: iseed,
            gates,
            swaps,
            depth,
            error,
        }
    };
    let prepared = random_regular_graph(n, config.degree, iseed).and_then(|g| {
        let params = QaoaParams::new(1).with_latencies(config.t_x, config.t_zz, config.t_swap);
        Ok((g.edges().len(), qaoa_circuit(&g, &params)?))
    });
    let (num_edges, circuit) = match prepared {
        Ok(p) => p,
        Err(e) => {
            let msg = e.to_string();
            return config
                .strategies
                .iter()
                .map(|&s| row(s, Err(Error::InvalidParams(msg.clone()))))
                .collect();
        }
    };
    let topology = ConnectivityGraph::line(n);
    let prepared = PreparedCircuit::new(&circuit);
    config
        .strategies
        .iter()
        .map(|&kind| {
            let result = prepared.as_ref().map_err(|e| Error::InvalidParams(e.to_string())).and_then(|p| {
                let strategy = Strategy::new(kind, config.repetitions_for(n), strategy_seed(config.master_seed, n, instance, kind))
                    .with_swap_latency(config.t_swap);
                let pdpt = best_of_prepared(p, &topology, &strategy)?;
                Ok((num_edges + pdpt.swap_count(), pdpt.swap_count(), pdpt.depth()))
            });
            row(kind, result)
        })
        .collect()
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.instances).map(move |m| (n, m)))
        .collect();
    let work = || -> Vec<InstanceRow> {
        jobs.par_iter()
            .flat_map_iter(|&(n, m)| run_instance(config, n, m))
            .collect()
    };
    let mut rows = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .install(work),
        None => work(),
    };
    rows.sort_by_key(|r| (r.n, r.strategy, r.instance));
    let summaries = aggregate(&rows);
    Ok(BenchReport {
        config: config.clone(),
        rows,
        summaries,
    })
}

/// Per (N, strategy) statistics over the rows without errors.
pub fn aggregate(rows: &[InstanceRow]) -> Vec<Summary> {
    let mut keys: Vec<(usize, StrategyKind)> = rows.iter().map(|r| (r.n, r.strategy)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, strategy)| {
            let ok: Vec<&InstanceRow> = rows
                .iter()
                .filter(|r| r.n == n && r.strategy == strategy && r.error.is_none())
                .collect();
            let col = |f: fn(&InstanceRow) -> f64| mean_std(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
            let (mean_gates, std_gates) = col(|r| r.gates as f64);
            let (mean_depth, std_depth) = col(|r| r.depth as f64);
            let (mean_swaps, std_swaps) = col(|r| r.swaps as f64);
            Summary {
                n,
                strategy,
                count: ok.len(),
                mean_gates,
                std_gates,
                mean_depth,
                std_depth,
                mean_swaps,
                std_swaps,
            }
        })
        .collect()
}

/// Flat CSV record shared by instance and summary rows.
#[derive(Debug, Default, Serialize, Deserialize)]
struct CsvRecord {
    record: String,
    n: usize,
    strategy: String,
    instance: Option<usize>,
    seed: Option<u64>,
    gates: Option<usize>,
    swaps: Option<usize>,
    depth: Option<u64>,
    mean_gates: Option<f64>,
    std_gates: Option<f64>,
    mean_depth: Option<f64>,
    std_depth: Option<f64>,
    mean_swaps: Option<f64>,
    std_swaps: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct PlotRecord {
    n: usize,
    strategy: String,
    mean_gates: f64,
    std_gates: f64,
    mean_depth: f64,
    std_depth: f64,
    mean_swaps: f64,
    std_swaps: f64,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e)
}

pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.rows {
        w.serialize(CsvRecord {
            record: "instance".into(),
            n: r.n,
            strategy: r.strategy.name().into(),
            instance: Some(r.instance),
            seed: Some(r.seed),
            gates: Some(r.gates),
            swaps: Some(r.swaps),
            depth: Some(r.depth),
            error: r.error.clone(),
            ..CsvRecord::default()
        })
        .map_err(csv_err)?;
    }
    for s in &report.summaries {
        w.serialize(CsvRecord {
            record: "summary".into(),
            n: s.n,
            strategy: s.strategy.name().into(),
            mean_gates: Some(s.mean_gates),
            std_gates: Some(s.std_gates),
            mean_depth: Some(s.mean_depth),
            std_depth: Some(s.std_depth),
            mean_swaps: Some(s.mean_swaps),
            std_swaps: Some(s.std_swaps),
            ..CsvRecord::default()
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Columnar `n, strategy, mean, std` file for external plotting.
pub fn write_plot<W: Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in &report.summaries {
        w.serialize(PlotRecord {
            n: s.n,
            strategy: s.strategy.name().into(),
            mean_gates: s.mean_gates,
            std_gates: s.std_gates,
            mean_depth: s.mean_depth,
            std_depth: s.std_depth,
            mean_swaps: s.mean_swaps,
            std_swaps: s.std_swaps,
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        ReportFormat::Csv => write_csv(report, &mut buf)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, report)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

/// Instance rows of an emitted CSV report; summary rows are skipped.
pub fn parse_csv_rows(text: &str) -> Result<Vec<InstanceRow>> {
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).deserialize::<CsvRecord>() {
        let rec = rec.map_err(csv_err)?;
        if rec.record != "instance" {
            continue;
        }
        let missing = || Error::Malformed("instance row with empty fields".into());
        rows.push(InstanceRow {
            n: rec.n,
            strategy: rec.strategy.parse()?,
            instance: rec.instance.ok_or_else(missing)?,
            seed: rec.seed.ok_or_else(missing)?,
            gates: rec.gates.ok_or_else(missing)?,
            swaps: rec.swaps.ok_or_else(missing)?,
            depth: rec.depth.ok_or_else(missing)?,
            error: rec.error,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            sizes: vec![4, 6],
            instances: 6,
            repetitions: Some(3),
            master_seed: 17,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn complete_four_costs_three_swaps() {
        let cfg = BenchConfig {
            sizes: vec![4],
            instances: 20,
            ..small()
        };
        let report = run_benchmark(&cfg).unwrap();
        for kind in StrategyKind::ALL {
            let s = report.summary(4, kind).unwrap();
            assert_eq!((s.mean_swaps, s.std_swaps), (3.0, 0.0));
            assert_eq!(s.mean_gates, 9.0);
        }
    }

    #[test]
    fn rows_are_consistent() {
        let report = run_benchmark(&small()).unwrap();
        assert_eq!(report.rows.len(), 2 * 6 * 3);
        for r in &report.rows {
            assert!(r.error.is_none());
            assert_eq!(r.gates, 3 * r.n / 2 + r.swaps);
            assert!(r.depth >= 2);
        }
    }

    #[test]
    fn empty_config_gives_empty_report() {
        let cfg = BenchConfig {
            instances: 0,
            ..small()
        };
        let report = run_benchmark(&cfg).unwrap();
        assert!(report.rows.is_empty() && report.summaries.is_empty());
    }

    #[test]
    fn infeasible_sizes_become_error_rows() {
        let cfg = BenchConfig {
            sizes: vec![5],
            instances: 2,
            ..small()
        };
        let report = run_benchmark(&cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.error.is_some()));
        assert!(report.summaries.iter().all(|s| s.count == 0));
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let report = run_benchmark(&small()).unwrap();
        let bytes = emit_report(&report, ReportFormat::Csv).unwrap();
        let again = emit_report(&run_benchmark(&small()).unwrap(), ReportFormat::Csv).unwrap();
        assert_eq!(bytes, again);
        let rows = parse_csv_rows(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert_eq!(rows, report.rows);
        assert_eq!(aggregate(&rows), report.summaries);
        let header = std::str::from_utf8(&bytes).unwrap().lines().next().unwrap().to_string();
        assert_eq!(
            header,
            "record,n,strategy,instance,seed,gates,swaps,depth,mean_gates,std_gates,\
             mean_depth,std_depth,mean_swaps,std_swaps,error"
        );
        let mut plot = Vec::new();
        write_plot(&report, &mut plot).unwrap();
        assert_eq!(String::from_utf8(plot).unwrap().lines().count(), 1 + report.summaries.len());
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let one = run_benchmark(&BenchConfig { threads: Some(1), ..small() }).unwrap();
        let three = run_benchmark(&BenchConfig { threads: Some(3), ..small() }).unwrap();
        assert_eq!(
            emit_report(&one, ReportFormat::Csv).unwrap(),
            emit_report(&three, ReportFormat::Csv).unwrap()
        );
    }

    #[test]
    fn sample_standard_deviation() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }
}
