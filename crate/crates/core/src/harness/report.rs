use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::run::{cell_dir, CellStatus, RunManifest};
use crate::error::{Error, Result};
use crate::ledger::format_mb;
use crate::metrics::{final_mean, RunMetrics};
use crate::strategies::StrategyKind;

/// Per-strategy means across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: StrategyKind,
    pub seeds: Vec<u64>,
    pub n_ci: f64,
    pub n_fa: f64,
    pub rho_s: f64,
    pub t_comp: Option<f64>,
    pub comm_bytes: u64,
    pub comm_mb: String,
    pub r_avg_curve: Vec<f64>,
    /// Highest success rate, then highest final reward, then lowest seed.
    pub best_seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotFiles {
    pub reward_curves: PathBuf,
    pub summary_csv: PathBuf,
    pub summary_json: PathBuf,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn load_metrics(path: &Path) -> Result<RunMetrics> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

/// Aggregates metrics files read back from disk, one entry per strategy in
/// order of first appearance.
pub fn summarize(runs: &[(StrategyKind, RunMetrics)]) -> Vec<StrategySummary> {
    let mut order: Vec<StrategyKind> = Vec::new();
    for (k, _) in runs {
        if !order.contains(k) {
            order.push(*k);
        }
    }
    order
        .into_iter()
        .map(|kind| {
            let cells: Vec<&RunMetrics> = runs.iter().filter(|(k, _)| *k == kind).map(|(_, m)| m).collect();
            let n = cells.len();
            let len = cells.iter().map(|m| m.r_avg_curve.len()).min().unwrap_or(0);
            let curve = (0..len)
                .map(|e| cells.iter().map(|m| m.r_avg_curve[e]).sum::<f64>() / n as f64)
                .collect();
            let comm_bytes = (cells.iter().map(|m| m.comm_bytes as u128).sum::<u128>() + n as u128 / 2) / n as u128;
            let best = cells
                .iter()
                .max_by(|a, b| {
                    a.rho_s
                        .total_cmp(&b.rho_s)
                        .then(final_mean(&a.r_avg_curve, 10).total_cmp(&final_mean(&b.r_avg_curve, 10)))
                        .then(b.seed.cmp(&a.seed))
                })
                .map(|m| m.seed)
                .unwrap_or_default();
            StrategySummary {
                strategy: kind,
                seeds: cells.iter().map(|m| m.seed).collect(),
                n_ci: mean(cells.iter().map(|m| m.n_ci as f64)).unwrap_or(0.0),
                n_fa: mean(cells.iter().map(|m| m.n_fa as f64)).unwrap_or(0.0),
                rho_s: mean(cells.iter().map(|m| m.rho_s)).unwrap_or(0.0),
                t_comp: mean(cells.iter().filter_map(|m| m.t_comp)),
                comm_bytes: comm_bytes as u64,
                comm_mb: format_mb(comm_bytes as u64),
                r_avg_curve: curve,
                best_seed: best,
            }
        })
        .collect()
}

/// Writes, into `out`:
///
/// * `reward_curves.csv`: `episode,strategy,seed,r_avg`, one row per
///   completed cell and episode (episodes are 1-based);
/// * `summary.csv`: `strategy,n_ci,n_fa,rho_s,t_comp,comm_mb`, seed means,
///   `t_comp` blank when no run succeeded;
/// * `summary.json`: the same plus the mean curve and best seed.
///
/// Everything is recomputed from the per-cell `metrics.json` files.
pub fn emit_plot_data(manifests: &[RunManifest], out: &Path) -> Result<PlotFiles> {
    if manifests.is_empty() {
        return Err(Error::param("manifests", "at least one manifest is required"));
    }
    let mut runs = Vec::new();
    for m in manifests {
        for cell in &m.cells {
            if cell.status == CellStatus::Completed {
                let path = cell_dir(&m.output_dir, cell.strategy, cell.seed).join("metrics.json");
                runs.push((cell.strategy, load_metrics(&path)?));
            }
        }
    }
    let files = PlotFiles {
        reward_curves: out.join("reward_curves.csv"),
        summary_csv: out.join("summary.csv"),
        summary_json: out.join("summary.json"),
    };

    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&files.reward_curves)?));
    w.write_record(["episode", "strategy", "seed", "r_avg"])?;
    for (kind, m) in &runs {
        for (e, r) in m.r_avg_curve.iter().enumerate() {
            w.write_record([(e + 1).to_string(), kind.to_string(), m.seed.to_string(), r.to_string()])?;
        }
    }
    w.flush()?;

    let summary = summarize(&runs);
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&files.summary_csv)?));
    w.write_record(["strategy", "n_ci", "n_fa", "rho_s", "t_comp", "comm_mb"])?;
    for s in &summary {
        w.write_record([
            s.strategy.to_string(),
            s.n_ci.to_string(),
            s.n_fa.to_string(),
            s.rho_s.to_string(),
            s.t_comp.map(|t| t.to_string()).unwrap_or_default(),
            s.comm_mb.clone(),
        ])?;
    }
    w.flush()?;

    serde_json::to_writer_pretty(BufWriter::new(File::create(&files.summary_json)?), &summary)?;
    Ok(files)
}

/// `report --in <dir>`: regenerates the CSVs from a finished experiment.
pub fn report_dir(dir: &Path) -> Result<PlotFiles> {
    let mut manifest = RunManifest::load(dir)?;
    manifest.output_dir = dir.to_path_buf();
    emit_plot_data(&[manifest], dir)
}
