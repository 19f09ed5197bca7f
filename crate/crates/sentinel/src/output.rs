//! Result files of an experiment run.
//!
//! `emit_outputs` writes into one directory:
//!
//! - `config.txt`: the effective configuration, re-readable with `--config`.
//! - `curves_r<k>.csv`: detection curves of replication `k`.
//! - `curves_median.csv`: pointwise medians across replications.
//! - `centrality.csv`: every measure on the training graph of the first
//!   successful replication.
//! - `detection_r<k>.csv` and `infections_r<k>.csv`: per-node outcomes.
//! - `summary.txt`: final fractions, delays and ranking agreement.
//!
//! Curve times are seconds since injection. One run holds several
//! (method, anomaly rate, fraction) combinations, so curve and detection files
//! lead with those key columns.

use std::fmt::Write as _;
use std::path::Path;

use sentinel_core::centrality::{compute, CentralityReport, Measure};
use sentinel_core::experiment::{ClassifyMethod, ExperimentSummary, ReplicationResult, SimConfig};
use sentinel_core::netsim::SimTime;
use sentinel_core::NodeId;

use crate::config::echo_config;
use crate::error::{CliError, Result};

pub const CURVES_HEADER: &str = "method,anomaly_rate,fraction,time,central_fraction,noncentral_fraction";
pub const DETECTION_HEADER: &str = "anomaly_rate,method,fraction,node,is_central,first_detection_time";
pub const INFECTION_HEADER: &str = "anomaly_rate,node,infection_time";
pub const CENTRALITY_HEADER: &str = "node,measure,score,rank";

fn since(t: SimTime, origin: SimTime) -> SimTime {
    SimTime(t.as_nanos().saturating_sub(origin.as_nanos()))
}

fn push_curve(
    out: &mut String,
    key: (ClassifyMethod, f64, f64),
    times: &[SimTime],
    central: &[f64],
    noncentral: Option<&[f64]>,
    injection: SimTime,
) {
    let (method, rate, fraction) = key;
    for (i, (&t, c)) in times.iter().zip(central).enumerate() {
        let other = noncentral.and_then(|o| o.get(i)).map(|v| format!("{v:.6}")).unwrap_or_default();
        let _ = writeln!(out, "{method},{rate},{fraction},{},{c:.6},{other}", since(t, injection));
    }
}

pub fn format_replication_curves(config: &SimConfig, result: &ReplicationResult) -> String {
    let injection = SimTime::from_secs(config.injection_time);
    let mut out = format!("{CURVES_HEADER}\n");
    for (run, &rate) in result.attacks.iter().zip(&config.anomaly_rates) {
        for set in &run.curves {
            let c = &set.curves;
            push_curve(&mut out, (set.method, rate, set.fraction), &c.times, &c.central, c.noncentral.as_deref(), injection);
        }
    }
    out
}

pub fn format_median_curves(summary: &ExperimentSummary) -> String {
    let injection = SimTime::from_secs(summary.config.injection_time);
    let mut out = format!("{CURVES_HEADER}\n");
    for a in &summary.aggregates {
        push_curve(
            &mut out,
            (a.method, a.anomaly_rate, a.fraction),
            &a.times,
            &a.central,
            a.noncentral.as_deref(),
            injection,
        );
    }
    out
}

pub fn format_detection(config: &SimConfig, result: &ReplicationResult) -> String {
    let mut out = format!("{DETECTION_HEADER}\n");
    for (run, &rate) in result.attacks.iter().zip(&config.anomaly_rates) {
        for classified in &result.central_sets {
            for (v, first) in run.first_detection.iter().enumerate() {
                let central = u8::from(classified.set.contains(NodeId::from(v)));
                let time = first.map(|t| t.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{rate},{},{},{v},{central},{time}", classified.method, classified.set.fraction);
            }
        }
    }
    out
}

pub fn format_infections(config: &SimConfig, result: &ReplicationResult) -> String {
    let mut out = format!("{INFECTION_HEADER}\n");
    for (run, &rate) in result.attacks.iter().zip(&config.anomaly_rates) {
        for (v, t) in &run.infections {
            let _ = writeln!(out, "{rate},{v},{t}");
        }
    }
    out
}

pub fn format_centrality(reports: &[CentralityReport]) -> String {
    let mut out = format!("{CENTRALITY_HEADER}\n");
    for report in reports {
        for (v, (score, rank)) in report.scores.iter().zip(report.ranks()).enumerate() {
            let _ = writeln!(out, "{v},{},{score},{rank}", report.measure);
        }
    }
    out
}

/// The replication's own IC report followed by the classic measures.
fn centrality_reports(result: &ReplicationResult) -> Result<Vec<CentralityReport>> {
    let mut reports = vec![result.ic.clone()];
    for measure in [Measure::Closeness, Measure::Betweenness, Measure::Eigenvector, Measure::Degree] {
        reports.push(compute(&result.observed, measure)?);
    }
    Ok(reports)
}

fn opt(v: Option<f64>, unit: &str) -> String {
    v.map(|x| format!("{x:.6}{unit}")).unwrap_or_else(|| "n/a".into())
}

pub fn format_summary(summary: &ExperimentSummary) -> String {
    let config = &summary.config;
    let ok = summary.successes().count();
    let mut out = String::new();
    let _ = writeln!(out, "replications: {ok} succeeded, {} failed", summary.replications.len() - ok);
    for failure in summary.replications.iter().filter_map(|r| r.as_ref().err()) {
        let _ = writeln!(out, "replication {} failed: {}", failure.index, failure.error);
    }
    let _ = writeln!(out, "median spearman rho, ic vs arrival time: {}", opt(summary.median_rank_correlation, ""));
    for (fraction, overlap) in &summary.median_overlaps {
        let _ = writeln!(out, "median top-set overlap at fraction {fraction}: {overlap:.6}");
    }
    for &fraction in &config.central_fractions {
        for &rate in &config.anomaly_rates {
            let _ = writeln!(out, "\n[fraction {fraction}, anomaly rate {rate} bit/s]");
            for method in ClassifyMethod::ALL {
                let Some(a) = summary.aggregate(method, fraction, rate) else { continue };
                let _ = writeln!(
                    out,
                    "{method}: final central {:.6}, final non-central {}, median delay central {}, non-central {}",
                    a.final_central,
                    opt(a.final_noncentral, ""),
                    opt(a.median_delay_central, " s"),
                    opt(a.median_delay_noncentral, " s"),
                );
            }
        }
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}

pub fn emit_outputs(summary: &ExperimentSummary, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let config = &summary.config;
    write(out_dir, "config.txt", &echo_config(config))?;
    for result in summary.successes() {
        let k = result.index;
        write(out_dir, &format!("curves_r{k}.csv"), &format_replication_curves(config, result))?;
        write(out_dir, &format!("detection_r{k}.csv"), &format_detection(config, result))?;
        write(out_dir, &format!("infections_r{k}.csv"), &format_infections(config, result))?;
    }
    write(out_dir, "curves_median.csv", &format_median_curves(summary))?;
    let reports = match summary.successes().next() {
        Some(first) => centrality_reports(first)?,
        None => Vec::new(),
    };
    write(out_dir, "centrality.csv", &format_centrality(&reports))?;
    write(out_dir, "summary.txt", &format_summary(summary))
}
