//! Per-node volume anomaly detection.
//!
//! Time is cut into fixed intervals and each node's volume is the number of
//! bytes it received or forwarded in an interval. A node learns the mean and
//! population standard deviation of its volume over the training window and
//! flags the first later interval whose volume exceeds
//! `max(mean + k * sigma, floor_factor * mean + floor_bytes)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::centrality::CentralSet;
use crate::graph::NodeId;
use crate::netsim::{Observer, SimTime, TraceRecord};
use crate::stats;
use crate::{Error, Result};

/// Bytes per node per interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSeries {
    pub delta: SimTime,
    volumes: Vec<Vec<u64>>,
}

impl IntervalSeries {
    /// `ceil(horizon / delta)` zeroed intervals for each of `n` nodes.
    pub fn new(n: usize, delta: SimTime, horizon: SimTime) -> Result<Self> {
        if delta == SimTime::ZERO {
            return Err(Error::config("interval length must be positive"));
        }
        let len = horizon.as_nanos().div_ceil(delta.as_nanos()) as usize;
        Ok(Self { delta, volumes: vec![vec![0; len]; n] })
    }

    pub fn node_count(&self) -> usize {
        self.volumes.len()
    }

    pub fn interval_count(&self) -> usize {
        self.volumes.first().map_or(0, Vec::len)
    }

    pub fn node(&self, v: NodeId) -> &[u64] {
        &self.volumes[v.index()]
    }

    pub fn interval_start(&self, m: usize) -> SimTime {
        SimTime(self.delta.as_nanos() * m as u64)
    }

    /// Adds `bytes` at `node` in the half-open interval containing `time`;
    /// times past the horizon are ignored.
    pub fn add(&mut self, node: NodeId, time: SimTime, bytes: u64) {
        let m = (time.as_nanos() / self.delta.as_nanos()) as usize;
        if let Some(slot) = self.volumes.get_mut(node.index()).and_then(|s| s.get_mut(m)) {
            *slot += bytes;
        }
    }
}

impl Observer for IntervalSeries {
    fn ignores_source_drops(&self) -> bool {
        true
    }

    #[inline]
    fn record(&mut self, r: &TraceRecord) {
        if r.event.is_arrival() {
            self.add(r.node, r.time, u64::from(r.size));
        }
    }
}

/// Sums received and forwarded bytes per node and interval.
pub fn aggregate_intervals(
    trace: &[TraceRecord],
    n: usize,
    delta: SimTime,
    horizon: SimTime,
) -> Result<IntervalSeries> {
    let mut series = IntervalSeries::new(n, delta, horizon)?;
    for r in trace {
        series.record(r);
    }
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Standard deviations above the mean.
    pub k: f64,
    pub floor_factor: f64,
    pub floor_bytes: f64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self { k: 5.0, floor_factor: 1.5, floor_bytes: 1.0 }
    }
}

/// Minimum number of whole training intervals.
pub const MIN_TRAINING_INTERVALS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Baseline {
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
    pub threshold: Vec<f64>,
    pub training_end: SimTime,
}

/// Learns thresholds from the intervals lying entirely in `[0, training_end)`.
pub fn fit_baseline(series: &IntervalSeries, training_end: SimTime, params: &DetectorParams) -> Result<Baseline> {
    let whole = (training_end.as_nanos() / series.delta.as_nanos()) as usize;
    let whole = whole.min(series.interval_count());
    if whole < MIN_TRAINING_INTERVALS {
        return Err(Error::Config(alloc::format!(
            "training window holds {whole} whole intervals, need at least {MIN_TRAINING_INTERVALS}"
        )));
    }
    let n = series.node_count();
    let (mut mean, mut std_dev, mut threshold) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut buf = Vec::with_capacity(whole);
    for v in 0..n {
        buf.clear();
        buf.extend(series.volumes[v][..whole].iter().map(|&b| b as f64));
        let mu = stats::mean(&buf).unwrap_or(0.0);
        let sigma = stats::std_dev(&buf).unwrap_or(0.0);
        mean.push(mu);
        std_dev.push(sigma);
        threshold.push((mu + params.k * sigma).max(params.floor_factor * mu + params.floor_bytes));
    }
    Ok(Baseline { mean, std_dev, threshold, training_end })
}

/// Start of the first interval beginning at or after training end whose volume
/// exceeds the node's threshold.
pub fn detect(series: &IntervalSeries, baseline: &Baseline) -> Vec<Option<SimTime>> {
    let first = baseline.training_end.as_nanos().div_ceil(series.delta.as_nanos()) as usize;
    series
        .volumes
        .iter()
        .zip(&baseline.threshold)
        .map(|(vols, &limit)| {
            vols.iter()
                .enumerate()
                .skip(first)
                .find(|&(_, &b)| b as f64 > limit)
                .map(|(m, _)| series.interval_start(m))
        })
        .collect()
}

/// Cumulative detection fractions of the central set and its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionCurves {
    /// Interval end times, absolute.
    pub times: Vec<SimTime>,
    pub central: Vec<f64>,
    /// `None` when every node is central.
    pub noncentral: Option<Vec<f64>>,
}

impl DetectionCurves {
    pub fn final_central(&self) -> f64 {
        self.central.last().copied().unwrap_or(0.0)
    }

    pub fn final_noncentral(&self) -> Option<f64> {
        self.noncentral.as_ref().map(|c| c.last().copied().unwrap_or(0.0))
    }
}

/// Samples, at the end of every interval starting at or after `injection_time`
/// and ending by `horizon`, the fraction of each group already flagged.
pub fn detection_curves(
    first_detection: &[Option<SimTime>],
    central: &CentralSet,
    injection_time: SimTime,
    delta: SimTime,
    horizon: SimTime,
) -> DetectionCurves {
    let d = delta.as_nanos();
    let mut flagged: Vec<(SimTime, bool)> = first_detection
        .iter()
        .enumerate()
        .filter_map(|(v, t)| t.map(|t| (t, central.contains(NodeId::from(v)))))
        .collect();
    flagged.sort_by_key(|&(t, _)| t);

    let n_central = first_detection.iter().enumerate().filter(|&(v, _)| central.contains(NodeId::from(v))).count();
    let n_other = first_detection.len() - n_central;

    let mut curves = DetectionCurves {
        times: Vec::new(),
        central: Vec::new(),
        noncentral: (n_other > 0).then(Vec::new),
    };
    let mut m = injection_time.as_nanos().div_ceil(d);
    let (mut hits_c, mut hits_o, mut next) = (0usize, 0usize, 0usize);
    while (m + 1) * d <= horizon.as_nanos() {
        let end = SimTime((m + 1) * d);
        while next < flagged.len() && flagged[next].0 <= end {
            if flagged[next].1 {
                hits_c += 1;
            } else {
                hits_o += 1;
            }
            next += 1;
        }
        curves.times.push(end);
        curves.central.push(if n_central > 0 { hits_c as f64 / n_central as f64 } else { 0.0 });
        if let Some(c) = &mut curves.noncentral {
            c.push(hits_o as f64 / n_other as f64);
        }
        m += 1;
    }
    curves
}
