use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::centrality::{IcMethod, Measure};
use crate::detector::DetectorParams;
use crate::netsim::{LinkParams, SimTime};
use crate::threat::AttackConfig;
use crate::{Error, Result};

/// How central nodes are picked after training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifyMethod {
    /// Descending information centrality of the observed communication graph.
    Ic,
    /// Ascending mean packet arrival latency.
    ArrivalTime,
}

impl ClassifyMethod {
    pub const ALL: [ClassifyMethod; 2] = [ClassifyMethod::Ic, ClassifyMethod::ArrivalTime];

    pub fn name(self) -> &'static str {
        match self {
            ClassifyMethod::Ic => "ic",
            ClassifyMethod::ArrivalTime => "arrival_time",
        }
    }
}

impl fmt::Display for ClassifyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which information-measure route the IC classifier uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcChoice {
    Exact,
    PathSum,
}

impl IcChoice {
    pub fn name(self) -> &'static str {
        match self {
            IcChoice::Exact => Measure::InformationExact.name(),
            IcChoice::PathSum => Measure::InformationPathSum.name(),
        }
    }
}

impl FromStr for IcChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Measure>()? {
            Measure::InformationExact => Ok(IcChoice::Exact),
            Measure::InformationPathSum => Ok(IcChoice::PathSum),
            other => Err(Error::Config(alloc::format!("`{other}` is not an information-centrality method"))),
        }
    }
}

/// Full parameterisation of an experiment. Times are in seconds, rates in
/// bits per second, sizes in bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub side: f64,
    pub radio_range: f64,
    pub sim_time: f64,
    pub replications: usize,
    pub flow_count: usize,
    /// Aggregate offered load of the normal flows, split evenly between them.
    pub baseline_rate: f64,
    pub packet_size: u32,
    pub queue_cap: usize,
    pub link_rate: f64,
    pub prop_delay: f64,
    pub t_train: f64,
    pub delta: f64,
    pub k: f64,
    pub floor_factor: f64,
    pub floor_bytes: f64,
    pub central_fractions: Vec<f64>,
    pub anomaly_rates: Vec<f64>,
    pub attack_packet_size: u32,
    pub t_seeds: usize,
    pub injection_time: f64,
    pub rng_seed: u64,
    pub max_hops: usize,
    pub ic_method: IcChoice,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 200,
            side: 100.0,
            radio_range: 15.0,
            sim_time: 900.0,
            replications: 100,
            flow_count: 35,
            baseline_rate: 0.5e6,
            packet_size: 512,
            queue_cap: 1000,
            link_rate: 1e6,
            prop_delay: 5e-6,
            t_train: 80.0,
            delta: 1.0,
            k: 5.0,
            floor_factor: 1.5,
            floor_bytes: 1.0,
            central_fractions: vec![0.15, 0.20],
            anomaly_rates: vec![10e6, 50e6],
            attack_packet_size: 512,
            t_seeds: 2,
            injection_time: 100.0,
            rng_seed: 1,
            max_hops: 8,
            ic_method: IcChoice::Exact,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(alloc::format!("{name} must be positive, got {v}")))
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::config("n must be at least 2"));
        }
        for (name, v) in [
            ("side", self.side),
            ("radio_range", self.radio_range),
            ("sim_time", self.sim_time),
            ("baseline_rate", self.baseline_rate),
            ("link_rate", self.link_rate),
            ("t_train", self.t_train),
            ("delta", self.delta),
            ("floor_factor", self.floor_factor),
        ] {
            positive(name, v)?;
        }
        for (name, v) in [("replications", self.replications), ("flow_count", self.flow_count), ("queue_cap", self.queue_cap), ("max_hops", self.max_hops)] {
            if v == 0 {
                return Err(Error::Config(alloc::format!("{name} must be positive")));
            }
        }
        if self.packet_size == 0 || self.attack_packet_size == 0 {
            return Err(Error::config("packet sizes must be positive"));
        }
        if !(self.prop_delay >= 0.0 && self.prop_delay.is_finite()) {
            return Err(Error::config("prop_delay must be non-negative"));
        }
        if !(self.k >= 0.0 && self.floor_bytes >= 0.0) {
            return Err(Error::config("k and floor_bytes must be non-negative"));
        }
        if !(self.t_train < self.injection_time && self.injection_time < self.sim_time) {
            return Err(Error::Config(alloc::format!(
                "need t_train < injection_time < sim_time, got {} / {} / {}",
                self.t_train,
                self.injection_time,
                self.sim_time
            )));
        }
        if self.central_fractions.is_empty() || self.anomaly_rates.is_empty() {
            return Err(Error::config("central_fractions and anomaly_rates must not be empty"));
        }
        for &f in &self.central_fractions {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Config(alloc::format!("central fraction {f} outside (0, 1]")));
            }
        }
        let per_flow = self.per_flow_rate();
        for &r in &self.anomaly_rates {
            positive("anomaly rate", r)?;
            if r <= per_flow {
                return Err(Error::Config(alloc::format!("anomaly rate {r} does not exceed the per-flow baseline {per_flow}")));
            }
        }
        if self.t_seeds == 0 || self.t_seeds > self.n {
            return Err(Error::Config(alloc::format!("t_seeds must lie in 1..={}", self.n)));
        }
        if self.training_intervals() < crate::detector::MIN_TRAINING_INTERVALS {
            return Err(Error::config("t_train must span at least 10 intervals"));
        }
        Ok(())
    }

    pub fn per_flow_rate(&self) -> f64 {
        self.baseline_rate / self.flow_count as f64
    }

    fn training_intervals(&self) -> usize {
        (self.t_train / self.delta + 1e-9) as usize
    }

    pub fn link_params(&self) -> LinkParams {
        LinkParams {
            link_rate: self.link_rate,
            prop_delay: SimTime::from_secs(self.prop_delay),
            queue_cap: self.queue_cap,
        }
    }

    pub fn detector_params(&self) -> DetectorParams {
        DetectorParams { k: self.k, floor_factor: self.floor_factor, floor_bytes: self.floor_bytes }
    }

    pub fn attack(&self, anomaly_rate: f64) -> AttackConfig {
        AttackConfig {
            t_seeds: self.t_seeds,
            injection_time: SimTime::from_secs(self.injection_time),
            anomaly_rate,
            gibberish_packet_size: self.attack_packet_size,
        }
    }

    pub fn ic_method(&self) -> IcMethod {
        match self.ic_method {
            IcChoice::Exact => IcMethod::Exact,
            IcChoice::PathSum => IcMethod::PathSum { max_hops: self.max_hops },
        }
    }

    pub fn sim_end(&self) -> SimTime {
        SimTime::from_secs(self.sim_time)
    }

    pub fn training_end(&self) -> SimTime {
        SimTime::from_secs(self.t_train)
    }

    pub fn interval(&self) -> SimTime {
        SimTime::from_secs(self.delta)
    }

    /// Seed of replication `r`.
    pub fn replication_seed(&self, r: usize) -> u64 {
        self.rng_seed.wrapping_add(r as u64)
    }
}
