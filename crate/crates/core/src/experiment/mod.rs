//! Replicated experiments: train on clean traffic, pick central nodes, attack,
//! and compare how quickly central and non-central nodes notice.
//!
//! One topology is drawn from `rng_seed` and shared by every replication.
//! Replication `r` uses seed `rng_seed + r` for its traffic matrix and for the
//! attacker, and the same attacker stream for every anomaly rate so rates are
//! compared on matched seeds.

mod config;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use config::{ClassifyMethod, IcChoice, SimConfig};

use crate::centrality::{information_centrality, select_top, CentralSet, CentralityReport};
use crate::detector::{detect, detection_curves, fit_baseline, DetectionCurves, IntervalSeries};
use crate::graph::{NodeId, WeightedGraph};
use crate::netsim::{
    average_arrival_time, build_routing, generate_topology, Flow, InfectionLog, LinkCounter, RoutingTable, SimTime,
    Simulator, Topology,
};
use crate::stats;
use crate::threat::Adversary;
use crate::{Error, Result};

pub const FLOW_STREAM: u64 = 1;
pub const ATTACK_STREAM: u64 = 2;

/// Independent random stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Nodes by ascending mean arrival latency, ties (including the `+inf` of
/// nodes that saw nothing) by ascending id.
pub fn arrival_ranking(arrival: &[f64]) -> Vec<NodeId> {
    let mut order: Vec<usize> = (0..arrival.len()).collect();
    order.sort_by(|&a, &b| arrival[a].total_cmp(&arrival[b]).then(a.cmp(&b)));
    order.into_iter().map(NodeId::from).collect()
}

/// Training-phase outputs needed to classify nodes.
#[derive(Debug, Clone)]
pub struct ClassifierInputs<'a> {
    pub ic: &'a CentralityReport,
    pub arrival: &'a [f64],
}

pub fn classify_central(method: ClassifyMethod, inputs: &ClassifierInputs<'_>, fraction: f64) -> Result<CentralSet> {
    match method {
        ClassifyMethod::Ic => select_top(&inputs.ic.ranking, fraction),
        ClassifyMethod::ArrivalTime => select_top(&arrival_ranking(inputs.arrival), fraction),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankAgreement {
    /// Spearman correlation; 0 when degenerate.
    pub rho: f64,
    /// One of the rankings was constant.
    pub degenerate: bool,
}

/// Spearman correlation between the IC ranking (descending score) and the
/// arrival ranking (ascending latency). Ties share their average rank.
pub fn rank_agreement(ic: &CentralityReport, arrival: &[f64]) -> Result<RankAgreement> {
    if ic.scores.len() != arrival.len() {
        return Err(Error::config("rankings cover different node sets"));
    }
    let neg: Vec<f64> = ic.scores.iter().map(|s| -s).collect();
    let a = stats::fractional_ranks(&neg);
    let b = stats::fractional_ranks(arrival);
    Ok(match stats::pearson(&a, &b) {
        Some(rho) => RankAgreement { rho, degenerate: false },
        None => RankAgreement { rho: 0.0, degenerate: true },
    })
}

/// Fraction of `a`'s members also in `b`.
pub fn set_overlap(a: &CentralSet, b: &CentralSet) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.members.iter().filter(|&&v| b.contains(v)).count() as f64 / a.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedSet {
    pub method: ClassifyMethod,
    pub set: CentralSet,
}

/// State of a replication at the end of its training window.
#[derive(Debug, Clone)]
pub struct TrainedReplication {
    pub index: usize,
    pub seed: u64,
    pub flows: Vec<Flow>,
    pub observed: WeightedGraph,
    pub ic: CentralityReport,
    pub arrival: Vec<f64>,
    pub central_sets: Vec<ClassifiedSet>,
    /// Simulator state at the end of training.
    pub sim: Simulator,
    pub series: IntervalSeries,
}

/// Random source/destination pairs sharing the aggregate baseline load.
pub fn random_flows(config: &SimConfig, seed: u64) -> Vec<Flow> {
    let mut rng = stream_rng(seed, FLOW_STREAM);
    let n = config.n;
    let stop = config.sim_end();
    (0..config.flow_count)
        .map(|id| {
            let source = rng.gen_range(0..n);
            let mut destination = rng.gen_range(0..n - 1);
            if destination >= source {
                destination += 1;
            }
            let mut flow = Flow {
                id: id as u32,
                source: NodeId::from(source),
                destination: NodeId::from(destination),
                rate: config.per_flow_rate(),
                packet_size: config.packet_size,
                start: SimTime::ZERO,
                stop,
            };
            flow.start = SimTime(rng.gen_range(0..flow.gap().as_nanos()));
            flow
        })
        .collect()
}

/// Runs the clean training window of replication `index` and classifies nodes.
pub fn train_replication(
    config: &SimConfig,
    topology: &Topology,
    routing: &RoutingTable,
    index: usize,
) -> Result<TrainedReplication> {
    let seed = config.replication_seed(index);
    let flows = random_flows(config, seed);
    let mut sim = Simulator::new(routing.clone(), config.link_params())?;
    for f in &flows {
        sim.add_flow(f.clone())?;
    }
    let training_end = config.training_end();
    let mut series = IntervalSeries::new(config.n, config.interval(), config.sim_end())?;
    let mut links = LinkCounter::new(config.n, SimTime::ZERO, training_end);
    sim.run_until(training_end, &mut (&mut series, &mut links))?;

    let observed = links.to_graph(&topology.graph)?;
    let ic = information_centrality(&observed, config.ic_method())?;
    let arrival = average_arrival_time(sim.stats());
    let inputs = ClassifierInputs { ic: &ic, arrival: &arrival };
    let mut central_sets = Vec::new();
    for &fraction in &config.central_fractions {
        for method in ClassifyMethod::ALL {
            central_sets.push(ClassifiedSet { method, set: classify_central(method, &inputs, fraction)? });
        }
    }
    Ok(TrainedReplication { index, seed, flows, observed, ic, arrival, central_sets, sim, series })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conservation {
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub in_flight: u64,
    /// Every flow satisfies `sent = delivered + dropped + in_flight`.
    pub per_flow_balanced: bool,
}

impl Conservation {
    pub fn balanced(&self) -> bool {
        self.per_flow_balanced && self.sent == self.delivered + self.dropped + self.in_flight
    }
}

fn conservation(sim: &Simulator) -> Conservation {
    let in_flight = sim.in_flight();
    let mut per_flow_balanced = true;
    for (flow, c) in sim.flows() {
        let pending = in_flight.iter().find(|&&(id, _)| id == flow.id).map_or(0, |&(_, k)| k);
        per_flow_balanced &= c.sent == c.delivered + c.dropped + pending;
    }
    let t = sim.totals();
    Conservation {
        sent: t.sent,
        delivered: t.delivered,
        dropped: t.dropped,
        in_flight: in_flight.iter().map(|&(_, k)| k).sum(),
        per_flow_balanced,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub method: ClassifyMethod,
    pub fraction: f64,
    pub curves: DetectionCurves,
    /// Median seconds from injection to detection among detecting central nodes.
    pub median_delay_central: Option<f64>,
    pub median_delay_noncentral: Option<f64>,
}

/// One attacked (or clean) continuation of a trained replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// `None` for a clean run.
    pub anomaly_rate: Option<f64>,
    pub first_detection: Vec<Option<SimTime>>,
    pub infections: Vec<(NodeId, SimTime)>,
    pub conservation: Conservation,
    pub max_queue_occupancy: usize,
    pub events: u64,
    pub curves: Vec<CurveSet>,
}

fn median_delay(first: &[Option<SimTime>], injection: SimTime, keep: impl Fn(NodeId) -> bool) -> Option<f64> {
    let delays: Vec<f64> = first
        .iter()
        .enumerate()
        .filter(|&(v, _)| keep(NodeId::from(v)))
        .filter_map(|(_, t)| t.map(|t| t.as_secs() - injection.as_secs()))
        .collect();
    stats::median(&delays)
}

impl TrainedReplication {
    /// Continues to the end of the simulation, under attack at `anomaly_rate`
    /// or clean when `None`, and evaluates detection for every central set.
    pub fn continue_run(&self, config: &SimConfig, anomaly_rate: Option<f64>) -> Result<RunOutcome> {
        let mut sim = self.sim.clone();
        let mut series = self.series.clone();
        if let Some(rate) = anomaly_rate {
            let adversary = Adversary::new(config.attack(rate), config.n, stream_rng(self.seed, ATTACK_STREAM))?;
            sim.set_adversary(adversary)?;
        }
        let mut infections = InfectionLog::default();
        sim.run_until(config.sim_end(), &mut (&mut series, &mut infections))?;

        let baseline = fit_baseline(&series, config.training_end(), &config.detector_params())?;
        let first_detection = detect(&series, &baseline);
        let injection = SimTime::from_secs(config.injection_time);
        let curves = self
            .central_sets
            .iter()
            .map(|c| CurveSet {
                method: c.method,
                fraction: c.set.fraction,
                curves: detection_curves(&first_detection, &c.set, injection, config.interval(), config.sim_end()),
                median_delay_central: median_delay(&first_detection, injection, |v| c.set.contains(v)),
                median_delay_noncentral: median_delay(&first_detection, injection, |v| !c.set.contains(v)),
            })
            .collect();
        Ok(RunOutcome {
            anomaly_rate,
            first_detection,
            infections: infections.0,
            conservation: conservation(&sim),
            max_queue_occupancy: sim.max_occupancy(),
            events: sim.totals().events,
            curves,
        })
    }

    pub fn central_set(&self, method: ClassifyMethod, fraction: f64) -> Option<&CentralSet> {
        self.central_sets.iter().find(|c| c.method == method && c.set.fraction == fraction).map(|c| &c.set)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub index: usize,
    pub seed: u64,
    /// Communication graph of the training window.
    pub observed: WeightedGraph,
    pub ic: CentralityReport,
    pub arrival: Vec<f64>,
    pub central_sets: Vec<ClassifiedSet>,
    pub agreement: RankAgreement,
    /// `(fraction, share of the IC set also in the arrival-time set)`.
    pub overlaps: Vec<(f64, f64)>,
    /// One per configured anomaly rate, in config order.
    pub attacks: Vec<RunOutcome>,
}

pub fn run_replication(
    config: &SimConfig,
    topology: &Topology,
    routing: &RoutingTable,
    index: usize,
) -> Result<ReplicationResult> {
    let trained = train_replication(config, topology, routing, index)?;
    let agreement = rank_agreement(&trained.ic, &trained.arrival)?;
    let overlaps = config
        .central_fractions
        .iter()
        .map(|&f| {
            let ic = trained.central_set(ClassifyMethod::Ic, f).expect("classified");
            let at = trained.central_set(ClassifyMethod::ArrivalTime, f).expect("classified");
            (f, set_overlap(ic, at))
        })
        .collect();
    let attacks = config
        .anomaly_rates
        .iter()
        .map(|&rate| trained.continue_run(config, Some(rate)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationResult {
        index,
        seed: trained.seed,
        observed: trained.observed,
        ic: trained.ic,
        arrival: trained.arrival,
        central_sets: trained.central_sets,
        agreement,
        overlaps,
        attacks,
    })
}

/// Pointwise medians across replications for one (method, fraction, rate).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurves {
    pub method: ClassifyMethod,
    pub fraction: f64,
    pub anomaly_rate: f64,
    pub times: Vec<SimTime>,
    pub central: Vec<f64>,
    pub noncentral: Option<Vec<f64>>,
    pub final_central: f64,
    pub final_noncentral: Option<f64>,
    pub median_delay_central: Option<f64>,
    pub median_delay_noncentral: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationFailure {
    pub index: usize,
    pub error: Error,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub config: SimConfig,
    pub topology: Topology,
    pub replications: Vec<core::result::Result<ReplicationResult, ReplicationFailure>>,
    pub aggregates: Vec<AggregateCurves>,
    pub median_rank_correlation: Option<f64>,
    /// `(fraction, median overlap)`.
    pub median_overlaps: Vec<(f64, f64)>,
}

impl ExperimentSummary {
    pub fn successes(&self) -> impl Iterator<Item = &ReplicationResult> {
        self.replications.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn aggregate(&self, method: ClassifyMethod, fraction: f64, anomaly_rate: f64) -> Option<&AggregateCurves> {
        self.aggregates
            .iter()
            .find(|a| a.method == method && a.fraction == fraction && a.anomaly_rate == anomaly_rate)
    }
}

fn pointwise_median(rows: &[&[f64]]) -> Vec<f64> {
    let len = rows.iter().map(|r| r.len()).min().unwrap_or(0);
    (0..len)
        .map(|i| stats::median(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()).unwrap_or(0.0))
        .collect()
}

fn aggregate(config: &SimConfig, results: &[&ReplicationResult]) -> Vec<AggregateCurves> {
    let mut out = Vec::new();
    for (rate_idx, &rate) in config.anomaly_rates.iter().enumerate() {
        for &fraction in &config.central_fractions {
            for method in ClassifyMethod::ALL {
                let sets: Vec<&CurveSet> = results
                    .iter()
                    .filter_map(|r| {
                        r.attacks[rate_idx].curves.iter().find(|c| c.method == method && c.fraction == fraction)
                    })
                    .collect();
                let central_rows: Vec<&[f64]> = sets.iter().map(|c| c.curves.central.as_slice()).collect();
                let other_rows: Vec<&[f64]> = sets.iter().filter_map(|c| c.curves.noncentral.as_deref()).collect();
                let central = pointwise_median(&central_rows);
                let noncentral = (!other_rows.is_empty()).then(|| pointwise_median(&other_rows));
                let finals_c: Vec<f64> = sets.iter().map(|c| c.curves.final_central()).collect();
                let finals_o: Vec<f64> = sets.iter().filter_map(|c| c.curves.final_noncentral()).collect();
                let delays_c: Vec<f64> = sets.iter().filter_map(|c| c.median_delay_central).collect();
                let delays_o: Vec<f64> = sets.iter().filter_map(|c| c.median_delay_noncentral).collect();
                out.push(AggregateCurves {
                    method,
                    fraction,
                    anomaly_rate: rate,
                    times: sets.first().map(|c| c.curves.times.clone()).unwrap_or_default(),
                    central,
                    noncentral,
                    final_central: stats::median(&finals_c).unwrap_or(0.0),
                    final_noncentral: stats::median(&finals_o),
                    median_delay_central: stats::median(&delays_c),
                    median_delay_noncentral: stats::median(&delays_o),
                });
            }
        }
    }
    out
}

/// Runs every replication of `config` in index order.
pub fn run_experiment(config: &SimConfig) -> Result<ExperimentSummary> {
    run_experiment_with(config, |_, _| {})
}

/// As [`run_experiment`], reporting each finished replication to `progress`.
pub fn run_experiment_with(
    config: &SimConfig,
    mut progress: impl FnMut(usize, &core::result::Result<ReplicationResult, ReplicationFailure>),
) -> Result<ExperimentSummary> {
    config.validate()?;
    let topology = generate_topology(config.n, config.side, config.radio_range, config.rng_seed)?;
    let routing = build_routing(&topology.graph)?;
    let mut replications = Vec::with_capacity(config.replications);
    for r in 0..config.replications {
        let result = run_replication(config, &topology, &routing, r).map_err(|error| ReplicationFailure { index: r, error });
        progress(r, &result);
        replications.push(result);
    }
    let ok: Vec<&ReplicationResult> = replications.iter().filter_map(|r| r.as_ref().ok()).collect();
    let aggregates = aggregate(config, &ok);
    let rhos: Vec<f64> = ok.iter().map(|r| r.agreement.rho).collect();
    let median_overlaps = config
        .central_fractions
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, stats::median(&ok.iter().map(|r| r.overlaps[i].1).collect::<Vec<_>>()).unwrap_or(0.0)))
        .collect();
    Ok(ExperimentSummary {
        config: config.clone(),
        topology,
        replications,
        aggregates,
        median_rank_correlation: stats::median(&rhos),
        median_overlaps,
    })
}
