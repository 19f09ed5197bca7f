use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sentinel_core::netsim::*;
use sentinel_core::threat::*;
use sentinel_core::{NodeId, WeightedGraph};

const N: usize = 6;

fn attack(t_seeds: usize, rate: f64) -> AttackConfig {
    AttackConfig { t_seeds, injection_time: SimTime::from_secs(2.0), anomaly_rate: rate, gibberish_packet_size: 512 }
}

/// Line 0-1-...-5 carrying a steady flow from 0 to 5, attacked at t = 2 s.
fn line_run(seed: u64, t_seeds: usize, rate: f64) -> (Vec<TraceRecord>, InfectionLog, Simulator) {
    let g = WeightedGraph::from_edges(N, (1..N).map(|v| (v - 1, v, 1.0))).unwrap();
    let routing = build_routing(&g).unwrap();
    let params = LinkParams { link_rate: 1e6, prop_delay: SimTime(5_000), queue_cap: 100 };
    let normal = Flow {
        id: 0,
        source: NodeId(0),
        destination: NodeId(N as u32 - 1),
        rate: 20e3,
        packet_size: 512,
        start: SimTime::ZERO,
        stop: SimTime::MAX,
    };
    let adversary = Adversary::new(attack(t_seeds, rate), N, ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let mut trace = Vec::new();
    let mut log = InfectionLog::default();
    let sim = run_simulation(routing, params, [normal], Some(adversary), SimTime::from_secs(10.0), &mut (&mut trace, &mut log))
        .unwrap();
    (trace, log, sim)
}

#[test]
fn everything_downstream_of_a_seed_gets_infected() {
    for seed in 0..20 {
        let (_, log, sim) = line_run(seed, 1, 200e3);
        let states = sim.adversary().unwrap().states();
        let times: BTreeMap<usize, SimTime> = log.0.iter().map(|&(v, t)| (v.index(), t)).collect();
        let first = log.0[0].0.index();
        for v in first..N {
            assert!(states.is_infected(NodeId::from(v)), "seed {seed}: node {v} safe, log {:?}", log.0);
        }
        // infection spreads hop by hop, never backwards in time
        for v in first + 1..N {
            assert!(times[&v] > times[&(v - 1)]);
        }
    }
}

#[test]
fn infection_only_grows() {
    for seed in 0..10 {
        let (trace, log, sim) = line_run(seed, 2, 400e3);
        assert!(log.0.windows(2).all(|w| w[0].1 <= w[1].1));
        let mut seen = std::collections::HashSet::new();
        assert!(log.0.iter().all(|(v, _)| seen.insert(*v)));
        let states = sim.adversary().unwrap().states();
        assert_eq!(states.infected_count(), log.0.len());
        for &(v, t) in &log.0 {
            assert_eq!(states.get(v), NodeState::Infected { since: t });
            assert!(t >= SimTime::from_secs(2.0));
        }
        assert!(trace.iter().filter(|r| r.time < SimTime::from_secs(2.0)).all(|r| r.flow_id < ANOMALY_FLOW_BASE));
    }
}

#[test]
fn attack_traffic_comes_only_from_infected_nodes() {
    let (trace, log, sim) = line_run(3, 1, 400e3);
    let since: BTreeMap<NodeId, SimTime> = log.0.iter().copied().collect();
    let anomalous: Vec<_> = sim.flows().filter(|(f, _)| f.is_anomalous()).map(|(f, _)| f.clone()).collect();
    assert_eq!(anomalous.len(), log.0.len());
    for f in &anomalous {
        assert_eq!(f.start, since[&f.source]);
        assert_eq!(f.rate, 400e3);
        assert_eq!(f.packet_size, 512);
    }
    for r in trace.iter().filter(|r| r.event == TraceEvent::Send && r.flow_id >= ANOMALY_FLOW_BASE) {
        assert!(r.time >= since[&r.node]);
    }
}

#[test]
fn seeding_everyone_infects_everyone_at_injection() {
    let mut states = NodeStates::all_safe(N);
    let a = attack(N, 1e6);
    let seeds = seed_attack(&mut states, &a, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(seeds.len(), N);
    assert!(states.infected().all(|(_, t)| t == a.injection_time));
    let flows = inject_anomalous_flows(&states, &a, &mut ChaCha8Rng::seed_from_u64(1), ANOMALY_FLOW_BASE);
    assert_eq!(flows.len(), N);
    assert!(flows.iter().all(|f| f.is_anomalous() && f.source != f.destination));
}

#[test]
fn too_many_or_no_seeds_is_a_config_error() {
    let mut states = NodeStates::all_safe(N);
    assert!(seed_attack(&mut states, &attack(0, 1e6), &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    assert!(seed_attack(&mut states, &attack(N + 1, 1e6), &mut ChaCha8Rng::seed_from_u64(1)).is_err());
}
