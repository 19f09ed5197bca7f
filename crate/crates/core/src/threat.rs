//! The adversary.
//!
//! A static attacker corrupts `t` nodes at the injection time. An infected
//! node floods a random destination with a CBR flow of oversized payload, and
//! every packet that leaves an infected node carries the infection to each
//! safe node it reaches. Infection is absorbing.

use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::NodeId;
use crate::netsim::{Flow, SimTime, ANOMALY_FLOW_BASE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeState {
    Safe,
    Infected { since: SimTime },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackConfig {
    pub t_seeds: usize,
    pub injection_time: SimTime,
    /// bits per second, per infected node
    pub anomaly_rate: f64,
    /// bytes
    pub gibberish_packet_size: u32,
}

impl AttackConfig {
    pub fn validate(&self, node_count: usize) -> Result<()> {
        if self.t_seeds == 0 || self.t_seeds > node_count {
            return Err(Error::Config(alloc::format!(
                "t_seeds = {} must lie in 1..={node_count}",
                self.t_seeds
            )));
        }
        if !(self.anomaly_rate > 0.0 && self.anomaly_rate.is_finite()) {
            return Err(Error::config("anomaly rate must be positive"));
        }
        if self.gibberish_packet_size == 0 {
            return Err(Error::config("attack packet size must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStates(Vec<NodeState>);

impl NodeStates {
    pub fn all_safe(n: usize) -> Self {
        Self(alloc::vec![NodeState::Safe; n])
    }

    pub fn get(&self, v: NodeId) -> NodeState {
        self.0[v.index()]
    }

    #[inline]
    pub fn is_infected(&self, v: NodeId) -> bool {
        matches!(self.0[v.index()], NodeState::Infected { .. })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Infected nodes in ascending id order.
    pub fn infected(&self) -> impl Iterator<Item = (NodeId, SimTime)> + '_ {
        self.0.iter().enumerate().filter_map(|(i, s)| match *s {
            NodeState::Infected { since } => Some((NodeId::from(i), since)),
            NodeState::Safe => None,
        })
    }

    pub fn infected_count(&self) -> usize {
        self.infected().count()
    }

    /// Returns `true` if the node was safe.
    fn infect(&mut self, v: NodeId, time: SimTime) -> bool {
        match self.0[v.index()] {
            NodeState::Safe => {
                self.0[v.index()] = NodeState::Infected { since: time };
                true
            }
            NodeState::Infected { .. } => false,
        }
    }
}

/// Corrupts `t_seeds` distinct nodes chosen uniformly at random.
pub fn seed_attack(states: &mut NodeStates, attack: &AttackConfig, rng: &mut impl Rng) -> Result<Vec<NodeId>> {
    attack.validate(states.len())?;
    if states.infected_count() != 0 {
        return Err(Error::config("attack must start from an all-safe network"));
    }
    let mut seeds: Vec<NodeId> =
        index::sample(rng, states.len(), attack.t_seeds).into_iter().map(NodeId::from).collect();
    seeds.sort_unstable();
    for &v in &seeds {
        states.infect(v, attack.injection_time);
    }
    Ok(seeds)
}

/// Infects a safe `receiver` of a contaminated packet. Returns `true` on a new infection.
pub fn propagate_on_receive(states: &mut NodeStates, receiver: NodeId, sender_infected: bool, time: SimTime) -> bool {
    sender_infected && states.infect(receiver, time)
}

/// Uniform over the `n - 1` nodes other than `source`.
fn flood_target(source: NodeId, n: usize, rng: &mut impl Rng) -> NodeId {
    let mut dest = rng.gen_range(0..n - 1);
    if dest >= source.index() {
        dest += 1;
    }
    NodeId::from(dest)
}

fn flood_flow(id: u32, source: NodeId, destination: NodeId, since: SimTime, attack: &AttackConfig) -> Flow {
    Flow {
        id,
        source,
        destination,
        rate: attack.anomaly_rate,
        packet_size: attack.gibberish_packet_size,
        start: since,
        stop: SimTime::MAX,
    }
}

/// One flooding flow per infected node, from its infection time onward, in
/// ascending node order. Ids start at `first_id`.
pub fn inject_anomalous_flows(
    states: &NodeStates,
    attack: &AttackConfig,
    rng: &mut impl Rng,
    first_id: u32,
) -> Vec<Flow> {
    let n = states.len();
    if n < 2 {
        return Vec::new();
    }
    states
        .infected()
        .enumerate()
        .map(|(k, (v, since))| flood_flow(first_id + k as u32, v, flood_target(v, n, rng), since, attack))
        .collect()
}

/// Adversary state carried through a simulation run.
///
/// Seeds and every node's flooding destination are drawn up front, so two
/// runs from the same random stream differ only in what the configuration
/// changes (the anomaly rate, say) and not in who floods where. Node `v`'s
/// flooding flow has id `ANOMALY_FLOW_BASE + v`.
#[derive(Debug, Clone)]
pub struct Adversary {
    pub config: AttackConfig,
    states: NodeStates,
    seeds: Vec<NodeId>,
    targets: Vec<NodeId>,
}

impl Adversary {
    pub fn new(config: AttackConfig, node_count: usize, mut rng: ChaCha8Rng) -> Result<Self> {
        config.validate(node_count)?;
        if node_count < 2 {
            return Err(Error::config("an attack needs at least two nodes"));
        }
        let mut states = NodeStates::all_safe(node_count);
        let seeds = seed_attack(&mut states, &config, &mut rng)?;
        let targets = (0..node_count).map(|v| flood_target(NodeId::from(v), node_count, &mut rng)).collect();
        Ok(Self { config, states: NodeStates::all_safe(node_count), seeds, targets })
    }

    pub fn states(&self) -> &NodeStates {
        &self.states
    }

    #[inline]
    pub fn is_infected(&self, v: NodeId) -> bool {
        self.states.is_infected(v)
    }

    /// The nodes corrupted at injection time, ascending.
    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    /// Where `v` sends its flood once infected.
    pub fn target(&self, v: NodeId) -> NodeId {
        self.targets[v.index()]
    }

    fn flood(&self, v: NodeId, since: SimTime) -> Flow {
        flood_flow(ANOMALY_FLOW_BASE + v.0, v, self.targets[v.index()], since, &self.config)
    }

    /// Infects the seeds and returns their flooding flows.
    pub fn launch(&mut self) -> Result<(Vec<NodeId>, Vec<Flow>)> {
        if self.states.infected_count() != 0 {
            return Err(Error::config("attack already launched"));
        }
        let at = self.config.injection_time;
        let flows = self.seeds.iter().map(|&v| self.flood(v, at)).collect();
        for &v in &self.seeds {
            self.states.infect(v, at);
        }
        Ok((self.seeds.clone(), flows))
    }

    /// Called for each packet arrival; returns the new flooding flow if the
    /// receiver just became infected.
    pub fn on_arrival(&mut self, receiver: NodeId, contaminated: bool, time: SimTime) -> Option<Flow> {
        if !propagate_on_receive(&mut self.states, receiver, contaminated, time) {
            return None;
        }
        Some(self.flood(receiver, time))
    }
}
