//! What nodes see: arrival latencies and per-link traffic.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Observer, SimTime, TraceEvent, TraceRecord};
use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

/// Running per-node counters over packets the node received or forwarded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeStats {
    pub packets_seen: u64,
    pub bytes_seen: u64,
    latency_sum_ns: u128,
}

impl NodeStats {
    pub fn observe(&mut self, size: u32, latency: SimTime) {
        self.packets_seen += 1;
        self.bytes_seen += u64::from(size);
        self.latency_sum_ns += u128::from(latency.as_nanos());
    }

    /// Mean of `arrival - origin`, in seconds.
    pub fn mean_latency(&self) -> Option<f64> {
        (self.packets_seen > 0).then(|| self.latency_sum_ns as f64 / 1e9 / self.packets_seen as f64)
    }
}

/// Mean arrival latency per node; `+inf` for nodes that saw nothing.
pub fn average_arrival_time(stats: &[NodeStats]) -> Vec<f64> {
    stats.iter().map(|s| s.mean_latency().unwrap_or(f64::INFINITY)).collect()
}

/// Weight given to links that carried nothing in the window.
pub const IDLE_LINK_WEIGHT: f64 = 1e-6;

/// Counts link traversals inside a time window by following each packet's
/// sequence of send/forward/receive records.
#[derive(Debug, Clone)]
pub struct LinkCounter {
    n: usize,
    start: SimTime,
    end: SimTime,
    last_seen: BTreeMap<u64, NodeId>,
    counts: Vec<u64>,
}

impl LinkCounter {
    pub fn new(n: usize, start: SimTime, end: SimTime) -> Self {
        Self { n, start, end, last_seen: BTreeMap::new(), counts: vec![0; n * n] }
    }

    /// Traversals of the undirected link `{a, b}` so far.
    pub fn count(&self, a: NodeId, b: NodeId) -> u64 {
        self.counts[a.index() * self.n + b.index()] + self.counts[b.index() * self.n + a.index()]
    }

    /// Link graph of `topology` reweighted by traversals per second.
    pub fn to_graph(&self, topology: &WeightedGraph) -> Result<WeightedGraph> {
        if topology.node_count() != self.n {
            return Err(Error::config("link counter sized for a different topology"));
        }
        let secs = (self.end - self.start).as_secs();
        WeightedGraph::from_edges(
            self.n,
            topology.edges().map(|e| {
                let rate = self.count(e.a, e.b) as f64 / secs;
                (e.a.index(), e.b.index(), rate.max(IDLE_LINK_WEIGHT))
            }),
        )
    }
}

impl Observer for LinkCounter {
    fn ignores_source_drops(&self) -> bool {
        true
    }

    fn record(&mut self, r: &TraceRecord) {
        if r.time >= self.end {
            if !self.last_seen.is_empty() {
                self.last_seen.clear();
            }
            return;
        }
        match r.event {
            TraceEvent::Send => {
                self.last_seen.insert(r.packet_id, r.node);
            }
            TraceEvent::Forward | TraceEvent::Receive => {
                let prev = if r.event == TraceEvent::Forward {
                    self.last_seen.insert(r.packet_id, r.node)
                } else {
                    self.last_seen.remove(&r.packet_id)
                };
                if let Some(prev) = prev {
                    if r.time >= self.start && prev.index() < self.n && r.node.index() < self.n {
                        self.counts[prev.index() * self.n + r.node.index()] += 1;
                    }
                }
            }
            TraceEvent::Drop => {
                self.last_seen.remove(&r.packet_id);
            }
        }
    }
}

/// Communication graph observed in `[t0, t1)`: topology links weighted by
/// packets per second, idle links at [`IDLE_LINK_WEIGHT`].
pub fn observed_comm_graph(
    trace: &[TraceRecord],
    topology: &WeightedGraph,
    t0: SimTime,
    t1: SimTime,
) -> Result<WeightedGraph> {
    if t1 <= t0 {
        return Err(Error::config("observation window must have positive length"));
    }
    let mut counter = LinkCounter::new(topology.node_count(), t0, t1);
    for r in trace {
        counter.record(r);
    }
    counter.to_graph(topology)
}
