use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

/// All-pairs minimum-hop next-hop table over a static topology.
///
/// Among neighbours one hop closer to the destination the lowest id wins, so
/// routes are reproducible and loop-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTable {
    n: usize,
    /// `next[from * n + to]`; `u32::MAX` on the diagonal.
    next: Vec<u32>,
}

pub fn build_routing(topology: &WeightedGraph) -> Result<RoutingTable> {
    let n = topology.node_count();
    let mut next = vec![u32::MAX; n * n];
    for dest in topology.nodes() {
        let dist = topology.hop_distances(dest);
        for from in topology.nodes() {
            if from == dest {
                continue;
            }
            let d = dist[from.index()].ok_or(Error::NotConnected)?;
            // neighbour lists are sorted, so the first match has the lowest id
            let hop = topology
                .neighbors(from)
                .iter()
                .map(|&(u, _)| u)
                .find(|u| dist[u.index()] == Some(d - 1))
                .expect("a BFS predecessor exists");
            next[from.index() * n + dest.index()] = hop.0;
        }
    }
    Ok(RoutingTable { n, next })
}

impl RoutingTable {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `None` when `from == to`.
    #[inline]
    pub fn next_hop(&self, from: NodeId, to: NodeId) -> Option<NodeId> {
        match self.next[from.index() * self.n + to.index()] {
            u32::MAX => None,
            v => Some(NodeId(v)),
        }
    }

    /// Node sequence from `from` to `to`, both included.
    pub fn route(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        let mut path = vec![from];
        let mut at = from;
        while let Some(hop) = self.next_hop(at, to) {
            path.push(hop);
            at = hop;
        }
        path
    }
}
