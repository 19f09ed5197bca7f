//! Weighted undirected graphs.
//!
//! Edge weights are communication frequencies (interactions per second), so
//! the cost of traversing an edge is `1 / w`: busy links are short.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Dense node index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub weight: f64,
}

/// Undirected graph with strictly positive edge weights and no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    /// Sorted by neighbour id.
    adj: Vec<Vec<(NodeId, f64)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (a, b, w) in edges {
            g.add_edge(NodeId::from(a), NodeId::from(b), w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId, weight: f64) -> Result<()> {
        let n = self.node_count();
        if a.index() >= n || b.index() >= n {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) outside 0..{n}")));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at {a}")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has weight {weight}")));
        }
        match self.adj[a.index()].binary_search_by_key(&b, |&(v, _)| v) {
            Ok(_) => return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})"))),
            Err(pos) => self.adj[a.index()].insert(pos, (b, weight)),
        }
        let pos = self.adj[b.index()].binary_search_by_key(&a, |&(v, _)| v).unwrap_err();
        self.adj[b.index()].insert(pos, (a, weight));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId::from)
    }

    /// Each undirected edge once, with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, nbrs)| {
            nbrs.iter()
                .filter(move |(b, _)| b.index() > a)
                .map(move |&(b, weight)| Edge { a: NodeId::from(a), b, weight })
        })
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adj[v.index()]
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let nbrs = self.adj.get(a.index())?;
        nbrs.binary_search_by_key(&b, |&(v, _)| v).ok().map(|i| nbrs[i].1)
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, v: NodeId) -> f64 {
        self.adj[v.index()].iter().map(|&(_, w)| w).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        self.hop_distances(NodeId(0)).iter().all(|d| d.is_some())
    }

    /// Unweighted BFS hop counts from `source`.
    pub fn hop_distances(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source.index()] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()].unwrap();
            for &(u, _) in self.neighbors(v) {
                if dist[u.index()].is_none() {
                    dist[u.index()] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Weighted length of a path: the sum of `1 / w(e)` over its edges.
    pub fn path_length(&self, path: &Path) -> Result<f64> {
        path.vertices()
            .windows(2)
            .map(|pair| self.weight(pair[0], pair[1]).map(|w| 1.0 / w).ok_or(Error::InvalidPath(pair[0], pair[1])))
            .sum()
    }

    /// Dijkstra over edge costs `1 / w`. Unreachable nodes stay at infinity.
    pub fn distances_from(&self, source: NodeId) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.node_count()];
        let mut heap = BinaryHeap::new();
        dist[source.index()] = 0.0;
        heap.push(Frontier { cost: 0.0, node: source });
        while let Some(Frontier { cost, node }) = heap.pop() {
            if cost > dist[node.index()] {
                continue;
            }
            for &(u, w) in self.neighbors(node) {
                let next = cost + 1.0 / w;
                if next < dist[u.index()] {
                    dist[u.index()] = next;
                    heap.push(Frontier { cost: next, node: u });
                }
            }
        }
        dist
    }

    pub fn shortest_distance(&self, i: NodeId, j: NodeId) -> Result<f64> {
        let d = self.distances_from(i)[j.index()];
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::Unreachable(i, j))
        }
    }

    /// Every simple path from `from` to `to` with at most `max_hops` edges,
    /// in lexicographic order of the vertex sequence.
    pub fn simple_paths(&self, from: NodeId, to: NodeId, max_hops: usize) -> Vec<Path> {
        let mut out = Vec::new();
        if from == to || max_hops == 0 {
            return out;
        }
        let mut on_path = vec![false; self.node_count()];
        let mut stack = vec![from];
        on_path[from.index()] = true;
        self.extend_paths(to, max_hops, &mut stack, &mut on_path, &mut out);
        out
    }

    fn extend_paths(
        &self,
        to: NodeId,
        max_hops: usize,
        stack: &mut Vec<NodeId>,
        on_path: &mut [bool],
        out: &mut Vec<Path>,
    ) {
        let tip = *stack.last().unwrap();
        for &(u, _) in self.neighbors(tip) {
            if on_path[u.index()] {
                continue;
            }
            if u == to {
                stack.push(u);
                out.push(Path(stack.clone()));
                stack.pop();
            } else if stack.len() < max_hops {
                stack.push(u);
                on_path[u.index()] = true;
                self.extend_paths(to, max_hops, stack, on_path, out);
                on_path[u.index()] = false;
                stack.pop();
            }
        }
    }

    /// Weighted Laplacian `L = D - W`.
    pub fn laplacian(&self) -> DenseMatrix {
        let n = self.node_count();
        let mut l = DenseMatrix::zeros(n);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &(j, w) in nbrs {
                l[(i, j.index())] = -w;
                l[(i, i)] += w;
            }
        }
        l
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_edges(self.node_count(), self.edges().map(|e| (e.a.index(), e.b.index(), e.weight * factor)))
    }

    /// Copy where node `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[NodeId]) -> Result<Self> {
        if perm.len() != self.node_count() {
            return Err(Error::InvalidGraph(format!("permutation of length {} for {} nodes", perm.len(), self.node_count())));
        }
        Self::from_edges(
            self.node_count(),
            self.edges().map(|e| (perm[e.a.index()].index(), perm[e.b.index()].index(), e.weight)),
        )
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    node: NodeId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, then on node id
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A simple path of at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<NodeId>);

impl Path {
    pub fn new(vertices: Vec<NodeId>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidGraph(format!("path needs at least two vertices, got {}", vertices.len())));
        }
        for (k, v) in vertices.iter().enumerate() {
            if vertices[..k].contains(v) {
                return Err(Error::InvalidGraph(format!("path revisits node {v}")));
            }
        }
        Ok(Self(vertices))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| NodeId::from(i)).collect())
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.0
    }

    pub fn hops(&self) -> usize {
        self.0.len() - 1
    }
}
