//! Closeness, betweenness, eigenvector and degree centrality.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{CentralityReport, Measure};
use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

pub const EIGENVECTOR_TOLERANCE: f64 = 1e-12;
pub const EIGENVECTOR_MAX_ITER: usize = 100_000;

/// Path costs within this relative distance count as equally short.
const GEODESIC_TIE: f64 = 1e-9;

fn require_connected(g: &WeightedGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::NotConnected)
    }
}

/// `1 / sum_j d(i, j)`, so that larger means more central.
pub fn closeness_centrality(g: &WeightedGraph) -> Result<CentralityReport> {
    require_connected(g)?;
    let scores = g
        .nodes()
        .map(|v| {
            let total: f64 = g.distances_from(v).iter().sum();
            if total > 0.0 {
                1.0 / total
            } else {
                0.0
            }
        })
        .collect();
    Ok(CentralityReport::new(Measure::Closeness, scores))
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= GEODESIC_TIE * a.abs().max(b.abs())
}

/// Brandes' algorithm over edge costs `1 / w`, endpoints excluded, each
/// unordered pair counted once.
pub fn betweenness_centrality(g: &WeightedGraph) -> Result<CentralityReport> {
    require_connected(g)?;
    let n = g.node_count();
    let mut score = vec![0.0; n];

    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();

    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        sigma.iter_mut().for_each(|x| *x = 0.0);
        delta.iter_mut().for_each(|x| *x = 0.0);
        settled.iter_mut().for_each(|x| *x = false);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        dist[s] = 0.0;
        sigma[s] = 1.0;
        heap.push(Entry { cost: 0.0, node: s });
        while let Some(Entry { cost, node: v }) = heap.pop() {
            if settled[v] || cost > dist[v] {
                continue;
            }
            settled[v] = true;
            order.push(v);
            for &(u, w) in g.neighbors(NodeId::from(v)) {
                let u = u.index();
                if settled[u] {
                    continue;
                }
                let alt = dist[v] + 1.0 / w;
                if dist[u].is_infinite() || (alt < dist[u] && !tied(alt, dist[u])) {
                    dist[u] = alt;
                    sigma[u] = sigma[v];
                    preds[u].clear();
                    preds[u].push(v);
                    heap.push(Entry { cost: alt, node: u });
                } else if tied(alt, dist[u]) {
                    sigma[u] += sigma[v];
                    preds[u].push(v);
                }
            }
        }

        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    for x in &mut score {
        *x /= 2.0;
    }
    Ok(CentralityReport::new(Measure::Betweenness, score))
}

/// Principal eigenvector of the weighted adjacency matrix, unit 2-norm.
///
/// Iterates with `A + I`, which has the same eigenvectors but a strictly
/// dominant eigenvalue on bipartite graphs, where plain power iteration
/// oscillates.
pub fn eigenvector_centrality(g: &WeightedGraph, tol: f64, max_iter: usize) -> Result<CentralityReport> {
    require_connected(g)?;
    let n = g.node_count();
    let mut x = vec![1.0 / libm::sqrt(n as f64); n];
    let mut next = vec![0.0; n];
    let mut gap = f64::INFINITY;
    for _ in 0..max_iter {
        for v in 0..n {
            next[v] = x[v] + g.neighbors(NodeId::from(v)).iter().map(|&(u, w)| w * x[u.index()]).sum::<f64>();
        }
        let norm = libm::sqrt(next.iter().map(|y| y * y).sum::<f64>());
        next.iter_mut().for_each(|y| *y /= norm);
        gap = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        core::mem::swap(&mut x, &mut next);
        if gap < tol {
            return Ok(CentralityReport::new(Measure::Eigenvector, x));
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, gap })
}

/// Weighted degree `sum_k w_ik`.
pub fn degree_centrality(g: &WeightedGraph) -> CentralityReport {
    CentralityReport::new(Measure::Degree, g.nodes().map(|v| g.weighted_degree(v)).collect())
}
