//! Information centrality.
//!
//! The information measure between two nodes is the conductance between them
//! when every edge is a resistor of conductance `w`. A node's information
//! centrality is the harmonic mean of its measures to all nodes, with the
//! self-measure taken as infinite:
//!
//! ```text
//! 1 / I_i = (1 / n) * sum_{j != i} 1 / I_ij
//! ```
//!
//! Two routes to `I_ij` are provided. The exact one inverts `L + J` (Laplacian
//! plus the all-ones matrix) and reads off effective resistances. The path-sum
//! one adds the conductances `1 / len(P)` of all simple paths up to a hop cap,
//! which is exact when those paths share no edge and an approximation otherwise.

use alloc::vec;
use alloc::vec::Vec;

use super::{CentralityReport, Measure};
use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcMethod {
    Exact,
    PathSum { max_hops: usize },
}

impl IcMethod {
    pub fn measure(self) -> Measure {
        match self {
            IcMethod::Exact => Measure::InformationExact,
            IcMethod::PathSum { .. } => Measure::InformationPathSum,
        }
    }
}

/// Default hop cap for the path-sum approximation.
pub fn default_max_hops(n: usize) -> usize {
    n.saturating_sub(1).clamp(1, 8)
}

/// Symmetric table of pairwise information measures; the diagonal is `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationTable {
    n: usize,
    values: Vec<f64>,
}

impl InformationTable {
    fn new(n: usize) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = f64::INFINITY;
        }
        Self { n, values }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
        self.values[j * self.n + i] = v;
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.values[i.index() * self.n + j.index()]
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Harmonic-mean centrality of every node.
    pub fn centrality_scores(&self) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let resist: f64 = self.values[i * n..(i + 1) * n]
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| 1.0 / v)
                    .sum();
                n as f64 / resist
            })
            .collect()
    }
}

fn require_connected(g: &WeightedGraph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(Error::InvalidGraph(alloc::format!(
            "information centrality needs at least two nodes, got {}",
            g.node_count()
        )));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

/// `I_ij = 1 / (c_ii + c_jj - 2 c_ij)` with `C = (L + J)^-1`.
pub fn information_measure_exact(g: &WeightedGraph) -> Result<InformationTable> {
    require_connected(g)?;
    let n = g.node_count();
    let mut m = g.laplacian();
    m.add_constant(1.0);
    let c = m.inverse()?;
    let mut table = InformationTable::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let resistance = c[(i, i)] + c[(j, j)] - 2.0 * c[(i, j)];
            if !(resistance > 0.0 && resistance.is_finite()) {
                return Err(Error::Singular { column: j, pivot: resistance });
            }
            table.set(i, j, 1.0 / resistance);
        }
    }
    Ok(table)
}

/// `I_ij = sum_r 1 / len(P_ij(r))` over simple paths of at most `max_hops` edges.
pub fn information_measure_pathsum(g: &WeightedGraph, i: NodeId, j: NodeId, max_hops: usize) -> Result<f64> {
    let paths = g.simple_paths(i, j, max_hops);
    if paths.is_empty() {
        return Err(Error::NoPath(i, j, max_hops));
    }
    paths.iter().map(|p| g.path_length(p).map(|len| 1.0 / len)).sum()
}

pub fn information_table_pathsum(g: &WeightedGraph, max_hops: usize) -> Result<InformationTable> {
    require_connected(g)?;
    let n = g.node_count();
    let mut table = InformationTable::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = information_measure_pathsum(g, NodeId::from(i), NodeId::from(j), max_hops)?;
            table.set(i, j, v);
        }
    }
    Ok(table)
}

pub fn information_centrality(g: &WeightedGraph, method: IcMethod) -> Result<CentralityReport> {
    let table = match method {
        IcMethod::Exact => information_measure_exact(g)?,
        IcMethod::PathSum { max_hops } => information_table_pathsum(g, max_hops)?,
    };
    Ok(CentralityReport::new(method.measure(), table.centrality_scores()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1.0))).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn exact_on_unit_path() {
        // (L + J)^-1 = (1/9) [[6, 0, -3], [0, 3, 0], [-3, 0, 6]]
        let t = information_measure_exact(&unit(3, &[(0, 1), (1, 2)])).unwrap();
        assert!(close(t.get(NodeId(0), NodeId(1)), 1.0));
        assert!(close(t.get(NodeId(0), NodeId(2)), 0.5));
        assert!(close(t.get(NodeId(1), NodeId(2)), 1.0));
        assert_eq!(t.get(NodeId(1), NodeId(1)), f64::INFINITY);
    }

    #[test]
    fn exact_on_unit_triangle_and_single_edge() {
        let t = information_measure_exact(&unit(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(close(t.get(NodeId(i), NodeId(j)), 1.5));
        }
        let w = 3.7;
        let t = information_measure_exact(&WeightedGraph::from_edges(2, [(0, 1, w)]).unwrap()).unwrap();
        assert!(close(t.get(NodeId(0), NodeId(1)), w));
    }

    #[test]
    fn pathsum_examples() {
        let line = unit(3, &[(0, 1), (1, 2)]);
        assert!(close(information_measure_pathsum(&line, NodeId(0), NodeId(2), 2).unwrap(), 0.5));
        let tri = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(close(information_measure_pathsum(&tri, NodeId(0), NodeId(1), 2).unwrap(), 1.5));
        assert_eq!(
            information_measure_pathsum(&line, NodeId(0), NodeId(2), 1),
            Err(Error::NoPath(NodeId(0), NodeId(2), 1))
        );
    }

    #[test]
    fn three_disjoint_routes_add_as_conductances() {
        // i=0, j=1; routes 0-1, 0-2-1, 0-3-4-1 with weights giving lengths 1, 2.5, 0.75
        let g = WeightedGraph::from_edges(
            5,
            [(0, 1, 1.0), (0, 2, 1.0), (2, 1, 1.0 / 1.5), (0, 3, 4.0), (3, 4, 4.0), (4, 1, 4.0)],
        )
        .unwrap();
        let v = information_measure_pathsum(&g, NodeId(0), NodeId(1), 4).unwrap();
        assert!(close(v, 1.0 / 1.0 + 1.0 / 2.5 + 1.0 / 0.75));
    }

    #[test]
    fn centrality_examples() {
        let r = information_centrality(&unit(3, &[(0, 1), (1, 2)]), IcMethod::Exact).unwrap();
        assert!(close(r.scores[0], 1.0) && close(r.scores[1], 1.5) && close(r.scores[2], 1.0));
        assert_eq!(r.ranking[0], NodeId(1));

        let r = information_centrality(&unit(3, &[(0, 1), (1, 2), (0, 2)]), IcMethod::Exact).unwrap();
        assert!(r.scores.iter().all(|&s| close(s, 2.25)));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = unit(3, &[(0, 1)]);
        assert_eq!(information_measure_exact(&g), Err(Error::NotConnected));
        assert_eq!(information_centrality(&g, IcMethod::PathSum { max_hops: 2 }), Err(Error::NotConnected));
    }

    #[test]
    fn hop_cap_default() {
        assert_eq!(default_max_hops(3), 2);
        assert_eq!(default_max_hops(200), 8);
    }
}
