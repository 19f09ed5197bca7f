use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

pub const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

/// Static nodes placed in a square, linked when within radio range.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub positions: Vec<(f64, f64)>,
    pub side: f64,
    pub radio_range: f64,
    /// Unit-weight link graph.
    pub graph: WeightedGraph,
}

/// Uniform random placement in `[0, side]^2`, redrawn until the link graph is
/// connected.
pub fn generate_topology(n: usize, side: f64, radio_range: f64, rng_seed: u64) -> Result<Topology> {
    if n < 2 {
        return Err(Error::config("topology needs at least two nodes"));
    }
    if !(side > 0.0 && radio_range > 0.0) {
        return Err(Error::config("side and radio range must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let r2 = radio_range * radio_range;
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let positions: Vec<(f64, f64)> =
            (0..n).map(|_| (rng.gen_range(0.0..=side), rng.gen_range(0.0..=side))).collect();
        let mut graph = WeightedGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (positions[i].0 - positions[j].0, positions[i].1 - positions[j].1);
                if dx * dx + dy * dy <= r2 {
                    graph.add_edge(NodeId::from(i), NodeId::from(j), 1.0)?;
                }
            }
        }
        if graph.is_connected() {
            return Ok(Topology { positions, side, radio_range, graph });
        }
    }
    Err(Error::TopologyGeneration { attempts: MAX_PLACEMENT_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scale_is_connected_and_deterministic() {
        let a = generate_topology(200, 100.0, 15.0, 1).unwrap();
        let b = generate_topology(200, 100.0, 15.0, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.graph.is_connected());
        assert_eq!(a.positions.len(), 200);
        assert!(a.positions.iter().all(|&(x, y)| (0.0..=100.0).contains(&x) && (0.0..=100.0).contains(&y)));
        assert_ne!(a, generate_topology(200, 100.0, 15.0, 2).unwrap());
    }

    #[test]
    fn two_nodes_in_range_share_the_edge() {
        let t = generate_topology(2, 1.0, 2.0, 9).unwrap();
        assert_eq!(t.graph.edge_count(), 1);
    }

    #[test]
    fn tiny_range_fails() {
        assert_eq!(
            generate_topology(200, 100.0, 0.1, 1),
            Err(Error::TopologyGeneration { attempts: MAX_PLACEMENT_ATTEMPTS })
        );
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(generate_topology(1, 10.0, 1.0, 0), Err(Error::Config(_))));
        assert!(matches!(generate_topology(5, 0.0, 1.0, 0), Err(Error::Config(_))));
    }
}
