mod common;

use common::connected_graph;
use proptest::prelude::*;
use sentinel_core::{NodeId, Path, WeightedGraph};

/// A simple path obtained by walking from `start`, always stepping to the
/// `choice`-th unvisited neighbour.
fn walk(g: &WeightedGraph, start: usize, choices: &[usize]) -> Vec<usize> {
    let mut path = vec![start];
    for &c in choices {
        let tip = NodeId::from(*path.last().unwrap());
        let open: Vec<usize> =
            g.neighbors(tip).iter().map(|(u, _)| u.index()).filter(|u| !path.contains(u)).collect();
        if open.is_empty() {
            break;
        }
        path.push(open[c % open.len()]);
    }
    path
}

proptest! {
    #[test]
    fn extending_a_path_lengthens_it(g in connected_graph(2, 10), start in 0usize..10, choices in proptest::collection::vec(0usize..10, 1..10)) {
        let start = start % g.node_count();
        let path = walk(&g, start, &choices);
        prop_assume!(path.len() >= 3);
        for k in 2..path.len() {
            let shorter = g.path_length(&Path::from_indices(&path[..k]).unwrap()).unwrap();
            let longer = g.path_length(&Path::from_indices(&path[..k + 1]).unwrap()).unwrap();
            let w = g.weight(NodeId::from(path[k - 1]), NodeId::from(path[k])).unwrap();
            prop_assert!(longer > shorter);
            prop_assert!((longer - shorter - 1.0 / w).abs() < 1e-12 * longer);
        }
    }

    #[test]
    fn shortest_distances_form_a_metric(g in connected_graph(2, 10)) {
        let n = g.node_count();
        let d: Vec<Vec<f64>> = g.nodes().map(|v| g.distances_from(v)).collect();
        for i in 0..n {
            prop_assert_eq!(d[i][i], 0.0);
            for j in 0..n {
                prop_assert!((d[i][j] - d[j][i]).abs() <= 1e-12 * d[i][j].max(1.0));
                for k in 0..n {
                    prop_assert!(d[i][k] <= (d[i][j] + d[j][k]) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn shortest_distance_is_the_shortest_simple_path(g in connected_graph(2, 7)) {
        let n = g.node_count();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (NodeId::from(i), NodeId::from(j));
                let best = g
                    .simple_paths(a, b, n - 1)
                    .iter()
                    .map(|p| g.path_length(p).unwrap())
                    .fold(f64::INFINITY, f64::min);
                prop_assert!((g.shortest_distance(a, b).unwrap() - best).abs() <= 1e-12 * best);
            }
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in connected_graph(2, 12)) {
        let l = g.laplacian();
        let n = g.node_count();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| l[(i, j)]).sum();
            prop_assert!(row.abs() < 1e-12 * l[(i, i)].max(1.0));
            prop_assert!((l[(i, i)] - g.weighted_degree(NodeId::from(i))).abs() < 1e-12);
            for j in 0..n {
                prop_assert_eq!(l[(i, j)], l[(j, i)]);
            }
        }
    }

    #[test]
    fn doubling_weights_halves_lengths(g in connected_graph(2, 10), start in 0usize..10, choices in proptest::collection::vec(0usize..10, 1..10)) {
        let doubled = g.scaled(2.0).unwrap();
        let path = walk(&g, start % g.node_count(), &choices);
        prop_assume!(path.len() >= 2);
        let p = Path::from_indices(&path).unwrap();
        let (a, b) = (g.path_length(&p).unwrap(), doubled.path_length(&p).unwrap());
        prop_assert!((b - a / 2.0).abs() <= 1e-12 * a);
        for v in g.nodes() {
            for (x, y) in g.distances_from(v).iter().zip(doubled.distances_from(v)) {
                prop_assert!((y - x / 2.0).abs() <= 1e-12 * x.max(1.0));
            }
        }
    }
}

#[test]
fn relabeling_moves_edges_with_their_weights() {
    let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)]).unwrap();
    let perm: Vec<NodeId> = [3, 2, 1, 0].into_iter().map(NodeId).collect();
    let h = g.relabeled(&perm).unwrap();
    assert_eq!(h.weight(NodeId(3), NodeId(2)), Some(1.0));
    assert_eq!(h.weight(NodeId(1), NodeId(0)), Some(3.0));
    assert_eq!(h.edge_count(), 3);
}
