#![allow(dead_code)]

use proptest::prelude::*;
use sentinel_core::WeightedGraph;

/// Random connected graph: a random spanning tree plus a random subset of the
/// remaining pairs, weights in [0.1, 10).
pub fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (min_n..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                proptest::collection::vec(proptest::bool::weighted(0.3), pairs),
                proptest::collection::vec(0.1f64..10.0, pairs),
            )
        })
        .prop_map(|(n, parents, extra, weights)| {
            let mut has = vec![vec![false; n]; n];
            for v in 1..n {
                let p = parents[v - 1].index(v);
                has[p][v] = true;
            }
            let mut k = 0;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if has[a][b] || extra[k] {
                        edges.push((a, b, weights[k]));
                    }
                    k += 1;
                }
            }
            WeightedGraph::from_edges(n, edges).unwrap()
        })
}

/// Effective resistance between `i` and `j` by grounding `j`, injecting a unit
/// current at `i` and reading the potential there. Plain Gaussian elimination
/// on the reduced Laplacian, independent of the library's matrix code.
pub fn effective_resistance(g: &WeightedGraph, i: usize, j: usize) -> f64 {
    let n = g.node_count();
    let keep: Vec<usize> = (0..n).filter(|&v| v != j).collect();
    let m = keep.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &u) in keep.iter().enumerate() {
        for e in g.edges() {
            let (x, y, w) = (e.a.index(), e.b.index(), e.weight);
            if x == u || y == u {
                a[r][r] += w;
                let other = if x == u { y } else { x };
                if let Some(c) = keep.iter().position(|&k| k == other) {
                    a[r][c] -= w;
                }
            }
        }
        if u == i {
            a[r][m] = 1.0;
        }
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, pivot);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let r = keep.iter().position(|&k| k == i).unwrap();
    a[r][m] / a[r][r]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
