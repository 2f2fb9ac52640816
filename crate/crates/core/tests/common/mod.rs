#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use sbm_frechet::{BinaryAdjacency, NetworkSample, WeightedAdjacency};

/// Effective resistance by grounding vertex `j` and solving `L_red x = e_i`
/// with a Cholesky factorization: `R_ij = x_i`.
pub fn grounded_resistance(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut r = DMatrix::zeros(n, n);
    for j in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&v| v != j).collect();
        let m = n - 1;
        let lred = DMatrix::from_fn(m, m, |x, y| {
            let (u, v) = (keep[x], keep[y]);
            if u == v {
                a.row(u).sum()
            } else {
                -a[(u, v)]
            }
        });
        let chol = lred
            .cholesky()
            .expect("grounded Laplacian of a connected graph is positive definite");
        let inv = chol.inverse();
        for (x, &i) in keep.iter().enumerate() {
            r[(i, j)] = inv[(x, x)];
        }
    }
    r
}

/// Right side of the expansion
/// `d_H(A, B)² = m² + 2m(Σ_Ē a − Σ_E a) − 4 Σ_{Ē×E} a a' + (Σ a)²`,
/// with `E`, `Ē` the edges and non-edges of `B` and `m = |E|`.
pub fn hamming_sq_expansion(a: &BinaryAdjacency, b: &BinaryAdjacency) -> f64 {
    let m = b.edge_count() as f64;
    let on_edges = b.edges().filter(|&(i, j)| a.has_edge(i, j)).count() as f64;
    let on_non_edges = b.non_edges().filter(|&(i, j)| a.has_edge(i, j)).count() as f64;
    let total = a.edge_count() as f64;
    m * m + 2.0 * m * (on_non_edges - on_edges) - 4.0 * on_non_edges * on_edges + total * total
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `F̂(B)` as `δ(B, P̂)² + Var̂(S)` and `ζ_N(B)` as `−4 Cov̂(Y_E, Y_Ē)`, where
/// `S` is the edge count of a sample network and `Y_E`, `Y_Ē` its edges on the
/// edges and non-edges of `B` (biased 1/N moments).
pub fn decomposition_by_moments(b: &BinaryAdjacency, sample: &NetworkSample) -> (f64, f64) {
    let n = b.n();
    let count = sample.len() as f64;
    let mut delta = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let phat = sample.iter().filter(|a| a.has_edge(i, j)).count() as f64 / count;
            delta += if b.has_edge(i, j) { 1.0 - phat } else { phat };
        }
    }
    let s: Vec<f64> = sample.iter().map(|a| a.edge_count() as f64).collect();
    let ye: Vec<f64> = sample
        .iter()
        .map(|a| b.edges().filter(|&(i, j)| a.has_edge(i, j)).count() as f64)
        .collect();
    let ybar: Vec<f64> = sample
        .iter()
        .map(|a| b.non_edges().filter(|&(i, j)| a.has_edge(i, j)).count() as f64)
        .collect();
    let var_s = mean(&s.iter().map(|x| x * x).collect::<Vec<_>>()) - mean(&s).powi(2);
    let cov = mean(&ye.iter().zip(&ybar).map(|(x, y)| x * y).collect::<Vec<_>>())
        - mean(&ye) * mean(&ybar);
    (delta * delta + var_s, -4.0 * cov)
}

pub fn binary_graph(n: usize) -> impl Strategy<Value = BinaryAdjacency> {
    proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
        .prop_map(move |upper| BinaryAdjacency::from_upper(n, &upper).unwrap())
}

/// A graph together with a sample on the same vertex set.
pub fn graph_and_sample(
    max_n: usize,
    max_count: usize,
) -> impl Strategy<Value = (BinaryAdjacency, NetworkSample)> {
    (2..=max_n, 1..=max_count).prop_flat_map(|(n, count)| {
        (
            binary_graph(n),
            proptest::collection::vec(binary_graph(n), count)
                .prop_map(|nets| NetworkSample::from_networks(nets).unwrap()),
        )
    })
}

/// Connected weighted graph: a random spanning tree (vertex `k` attaches to an
/// earlier vertex) plus random extra edges, weights in `[0.1, 2]`.
pub fn connected_weighted(min_n: usize, max_n: usize) -> impl Strategy<Value = WeightedAdjacency> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec((any::<prop::sample::Index>(), 0.1f64..2.0), n - 1),
            proptest::collection::vec(prop::option::weighted(0.3, 0.1f64..2.0), pairs),
        )
            .prop_map(move |(tree, extra)| {
                let mut m = DMatrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if let Some(w) = extra[k] {
                            m[(i, j)] = w;
                            m[(j, i)] = w;
                        }
                        k += 1;
                    }
                }
                for (v, (parent, w)) in tree.into_iter().enumerate() {
                    let child = v + 1;
                    let p = parent.index(child);
                    m[(child, p)] = w;
                    m[(p, child)] = w;
                }
                WeightedAdjacency::new(m).unwrap()
            })
    })
}

pub fn path3() -> BinaryAdjacency {
    BinaryAdjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
}
