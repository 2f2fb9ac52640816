mod common;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use sbm_frechet::frechet::{residual_term, variance_inequality_ratio};
use sbm_frechet::graph::{pairs, sample_network};
use sbm_frechet::rng::split_seed;
use sbm_frechet::theory::predicted_resistance_values;
use sbm_frechet::*;

use common::*;

#[test]
fn grounded_oracle_agrees_on_series_parallel_circuits() {
    // Triangle: 1 in parallel with 1 + 1.
    let k3 = BinaryAdjacency::complete(3).to_weighted();
    let oracle = grounded_resistance(k3.as_matrix());
    let r = effective_resistance(&k3).unwrap();
    for (i, j) in pairs(3) {
        assert_abs_diff_eq!(oracle[(i, j)], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.get(i, j), 2.0 / 3.0, epsilon = 1e-12);
    }

    // Square 0-1-2-3-0 with a chord 0-2: R_02 = 1 ∥ 2 ∥ 2 = 1/2.
    let sq = BinaryAdjacency::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let r = effective_resistance(&sq.to_weighted()).unwrap();
    assert_abs_diff_eq!(r.get(0, 2), 0.5, epsilon = 1e-12);
    // R_13: two parallel 2-hop routes, bridged at their midpoints → 1.
    assert_abs_diff_eq!(r.get(1, 3), 1.0, epsilon = 1e-12);
}

#[test]
fn resistance_matches_grounded_oracle_on_sbm_draws() {
    let params = SbmParams::new(30, 0.6, 0.3).unwrap();
    for seed in 0..5 {
        let g = sample_network(&params, seed).to_weighted();
        let oracle = grounded_resistance(g.as_matrix());
        let r = effective_resistance(&g).unwrap();
        let err = (r.as_matrix() - &oracle).abs().max();
        assert!(err < 1e-9, "seed {seed}: {err:e}");
    }
}

#[test]
fn expansion_of_squared_hamming_distance() {
    let params = SbmParams::new(6, 0.5, 0.4).unwrap();
    for t in 0..50 {
        let a = sample_network(&params, split_seed(1, t));
        let b = sample_network(&params, split_seed(2, t));
        let d = hamming(&a, &b).unwrap() as f64;
        assert_eq!(hamming_sq_expansion(&a, &b), d * d);
    }
}

#[test]
fn decomposition_matches_moment_oracle_n4_n5() {
    let params = SbmParams::new(4, 0.6, 0.3).unwrap();
    for seed in 0..20 {
        let sample = sample_sbm(&params, 5, seed).unwrap();
        let b = sample_network(&params, split_seed(seed, 99));
        let d = decompose_frechet(&b, &sample).unwrap();

        let direct: f64 = sample
            .iter()
            .map(|a| hamming_sq_expansion(a, &b))
            .sum::<f64>()
            / 5.0;
        assert_abs_diff_eq!(d.f2, direct, epsilon = 1e-12);

        let (fhat, zeta) = decomposition_by_moments(&b, &sample);
        assert_abs_diff_eq!(d.fhat, fhat, epsilon = 1e-9);
        assert_abs_diff_eq!(d.zeta, zeta, epsilon = 1e-9);
        assert!(d.identity_residual() <= 1e-9 * d.f2.max(1.0));
    }
}

#[test]
fn frechet_values_on_two_point_sample() {
    let empty = BinaryAdjacency::empty(3);
    let k3 = BinaryAdjacency::complete(3);
    let s = NetworkSample::from_networks(vec![empty.clone(), k3.clone()]).unwrap();
    assert_eq!(frechet_function_hamming(&empty, &s).unwrap(), 4.5);
    assert_eq!(frechet_function_hamming(&k3, &s).unwrap(), 4.5);
    assert_eq!(frechet_function_median(&empty, &s).unwrap(), 1.5);
    assert_eq!(majority_median(&s), k3);
}

/// Every graph on three vertices, scored by direct evaluation of
/// `(1/N) Σ d_H(B, A_k)²` with `d_H(B, empty) = e`, `d_H(B, K₃) = 3 − e`.
#[test]
fn enumeration_on_empty_and_triangle() {
    let s = NetworkSample::from_networks(vec![
        BinaryAdjacency::empty(3),
        BinaryAdjacency::complete(3),
    ])
    .unwrap();
    let by_hand = |e: f64| (e * e + (3.0 - e) * (3.0 - e)) / 2.0;
    // One or two edges: (1 + 4) / 2 = 2.5, the minimum; zero or three: 4.5.
    assert_eq!(by_hand(1.0), 2.5);
    assert_eq!(by_hand(2.0), 2.5);

    let best = brute_force_frechet_mean(&s, FrechetMetric::Hamming).unwrap();
    assert_eq!(best.value, 2.5);
    assert_eq!(best.candidates, 8);
    assert_eq!(best.minimizers.len(), 6);
    assert!(best
        .minimizers
        .iter()
        .all(|g| matches!(g.edge_count(), 1 | 2)));
    // The majority median (K₃) is not a minimizer of the squared function here.
    assert!(!best.minimizers.contains(&majority_median(&s)));
}

#[test]
fn brute_force_agrees_with_direct_enumeration() {
    // Five-vertex networks: drop the last vertex of six-vertex draws.
    let params = SbmParams::new(6, 0.7, 0.2).unwrap();
    for seed in 0..4 {
        let nets = sample_sbm(&params, 9, seed)
            .unwrap()
            .iter()
            .map(|g| {
                let rows: Vec<Vec<u8>> = (0..5)
                    .map(|i| (0..5).map(|j| g.get(i, j)).collect())
                    .collect();
                BinaryAdjacency::from_rows(&rows).unwrap()
            })
            .collect();
        let sample = NetworkSample::from_networks(nets).unwrap();
        let best = brute_force_frechet_mean(&sample, FrechetMetric::Hamming).unwrap();
        let mut values: Vec<(f64, BinaryAdjacency)> = (0..1u64 << 10)
            .map(|m| {
                let b = BinaryAdjacency::from_mask(5, m);
                let v = sample
                    .iter()
                    .map(|a| hamming_sq_expansion(a, &b))
                    .sum::<f64>()
                    / 9.0;
                (v, b)
            })
            .collect();
        values.sort_by(|x, y| x.0.total_cmp(&y.0));
        assert_eq!(best.value, values[0].0);
        let tied: Vec<_> = values
            .iter()
            .take_while(|(v, _)| *v == values[0].0)
            .map(|(_, b)| b.clone())
            .collect();
        let mut got = best.minimizers.clone();
        got.sort_by_key(|g| g.to_mask());
        let mut want = tied;
        want.sort_by_key(|g| g.to_mask());
        assert_eq!(got, want);
    }
}

#[test]
fn resistance_brute_force_on_a_single_network() {
    let g = BinaryAdjacency::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let s = NetworkSample::from_networks(vec![g.clone()]).unwrap();
    let best = brute_force_frechet_mean(&s, FrechetMetric::ResistanceSq).unwrap();
    assert_eq!(best.minimizers, vec![g]);
    assert_eq!(best.value, 0.0);
    // 38 of the 64 graphs on four labeled vertices are connected.
    assert_eq!(best.skipped_disconnected, 64 - 38);
}

/// Mean resistance of the block model `P`, taken from the closed form, maps
/// back onto `P` itself.
#[test]
fn predicted_resistance_is_the_resistance_of_p() {
    for (n, p, q) in [(50, 0.6, 0.2), (100, 0.5, 0.1), (200, 0.4, 0.05)] {
        let params = SbmParams::new(n, p, q).unwrap();
        let (within, across) = predicted_resistance_values(&params).unwrap();
        let r = effective_resistance(&expected_matrix(&params)).unwrap();
        let oracle = grounded_resistance(expected_matrix(&params).as_matrix());
        assert_abs_diff_eq!(r.get(0, 1), within, epsilon = 1e-12);
        assert_abs_diff_eq!(r.get(0, n - 1), across, epsilon = 1e-12);
        assert_abs_diff_eq!(oracle[(1, n - 2)], across, epsilon = 1e-10);
    }
}

#[test]
fn two_block_values_by_hand() {
    let params = SbmParams::new(100, 0.5, 0.1).unwrap();
    let (within, across) = predicted_resistance_values(&params).unwrap();
    assert_abs_diff_eq!(within, 4.0 / 60.0, epsilon = 1e-15);
    assert_abs_diff_eq!(
        across,
        4.0 / 60.0 + (0.4 / 0.6) * (4.0 / 1000.0),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(across, 0.069333, epsilon = 5e-7);
}

#[test]
fn variance_ratio_matches_direct_gap() {
    let params = SbmParams::new(4, 0.9, 0.1).unwrap();
    let sample = sample_sbm(&params, 15, 3).unwrap();
    let moments = sample_moments(&sample);
    let median = majority_median(&sample);
    let all: Vec<BinaryAdjacency> = (0..64).map(|m| BinaryAdjacency::from_mask(4, m)).collect();
    let ratio = variance_inequality_ratio(&median, &moments, &all).unwrap();

    let fhat = |b: &BinaryAdjacency| decomposition_by_moments(b, &sample).0;
    let base = fhat(&median);
    let direct = all
        .iter()
        .filter(|b| **b != median)
        .map(|b| {
            let l1 = 2.0 * hamming(b, &median).unwrap() as f64;
            (fhat(b) - base).abs() / (l1 * l1)
        })
        .fold(f64::INFINITY, f64::min);
    assert_abs_diff_eq!(ratio, direct, epsilon = 1e-9);
    assert!(ratio > 0.0);
}

#[test]
fn residual_vanishes_for_empty_and_complete_candidates() {
    let params = SbmParams::new(6, 0.5, 0.5).unwrap();
    let sample = sample_sbm(&params, 12, 8).unwrap();
    let moments = sample_moments(&sample);
    assert_eq!(
        residual_term(&BinaryAdjacency::empty(6), &moments).unwrap(),
        0.0
    );
    assert_eq!(
        residual_term(&BinaryAdjacency::complete(6), &moments).unwrap(),
        0.0
    );
}

#[test]
fn resistance_distance_examples() {
    let e1 = BinaryAdjacency::complete(2).to_weighted();
    let e2 = WeightedAdjacency::new(DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 0.0])).unwrap();
    assert_abs_diff_eq!(
        resistance_distance_sq(&e1, &e2).unwrap(),
        0.25,
        epsilon = 1e-12
    );
    let k3 = BinaryAdjacency::complete(3).to_weighted();
    assert_abs_diff_eq!(
        resistance_distance_sq(&path3().to_weighted(), &k3).unwrap(),
        2.0,
        epsilon = 1e-12
    );
}
