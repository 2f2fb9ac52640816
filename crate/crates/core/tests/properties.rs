mod common;

use proptest::prelude::*;
use sbm_frechet::frechet::invert_resistance;
use sbm_frechet::graph::pairs;
use sbm_frechet::metrics::{effective_resistance_combinatorial, resistance_matrix_distance_sq};
use sbm_frechet::*;

use common::*;

fn max_abs(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_equals_hamming_on_binary((a, b) in (2usize..=20).prop_flat_map(|n| (binary_graph(n), binary_graph(n)))) {
        let h = hamming(&a, &b).unwrap();
        prop_assert_eq!(delta(&a.to_weighted(), &b.to_weighted()).unwrap(), h as f64);
        prop_assert_eq!(hamming(&b, &a).unwrap(), h);
    }

    #[test]
    fn hamming_triangle_inequality((a, b, c) in (2usize..=12).prop_flat_map(|n| (binary_graph(n), binary_graph(n), binary_graph(n)))) {
        prop_assert!(hamming(&a, &c).unwrap() <= hamming(&a, &b).unwrap() + hamming(&b, &c).unwrap());
    }

    #[test]
    fn normalized_and_combinatorial_resistance_agree(a in connected_weighted(2, 30)) {
        let r = effective_resistance(&a).unwrap();
        let rc = effective_resistance_combinatorial(&a).unwrap();
        prop_assert!(max_abs(r.as_matrix(), rc.as_matrix()) <= 1e-9);
        prop_assert!(max_abs(r.as_matrix(), &grounded_resistance(a.as_matrix())) <= 1e-9);
    }

    #[test]
    fn resistance_triangle_inequality(a in connected_weighted(3, 15)) {
        let r = effective_resistance(&a).unwrap();
        let n = a.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    prop_assert!(r.get(i, k) <= r.get(i, j) + r.get(j, k) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn adding_an_edge_never_increases_resistance(a in connected_weighted(3, 12), pick in any::<prop::sample::Index>(), w in 0.1f64..2.0) {
        let n = a.n();
        let all: Vec<(usize, usize)> = pairs(n).collect();
        let (i, j) = all[pick.index(all.len())];
        let mut m = a.as_matrix().clone();
        m[(i, j)] += w;
        m[(j, i)] += w;
        let heavier = WeightedAdjacency::new(m).unwrap();
        let before = effective_resistance(&a).unwrap();
        let after = effective_resistance(&heavier).unwrap();
        for (u, v) in pairs(n) {
            prop_assert!(after.get(u, v) <= before.get(u, v) + 1e-12);
        }
    }

    #[test]
    fn resistance_distance_is_symmetric((a, b) in (2usize..=10).prop_flat_map(|n| (connected_weighted(n, n), connected_weighted(n, n)))) {
        let ab = resistance_distance_sq(&a, &b).unwrap();
        let ba = resistance_distance_sq(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(resistance_distance_sq(&a, &a).unwrap(), 0.0);
        let (ra, rb) = (effective_resistance(&a).unwrap(), effective_resistance(&b).unwrap());
        prop_assert_eq!(ab == 0.0, ra == rb);
        prop_assert_eq!(resistance_matrix_distance_sq(&ra, &rb).unwrap(), ab);
    }

    #[test]
    fn frechet_identity_holds((b, sample) in graph_and_sample(10, 50)) {
        let d = decompose_frechet(&b, &sample).unwrap();
        prop_assert!(d.identity_residual() <= 1e-9 * d.f2.max(1.0), "{:?}", d);
        let (fhat, zeta) = decomposition_by_moments(&b, &sample);
        prop_assert!((d.fhat - fhat).abs() <= 1e-9 * fhat.abs().max(1.0));
        prop_assert!((d.zeta - zeta).abs() <= 1e-9 * zeta.abs().max(1.0));
    }

    #[test]
    fn majority_median_minimizes_the_median_function((_, sample) in graph_and_sample(5, 9)) {
        let n = sample.n();
        let median = majority_median(&sample);
        let at_median = frechet_function_median(&median, &sample).unwrap();
        for m in 0..1u64 << (n * (n - 1) / 2) {
            let b = BinaryAdjacency::from_mask(n, m);
            prop_assert!(at_median <= frechet_function_median(&b, &sample).unwrap() + 1e-12);
        }
    }

    #[test]
    fn brute_force_mean_is_no_worse_than_the_median((_, sample) in graph_and_sample(5, 9)) {
        let best = brute_force_frechet_mean(&sample, FrechetMetric::Hamming).unwrap();
        let median = majority_median(&sample);
        prop_assert!(best.value <= frechet_function_hamming(&median, &sample).unwrap());
        for g in &best.minimizers {
            prop_assert_eq!(frechet_function_hamming(g, &sample).unwrap(), best.value);
        }
    }

    #[test]
    fn inversion_round_trip_for_two_alphas(a in connected_weighted(2, 25)) {
        let r = effective_resistance(&a).unwrap();
        let one = adjacency_from_resistance(&r, 1.0).unwrap();
        let seven = adjacency_from_resistance(&r, 7.0).unwrap();
        prop_assert!(max_abs(one.as_matrix(), a.as_matrix()) <= 1e-8);
        prop_assert!(max_abs(one.as_matrix(), seven.as_matrix()) <= 1e-8);
        prop_assert!(invert_resistance(&r, -3.0).unwrap().round_trip_residual <= 1e-8);
    }

    #[test]
    fn barycenter_of_copies_is_the_network(g in (3usize..=8).prop_flat_map(binary_graph), copies in 1usize..4) {
        prop_assume!(metrics::is_connected(&g.to_weighted()));
        let sample = NetworkSample::from_networks(vec![g.clone(); copies]).unwrap();
        let bary = resistance_barycenter(&sample, 1.0).unwrap();
        prop_assert!(max_abs(bary.reconstructed.as_matrix(), g.to_weighted().as_matrix()) <= 1e-8);
    }

    #[test]
    fn sampled_networks_are_valid(n in (1usize..=20).prop_map(|h| 2 * h), p in 0.0f64..=1.0, q in 0.0f64..=1.0, seed in any::<u64>()) {
        let params = SbmParams::new(n, p, q).unwrap();
        let sample = sample_sbm(&params, 3, seed).unwrap();
        prop_assert_eq!(&sample, &sample_sbm(&params, 3, seed).unwrap());
        for g in sample.iter() {
            for i in 0..n {
                prop_assert_eq!(g.get(i, i), 0);
                for j in 0..n {
                    prop_assert_eq!(g.get(i, j), g.get(j, i));
                }
            }
        }
    }

    #[test]
    fn moments_are_bounded((_, sample) in graph_and_sample(6, 12)) {
        let m = sample_moments(&sample);
        let n = sample.n();
        let all: Vec<(usize, usize)> = pairs(n).collect();
        for &e in &all {
            let pe = m.phat().get(e.0, e.1);
            prop_assert!((0.0..=1.0).contains(&pe));
            for &f in &all {
                let rho = m.rho(e, f);
                prop_assert!(rho >= 0.0 && rho <= pe.min(m.phat().get(f.0, f.1)) + 1e-15);
            }
        }
    }
}
