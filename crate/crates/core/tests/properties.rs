use proptest::prelude::*;

use rebel_core::cut::{is_stable, procedure2, Cut};
use rebel_core::dynamics::{associated_cut, is_regret_proof, simulate, Decision, Schedule};
use rebel_core::generate::random_connected;
use rebel_core::io::{read_edge_list_str, read_schedule, write_edge_list, write_schedule};
use rebel_core::mirror::{one_product_order, replay_one_product, run_algorithm1};
use rebel_core::mis::{exact_max_independent_set, greedy_maximal_independent_set};
use rebel_core::oracle::{brute_force, exact_optimum};
use rebel_core::peeling::peel;
use rebel_core::schedulers::{alpha_if_small, Algorithm};
use rebel_core::Graph;

fn connected(n: usize, mut p: f64, seed: u64) -> Graph {
    loop {
        if let Ok(g) = random_connected(n, p.min(1.0), seed) {
            return g;
        }
        p *= 1.5;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_algorithm_meets_its_bound(n in 2usize..45, p in 0.05f64..0.7, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let alpha = alpha_if_small(&g);
        for alg in Algorithm::ALL {
            let s = alg.run(&g).unwrap();
            let out = simulate(&g, &s).unwrap();
            prop_assert!(out.count(alg.objective()) >= alg.required(n, alpha), "{alg}");
            if alg.claims_regret_proof() {
                prop_assert!(is_regret_proof(&g, &s).unwrap().0, "{alg}");
                prop_assert!(is_stable(&g, &associated_cut(&g, &out)).0);
            }
        }
    }

    #[test]
    fn exact_search_matches_enumeration(n in 2usize..8, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let o = brute_force(&g).unwrap();
        for (d, opt) in [(Decision::Y, o.opt_y), (Decision::N, o.opt_n)] {
            let (best, s) = exact_optimum(&g, d).unwrap();
            prop_assert_eq!(best, opt);
            prop_assert_eq!(simulate(&g, &s).unwrap().count(d), best);
        }
    }

    #[test]
    fn procedure2_leaves_stable_majority_side(n in 2usize..50, p in 0.05f64..0.7, seed in any::<u64>(), mask in any::<u64>()) {
        let g = connected(n, p, seed);
        let in_s1: Vec<bool> = (0..n).map(|v| mask >> (v % 64) & 1 == 1).collect();
        let start = Cut::from_membership(&g, &in_s1);
        let (cut, log) = procedure2(&g, start.clone()).unwrap();
        prop_assert!(is_stable(&g, &cut).0);
        prop_assert!(2 * cut.s1_count() >= n);
        prop_assert!(cut.size() >= start.size());
        prop_assert!(log.type1_count <= g.m());
    }

    #[test]
    fn peeling_and_mirror_invariants(n in 2usize..50, p in 0.05f64..0.7, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let x = greedy_maximal_independent_set(&g);
        let d = peel(&g, &x).unwrap();
        prop_assert_eq!(d.check(&g), Ok(()));

        let pair = run_algorithm1(&g);
        prop_assert!(pair.mirror_property_holds());
        let s = Algorithm::Alg1.run(&g).unwrap();
        let order = one_product_order(&g, &s).unwrap();
        prop_assert!(replay_one_product(&g, &order));
    }

    #[test]
    fn files_round_trip(n in 2usize..40, p in 0.05f64..0.7, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let text = write_edge_list(&g);
        let back = read_edge_list_str(&text).unwrap();
        prop_assert_eq!(write_edge_list(&back), text);

        let s = Algorithm::Alg5.run(&g).unwrap();
        let written = write_schedule(&g, &s);
        let read = read_schedule(written.as_bytes(), &g).unwrap();
        prop_assert_eq!(read, s);
    }
}

#[test]
fn greedy_mis_never_beats_exact() {
    for seed in 0..30 {
        let g = connected(25, 0.15, seed);
        let (_, alpha) = exact_max_independent_set(&g).unwrap();
        assert!(greedy_maximal_independent_set(&g).len() <= alpha);
    }
}

#[test]
fn identity_schedule_on_path() {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let out = simulate(&g, &Schedule::identity(4)).unwrap();
    let letters: String = out.decisions().iter().map(|d| d.as_char()).collect();
    assert_eq!(letters, "YNYN");
}
