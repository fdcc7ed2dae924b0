mod common;

use proptest::prelude::*;

use imscale::cascade::{LiveEdgeWorlds, PropagationModel};
use imscale::centrality::{community_ranks, compute_centrality, CentralityKind};
use imscale::community::Partition;
use imscale::evaluate::{hypervolume_2d, pareto_filter, RefPoint};
use imscale::front::{dominates, Fitness};
use imscale::graph::{load_edge_list, write_edge_list};
use imscale::moea::{crowding_distance, fast_non_dominated_sort};
use imscale::{Graph, NodeId};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n)
            .prop_map(move |edges| Graph::from_edges(n, edges).expect("endpoints in range"))
    })
}

fn front_strategy(max: usize) -> impl Strategy<Value = Vec<Fitness>> {
    proptest::collection::vec((0.0..1.0f64, 0.0..=0.025f64), 0..max)
        .prop_map(|v| v.into_iter().map(|(i, s)| Fitness::new(i, s)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(30)) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = load_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn degrees_sum_to_twice_the_edges(g in graph_strategy(40)) {
        prop_assert_eq!(g.degree_sequence().iter().sum::<usize>(), 2 * g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(u != v);
            prop_assert!(g.has_edge(v, u));
        }
    }

    #[test]
    fn hypervolume_ignores_order(front in front_strategy(15), rot in 0usize..15) {
        let reference = RefPoint::default();
        let mut rotated = front.clone();
        if !rotated.is_empty() {
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            rotated.reverse();
        }
        let a = hypervolume_2d(&front, reference).unwrap();
        let b = hypervolume_2d(&rotated, reference).unwrap();
        prop_assert!((a - b).abs() <= 1e-15);
    }

    #[test]
    fn hypervolume_grows_with_points(front in front_strategy(15), i in 0.0..1.0f64, s in 0.0..=0.025f64) {
        let reference = RefPoint::default();
        let before = hypervolume_2d(&front, reference).unwrap();
        let mut more = front.clone();
        more.push(Fitness::new(i, s));
        prop_assert!(hypervolume_2d(&more, reference).unwrap() >= before - 1e-15);
        prop_assert!(before <= reference.seed_fraction);
    }

    #[test]
    fn pareto_filter_is_idempotent(front in front_strategy(30)) {
        let once = pareto_filter(&front);
        prop_assert_eq!(pareto_filter(&once), once.clone());
        for a in &once {
            prop_assert!(!front.iter().any(|b| dominates(*b, *a)));
        }
    }

    #[test]
    fn non_dominated_sort_matches_peeling(points in front_strategy(40)) {
        let mut fronts = fast_non_dominated_sort(&points);
        for f in fronts.iter_mut() {
            f.sort_unstable();
        }
        prop_assert_eq!(fronts.clone(), common::peel_fronts(&points));
        for f in &fronts {
            let got = crowding_distance(&points, f);
            let want = common::crowding_oracle(&points, f);
            for (a, b) in got.iter().zip(&want) {
                prop_assert!(a == b || (a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ranks_permute_each_community(g in graph_strategy(30), k in 1usize..5) {
        let labels: Vec<usize> = g.nodes().map(|v| v % k).collect();
        let p = Partition::from_assignment(&g, &labels).unwrap();
        for kind in [CentralityKind::Degree, CentralityKind::Pagerank, CentralityKind::Coreness] {
            let ranks = community_ranks(&compute_centrality(&g, kind), &p);
            for members in p.communities() {
                let mut r: Vec<usize> = members.iter().map(|&v| ranks[v]).collect();
                r.sort_unstable();
                prop_assert_eq!(r, (1..=members.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn coupled_cascades_are_monotone(g in graph_strategy(20), a in 0usize..20, b in 0usize..20, seed in any::<u64>()) {
        let n = g.node_count();
        let small: Vec<NodeId> = vec![a % n];
        let mut large = small.clone();
        if b % n != a % n {
            large.push(b % n);
        }
        for model in [PropagationModel::ic(0.3).unwrap(), PropagationModel::wc()] {
            let worlds = LiveEdgeWorlds::sample(&g, model, 20, seed);
            for w in 0..worlds.worlds() {
                let lo = worlds.simulate(&g, &small, w).unwrap().cascade_size;
                let hi = worlds.simulate(&g, &large, w).unwrap().cascade_size;
                prop_assert!(lo <= hi);
            }
        }
    }
}
