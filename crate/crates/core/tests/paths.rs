use std::collections::{BTreeSet, VecDeque};

use netident_core::identify::{decide_node, Certificate, Status};
use netident_core::paths::{enumerate_path_sets, exists_constrained_set, max_disjoint_paths, Mode};
use netident_core::{DiGraph, NodeSet};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = DiGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| DiGraph::new(n, edges).unwrap())
    })
}

fn subset_of(n: usize) -> impl Strategy<Value = NodeSet> {
    proptest::collection::btree_set(1..=n, 0..=n).prop_map(|s| s.into_iter().collect())
}

fn graph_and_sets(max_n: usize) -> impl Strategy<Value = (DiGraph, NodeSet, NodeSet)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), subset_of(n), subset_of(n))
    })
}

/// Smallest vertex set whose removal leaves no path from `a` to `b`.
fn brute_force_cut(g: &DiGraph, a: &NodeSet, b: &NodeSet) -> usize {
    let n = g.n();
    let blocks = |cut: u32| {
        let alive = |v: usize| cut >> (v - 1) & 1 == 0;
        let mut seen = vec![false; n + 1];
        let mut queue: VecDeque<usize> = a.iter().filter(|&v| alive(v)).collect();
        queue.iter().for_each(|&v| seen[v] = true);
        while let Some(u) = queue.pop_front() {
            if b.contains(u) {
                return false;
            }
            for w in g.out_neighbors(u).unwrap().iter() {
                if alive(w) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        true
    };
    (0u32..1 << n)
        .filter(|&c| blocks(c))
        .map(|c| c.count_ones() as usize)
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flow_equals_min_vertex_cut((g, a, b) in graph_and_sets(7)) {
        let flow = max_disjoint_paths(&g, &a, &b).unwrap();
        prop_assert_eq!(flow.count, brute_force_cut(&g, &a, &b));
        prop_assert_eq!(flow.witness.len(), flow.count);
        prop_assert!(flow.witness.is_valid_in(&g));
        prop_assert!(flow.witness.start_nodes().is_subset(&a));
        prop_assert!(flow.witness.end_nodes().is_subset(&b));
    }

    #[test]
    fn flow_is_monotone_in_targets((g, a, b) in graph_and_sets(7), extra in 1usize..=7) {
        let extra = extra.min(g.n());
        let bigger = b.union(&NodeSet::from([extra]));
        let small = max_disjoint_paths(&g, &a, &b).unwrap().count;
        let large = max_disjoint_paths(&g, &a, &bigger).unwrap().count;
        prop_assert!(small <= large && large <= small + 1);
    }

    #[test]
    fn enumerated_sets_are_distinct_and_valid((g, a, b) in graph_and_sets(6), m in 1usize..=3) {
        let b = b.difference(&a);
        let sets = enumerate_path_sets(&g, &a, &b, m, 100_000, Mode::Subset).unwrap();
        let distinct: BTreeSet<_> = sets.iter().map(|s| s.edge_set()).collect();
        prop_assert_eq!(distinct.len(), sets.len());
        for s in &sets {
            prop_assert_eq!(s.len(), m);
            prop_assert!(s.is_valid_in(&g));
            prop_assert!(s.start_nodes().is_subset(&a));
            prop_assert!(s.end_nodes().is_subset(&b));
            for p in s.paths() {
                let inner = &p.vertices()[1..p.vertices().len() - 1];
                prop_assert!(inner.iter().all(|&v| !a.contains(v) && !b.contains(v)));
            }
        }
        let flow = max_disjoint_paths(&g, &a, &b).unwrap().count;
        prop_assert_eq!(sets.is_empty(), m > flow);
    }

    #[test]
    fn exact_mode_is_subset_mode_restricted((g, a, b) in graph_and_sets(6)) {
        let b = b.difference(&a);
        let m = a.len();
        prop_assume!(m > 0 && m <= 3);
        let exact = enumerate_path_sets(&g, &a, &b, m, 100_000, Mode::Exact).unwrap();
        let subset = enumerate_path_sets(&g, &a, &b, m, 100_000, Mode::Subset).unwrap();
        prop_assert_eq!(exact, subset);
    }

    #[test]
    fn constrained_witness_reverifies((g, a, b) in graph_and_sets(7)) {
        let m = max_disjoint_paths(&g, &a, &b).unwrap().count;
        if let Some(w) = exists_constrained_set(&g, &a, &b, m).unwrap() {
            prop_assert!(w.verify(&g).unwrap());
            prop_assert_eq!(w.enumeration_count, 1);
            prop_assert_eq!(w.path_set.len(), m);
        }
    }

    #[test]
    fn verdicts_carry_valid_certificates((g, c, _) in graph_and_sets(7), i in 1usize..=7) {
        let i = i.min(g.n());
        let v = decide_node(&g, i, &c).unwrap();
        prop_assert!(v.verify(&g, &c).unwrap());
        let m = v.out_neighbors.len();
        let flow = max_disjoint_paths(&g, &v.out_neighbors, &c).unwrap().count;
        match v.certificate {
            Certificate::PathDeficiency { .. } => prop_assert!(flow < m),
            Certificate::Constrained(_) | Certificate::None => prop_assert_eq!(flow, m),
        }
    }

    #[test]
    fn measuring_everything_identifies((g, _, _) in graph_and_sets(7), i in 1usize..=7) {
        let i = i.min(g.n());
        let v = decide_node(&g, i, &g.vertices()).unwrap();
        prop_assert_eq!(v.status, Status::Identifiable);
    }
}
