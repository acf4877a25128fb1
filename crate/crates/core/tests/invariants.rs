use proptest::prelude::*;
use qolab_core::auxgraph::aux_graph_with;
use qolab_core::corpus::random_graph;
use qolab_core::dilworth::{
    dichotomy, enumerate_antichains, min_chain_cover, width, width_and_antichain, DichotomyResult,
};
use qolab_core::g0::{dense_sequences, g0_level};
use qolab_core::procedures::paper_chain_cover;
use qolab_core::relation::{
    derive, interval, quotient, random_quasi_order, section, Derived, FiniteRelation, IntervalKind, QuasiOrder, Side,
};
use qolab_core::tree::{pruning_derivative, pruning_rank, FiniteTree};
use qolab_core::{Budget, Exec};

fn order(max_n: usize) -> impl Strategy<Value = QuasiOrder> {
    (0..=max_n, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, d, s)| random_quasi_order(n, d, s))
}

fn tree() -> impl Strategy<Value = FiniteTree> {
    (
        1usize..=3,
        prop::collection::vec(prop::collection::vec(0usize..3, 0..=4), 0..12),
    )
        .prop_map(|(k, seqs)| {
            let mut nodes = Vec::new();
            for s in seqs {
                let s: Vec<usize> = s.into_iter().map(|i| i % k).collect();
                for len in 0..=s.len() {
                    nodes.push(s[..len].to_vec());
                }
            }
            FiniteTree::new(k, nodes).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn comparability_splits_into_equivalence_and_strict_parts(q in order(12)) {
        let strict = derive(&q, Derived::Strict);
        let rebuilt = derive(&q, Derived::Equivalence).union(&strict).union(&strict.converse());
        prop_assert_eq!(derive(&q, Derived::Comparable), rebuilt);

        let comparable = derive(&q, Derived::Comparable);
        let off_diagonal = FiniteRelation::full(q.n()).difference(&FiniteRelation::identity(q.n()));
        prop_assert_eq!(derive(&q, Derived::Incomparable), off_diagonal.difference(&comparable));
    }

    #[test]
    fn quotient_classes_are_equivalence_classes(q in order(12)) {
        let p = quotient(&q);
        for u in 0..q.n() {
            for v in 0..q.n() {
                prop_assert_eq!(q.equivalent(u, v), p.class_of[u] == p.class_of[v]);
            }
        }
        prop_assert!(p.order.relation().is_antisymmetric());
        prop_assert_eq!(width(&q), width(&p.order));
    }

    #[test]
    fn closed_interval_is_a_section_intersection(q in order(10), x in 0usize..10, y in 0usize..10) {
        prop_assume!(x < q.n() && y < q.n());
        let up = section(q.relation(), x, Side::Vertical).unwrap();
        let down = section(q.relation(), y, Side::Horizontal).unwrap();
        let both: Vec<usize> = up.into_iter().filter(|v| down.contains(v)).collect();
        prop_assert_eq!(interval(&q, x, y, IntervalKind::Closed).unwrap(), both);
    }

    #[test]
    fn text_round_trips(q in order(12)) {
        let text = q.relation().to_text();
        prop_assert_eq!(QuasiOrder::parse(&text).unwrap(), q.clone());
        let noisy = format!("# header\n\n{}", text.replace('\n', "\n# note\n"));
        prop_assert_eq!(QuasiOrder::parse(&noisy).unwrap(), q);
    }

    #[test]
    fn chain_cover_size_equals_width(q in order(30)) {
        let (w, a) = width_and_antichain(&q);
        let cover = min_chain_cover(&q);
        prop_assert_eq!(cover.chains.len(), w);
        prop_assert!(cover.validate(&q).is_ok());
        prop_assert!(q.is_antichain(&a) && a.len() == w);
    }

    #[test]
    fn dichotomy_is_exclusive_and_exhaustive(q in order(10), k in 1usize..6) {
        let larger = enumerate_antichains(&q, k + 1, Budget::default()).unwrap();
        match dichotomy(&q, k, Budget::default()).unwrap() {
            DichotomyResult::Cover(c) => {
                prop_assert!(larger.is_empty());
                prop_assert_eq!(c.chains.len(), k);
                prop_assert!(c.validate(&q).is_ok());
            }
            DichotomyResult::Antichain(a) => {
                prop_assert_eq!(&a, &larger[0]);
            }
        }
    }

    #[test]
    fn paper_cover_is_minimal(q in order(10)) {
        let pc = paper_chain_cover(&q, Budget::default()).unwrap();
        prop_assert_eq!(pc.cover.chains.len(), width(&q));
        prop_assert!(pc.cover.validate(&q).is_ok());
    }

    #[test]
    fn aux_graph_contains_base_and_is_simple(n in 0usize..8, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, d, seed);
        let seq = aux_graph_with(&g, Budget::default(), Exec::Sequential).unwrap();
        let par = aux_graph_with(&g, Budget::default(), Exec::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert!(g.is_subgraph_of(&seq.aux));
        prop_assert!(seq.aux.relation().is_symmetric() && seq.aux.relation().is_irreflexive());
    }

    #[test]
    fn derivative_shrinks_and_stays_a_tree(t in tree()) {
        let d = pruning_derivative(&t);
        prop_assert!(d.is_subtree_of(&t));
        prop_assert!(FiniteTree::new(d.index_size(), d.nodes().iter().cloned()).is_ok());
    }

    #[test]
    fn node_ranks_decrease_along_children(t in tree()) {
        let r = pruning_rank(&t);
        prop_assert!(r.well_founded);
        for s in t.nodes() {
            for i in 0..t.index_size() {
                let mut c = s.clone();
                c.push(i);
                if let Some(rc) = r.node_ranks.get(&c) {
                    prop_assert!(rc < &r.node_ranks[s]);
                }
            }
        }
    }
}

#[test]
fn g0_edge_counts_and_density() {
    let seqs = dense_sequences(16);
    assert!(seqs.is_dense_to_horizon());
    for n in 0..=14 {
        assert_eq!(g0_level(n).unwrap().edges.len(), (1 << n) - 1);
    }
}
