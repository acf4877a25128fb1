mod common;

use common::oracles;
use qolab_core::auxgraph::{aux_graph, witness_set};
use qolab_core::coloring::chromatic_number;
use qolab_core::corpus::{all_quasi_orders, random_graph, RandomCorpus};
use qolab_core::dilworth::{dichotomy, enumerate_antichains, min_chain_cover, width_and_antichain, DichotomyResult};
use qolab_core::g0::{g0_level, hom_search};
use qolab_core::relation::Graph;
use qolab_core::tree::{eval_borel_code, eval_borel_code_with, Connective};
use qolab_core::Budget;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_orders() -> Vec<qolab_core::QuasiOrder> {
    let mut out: Vec<_> = (0..=4).flat_map(all_quasi_orders).collect();
    out.extend(
        RandomCorpus {
            count: 120,
            n_min: 1,
            n_max: 12,
            seed: 3,
            ..RandomCorpus::default()
        }
        .quasi_orders(),
    );
    out
}

#[test]
fn width_matches_subset_scan() {
    for q in small_orders() {
        let (w, a) = width_and_antichain(&q);
        assert_eq!(w, oracles::width(&q), "{q:?}");
        assert_eq!(min_chain_cover(&q).chains.len(), w);
        // Reported antichain is the least one of maximum size.
        assert_eq!(Some(&a), oracles::antichains(&q, w).first().or(Some(&Vec::new())));
    }
}

#[test]
fn antichain_enumeration_matches_subset_scan() {
    let b = Budget::default();
    for q in small_orders().into_iter().filter(|q| q.n() <= 9) {
        for k in 0..=4 {
            assert_eq!(
                enumerate_antichains(&q, k, b).unwrap(),
                oracles::antichains(&q, k),
                "{q:?} k={k}"
            );
        }
    }
}

#[test]
fn dichotomy_matches_subset_scan() {
    let b = Budget::default();
    for q in small_orders().into_iter().filter(|q| q.n() <= 9) {
        let w = oracles::width(&q);
        for k in 1..=w + 1 {
            match dichotomy(&q, k, b).unwrap() {
                DichotomyResult::Cover(c) => {
                    assert!(w <= k);
                    assert_eq!(c.chains.len(), k);
                    c.validate(&q).unwrap();
                }
                DichotomyResult::Antichain(a) => {
                    assert!(w > k);
                    assert_eq!(a, oracles::antichains(&q, k + 1)[0]);
                }
            }
        }
    }
}

fn small_graphs() -> Vec<Graph> {
    let mut out: Vec<Graph> = (0..=4)
        .flat_map(all_quasi_orders)
        .map(|q| q.incomparability_graph())
        .collect();
    for seed in 0..150 {
        let n = 1 + (seed as usize % 7);
        out.push(random_graph(n, [0.2, 0.4, 0.6][seed as usize % 3], seed));
    }
    out
}

#[test]
fn chromatic_number_matches_exhaustive_coloring() {
    for g in small_graphs() {
        assert_eq!(
            chromatic_number(&g, Budget::default()).unwrap().k,
            oracles::chromatic_number(&g),
            "{g:?}"
        );
    }
}

#[test]
fn aux_graph_matches_definition() {
    for g in small_graphs() {
        let aux = aux_graph(&g, Budget::default()).unwrap();
        assert_eq!(aux.aux.edges(), oracles::forced_apart_pairs(&g), "{g:?}");
        assert!(g.is_subgraph_of(&aux.aux));
    }
}

#[test]
fn witness_sets_force_their_pairs() {
    for g in small_graphs().into_iter().filter(|g| g.n() <= 6) {
        let aux = aux_graph(&g, Budget::default()).unwrap();
        for &(x, y) in aux.aux.edges().iter().take(4) {
            let w = witness_set(&g, &[(x, y)], Budget::default()).unwrap();
            assert!(w.contains(&x) && w.contains(&y));
            let sub = g.induced(&w);
            let (ix, iy) = (w.binary_search(&x).unwrap(), w.binary_search(&y).unwrap());
            let forced = oracles::forced_apart_with(&sub, aux.chi);
            assert!(forced.contains(&(ix.min(iy), ix.max(iy))), "{g:?} {w:?}");
            // Dropping any other vertex loses the witness property.
            for &v in w.iter().filter(|&&v| v != x && v != y) {
                let smaller: Vec<usize> = w.iter().copied().filter(|&u| u != v).collect();
                let (sx, sy) = (smaller.binary_search(&x).unwrap(), smaller.binary_search(&y).unwrap());
                let forced = oracles::forced_apart_with(&g.induced(&smaller), aux.chi);
                assert!(!forced.contains(&(sx.min(sy), sx.max(sy))), "{g:?} {w:?} without {v}");
            }
        }
    }
}

#[test]
fn hom_search_agrees_on_existence() {
    let targets = [
        Graph::complete(1),
        Graph::complete(2),
        Graph::complete(3),
        random_graph(4, 0.5, 9),
    ];
    for g in small_graphs().into_iter().filter(|g| g.n() <= 6) {
        for h in &targets {
            let found = hom_search(&g, h, Budget::default()).unwrap();
            assert_eq!(found.is_some(), oracles::has_homomorphism(&g, h));
            if let Some(map) = found {
                assert!(g.edges().iter().all(|&(u, v)| h.adjacent(map[u], map[v])));
            }
        }
    }
}

#[test]
fn g0_levels_map_to_an_edge_exactly_when_bipartite() {
    for n in 0..=10 {
        let level = g0_level(n).unwrap();
        let hom = hom_search(&level, &Graph::complete(2), Budget::default()).unwrap();
        assert_eq!(hom.is_some(), level.is_bipartite());
        assert_eq!(level.edges.len(), (1usize << n) - 1);
    }
}

#[test]
fn borel_codes_match_staged_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let code = oracles::random_code(&mut rng);
        let value = eval_borel_code(&code).unwrap();
        assert_eq!(value, oracles::staged_eval(&code));
        let complement: Vec<usize> = (0..code.ground_size()).filter(|x| !value.contains(x)).collect();
        let dual = eval_borel_code_with(&code.complemented(), Connective::IntersectionOfUnions).unwrap();
        assert_eq!(dual, complement);
    }
}
