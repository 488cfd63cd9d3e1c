mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use relgraph::drm::drm;
use relgraph::equivalence::{pd_quotient, r_core, r_core_vertices};
use relgraph::hom::{chromatic_number, image_factorization};
use relgraph::io::{parse_graph, parse_relation, write_graph, write_relation};
use relgraph::iso::{canonical_form, is_isomorphic};
use relgraph::poset::{divisibility_leq, dominated_by, layered_embedding, Poset};
use relgraph::relation::{apply_strong, decompose};
use relgraph::weights::{apply_weighted, WeightMatrix};
use relgraph::{check_hom, find_hom, Graph, HomConstraint, Relation, SearchConfig};

fn graph_strategy(max_n: usize, directed: bool, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| bits[u * n + v] && (directed || u <= v) && (loops || u != v))
                .collect();
            Graph::new(directed, n, edges).unwrap()
        })
    })
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (any::<bool>(), any::<bool>()).prop_flat_map(move |(d, l)| graph_strategy(max_n, d, l))
}

/// A relation `src -> dst` with full image.
fn relation_strategy(src: usize, dst: usize, full_domain: bool) -> impl Strategy<Value = Relation> {
    (proptest::collection::vec(any::<bool>(), src * dst), proptest::collection::vec(0..src, dst), proptest::collection::vec(0..dst, src))
        .prop_map(move |(bits, cover, home)| {
            let mut pairs: BTreeSet<(usize, usize)> =
                (0..src).flat_map(|x| (0..dst).map(move |b| (x, b))).filter(|&(x, b)| bits[x * dst + b]).collect();
            for (b, &x) in cover.iter().enumerate() {
                if !pairs.iter().any(|&(_, c)| c == b) {
                    pairs.insert((x, b));
                }
            }
            if full_domain {
                for (x, &b) in home.iter().enumerate() {
                    if !pairs.iter().any(|&(y, _)| y == x) {
                        pairs.insert((x, b));
                    }
                }
            }
            Relation::new(src, dst, pairs).unwrap()
        })
}

fn graph_and_relation(max_n: usize, full_domain: bool) -> impl Strategy<Value = (Graph, Relation)> {
    (any_graph(max_n), 1..=max_n)
        .prop_flat_map(move |(g, m)| (Just(g.clone()), relation_strategy(g.n(), m, full_domain)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn chi(g: &Graph) -> Option<usize> {
    (g.is_loop_free()).then(|| chromatic_number(g, &SearchConfig::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn undirected_edges_are_symmetric(g in graph_strategy(6, false, true)) {
        for (u, v) in g.arcs() {
            prop_assert!(g.has_edge(v, u));
        }
    }

    #[test]
    fn composition_law(
        (g, r, s) in graph_and_relation(4, false).prop_flat_map(|(g, r)| {
            let m = r.dst_n();
            (Just(g), Just(r), (1..=4usize).prop_flat_map(move |k| relation_strategy(m, k, false)))
        })
    ) {
        let lhs = apply_strong(&apply_strong(&g, &r).unwrap(), &s).unwrap();
        prop_assert_eq!(lhs, apply_strong(&g, &r.compose(&s).unwrap()).unwrap());
    }

    #[test]
    fn decomposition_recomposes((_, r) in graph_and_relation(5, false)) {
        let d = decompose(&r);
        prop_assert_eq!(d.recompose(), r.clone());
        prop_assert_eq!(d.r_c.src_n(), r.len());
    }

    #[test]
    fn full_domain_never_lowers_chromatic_number((g, r) in graph_and_relation(5, true)) {
        prop_assume!(!g.is_directed() && g.is_loop_free());
        let h = apply_strong(&g, &r).unwrap();
        if let Some(ch) = chi(&h) {
            prop_assert!(chi(&g).unwrap() <= ch);
        }
    }

    #[test]
    fn distances_contract((g, r) in graph_and_relation(5, true)) {
        prop_assume!(!g.is_directed());
        let h = apply_strong(&g, &r).unwrap();
        let pairs: Vec<(usize, usize)> = r.pairs().collect();
        for &(x, u) in &pairs {
            for &(y, v) in &pairs {
                if x == y {
                    continue;
                }
                if let Some(dg) = g.distance(x, y) {
                    let dh = h.distance(u, v);
                    prop_assert!(dh.is_some_and(|dh| dh <= dg), "d_H({u},{v}) = {dh:?} > d_G({x},{y}) = {dg}");
                }
            }
        }
    }

    #[test]
    fn radius_bound((g, r) in graph_and_relation(5, true)) {
        prop_assume!(!g.is_directed() && g.is_connected());
        let h = apply_strong(&g, &r).unwrap();
        prop_assume!(h.is_connected());
        let (rg, rh) = (g.radius().unwrap(), h.radius().unwrap());
        prop_assert!(rh <= rg.max(2));
    }

    #[test]
    fn weighted_support_matches_strong((g, r) in graph_and_relation(5, false)) {
        let w: WeightMatrix<i64> = WeightMatrix::from_graph(&g);
        let out = apply_weighted(&w, &r).unwrap();
        let h = apply_strong(&g, &r).unwrap();
        for a in 0..h.n() {
            for b in 0..h.n() {
                prop_assert_eq!(out.get(a, b) != 0, h.has_edge(a, b));
            }
        }
    }

    #[test]
    fn relabeling_preserves_isomorphism(g in any_graph(6), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed as usize) % n.max(1));
        perm.swap(0, (seed as usize / 7) % n.max(1));
        let h = g.relabel(&perm).unwrap();
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert!(common::brute_iso(&g, &h));
    }

    #[test]
    fn canonical_form_matches_brute_force(g in any_graph(5), h in any_graph(5)) {
        prop_assume!(g.is_directed() == h.is_directed());
        prop_assert_eq!(canonical_form(&g) == canonical_form(&h), common::brute_iso(&g, &h));
    }

    #[test]
    fn hom_witnesses_verify(g in graph_strategy(5, false, true), h in graph_strategy(5, false, true), k in 0usize..10) {
        let c = HomConstraint::ALL[k];
        match find_hom(&g, &h, c, &SearchConfig::default()).unwrap() {
            relgraph::Outcome::Found(f) => prop_assert!(common::is_hom(&f, &g, &h, c)),
            relgraph::Outcome::Absent => prop_assert!(!common::hom_exists(&g, &h, c)),
            relgraph::Outcome::Exhausted => prop_assert!(false, "tiny search exhausted"),
        }
    }

    #[test]
    fn seeded_search_agrees(g in graph_strategy(5, false, false), h in graph_strategy(4, false, true), seed in 1u64..1000) {
        let a = find_hom(&g, &h, HomConstraint::Plain, &SearchConfig::default()).unwrap();
        let b = find_hom(&g, &h, HomConstraint::Plain, &SearchConfig { seed, ..Default::default() }).unwrap();
        prop_assert_eq!(a.is_found(), b.is_found());
        if let Some(f) = b.found() {
            prop_assert!(check_hom(&f, &g, &h, HomConstraint::Plain));
        }
    }

    #[test]
    fn image_factorization_splits(g in any_graph(5), h in any_graph(4)) {
        prop_assume!(g.is_directed() == h.is_directed());
        if let Some(f) = find_hom(&g, &h, HomConstraint::Plain, &SearchConfig::default()).unwrap().found() {
            let fac = image_factorization(&g, &h, &f).unwrap();
            prop_assert!(check_hom(&fac.s, &g, &fac.image, HomConstraint::Surjective));
            prop_assert!(check_hom(&fac.i, &fac.image, &h, HomConstraint::Mono));
            prop_assert!((0..g.n()).all(|v| fac.i[fac.s[v]] == f[v]));
        }
    }

    #[test]
    fn pd_quotient_reconstructs(g in any_graph(5)) {
        let q = pd_quotient(&g);
        prop_assert_eq!(apply_strong(&q.quotient, &q.membership.transpose()).unwrap(), g);
    }

    #[test]
    fn r_core_is_induced(g in graph_strategy(6, false, true)) {
        let core = r_core(&g).unwrap();
        prop_assert_eq!(core, g.induced_subgraph(&r_core_vertices(&g).unwrap()).unwrap());
    }

    #[test]
    fn drm_is_relabeling_invariant(
        (g, perm) in graph_strategy(7, false, false).prop_flat_map(|g| {
            // A spanning path makes every sample connected.
            let n = g.n();
            let edges: Vec<(usize, usize)> = g.arcs().chain((1..n).map(|v| (v - 1, v))).collect();
            (Just(Graph::new(false, n, edges).unwrap()), permutation(n))
        })
    ) {
        prop_assert_eq!(drm(&g).unwrap().matrix, drm(&g.relabel(&perm).unwrap()).unwrap().matrix);
        let blocks: BTreeSet<BTreeSet<usize>> = drm(&g).unwrap().blocks.blocks().iter().map(|b| b.iter().copied().collect()).collect();
        prop_assert_eq!(blocks, common::equitable_blocks(&g));
    }

    #[test]
    fn graph_text_round_trip(g in any_graph(6)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn relation_text_round_trip((_, r) in graph_and_relation(5, false)) {
        prop_assert_eq!(parse_relation(&write_relation(&r)).unwrap(), r);
    }

    #[test]
    fn divisibility_order_matches_definition(
        a in proptest::collection::vec(1u64..60, 1..4),
        b in proptest::collection::vec(1u64..60, 1..4),
    ) {
        let by_divisors = a.iter().all(|&x| (1..=x).filter(|d| x % d == 0).any(|d| b.contains(&d)));
        prop_assert_eq!(divisibility_leq(&a, &b), by_divisors);
    }
}

/// Random posets on distinct odd primes: the order relation is a random
/// DAG over label positions, closed transitively.
fn poset_strategy() -> impl Strategy<Value = Poset> {
    const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];
    (1usize..=6)
        .prop_flat_map(|k| (Just(k), permutation(k), proptest::collection::vec(any::<bool>(), k * k)))
        .prop_map(|(k, order, bits)| {
            let labels: Vec<u64> = (0..k).map(|i| PRIMES[i]).collect();
            // Edges only go forward in `order`, so the relation is acyclic.
            let covers: Vec<(u64, u64)> = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * k + j])
                .map(|(i, j)| (labels[order[i]], labels[order[j]]))
                .collect();
            Poset::from_covers(labels, &covers).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn layered_embedding_reflects_order(p in poset_strategy()) {
        let u = layered_embedding(&p);
        for x in 0..p.len() {
            for y in 0..p.len() {
                prop_assert_eq!(dominated_by(&u[x], &u[y]), p.leq(x, y), "x={} y={}", p.label(x), p.label(y));
            }
        }
    }
}
