//! Cross-module invariants checked against independent models.
//!
//! Each property pits a library operation against either a naive oracle
//! (`BTreeSet`, adjacency matrices, brute-force search) or an algebraic law
//! the operation must satisfy (involution, isomorphism invariance,
//! restriction commuting with application).

use std::collections::BTreeSet;

use proptest::prelude::*;
use shrubkit_core::bitset::BitSet;
use shrubkit_core::canon::{canonical_form, isomorphic};
use shrubkit_core::graph::{ColoredGraph, Graph, Radius};
use shrubkit_core::partition::{apply_flip, FlipSpec, VertexPartition};
use shrubkit_core::structure::Structure;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

/// A graph on `1..=n_max` vertices with independently sampled edges.
fn graph_strategy(n_max: usize) -> impl Strategy<Value = Graph> {
    (1..=n_max).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut idx = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[idx] {
                        g.add_edge(u, v);
                    }
                    idx += 1;
                }
            }
            g
        })
    })
}

/// A partition of `0..n` built from per-vertex part choices, re-indexed to
/// drop empty parts.
fn partition_strategy(n: usize) -> impl Strategy<Value = VertexPartition> {
    proptest::collection::vec(0..n, n).prop_map(move |choices| {
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut index_of = vec![usize::MAX; n];
        for (v, &c) in choices.iter().enumerate() {
            if index_of[c] == usize::MAX {
                index_of[c] = parts.len();
                parts.push(Vec::new());
            }
            parts[index_of[c]].push(v);
        }
        VertexPartition::new(n, &parts).expect("choices cover 0..n exactly once")
    })
}

/// A graph together with a partition of its vertices and a flip relation.
fn flipped_graph_strategy() -> impl Strategy<Value = (Graph, FlipSpec)> {
    graph_strategy(9).prop_flat_map(|g| {
        let n = g.vertex_count();
        partition_strategy(n).prop_flat_map(move |p| {
            let k = p.part_count();
            let pairs = proptest::collection::vec((0..k, 0..k), 0..=6);
            let g = g.clone();
            pairs.prop_map(move |raw| {
                let spec = FlipSpec::new(p.clone(), &raw).expect("part ids in range");
                (g.clone(), spec)
            })
        })
    })
}

/// A permutation of `0..n` from sort keys.
fn permutation_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(any::<u64>(), n).prop_map(|keys| {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&i| keys[i]);
        let mut perm = vec![0; keys.len()];
        for (rank, &i) in order.iter().enumerate() {
            perm[i] = rank;
        }
        perm
    })
}

fn relabel(cg: &ColoredGraph, perm: &[usize]) -> ColoredGraph {
    let n = cg.graph.vertex_count();
    let mut g = Graph::new(n);
    for (u, v) in cg.graph.edges() {
        g.add_edge(perm[u], perm[v]);
    }
    let mut out = ColoredGraph::new(g, cg.color_count());
    for c in 0..cg.color_count() {
        for v in cg.colors[c].iter() {
            out.set_color(c, perm[v]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// BitSet against the standard ordered set
// ---------------------------------------------------------------------------

/// One mutation step for the model comparison.
#[derive(Clone, Debug)]
enum SetOp {
    Insert(usize),
    Remove(usize),
    Toggle(usize),
}

fn set_ops(n: usize) -> impl Strategy<Value = Vec<SetOp>> {
    proptest::collection::vec(
        prop_oneof![
            (0..n).prop_map(SetOp::Insert),
            (0..n).prop_map(SetOp::Remove),
            (0..n).prop_map(SetOp::Toggle),
        ],
        0..40,
    )
}

proptest! {
    #[test]
    fn bitset_tracks_btreeset_model(ops in set_ops(21)) {
        let n = 21;
        let mut set = BitSet::new(n);
        let mut model: BTreeSet<usize> = BTreeSet::new();
        for op in ops {
            match op {
                SetOp::Insert(v) => {
                    set.insert(v);
                    model.insert(v);
                }
                SetOp::Remove(v) => {
                    set.remove(v);
                    model.remove(&v);
                }
                SetOp::Toggle(v) => {
                    set.toggle(v);
                    if !model.remove(&v) {
                        model.insert(v);
                    }
                }
            }
            prop_assert_eq!(set.len(), model.len());
            prop_assert_eq!(set.is_empty(), model.is_empty());
            prop_assert_eq!(set.first(), model.first().copied());
            let listed: Vec<usize> = set.iter().collect();
            let expected: Vec<usize> = model.iter().copied().collect();
            prop_assert_eq!(listed, expected);
        }
    }

    #[test]
    fn bitset_algebra_tracks_btreeset_model(
        a in proptest::collection::btree_set(0..24usize, 0..24),
        b in proptest::collection::btree_set(0..24usize, 0..24),
    ) {
        let n = 24;
        let sa = BitSet::from_iter(n, a.iter().copied());
        let sb = BitSet::from_iter(n, b.iter().copied());

        let mut u = sa.clone();
        u.union_with(&sb);
        let mut i = sa.clone();
        i.intersect_with(&sb);
        let mut d = sa.clone();
        d.difference_with(&sb);
        let mut x = sa.clone();
        x.xor_with(&sb);

        let to_vec = |s: &BTreeSet<usize>| s.iter().copied().collect::<Vec<_>>();
        prop_assert_eq!(u.to_vec(), to_vec(&(&a | &b)));
        prop_assert_eq!(i.to_vec(), to_vec(&(&a & &b)));
        prop_assert_eq!(d.to_vec(), to_vec(&(&a - &b)));
        prop_assert_eq!(x.to_vec(), to_vec(&(&a ^ &b)));
        prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
        prop_assert_eq!(sa.is_disjoint(&sb), a.is_disjoint(&b));
    }
}

// ---------------------------------------------------------------------------
// Flip algebra
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn flip_spec_normalizes_pairs((g, spec) in flipped_graph_strategy()) {
        let _ = g;
        let k = spec.k();
        let mut seen = BTreeSet::new();
        for &(i, j) in spec.flips() {
            prop_assert!(i <= j, "stored pairs are ordered");
            prop_assert!(j < k, "part ids in range");
            prop_assert!(seen.insert((i, j)), "no duplicates");
            if i == j {
                prop_assert!(
                    spec.partition().parts()[i].len() > 1,
                    "diagonal flips on singleton parts are dropped"
                );
            }
            // `toggles` takes vertex ids; probe with part representatives.
            let u = spec.partition().parts()[i][0];
            let v = spec.partition().parts()[j][0];
            prop_assert!(spec.toggles(u, v) && spec.toggles(v, u), "relation is symmetric");
        }
    }

    #[test]
    fn apply_flip_is_an_involution((g, spec) in flipped_graph_strategy()) {
        let once = apply_flip(&g, &spec).expect("spec fits");
        let twice = apply_flip(&once, &spec).expect("spec fits");
        prop_assert_eq!(twice, g.clone());

        // The flip changes exactly the pairs whose parts are in F.
        for u in 0..g.vertex_count() {
            for v in (u + 1)..g.vertex_count() {
                prop_assert_eq!(once.has_edge(u, v), g.has_edge(u, v) ^ spec.toggles(u, v));
            }
        }
    }

    #[test]
    fn restriction_commutes_with_application(
        (g, spec) in flipped_graph_strategy(),
        keys in proptest::collection::vec(any::<u8>(), 9),
    ) {
        let n = g.vertex_count();
        let selected: Vec<usize> = (0..n).filter(|&v| keys[v] % 3 != 0).collect();
        prop_assume!(!selected.is_empty());

        let flipped_then_restricted = apply_flip(&g, &spec)
            .expect("spec fits")
            .induced_subgraph(&selected)
            .expect("selected is distinct");
        let restricted = spec.restrict(&selected).expect("selected is nonempty");
        let restricted_then_flipped = apply_flip(
            &g.induced_subgraph(&selected).expect("selected is distinct"),
            &restricted,
        )
        .expect("restricted spec fits");
        prop_assert_eq!(flipped_then_restricted, restricted_then_flipped);
    }
}

// ---------------------------------------------------------------------------
// Graph metrics against brute force
// ---------------------------------------------------------------------------

/// Floyd–Warshall on the adjacency matrix, as an independent distance oracle.
fn distance_matrix(g: &Graph) -> Vec<Vec<u64>> {
    const INF: u64 = u64::MAX / 4;
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for v in 0..n {
        d[v][v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                d[u][v] = d[u][v].min(d[u][w] + d[w][v]);
            }
        }
    }
    d
}

proptest! {
    #[test]
    fn bfs_distances_match_floyd_warshall(g in graph_strategy(10)) {
        let n = g.vertex_count();
        let matrix = distance_matrix(&g);
        for v in 0..n {
            let bfs = g.distances_from(v);
            for u in 0..n {
                let expected = matrix[v][u];
                if bfs[u] == shrubkit_core::graph::UNREACHABLE {
                    prop_assert!(expected > n as u64);
                } else {
                    prop_assert_eq!(u64::from(bfs[u]), expected);
                }
            }
            for r in 0..4u32 {
                let ball = g.ball(v, r);
                let expected: Vec<usize> =
                    (0..n).filter(|&u| matrix[v][u] <= u64::from(r)).collect();
                prop_assert_eq!(ball, expected);
            }
        }
    }

    #[test]
    fn components_partition_by_reachability(g in graph_strategy(10)) {
        let n = g.vertex_count();
        let matrix = distance_matrix(&g);
        let comps = g.components();
        let mut seen = vec![false; n];
        for comp in &comps {
            for &v in comp {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
            for &u in comp {
                for &v in comp {
                    prop_assert!(matrix[u][v] <= n as u64);
                }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(g.is_connected(), comps.len() == 1);

        let reps: Vec<usize> = comps.iter().map(|c| c[0]).collect();
        prop_assert!(g.is_distance_independent(&reps, Radius::Infinite));
    }
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn canonical_form_is_isomorphism_invariant(
        g in graph_strategy(7),
        colors in proptest::collection::vec(0..3usize, 7),
        perm_keys in proptest::collection::vec(any::<u64>(), 7),
    ) {
        let n = g.vertex_count();
        let mut cg = ColoredGraph::new(g, 3);
        for v in 0..n {
            cg.set_color(colors[v], v);
        }
        let perm: Vec<usize> = {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| perm_keys[i]);
            let mut p = vec![0; n];
            for (rank, &i) in order.iter().enumerate() {
                p[i] = rank;
            }
            p
        };
        let pcg = relabel(&cg, &perm);

        let s = Structure::from_colored_graph(&cg);
        let ps = Structure::from_colored_graph(&pcg);
        prop_assert_eq!(
            canonical_form(&s).expect("within cap"),
            canonical_form(&ps).expect("within cap")
        );
        prop_assert!(isomorphic(&s, &ps).expect("within cap"));
    }

    #[test]
    fn canonical_form_separates_edge_counts(
        g in graph_strategy(7),
        h in graph_strategy(7),
    ) {
        // Different sizes or edge counts must give different forms; equal
        // forms must come from genuinely isomorphic graphs.
        let sg = Structure::from_graph(&g);
        let sh = Structure::from_graph(&h);
        let same = canonical_form(&sg).expect("within cap")
            == canonical_form(&sh).expect("within cap");
        if same {
            prop_assert!(isomorphic(&sg, &sh).expect("within cap"));
            prop_assert_eq!(g.vertex_count(), h.vertex_count());
            prop_assert_eq!(g.edges().len(), h.edges().len());
        } else {
            prop_assert!(!isomorphic(&sg, &sh).expect("within cap"));
        }
    }
}

// ---------------------------------------------------------------------------
// Permutation strategy sanity
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn permutations_are_bijections(perm in permutation_strategy(9)) {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        let expected: Vec<usize> = (0..9).collect();
        prop_assert_eq!(sorted, expected);
    }
}
