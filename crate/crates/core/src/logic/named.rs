//! Reusable named formulas: the twin predicate, the even-path sentence, and
//! the same-parity sentence for disjoint unions of paths.

use super::ast::{
    and, conn, edge, eq, exists, exists_set, forall, fresh_name, iff, implies, in_set, neq, xor,
    Formula,
};
use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;

/// `x` and `y` are distinct and every third vertex is adjacent to both or to
/// neither: the twin predicate. Quantifier rank 1, free variables `{x, y}`.
pub fn twins(x: &str, y: &str) -> Formula {
    let mut used: BTreeSet<_> = [x.to_string(), y.to_string()].into();
    let z = fresh_name("z", &mut used);
    and(vec![
        neq(x, y),
        forall(
            &z,
            implies(and(vec![neq(&z, x), neq(&z, y)]), iff(edge(&z, x), edge(&z, y))),
        ),
    ])
}

/// `u` has at most one neighbor (an endpoint or isolated vertex of a union
/// of paths).
fn at_most_one_neighbor(u: &str) -> Formula {
    forall("p", forall("q", implies(and(vec![edge(u, "p"), edge(u, "q")]), eq("p", "q"))))
}

/// A path graph has an even number of vertices: no vertex is isolated, and
/// some set meeting every edge exactly once contains exactly one endpoint.
///
/// On `P_t` the set must be one of the two alternation classes, and the
/// class starting at an endpoint reaches the far endpoint iff `t` is odd.
pub fn phi_even() -> Formula {
    let no_isolated = forall("u", exists("v", edge("u", "v")));
    let alternating = forall(
        "u",
        forall("v", implies(edge("u", "v"), xor(in_set("X", "u"), in_set("X", "v")))),
    );
    let one_endpoint = exists(
        "a",
        and(vec![
            at_most_one_neighbor("a"),
            in_set("X", "a"),
            forall(
                "b",
                implies(and(vec![at_most_one_neighbor("b"), in_set("X", "b")]), eq("b", "a")),
            ),
        ]),
    );
    and(vec![no_isolated, exists_set("X", and(vec![alternating, one_endpoint]))])
}

/// The connected component of `x` is a path with an even number of
/// vertices: [`phi_even`] with every quantifier relativized to the
/// component via connectivity guards.
fn even_component(x: &str) -> Formula {
    let no_isolated = forall("u", implies(conn(x, "u"), exists("v", edge("u", "v"))));
    let alternating = forall(
        "u",
        forall(
            "v",
            implies(
                and(vec![conn(x, "u"), edge("u", "v")]),
                xor(in_set("X", "u"), in_set("X", "v")),
            ),
        ),
    );
    let comp_endpoint = |w: &str| and(vec![conn(x, w), at_most_one_neighbor(w)]);
    let one_endpoint = exists(
        "a",
        and(vec![
            comp_endpoint("a"),
            in_set("X", "a"),
            forall(
                "b",
                implies(and(vec![comp_endpoint("b"), in_set("X", "b")]), eq("b", "a")),
            ),
        ]),
    );
    and(vec![no_isolated, exists_set("X", and(vec![alternating, one_endpoint]))])
}

/// On a disjoint union of paths: all components have the same vertex-count
/// parity (every component an even path, or none).
pub fn phi_same_parity() -> Formula {
    forall("w1", forall("w2", iff(even_component("w1"), even_component("w2"))))
}
