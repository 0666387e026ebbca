//! Search for sequences realizing the order property of a formula.
//!
//! A sequence `a_1 .. a_l` realizes the order property of `phi(x, y)` when
//! `phi(a_i, a_j)` holds iff `i <= j`. The two free element variables are
//! taken in name order (the lexicographically smaller one is `x`). The
//! search precomputes the full truth matrix of `phi` and then backtracks,
//! returning the lexicographically least witness. Distinctness is not
//! enforced explicitly: a repeated vertex would need `phi` both true and
//! false on the same pair.

use super::ast::{Assignment, Formula};
use super::eval::{evaluate_with, EvalConfig};
use super::LogicError;
use crate::bitset::BitSet;
use alloc::vec::Vec;

/// Resource limits for the witness search.
#[derive(Clone, Copy, Debug)]
pub struct OrderSearchConfig {
    /// Largest universe accepted (the truth matrix has `n^2` entries, each
    /// a full evaluation).
    pub max_universe: usize,
    /// Backtracking node budget.
    pub dfs_budget: u64,
    /// Evaluation controls for filling the matrix.
    pub eval: EvalConfig,
}

impl Default for OrderSearchConfig {
    fn default() -> Self {
        OrderSearchConfig { max_universe: 40, dfs_budget: 1 << 22, eval: EvalConfig::default() }
    }
}

/// Finds a sequence realizing the order property of `f` at length `len`
/// (default limits).
pub fn order_property_witness(
    s: &crate::structure::Structure,
    f: &Formula,
    len: usize,
) -> Result<Option<Vec<usize>>, LogicError> {
    order_property_witness_with(s, f, len, &OrderSearchConfig::default())
}

/// [`order_property_witness`] with explicit limits.
pub fn order_property_witness_with(
    s: &crate::structure::Structure,
    f: &Formula,
    len: usize,
    cfg: &OrderSearchConfig,
) -> Result<Option<Vec<usize>>, LogicError> {
    let frees = f.free_element_vars();
    if frees.len() != 2 || !f.free_set_vars().is_empty() {
        return Err(LogicError::WrongFreeVariables {
            expected: "exactly two free element variables and no free set variables",
        });
    }
    let n = s.universe_size();
    if n > cfg.max_universe {
        return Err(LogicError::UniverseTooLarge { n, cap: cfg.max_universe });
    }
    let mut holds = alloc::vec![BitSet::new(n); n];
    for (u, row) in holds.iter_mut().enumerate() {
        for v in 0..n {
            let a = Assignment::of_elems(&[(frees[0].as_str(), u), (frees[1].as_str(), v)]);
            if evaluate_with(s, f, &a, &cfg.eval)? {
                row.insert(v);
            }
        }
    }
    let mut seq = Vec::with_capacity(len);
    let mut fuel = cfg.dfs_budget;
    if dfs(&holds, n, len, &mut seq, &mut fuel, cfg.dfs_budget)? {
        debug_assert!(seq.iter().enumerate().all(|(i, &ai)| {
            seq.iter().enumerate().all(|(j, &aj)| holds[ai].contains(aj) == (i <= j))
        }));
        Ok(Some(seq))
    } else {
        Ok(None)
    }
}

fn dfs(
    holds: &[BitSet],
    n: usize,
    len: usize,
    seq: &mut Vec<usize>,
    fuel: &mut u64,
    budget: u64,
) -> Result<bool, LogicError> {
    if seq.len() == len {
        return Ok(true);
    }
    for v in 0..n {
        if *fuel == 0 {
            return Err(LogicError::Budget { budget });
        }
        *fuel -= 1;
        let fits = holds[v].contains(v)
            && seq.iter().all(|&a| holds[a].contains(v) && !holds[v].contains(a));
        if fits {
            seq.push(v);
            if dfs(holds, n, len, seq, fuel, budget)? {
                return Ok(true);
            }
            seq.pop();
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::{edge, eq, forall, implies, or, Formula};
    use crate::logic::parse_formula;
    use crate::patterns::half_graph;
    use crate::structure::Structure;

    #[test]
    fn half_graph_orders_by_nested_neighborhoods() {
        // "The neighborhood of x is a superset of the neighborhood of y."
        let f = forall("z", implies(edge("y", "z"), edge("x", "z")));
        for t in 2..=6 {
            let (g, coords) = half_graph(t).unwrap();
            let s = Structure::from_graph(&g);
            let got = order_property_witness(&s, &f, t).unwrap();
            let expect: Vec<usize> = (1..=t).map(|i| coords.a(i)).collect();
            assert_eq!(got, Some(expect), "H_{t}");
        }
    }

    #[test]
    fn edge_relation_has_no_order_property() {
        // The i = i case needs phi(a, a); E is irreflexive.
        let f = edge("x", "y");
        let edgeless = Structure::from_graph(&crate::graph::Graph::new(4));
        assert_eq!(order_property_witness(&edgeless, &f, 2).unwrap(), None);
        let p4 = Structure::from_graph(&crate::patterns::path(4).unwrap());
        for len in 1..=2 {
            assert_eq!(order_property_witness(&p4, &f, len).unwrap(), None);
        }
        assert_eq!(order_property_witness(&p4, &f, 0).unwrap(), Some(Vec::new()));
    }

    #[test]
    fn linear_order_is_its_own_witness() {
        let f = or(alloc::vec![eq("x", "y"), parse_formula("(< x y)").unwrap()]);
        let s = Structure::linear_order(5);
        assert_eq!(order_property_witness(&s, &f, 5).unwrap(), Some(alloc::vec![0, 1, 2, 3, 4]));
        assert_eq!(order_property_witness(&s, &f, 6).unwrap(), None);
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let s = Structure::from_graph(&crate::graph::Graph::new(2));
        let one_var = edge("x", "x");
        assert!(matches!(
            order_property_witness(&s, &one_var, 1),
            Err(LogicError::WrongFreeVariables { .. })
        ));
        let with_set = Formula::In { set: "X".into(), elem: "x".into() };
        assert!(matches!(
            order_property_witness(&s, &with_set, 1),
            Err(LogicError::WrongFreeVariables { .. })
        ));
    }

    #[test]
    fn budget_guard_fires() {
        let f = or(alloc::vec![eq("x", "y"), parse_formula("(< x y)").unwrap()]);
        let s = Structure::linear_order(12);
        let cfg = OrderSearchConfig { dfs_budget: 3, ..OrderSearchConfig::default() };
        assert!(matches!(
            order_property_witness_with(&s, &f, 12, &cfg),
            Err(LogicError::Budget { budget: 3 })
        ));
    }
}
