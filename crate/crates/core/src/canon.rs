//! Canonical forms for small structures.
//!
//! [`canonical_form`] returns a byte string such that two structures over the
//! same signature are isomorphic (respecting constants) exactly when their
//! byte strings are equal. The routine refines an invariant vertex coloring
//! to fixpoint and then minimizes the encoding over all orderings compatible
//! with the coloring, so it is exact but factorial in the worst case; both a
//! universe-size cap and an enumeration budget guard against blowups.
//!
//! [`brute_force_isomorphic`] is the independent reference: it tries every
//! permutation of the smaller structure onto the larger.

use crate::structure::{RelData, Structure};
use alloc::vec;
use alloc::vec::Vec;

/// Default universe-size cap for canonicalization.
pub const DEFAULT_CANON_CAP: usize = 10;

/// Default number of candidate orderings tried during minimization.
pub const DEFAULT_PERM_BUDGET: u64 = 2_000_000;

/// Errors from canonicalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonError {
    /// Universe larger than the configured cap.
    TooLarge { n: usize, cap: usize },
    /// The coloring left too many symmetric orderings to enumerate.
    PermutationBudget { required: u64, budget: u64 },
    /// Isomorphism queries require equal signatures.
    SignatureMismatch,
}

impl core::fmt::Display for CanonError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CanonError::TooLarge { n, cap } => {
                write!(f, "universe size {n} exceeds canonicalization cap {cap}")
            }
            CanonError::PermutationBudget { required, budget } => {
                write!(f, "needs {required} orderings, budget is {budget}")
            }
            CanonError::SignatureMismatch => write!(f, "structures have different signatures"),
        }
    }
}

impl core::error::Error for CanonError {}

// ---------------------------------------------------------------------------
// Invariant color refinement
// ---------------------------------------------------------------------------

/// Assigns each element an isomorphism-invariant color rank; equal structures
/// produce equal color multisets, and cell order is invariant.
fn refine_colors(s: &Structure) -> Vec<usize> {
    let n = s.universe_size();
    let sig = s.signature();

    // Initial keys from unary data, degrees, and constants.
    let mut keys: Vec<Vec<u64>> = (0..n).map(|_| Vec::new()).collect();
    for (v, key) in keys.iter_mut().enumerate() {
        for (i, _) in sig.constants.iter().enumerate() {
            key.push((s.constant_value(i) == v) as u64);
        }
        for rel in 0..sig.relations.len() {
            match sig.relations[rel].arity {
                1 => key.push(s.holds(rel, &[v]) as u64),
                2 => {
                    key.push(s.binary_row(rel, v).len() as u64);
                    let indeg = (0..n).filter(|&u| s.holds(rel, &[u, v])).count();
                    key.push(indeg as u64);
                    key.push(s.holds(rel, &[v, v]) as u64);
                }
                _ => {
                    let count = s.tuples(rel).iter().filter(|t| t.contains(&v)).count();
                    key.push(count as u64);
                }
            }
        }
    }
    let mut colors = ranks_of(&keys);

    // Refine on binary relations until the class count stabilizes.
    loop {
        let classes = colors.iter().max().map_or(0, |&c| c + 1);
        let mut keys: Vec<Vec<u64>> = (0..n).map(|v| vec![colors[v] as u64]).collect();
        for rel in 0..sig.relations.len() {
            if sig.relations[rel].arity != 2 {
                continue;
            }
            for (v, key) in keys.iter_mut().enumerate() {
                let mut out: Vec<u64> = s.binary_row(rel, v).iter().map(|u| colors[u] as u64).collect();
                out.sort_unstable();
                key.push(out.len() as u64);
                key.extend(out);
                let mut inc: Vec<u64> =
                    (0..n).filter(|&u| s.holds(rel, &[u, v])).map(|u| colors[u] as u64).collect();
                inc.sort_unstable();
                key.push(inc.len() as u64);
                key.extend(inc);
            }
        }
        colors = ranks_of(&keys);
        let new_classes = colors.iter().max().map_or(0, |&c| c + 1);
        if new_classes == classes {
            return colors;
        }
    }
}

/// Ranks keys by sorted order: equal keys share a rank, ranks are dense.
fn ranks_of(keys: &[Vec<u64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut rank = 0;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[order[i - 1]] != keys[v] {
            rank += 1;
        }
        ranks[v] = rank;
    }
    ranks
}

// ---------------------------------------------------------------------------
// Encoding and minimization
// ---------------------------------------------------------------------------

/// Encodes the structure under `pos_of` (element -> position) as words.
fn encode_under(s: &Structure, pos_of: &[usize]) -> Vec<u32> {
    let sig = s.signature();
    let mut out = Vec::new();
    for rel in 0..sig.relations.len() {
        let mut tuples: Vec<Vec<u32>> = match &rel_data(s, rel) {
            RelData::Unary(set) => set.iter().map(|v| vec![pos_of[v] as u32]).collect(),
            RelData::Binary(rows) => {
                let mut ts = Vec::new();
                for (u, row) in rows.iter().enumerate() {
                    for v in row.iter() {
                        ts.push(vec![pos_of[u] as u32, pos_of[v] as u32]);
                    }
                }
                ts
            }
            RelData::General(set) => {
                set.iter().map(|t| t.iter().map(|&e| pos_of[e] as u32).collect()).collect()
            }
        };
        tuples.sort_unstable();
        out.push(tuples.len() as u32);
        for t in tuples {
            out.extend(t);
        }
    }
    for i in 0..sig.constants.len() {
        out.push(pos_of[s.constant_value(i)] as u32);
    }
    out
}

fn rel_data(s: &Structure, rel: usize) -> RelData {
    // Rebuild RelData view from the tuple API to keep Structure's internals
    // private; cheap at the sizes canonicalization accepts.
    let sym_arity = s.signature().relations[rel].arity;
    match sym_arity {
        1 => {
            let mut set = crate::bitset::BitSet::new(s.universe_size());
            for t in s.tuples(rel) {
                set.insert(t[0]);
            }
            RelData::Unary(set)
        }
        2 => {
            let mut rows = vec![crate::bitset::BitSet::new(s.universe_size()); s.universe_size()];
            for t in s.tuples(rel) {
                rows[t[0]].insert(t[1]);
            }
            RelData::Binary(rows)
        }
        _ => RelData::General(s.tuples(rel).into_iter().collect()),
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Advances `perm` to its next lexicographic permutation; false after the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Canonicalization controls.
#[derive(Clone, Copy, Debug)]
pub struct CanonConfig {
    /// Maximum universe size accepted.
    pub cap: usize,
    /// Maximum number of candidate orderings enumerated.
    pub perm_budget: u64,
}

impl Default for CanonConfig {
    fn default() -> Self {
        CanonConfig { cap: DEFAULT_CANON_CAP, perm_budget: DEFAULT_PERM_BUDGET }
    }
}

/// Computes the canonical byte string of `s`; equal byte strings over equal
/// signatures mean isomorphic structures and vice versa.
pub fn canonical_form_with(s: &Structure, cfg: &CanonConfig) -> Result<Vec<u8>, CanonError> {
    let n = s.universe_size();
    if n > cfg.cap {
        return Err(CanonError::TooLarge { n, cap: cfg.cap });
    }
    let colors = refine_colors(s);
    let classes = colors.iter().max().map_or(0, |&c| c + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for v in 0..n {
        cells[colors[v]].push(v);
    }

    let mut required: u64 = 1;
    for cell in &cells {
        required = required.saturating_mul(factorial(cell.len()));
    }
    if required > cfg.perm_budget {
        return Err(CanonError::PermutationBudget { required, budget: cfg.perm_budget });
    }

    // Odometer over per-cell permutations; positions are assigned cell by
    // cell in invariant cell order, so every coloring-compatible ordering is
    // visited exactly once.
    let mut perms: Vec<Vec<usize>> = cells.iter().map(|c| (0..c.len()).collect()).collect();
    let cell_offsets: Vec<usize> = {
        let mut off = Vec::with_capacity(cells.len());
        let mut acc = 0;
        for c in &cells {
            off.push(acc);
            acc += c.len();
        }
        off
    };

    let mut best: Option<Vec<u32>> = None;
    let mut pos_of = vec![0usize; n];
    loop {
        for (ci, cell) in cells.iter().enumerate() {
            for (slot, &pi) in perms[ci].iter().enumerate() {
                pos_of[cell[pi]] = cell_offsets[ci] + slot;
            }
        }
        let enc = encode_under(s, &pos_of);
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
        // Advance the odometer.
        let mut ci = 0;
        loop {
            if ci == cells.len() {
                // Wrapped everywhere: enumeration complete.
                let body = best.expect("at least one ordering");
                return Ok(serialize(s, &cells, body));
            }
            if next_permutation(&mut perms[ci]) {
                break;
            }
            perms[ci] = (0..cells[ci].len()).collect();
            ci += 1;
        }
    }
}

/// [`canonical_form_with`] under the default configuration.
pub fn canonical_form(s: &Structure) -> Result<Vec<u8>, CanonError> {
    canonical_form_with(s, &CanonConfig::default())
}

fn serialize(s: &Structure, cells: &[Vec<usize>], body: Vec<u32>) -> Vec<u8> {
    let sig = s.signature();
    let mut bytes = Vec::new();
    push_u32(&mut bytes, s.universe_size() as u32);
    push_u32(&mut bytes, sig.relations.len() as u32);
    for sym in &sig.relations {
        push_u32(&mut bytes, sym.name.len() as u32);
        bytes.extend_from_slice(sym.name.as_bytes());
        push_u32(&mut bytes, sym.arity as u32);
    }
    push_u32(&mut bytes, sig.constants.len() as u32);
    for name in &sig.constants {
        push_u32(&mut bytes, name.len() as u32);
        bytes.extend_from_slice(name.as_bytes());
    }
    // Cell sizes are invariant and make the key self-describing.
    push_u32(&mut bytes, cells.len() as u32);
    for c in cells {
        push_u32(&mut bytes, c.len() as u32);
    }
    for w in body {
        push_u32(&mut bytes, w);
    }
    bytes
}

fn push_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

// ---------------------------------------------------------------------------
// Isomorphism queries
// ---------------------------------------------------------------------------

/// True if the structures are isomorphic, decided by canonical forms.
/// Errors if signatures differ or a structure exceeds the configuration.
pub fn isomorphic_with(
    a: &Structure,
    b: &Structure,
    cfg: &CanonConfig,
) -> Result<bool, CanonError> {
    if a.signature() != b.signature() {
        return Err(CanonError::SignatureMismatch);
    }
    if a.universe_size() != b.universe_size() {
        return Ok(false);
    }
    Ok(canonical_form_with(a, cfg)? == canonical_form_with(b, cfg)?)
}

/// [`isomorphic_with`] under the default configuration.
pub fn isomorphic(a: &Structure, b: &Structure) -> Result<bool, CanonError> {
    isomorphic_with(a, b, &CanonConfig::default())
}

/// Reference isomorphism test: tries every permutation. Exponential; meant
/// as an oracle for cross-checking [`canonical_form`] on small inputs.
pub fn brute_force_isomorphic(a: &Structure, b: &Structure) -> Result<bool, CanonError> {
    if a.signature() != b.signature() {
        return Err(CanonError::SignatureMismatch);
    }
    let n = a.universe_size();
    if n != b.universe_size() {
        return Ok(false);
    }
    let sig = a.signature();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut ok = true;
        'check: {
            for i in 0..sig.constants.len() {
                if perm[a.constant_value(i)] != b.constant_value(i) {
                    ok = false;
                    break 'check;
                }
            }
            for rel in 0..sig.relations.len() {
                for tuple in a.tuples(rel) {
                    let mapped: Vec<usize> = tuple.iter().map(|&e| perm[e]).collect();
                    if !b.holds(rel, &mapped) {
                        ok = false;
                        break 'check;
                    }
                }
                if a.tuples(rel).len() != b.tuples(rel).len() {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            return Ok(true);
        }
        if !next_permutation(&mut perm) {
            return Ok(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ColoredGraph, Graph};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        let mut h = Graph::new(g.vertex_count());
        for (u, v) in g.edges() {
            h.add_edge(perm[u], perm[v]);
        }
        h
    }

    #[test]
    fn relabeling_preserves_canonical_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..100 {
            let n = rng.gen_range(1..9);
            let g = random_graph(&mut rng, n, 0.5);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            let ca = canonical_form(&Structure::from_graph(&g)).unwrap();
            let cb = canonical_form(&Structure::from_graph(&h)).unwrap();
            assert_eq!(ca, cb);
        }
    }

    #[test]
    fn canonical_equality_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF02);
        for _ in 0..200 {
            let n = rng.gen_range(1..7);
            let a = Structure::from_graph(&random_graph(&mut rng, n, 0.5));
            let b = Structure::from_graph(&random_graph(&mut rng, n, 0.5));
            let canon = isomorphic(&a, &b).unwrap();
            let brute = brute_force_isomorphic(&a, &b).unwrap();
            assert_eq!(canon, brute);
        }
    }

    #[test]
    fn colors_break_symmetry() {
        // Same edgeless graph, different color class sizes.
        let g = Graph::new(3);
        let mut a = ColoredGraph::new(g.clone(), 1);
        a.set_color(0, 0);
        let mut b = ColoredGraph::new(g, 1);
        b.set_color(0, 0);
        b.set_color(0, 1);
        let sa = Structure::from_colored_graph(&a);
        let sb = Structure::from_colored_graph(&b);
        assert!(!isomorphic(&sa, &sb).unwrap());
        assert!(!brute_force_isomorphic(&sa, &sb).unwrap());
    }

    #[test]
    fn constants_are_respected() {
        // Path 0-1-2: marking an end vs the middle must differ.
        let g = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut end = Structure::from_graph(&g);
        end.add_constant("c", 0).unwrap();
        let mut mid = Structure::from_graph(&g);
        mid.add_constant("c", 1).unwrap();
        let mut other_end = Structure::from_graph(&g);
        other_end.add_constant("c", 2).unwrap();
        assert!(!isomorphic(&end, &mid).unwrap());
        assert!(isomorphic(&end, &other_end).unwrap());
    }

    #[test]
    fn caps_and_budgets_error() {
        let s = Structure::from_graph(&Graph::new(11));
        assert!(matches!(canonical_form(&s), Err(CanonError::TooLarge { .. })));
        let small = Structure::from_graph(&Graph::new(9));
        let cfg = CanonConfig { cap: 10, perm_budget: 10 };
        assert!(matches!(
            canonical_form_with(&small, &cfg),
            Err(CanonError::PermutationBudget { .. })
        ));
    }

    #[test]
    fn directed_relations_distinguish_orientation() {
        let a = Structure::linear_order(3);
        let mut b = Structure::new(3, crate::structure::Signature::linear_order());
        // 2 < 1 < 0 is isomorphic to 0 < 1 < 2; a cyclic "order" is not.
        for (u, v) in [(0, 1), (1, 2), (2, 0)] {
            b.insert(0, &[u, v]).unwrap();
        }
        assert!(!isomorphic(&a, &b).unwrap());
        let mut c = Structure::new(3, crate::structure::Signature::linear_order());
        for (u, v) in [(2, 1), (2, 0), (1, 0)] {
            c.insert(0, &[u, v]).unwrap();
        }
        assert!(isomorphic(&a, &c).unwrap());
    }
}
