//! Quantifier-rank equivalence of structures via the Ehrenfeucht-Fraisse
//! game.
//!
//! Two structures satisfy the same first-order sentences of quantifier rank
//! at most `q` iff Duplicator wins the `q`-round game. The search explores
//! Spoiler moves on both sides and memoizes positions as sorted pair sets
//! together with the number of remaining rounds. Named constants seed the
//! initial position, so the atomic check covers them (and colors, which are
//! just unary relations).

use super::ast::{and, exists, forall, not, or, Formula};
use super::LogicError;
use crate::structure::Structure;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Resource limits for the game search.
#[derive(Clone, Copy, Debug)]
pub struct EfConfig {
    /// Largest universe size accepted on either side.
    pub universe_cap: usize,
}

impl Default for EfConfig {
    fn default() -> Self {
        EfConfig { universe_cap: 32 }
    }
}

/// True iff `s1` and `s2` agree on all FO sentences of quantifier rank at
/// most `q` (default limits).
pub fn fo_q_equivalent(s1: &Structure, s2: &Structure, q: usize) -> Result<bool, LogicError> {
    fo_q_equivalent_with(s1, s2, q, &EfConfig::default())
}

/// [`fo_q_equivalent`] with explicit limits.
pub fn fo_q_equivalent_with(
    s1: &Structure,
    s2: &Structure,
    q: usize,
    cfg: &EfConfig,
) -> Result<bool, LogicError> {
    if s1.signature() != s2.signature() {
        return Err(LogicError::SignatureMismatch);
    }
    for s in [s1, s2] {
        if s.universe_size() > cfg.universe_cap {
            return Err(LogicError::UniverseTooLarge {
                n: s.universe_size(),
                cap: cfg.universe_cap,
            });
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..s1.signature().constants.len())
        .map(|i| (s1.constant_value(i), s2.constant_value(i)))
        .collect();
    let mut memo = BTreeMap::new();
    Ok(win(s1, s2, &mut pairs, q, &mut memo))
}

/// The rank-`q` type sentence of `s` (its Hintikka sentence): true on `s`,
/// and true on another structure over the same relational signature exactly
/// when that structure is rank-`q` equivalent to `s`. When two structures
/// disagree at rank `q`, the type sentence of either one is a concrete
/// distinguishing sentence of rank `q`.
///
/// The sentence grows exponentially in `q`, so this is for small ranks.
/// Constants are not supported.
pub fn rank_q_type_sentence(s: &Structure, q: usize) -> Formula {
    debug_assert!(
        s.signature().constants.is_empty(),
        "type sentences name no constants"
    );
    type_sentence_rec(s, &mut Vec::new(), &mut Vec::new(), q)
}

fn type_sentence_rec(
    s: &Structure,
    anchors: &mut Vec<usize>,
    vars: &mut Vec<String>,
    q: usize,
) -> Formula {
    if q == 0 {
        // The full atomic type of the anchored tuple.
        let mut atoms = Vec::new();
        let k = anchors.len();
        for rel in 0..s.signature().relations.len() {
            let arity = s.signature().relations[rel].arity;
            if k == 0 {
                continue;
            }
            let mut idx = vec![0usize; arity];
            'odo: loop {
                let tuple: Vec<usize> = idx.iter().map(|&i| anchors[i]).collect();
                let atom = Formula::Atom {
                    rel: s.signature().relations[rel].name.clone(),
                    args: idx.iter().map(|&i| vars[i].clone()).collect(),
                };
                atoms.push(if s.holds(rel, &tuple) { atom } else { not(atom) });
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        break 'odo;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < k {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let atom = Formula::Eq(vars[i].clone(), vars[j].clone());
                atoms.push(if anchors[i] == anchors[j] { atom } else { not(atom) });
            }
        }
        return and(atoms);
    }
    let var = format!("h{}", vars.len());
    let mut some_branch = Vec::new();
    let mut all_branch = Vec::new();
    for a in 0..s.universe_size() {
        anchors.push(a);
        vars.push(var.clone());
        let sub = type_sentence_rec(s, anchors, vars, q - 1);
        anchors.pop();
        vars.pop();
        some_branch.push(exists(&var, sub.clone()));
        all_branch.push(sub);
    }
    and(vec![and(some_branch), forall(&var, or(all_branch))])
}

type Memo = BTreeMap<(Vec<(usize, usize)>, usize), bool>;

fn win(s1: &Structure, s2: &Structure, pairs: &mut Vec<(usize, usize)>, r: usize, memo: &mut Memo) -> bool {
    if !atomic_match(s1, s2, pairs) {
        return false;
    }
    if r == 0 {
        return true;
    }
    let key = {
        let mut k = pairs.clone();
        k.sort_unstable();
        k.dedup();
        (k, r)
    };
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut out = true;
    // Spoiler picks an element on either side; Duplicator must answer.
    'left: for a in 0..s1.universe_size() {
        for b in 0..s2.universe_size() {
            pairs.push((a, b));
            let ok = win(s1, s2, pairs, r - 1, memo);
            pairs.pop();
            if ok {
                continue 'left;
            }
        }
        out = false;
        break;
    }
    if out {
        'right: for b in 0..s2.universe_size() {
            for a in 0..s1.universe_size() {
                pairs.push((a, b));
                let ok = win(s1, s2, pairs, r - 1, memo);
                pairs.pop();
                if ok {
                    continue 'right;
                }
            }
            out = false;
            break;
        }
    }
    memo.insert(key, out);
    out
}

/// The pair list is a partial isomorphism: a well-defined injective map that
/// preserves and reflects every relation.
fn atomic_match(s1: &Structure, s2: &Structure, pairs: &[(usize, usize)]) -> bool {
    for (i, &(a1, b1)) in pairs.iter().enumerate() {
        for &(a2, b2) in &pairs[i + 1..] {
            if (a1 == a2) != (b1 == b2) {
                return false;
            }
        }
    }
    for rel in 0..s1.signature().relations.len() {
        let arity = s1.signature().relations[rel].arity;
        if !tuples_match(s1, s2, pairs, rel, arity) {
            return false;
        }
    }
    true
}

fn tuples_match(
    s1: &Structure,
    s2: &Structure,
    pairs: &[(usize, usize)],
    rel: usize,
    arity: usize,
) -> bool {
    // Odometer over all arity-length tuples of mapped pairs.
    let k = pairs.len();
    if k == 0 {
        return true;
    }
    let mut idx = alloc::vec![0usize; arity];
    loop {
        let t1: Vec<usize> = idx.iter().map(|&i| pairs[i].0).collect();
        let t2: Vec<usize> = idx.iter().map(|&i| pairs[i].1).collect();
        if s1.holds(rel, &t1) != s2.holds(rel, &t2) {
            return false;
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}
