//! Formula evaluation over finite structures.
//!
//! [`evaluate`] implements standard Tarskian semantics. Set quantifiers
//! enumerate all subsets of the universe (so the universe is capped at 63
//! elements whenever sets are involved), a step budget guards against
//! blow-ups, and connectivity nodes run as native breadth-first searches
//! unless the configuration forces their pure set-quantifier expansion.
//! Quantifier subformulas without free set variables are memoized on the
//! values of their free element variables within a single call.
//!
//! [`evaluate_naive`] is an independent, unmemoized reference evaluator used
//! to cross-check the main one on small structures.

use super::ast::{fresh_name, Assignment, Formula};
use super::LogicError;
use crate::structure::Structure;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Default evaluation step budget.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 30;

/// Largest universe on which set quantifiers are enumerated.
pub const SET_UNIVERSE_CAP: usize = 63;

/// Evaluation controls.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    /// Number of evaluation steps (node visits) allowed.
    pub budget: u64,
    /// Evaluate connectivity nodes by BFS; when false they are expanded
    /// into pure set quantification first.
    pub native_conn: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { budget: DEFAULT_EVAL_BUDGET, native_conn: true }
    }
}

struct Ctx<'a> {
    s: &'a Structure,
    budget: u64,
    steps: u64,
    elems: Vec<(&'a str, usize)>,
    sets: Vec<(&'a str, u64)>,
    /// Memo for quantifier nodes without free set variables, keyed by node
    /// address and the values of the node's free element variables.
    memo: &'a mut BTreeMap<(usize, Vec<usize>), bool>,
    /// Per-node cache: values of free element variables if the node has no
    /// free set variables, `None` otherwise.
    memo_key_vars: &'a mut BTreeMap<usize, Option<Vec<String>>>,
}

impl<'a> Ctx<'a> {
    fn tick(&mut self) -> Result<(), LogicError> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(LogicError::Budget { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn elem(&self, name: &str) -> Result<usize, LogicError> {
        self.elems
            .iter()
            .rev()
            .find(|&&(n, _)| n == name)
            .map(|&(_, v)| v)
            .ok_or_else(|| LogicError::UnboundElement { name: name.to_string() })
    }

    fn set(&self, name: &str) -> Result<u64, LogicError> {
        self.sets
            .iter()
            .rev()
            .find(|&&(n, _)| n == name)
            .map(|&(_, m)| m)
            .ok_or_else(|| LogicError::UnboundSet { name: name.to_string() })
    }

    fn rel(&self, name: &str, args: usize) -> Result<usize, LogicError> {
        let idx = self
            .s
            .signature()
            .relation_index(name)
            .ok_or_else(|| LogicError::UnknownRelation { name: name.to_string() })?;
        let expected = self.s.signature().relations[idx].arity;
        if expected != args {
            return Err(LogicError::ArityMismatch { name: name.to_string(), expected, got: args });
        }
        Ok(idx)
    }

    /// BFS connectivity between two vertices, optionally restricted to the
    /// subgraph induced by `via`.
    fn connected(&mut self, x: usize, y: usize, via: Option<u64>) -> Result<bool, LogicError> {
        let e = self.rel("E", 2)?;
        let inside = |v: usize| via.is_none_or(|m| m >> v & 1 == 1);
        if !inside(x) || !inside(y) {
            return Ok(false);
        }
        if x == y {
            return Ok(true);
        }
        let n = self.s.universe_size();
        let mut seen = alloc::vec![false; n];
        seen[x] = true;
        let mut frontier = alloc::vec![x];
        while let Some(u) = frontier.pop() {
            self.tick()?;
            for v in self.s.binary_row(e, u).iter() {
                if inside(v) && !seen[v] {
                    if v == y {
                        return Ok(true);
                    }
                    seen[v] = true;
                    frontier.push(v);
                }
            }
        }
        Ok(false)
    }

    fn memo_vars(&mut self, f: &'a Formula) -> Option<Vec<String>> {
        let key = f as *const Formula as usize;
        if let Some(v) = self.memo_key_vars.get(&key) {
            return v.clone();
        }
        let v = if f.free_set_vars().is_empty() { Some(f.free_element_vars()) } else { None };
        self.memo_key_vars.insert(key, v.clone());
        v
    }

    fn eval(&mut self, f: &'a Formula) -> Result<bool, LogicError> {
        self.tick()?;
        // Quantifier and connectivity nodes are worth memoizing; their value
        // only depends on free element variables once no set variable leaks
        // in from outside.
        let memo_key = match f {
            Formula::Exists { .. }
            | Formula::Forall { .. }
            | Formula::ExistsSet { .. }
            | Formula::ForallSet { .. }
            | Formula::Conn { .. } => self.memo_vars(f).map(|vars| {
                let vals: Result<Vec<usize>, LogicError> =
                    vars.iter().map(|v| self.elem(v)).collect();
                (f as *const Formula as usize, vals)
            }),
            _ => None,
        };
        let memo_key = match memo_key {
            Some((ptr, Ok(vals))) => {
                if let Some(&hit) = self.memo.get(&(ptr, vals.clone())) {
                    return Ok(hit);
                }
                Some((ptr, vals))
            }
            Some((_, Err(e))) => return Err(e),
            None => None,
        };
        let out = self.eval_raw(f)?;
        if let Some(key) = memo_key {
            self.memo.insert(key, out);
        }
        Ok(out)
    }

    fn eval_raw(&mut self, f: &'a Formula) -> Result<bool, LogicError> {
        match f {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom { rel, args } => {
                let idx = self.rel(rel, args.len())?;
                let tuple: Result<Vec<usize>, LogicError> =
                    args.iter().map(|a| self.elem(a)).collect();
                Ok(self.s.holds(idx, &tuple?))
            }
            Formula::Eq(a, b) => Ok(self.elem(a)? == self.elem(b)?),
            Formula::In { set, elem } => {
                let m = self.set(set)?;
                let v = self.elem(elem)?;
                Ok(m >> v & 1 == 1)
            }
            Formula::Card { r, k, set } => {
                if *k == 0 || r >= k {
                    return Err(LogicError::InvalidCard { r: *r, k: *k });
                }
                let m = self.set(set)?;
                Ok(m.count_ones() as u64 % k == *r)
            }
            Formula::Conn { x, y, via } => {
                let xv = self.elem(x)?;
                let yv = self.elem(y)?;
                let mask = match via {
                    Some(s) => Some(self.set(s)?),
                    None => None,
                };
                self.connected(xv, yv, mask)
            }
            Formula::Not(g) => Ok(!self.eval(g)?),
            Formula::And(fs) => {
                for g in fs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Xor(fs) => {
                let mut parity = false;
                for g in fs {
                    parity ^= self.eval(g)?;
                }
                Ok(parity)
            }
            Formula::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            Formula::Iff(a, b) => Ok(self.eval(a)? == self.eval(b)?),
            Formula::Exists { var, body } => {
                for v in 0..self.s.universe_size() {
                    self.elems.push((var, v));
                    let hit = self.eval(body);
                    self.elems.pop();
                    if hit? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Forall { var, body } => {
                for v in 0..self.s.universe_size() {
                    self.elems.push((var, v));
                    let hit = self.eval(body);
                    self.elems.pop();
                    if !hit? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::ExistsSet { var, body } => {
                for m in self.subsets()? {
                    self.sets.push((var, m));
                    let hit = self.eval(body);
                    self.sets.pop();
                    if hit? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::ForallSet { var, body } => {
                for m in self.subsets()? {
                    self.sets.push((var, m));
                    let hit = self.eval(body);
                    self.sets.pop();
                    if !hit? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn subsets(&self) -> Result<core::ops::RangeInclusive<u64>, LogicError> {
        let n = self.s.universe_size();
        if n > SET_UNIVERSE_CAP {
            return Err(LogicError::UniverseTooLarge { n, cap: SET_UNIVERSE_CAP });
        }
        let top = if n == 0 { 0 } else { (1u64 << n) - 1 };
        Ok(0..=top)
    }
}

fn set_to_mask(s: &crate::bitset::BitSet, n: usize) -> Result<u64, LogicError> {
    if n > SET_UNIVERSE_CAP {
        return Err(LogicError::UniverseTooLarge { n, cap: SET_UNIVERSE_CAP });
    }
    let mut m = 0u64;
    for v in s.iter() {
        if v >= n {
            return Err(LogicError::UniverseTooLarge { n: v + 1, cap: n });
        }
        m |= 1 << v;
    }
    Ok(m)
}

fn check_bound(f: &Formula, a: &Assignment) -> Result<(), LogicError> {
    for v in f.free_element_vars() {
        if !a.elems.contains_key(&v) {
            return Err(LogicError::UnboundElement { name: v });
        }
    }
    for v in f.free_set_vars() {
        if !a.sets.contains_key(&v) {
            return Err(LogicError::UnboundSet { name: v });
        }
    }
    Ok(())
}

/// A reusable evaluation session against one structure.
///
/// The session keeps the subformula memo alive across queries, so repeated
/// evaluations of the same formula objects under different assignments share
/// work. The memo is keyed by formula node identity, which is why every
/// formula handed to [`Evaluator::eval`] must outlive the structure borrow.
pub struct Evaluator<'s> {
    s: &'s Structure,
    cfg: EvalConfig,
    /// Connectivity expansions pinned per formula root (pure-MSO mode only).
    expanded: BTreeMap<usize, Box<Formula>>,
    memo: BTreeMap<(usize, Vec<usize>), bool>,
    memo_key_vars: BTreeMap<usize, Option<Vec<String>>>,
}

impl<'s> Evaluator<'s> {
    /// Opens a session on `s`.
    pub fn new(s: &'s Structure, cfg: EvalConfig) -> Self {
        Evaluator {
            s,
            cfg,
            expanded: BTreeMap::new(),
            memo: BTreeMap::new(),
            memo_key_vars: BTreeMap::new(),
        }
    }

    /// Evaluates `f` under `a`; the step budget applies per call.
    pub fn eval(&mut self, f: &'s Formula, a: &Assignment) -> Result<bool, LogicError> {
        check_bound(f, a)?;
        let key = f as *const Formula as usize;
        if !self.cfg.native_conn && !self.expanded.contains_key(&key) {
            self.expanded.insert(key, Box::new(expand_conn(f)));
        }
        let Evaluator { s, cfg, expanded, memo, memo_key_vars } = self;
        let root: &Formula = if cfg.native_conn { f } else { expanded[&key].as_ref() };
        let mut ctx = Ctx {
            s,
            budget: cfg.budget,
            steps: 0,
            elems: a.elems.iter().map(|(k, &v)| (k.as_str(), v)).collect(),
            sets: a
                .sets
                .iter()
                .map(|(k, set)| Ok((k.as_str(), set_to_mask(set, s.universe_size())?)))
                .collect::<Result<Vec<_>, LogicError>>()?,
            memo,
            memo_key_vars,
        };
        ctx.eval(root)
    }
}

/// Evaluates `f` on `s` under `a` with explicit configuration.
pub fn evaluate_with(
    s: &Structure,
    f: &Formula,
    a: &Assignment,
    cfg: &EvalConfig,
) -> Result<bool, LogicError> {
    Evaluator::new(s, *cfg).eval(f, a)
}

/// Evaluates `f` on `s` under `a` with the default configuration.
pub fn evaluate(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool, LogicError> {
    evaluate_with(s, f, a, &EvalConfig::default())
}

/// Evaluates a sentence (no free variables).
pub fn evaluate_sentence(s: &Structure, f: &Formula) -> Result<bool, LogicError> {
    evaluate(s, f, &Assignment::empty())
}

// ---------------------------------------------------------------------------
// Connectivity expansion
// ---------------------------------------------------------------------------

/// Rewrites every connectivity node into its pure MSO definition: y lies in
/// every superset of {x} closed under edges (within the `via` set when one
/// is given).
pub fn expand_conn(f: &Formula) -> Formula {
    let mut used = f.all_variable_names();
    expand_rec(f, &mut used)
}

fn expand_rec(f: &Formula, used: &mut BTreeSet<String>) -> Formula {
    use super::ast::{and, edge, forall, forall_set, implies, in_set};
    match f {
        Formula::Conn { x, y, via } => {
            let z = fresh_name("Zconn", used);
            let u = fresh_name("uconn", used);
            let v = fresh_name("vconn", used);
            let step = match via {
                None => and(alloc::vec![in_set(&z, &u), edge(&u, &v)]),
                Some(s) => and(alloc::vec![
                    in_set(&z, &u),
                    in_set(s, &u),
                    in_set(s, &v),
                    edge(&u, &v),
                ]),
            };
            let closed = forall(&u, forall(&v, implies(step, in_set(&z, &v))));
            let spread =
                forall_set(&z, implies(and(alloc::vec![in_set(&z, x), closed]), in_set(&z, y)));
            match via {
                None => spread,
                Some(s) => and(alloc::vec![in_set(s, x), in_set(s, y), spread]),
            }
        }
        Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..)
        | Formula::In { .. } | Formula::Card { .. } => f.clone(),
        Formula::Not(g) => Formula::Not(Box::new(expand_rec(g, used))),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| expand_rec(g, used)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| expand_rec(g, used)).collect()),
        Formula::Xor(fs) => Formula::Xor(fs.iter().map(|g| expand_rec(g, used)).collect()),
        Formula::Implies(a, b) => {
            Formula::Implies(Box::new(expand_rec(a, used)), Box::new(expand_rec(b, used)))
        }
        Formula::Iff(a, b) => {
            Formula::Iff(Box::new(expand_rec(a, used)), Box::new(expand_rec(b, used)))
        }
        Formula::Exists { var, body } => {
            Formula::Exists { var: var.clone(), body: Box::new(expand_rec(body, used)) }
        }
        Formula::Forall { var, body } => {
            Formula::Forall { var: var.clone(), body: Box::new(expand_rec(body, used)) }
        }
        Formula::ExistsSet { var, body } => {
            Formula::ExistsSet { var: var.clone(), body: Box::new(expand_rec(body, used)) }
        }
        Formula::ForallSet { var, body } => {
            Formula::ForallSet { var: var.clone(), body: Box::new(expand_rec(body, used)) }
        }
    }
}

// ---------------------------------------------------------------------------
// Naive reference evaluator
// ---------------------------------------------------------------------------

/// Unmemoized reference evaluation with pure set-quantifier connectivity;
/// exponential and meant for cross-checking on small structures.
pub fn evaluate_naive(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool, LogicError> {
    check_bound(f, a)?;
    let f = expand_conn(f);
    let mut elems: BTreeMap<String, usize> = a.elems.clone();
    let mut sets: BTreeMap<String, BTreeSet<usize>> = a
        .sets
        .iter()
        .map(|(k, set)| (k.clone(), set.iter().collect()))
        .collect();
    naive_rec(s, &f, &mut elems, &mut sets)
}

fn naive_rec(
    s: &Structure,
    f: &Formula,
    elems: &mut BTreeMap<String, usize>,
    sets: &mut BTreeMap<String, BTreeSet<usize>>,
) -> Result<bool, LogicError> {
    let lookup_elem = |elems: &BTreeMap<String, usize>, v: &String| {
        elems.get(v).copied().ok_or_else(|| LogicError::UnboundElement { name: v.clone() })
    };
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom { rel, args } => {
            let idx = s
                .signature()
                .relation_index(rel)
                .ok_or_else(|| LogicError::UnknownRelation { name: rel.clone() })?;
            let expected = s.signature().relations[idx].arity;
            if expected != args.len() {
                return Err(LogicError::ArityMismatch {
                    name: rel.clone(),
                    expected,
                    got: args.len(),
                });
            }
            let tuple: Result<Vec<usize>, LogicError> =
                args.iter().map(|v| lookup_elem(elems, v)).collect();
            Ok(s.holds(idx, &tuple?))
        }
        Formula::Eq(a, b) => Ok(lookup_elem(elems, a)? == lookup_elem(elems, b)?),
        Formula::In { set, elem } => {
            let v = lookup_elem(elems, elem)?;
            let set =
                sets.get(set).ok_or_else(|| LogicError::UnboundSet { name: set.clone() })?;
            Ok(set.contains(&v))
        }
        Formula::Card { r, k, set } => {
            if *k == 0 || r >= k {
                return Err(LogicError::InvalidCard { r: *r, k: *k });
            }
            let set =
                sets.get(set).ok_or_else(|| LogicError::UnboundSet { name: set.clone() })?;
            Ok(set.len() as u64 % k == *r)
        }
        Formula::Conn { .. } => unreachable!("connectivity expanded before naive evaluation"),
        Formula::Not(g) => Ok(!naive_rec(s, g, elems, sets)?),
        Formula::And(fs) => {
            let mut out = true;
            for g in fs {
                out &= naive_rec(s, g, elems, sets)?;
            }
            Ok(out)
        }
        Formula::Or(fs) => {
            let mut out = false;
            for g in fs {
                out |= naive_rec(s, g, elems, sets)?;
            }
            Ok(out)
        }
        Formula::Xor(fs) => {
            let mut out = false;
            for g in fs {
                out ^= naive_rec(s, g, elems, sets)?;
            }
            Ok(out)
        }
        Formula::Implies(a, b) => {
            let av = naive_rec(s, a, elems, sets)?;
            let bv = naive_rec(s, b, elems, sets)?;
            Ok(!av || bv)
        }
        Formula::Iff(a, b) => {
            let av = naive_rec(s, a, elems, sets)?;
            let bv = naive_rec(s, b, elems, sets)?;
            Ok(av == bv)
        }
        Formula::Exists { var, body } | Formula::Forall { var, body } => {
            let exists = matches!(f, Formula::Exists { .. });
            let saved = elems.get(var).copied();
            let mut out = !exists;
            for v in 0..s.universe_size() {
                elems.insert(var.clone(), v);
                let hit = naive_rec(s, body, elems, sets)?;
                if exists {
                    out |= hit;
                } else {
                    out &= hit;
                }
            }
            match saved {
                Some(v) => {
                    elems.insert(var.clone(), v);
                }
                None => {
                    elems.remove(var);
                }
            }
            Ok(out)
        }
        Formula::ExistsSet { var, body } | Formula::ForallSet { var, body } => {
            let n = s.universe_size();
            if n > SET_UNIVERSE_CAP {
                return Err(LogicError::UniverseTooLarge { n, cap: SET_UNIVERSE_CAP });
            }
            let exists = matches!(f, Formula::ExistsSet { .. });
            let saved = sets.get(var).cloned();
            let mut out = !exists;
            for mask in 0..(1u64 << n) {
                let subset: BTreeSet<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                sets.insert(var.clone(), subset);
                let hit = naive_rec(s, body, elems, sets)?;
                if exists {
                    out |= hit;
                } else {
                    out &= hit;
                }
            }
            match saved {
                Some(v) => {
                    sets.insert(var.clone(), v);
                }
                None => {
                    sets.remove(var);
                }
            }
            Ok(out)
        }
    }
}
