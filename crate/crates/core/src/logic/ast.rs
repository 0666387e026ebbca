//! Formula ASTs for FO/MSO/CMSO over relational structures, with free-variable
//! computation, quantifier rank, logic classification, and a printer whose
//! output round-trips through the parser.
//!
//! Element variables start with a lowercase letter, set variables with an
//! uppercase letter. Connectivity has first-class nodes ([`Formula::Conn`])
//! that evaluators may treat natively; [`crate::logic::expand_conn`] rewrites
//! them into pure set quantification.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// The logic a formula lives in, derived from its syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LogicClass {
    /// No set variables and no cardinality constraints.
    Fo,
    /// Set variables (or connectivity nodes) but no cardinality constraints.
    Mso,
    /// Uses a cardinality constraint.
    Cmso,
}

impl core::fmt::Display for LogicClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LogicClass::Fo => write!(f, "FO"),
            LogicClass::Mso => write!(f, "MSO"),
            LogicClass::Cmso => write!(f, "CMSO"),
        }
    }
}

/// A formula over element variables (lowercase) and set variables (uppercase).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    /// Constant truth.
    True,
    /// Constant falsehood.
    False,
    /// Relation atom `R(args…)`; `E` and `<` are binary, colors `C0…` unary.
    Atom { rel: String, args: Vec<String> },
    /// Element equality.
    Eq(String, String),
    /// Set membership `elem ∈ set`.
    In { set: String, elem: String },
    /// Cardinality constraint `|set| ≡ r (mod k)`.
    Card { r: u64, k: u64, set: String },
    /// Connectivity of `x` and `y`, optionally within the subgraph induced
    /// by `via`; counts as quantifier rank 3, matching its set expansion.
    Conn { x: String, y: String, via: Option<String> },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// n-ary parity: true when an odd number of operands hold.
    Xor(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists { var: String, body: Box<Formula> },
    Forall { var: String, body: Box<Formula> },
    ExistsSet { var: String, body: Box<Formula> },
    ForallSet { var: String, body: Box<Formula> },
}

// Construction helpers; these keep hand-built formulas readable.

/// `R(args…)` atom.
pub fn atom(rel: &str, args: &[&str]) -> Formula {
    Formula::Atom { rel: rel.to_string(), args: args.iter().map(|a| a.to_string()).collect() }
}

/// The edge atom `E(x, y)`.
pub fn edge(x: &str, y: &str) -> Formula {
    atom("E", &[x, y])
}

/// Element equality `x = y`.
pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.to_string(), y.to_string())
}

/// Negated equality `x ≠ y`.
pub fn neq(x: &str, y: &str) -> Formula {
    not(eq(x, y))
}

/// Membership `x ∈ X`.
pub fn in_set(set: &str, elem: &str) -> Formula {
    Formula::In { set: set.to_string(), elem: elem.to_string() }
}

/// Negation.
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

/// Conjunction of all operands (empty = true).
pub fn and(fs: Vec<Formula>) -> Formula {
    Formula::And(fs)
}

/// Disjunction of all operands (empty = false).
pub fn or(fs: Vec<Formula>) -> Formula {
    Formula::Or(fs)
}

/// Binary exclusive or.
pub fn xor(a: Formula, b: Formula) -> Formula {
    Formula::Xor(alloc::vec![a, b])
}

/// Implication `a → b`.
pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

/// Biconditional `a ↔ b`.
pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

/// Existential element quantifier.
pub fn exists(var: &str, body: Formula) -> Formula {
    Formula::Exists { var: var.to_string(), body: Box::new(body) }
}

/// Universal element quantifier.
pub fn forall(var: &str, body: Formula) -> Formula {
    Formula::Forall { var: var.to_string(), body: Box::new(body) }
}

/// Existential set quantifier.
pub fn exists_set(var: &str, body: Formula) -> Formula {
    Formula::ExistsSet { var: var.to_string(), body: Box::new(body) }
}

/// Universal set quantifier.
pub fn forall_set(var: &str, body: Formula) -> Formula {
    Formula::ForallSet { var: var.to_string(), body: Box::new(body) }
}

/// Connectivity atom `conn(x, y)`.
pub fn conn(x: &str, y: &str) -> Formula {
    Formula::Conn { x: x.to_string(), y: y.to_string(), via: None }
}

/// Connectivity within the subgraph induced by `via`.
pub fn conn_via(via: &str, x: &str, y: &str) -> Formula {
    Formula::Conn { x: x.to_string(), y: y.to_string(), via: Some(via.to_string()) }
}

/// Cardinality constraint `|X| ≡ r (mod k)`.
pub fn card(r: u64, k: u64, set: &str) -> Formula {
    Formula::Card { r, k, set: set.to_string() }
}

impl Formula {
    /// Quantifier rank; set and element quantifiers both count, and a
    /// connectivity node counts as its rank-3 set expansion.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Atom { .. }
            | Formula::Eq(..)
            | Formula::In { .. }
            | Formula::Card { .. } => 0,
            Formula::Conn { .. } => 3,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) | Formula::Xor(fs) => {
                fs.iter().map(|f| f.quantifier_rank()).max().unwrap_or(0)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Formula::Exists { body, .. }
            | Formula::Forall { body, .. }
            | Formula::ExistsSet { body, .. }
            | Formula::ForallSet { body, .. } => 1 + body.quantifier_rank(),
        }
    }

    /// The logic class this formula needs.
    pub fn logic_class(&self) -> LogicClass {
        match self {
            Formula::Card { .. } => LogicClass::Cmso,
            Formula::In { .. } | Formula::Conn { .. } => LogicClass::Mso,
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => {
                LogicClass::Fo
            }
            Formula::Not(f) => f.logic_class(),
            Formula::And(fs) | Formula::Or(fs) | Formula::Xor(fs) => {
                fs.iter().map(|f| f.logic_class()).max().unwrap_or(LogicClass::Fo)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.logic_class().max(b.logic_class()),
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.logic_class(),
            Formula::ExistsSet { body, .. } | Formula::ForallSet { body, .. } => {
                body.logic_class().max(LogicClass::Mso)
            }
        }
    }

    /// Free element variables, sorted.
    pub fn free_element_vars(&self) -> Vec<String> {
        let mut acc = BTreeSet::new();
        self.walk_free(&mut BTreeSet::new(), &mut BTreeSet::new(), &mut acc, &mut BTreeSet::new());
        acc.into_iter().collect()
    }

    /// Free set variables, sorted.
    pub fn free_set_vars(&self) -> Vec<String> {
        let mut acc = BTreeSet::new();
        self.walk_free(&mut BTreeSet::new(), &mut BTreeSet::new(), &mut BTreeSet::new(), &mut acc);
        acc.into_iter().collect()
    }

    fn walk_free(
        &self,
        bound_elems: &mut BTreeSet<String>,
        bound_sets: &mut BTreeSet<String>,
        free_elems: &mut BTreeSet<String>,
        free_sets: &mut BTreeSet<String>,
    ) {
        let see_elem = |v: &String, bound: &BTreeSet<String>, free: &mut BTreeSet<String>| {
            if !bound.contains(v) {
                free.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => {
                for a in args {
                    see_elem(a, bound_elems, free_elems);
                }
            }
            Formula::Eq(a, b) => {
                see_elem(a, bound_elems, free_elems);
                see_elem(b, bound_elems, free_elems);
            }
            Formula::In { set, elem } => {
                see_elem(elem, bound_elems, free_elems);
                see_elem(set, bound_sets, free_sets);
            }
            Formula::Card { set, .. } => see_elem(set, bound_sets, free_sets),
            Formula::Conn { x, y, via } => {
                see_elem(x, bound_elems, free_elems);
                see_elem(y, bound_elems, free_elems);
                if let Some(s) = via {
                    see_elem(s, bound_sets, free_sets);
                }
            }
            Formula::Not(f) => f.walk_free(bound_elems, bound_sets, free_elems, free_sets),
            Formula::And(fs) | Formula::Or(fs) | Formula::Xor(fs) => {
                for f in fs {
                    f.walk_free(bound_elems, bound_sets, free_elems, free_sets);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.walk_free(bound_elems, bound_sets, free_elems, free_sets);
                b.walk_free(bound_elems, bound_sets, free_elems, free_sets);
            }
            Formula::Exists { var, body } | Formula::Forall { var, body } => {
                let fresh = bound_elems.insert(var.clone());
                body.walk_free(bound_elems, bound_sets, free_elems, free_sets);
                if fresh {
                    bound_elems.remove(var);
                }
            }
            Formula::ExistsSet { var, body } | Formula::ForallSet { var, body } => {
                let fresh = bound_sets.insert(var.clone());
                body.walk_free(bound_elems, bound_sets, free_elems, free_sets);
                if fresh {
                    bound_sets.remove(var);
                }
            }
        }
    }

    /// All variable names appearing anywhere (bound or free, both kinds).
    pub fn all_variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::In { set, elem } => {
                out.insert(set.clone());
                out.insert(elem.clone());
            }
            Formula::Card { set, .. } => {
                out.insert(set.clone());
            }
            Formula::Conn { x, y, via } => {
                out.insert(x.clone());
                out.insert(y.clone());
                if let Some(s) = via {
                    out.insert(s.clone());
                }
            }
            Formula::Not(f) => f.collect_names(out),
            Formula::And(fs) | Formula::Or(fs) | Formula::Xor(fs) => {
                for f in fs {
                    f.collect_names(out);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Exists { var, body }
            | Formula::Forall { var, body }
            | Formula::ExistsSet { var, body }
            | Formula::ForallSet { var, body } => {
                out.insert(var.clone());
                body.collect_names(out);
            }
        }
    }

    /// Renders the formula in the prefix syntax accepted by the parser.
    pub fn to_text(&self) -> String {
        match self {
            Formula::True => "(true)".to_string(),
            Formula::False => "(false)".to_string(),
            Formula::Atom { rel, args } => {
                let head = if let Some(k) = rel.strip_prefix('C') {
                    if k.chars().all(|c| c.is_ascii_digit()) && !k.is_empty() {
                        format!("color {k}")
                    } else {
                        rel.clone()
                    }
                } else {
                    rel.clone()
                };
                let mut s = format!("({head}");
                for a in args {
                    s.push(' ');
                    s.push_str(a);
                }
                s.push(')');
                s
            }
            Formula::Eq(a, b) => format!("(= {a} {b})"),
            Formula::In { set, elem } => format!("(in {set} {elem})"),
            Formula::Card { r, k, set } => format!("(card {r} {k} {set})"),
            Formula::Conn { x, y, via: None } => format!("(conn {x} {y})"),
            Formula::Conn { x, y, via: Some(s) } => format!("(connVia {s} {x} {y})"),
            Formula::Not(f) => format!("(not {})", f.to_text()),
            Formula::And(fs) => join("and", fs),
            Formula::Or(fs) => join("or", fs),
            Formula::Xor(fs) => join("xor", fs),
            Formula::Implies(a, b) => format!("(implies {} {})", a.to_text(), b.to_text()),
            Formula::Iff(a, b) => format!("(iff {} {})", a.to_text(), b.to_text()),
            Formula::Exists { var, body } => format!("(exists {var} {})", body.to_text()),
            Formula::Forall { var, body } => format!("(forall {var} {})", body.to_text()),
            Formula::ExistsSet { var, body } => format!("(existsSet {var} {})", body.to_text()),
            Formula::ForallSet { var, body } => format!("(forallSet {var} {})", body.to_text()),
        }
    }
}

fn join(head: &str, fs: &[Formula]) -> String {
    let mut s = String::from("(");
    s.push_str(head);
    for f in fs {
        s.push(' ');
        s.push_str(&f.to_text());
    }
    s.push(')');
    s
}

impl core::fmt::Display for Formula {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A variable assignment: element variables to vertices, set variables to
/// vertex sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub elems: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, crate::bitset::BitSet>,
}

impl Assignment {
    /// The empty assignment (for sentences).
    pub fn empty() -> Self {
        Assignment::default()
    }

    /// Assignment binding the listed element variables.
    pub fn of_elems(pairs: &[(&str, usize)]) -> Self {
        Assignment {
            elems: pairs.iter().map(|&(v, e)| (v.to_string(), e)).collect(),
            sets: BTreeMap::new(),
        }
    }
}

/// Picks a variable name based on `stem` that does not occur in `used`, and
/// records it as used.
pub fn fresh_name(stem: &str, used: &mut BTreeSet<String>) -> String {
    if used.insert(stem.to_string()) {
        return stem.to_string();
    }
    let mut i = 1usize;
    loop {
        let cand = format!("{stem}{i}");
        if used.insert(cand.clone()) {
            return cand;
        }
        i += 1;
    }
}
