//! Definable reductions between structures: d-dimensional interpretations
//! with graph targets, formula rewriting through them, colored transductions,
//! and the concrete interpretations that recover paths from flipped patterns.
//!
//! An interpretation carries a domain formula `δ(x̄)` and an edge formula
//! `φ_E(x̄, ȳ)` over a source signature. Applying it to a structure keeps the
//! d-tuples satisfying `δ` (in lexicographic order) as new vertices and puts
//! an edge between two of them when `φ_E` holds in either direction, so the
//! output is symmetric and irreflexive by construction. Rewriting transports
//! a formula about the output graph to an equivalent formula about the
//! source: `I(G) ⊨ φ` exactly when `G ⊨ rewrite_through(I, φ)`.
//!
//! Every concrete interpretation below is a single fixed object that serves
//! all sizes in its family; none of the builders takes a size parameter.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::graph::{ColoredGraph, Graph};
use crate::logic::ast::{
    and, atom, edge, eq, exists, exists_set, forall, forall_set, fresh_name, iff, implies, in_set,
    neq, not, or, xor, Assignment, Formula, LogicClass,
};
use crate::logic::eval::{expand_conn, EvalConfig, Evaluator};
use crate::logic::named::{phi_same_parity, twins};
use crate::logic::LogicError;
use crate::patterns::{Flavor, MPathsCoords};
use crate::structure::{color_name, Structure};

// ---------------------------------------------------------------------------
// Errors and configuration
// ---------------------------------------------------------------------------

/// Errors from building or applying interpretations and transductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterpError {
    /// Interpretations must have dimension at least one.
    ZeroDimension,
    /// Set quantification cannot range over tuples, so any logic beyond FO
    /// requires dimension one.
    MsoNeedsDimensionOne { dim: usize },
    /// A formula uses more logic than the interpretation declares.
    FormulaBeyondLogic { declared: LogicClass, found: LogicClass },
    /// The tuple universe `n^d` exceeds the configured cap.
    TupleBudget { tuples: u128, cap: u64 },
    /// Enumerating `2^bits` colorings exceeds the configured cap.
    ColoringBudget { bits: usize, cap: u64 },
    /// A coloring assignment has the wrong number of classes.
    ColorCountMismatch { expected: usize, got: usize },
    /// Transductions require a one-dimensional interpretation.
    TransductionDimension { dim: usize },
    /// A core-selection parameter below its validated range.
    CoreTooSmall { name: &'static str, min: usize, got: usize },
    /// Formula evaluation or validation failed underneath.
    Logic(LogicError),
}

impl From<LogicError> for InterpError {
    fn from(e: LogicError) -> Self {
        InterpError::Logic(e)
    }
}

impl core::fmt::Display for InterpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InterpError::ZeroDimension => write!(f, "interpretation dimension must be at least 1"),
            InterpError::MsoNeedsDimensionOne { dim } => {
                write!(f, "set quantification needs dimension 1, got {dim}")
            }
            InterpError::FormulaBeyondLogic { declared, found } => {
                write!(f, "formula is {found} but the interpretation declares {declared}")
            }
            InterpError::TupleBudget { tuples, cap } => {
                write!(f, "{tuples} candidate tuples exceed the cap {cap}")
            }
            InterpError::ColoringBudget { bits, cap } => {
                write!(f, "2^{bits} colorings exceed the cap {cap}")
            }
            InterpError::ColorCountMismatch { expected, got } => {
                write!(f, "coloring has {got} classes, transduction expects {expected}")
            }
            InterpError::TransductionDimension { dim } => {
                write!(f, "transductions need a 1-dimensional interpretation, got {dim}")
            }
            InterpError::CoreTooSmall { name, min, got } => {
                write!(f, "core selection needs {name} >= {min}, got {got}")
            }
            InterpError::Logic(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for InterpError {}

/// Resource limits for applying interpretations and transductions.
#[derive(Clone, Debug)]
pub struct InterpConfig {
    /// Largest admissible tuple universe `n^d`.
    pub max_tuples: u64,
    /// Largest admissible number of colorings `2^(k·n)` for enumeration.
    pub max_colorings: u64,
    /// Evaluation settings for the domain and edge formulas.
    pub eval: EvalConfig,
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig { max_tuples: 1 << 20, max_colorings: 1 << 16, eval: EvalConfig::default() }
    }
}

// ---------------------------------------------------------------------------
// Interpretations
// ---------------------------------------------------------------------------

/// A d-dimensional interpretation with a graph target.
///
/// The `logic` tag is the most expressive logic the interpretation is willing
/// to host in [`rewrite_through`]; its own formulas must stay within it, and
/// anything beyond FO forces dimension one.
#[derive(Clone, Debug)]
pub struct Interpretation {
    logic: LogicClass,
    dim: usize,
    x_vars: Vec<String>,
    y_vars: Vec<String>,
    delta: Formula,
    edge: Formula,
}

impl Interpretation {
    /// Validates and builds an interpretation: `delta` may use only the
    /// `x_vars` freely, `edge` only `x_vars ∪ y_vars`, and neither may have
    /// free set variables.
    pub fn new(
        logic: LogicClass,
        dim: usize,
        x_vars: Vec<String>,
        y_vars: Vec<String>,
        delta: Formula,
        edge: Formula,
    ) -> Result<Self, InterpError> {
        if dim == 0 {
            return Err(InterpError::ZeroDimension);
        }
        if logic != LogicClass::Fo && dim != 1 {
            return Err(InterpError::MsoNeedsDimensionOne { dim });
        }
        assert_eq!(x_vars.len(), dim, "x̄ must list one variable per dimension");
        assert_eq!(y_vars.len(), dim, "ȳ must list one variable per dimension");
        let mut all: BTreeSet<&String> = x_vars.iter().collect();
        all.extend(y_vars.iter());
        assert_eq!(all.len(), 2 * dim, "tuple variables must be pairwise distinct");
        let found = delta.logic_class().max(edge.logic_class());
        if found > logic {
            return Err(InterpError::FormulaBeyondLogic { declared: logic, found });
        }
        let xs: BTreeSet<String> = x_vars.iter().cloned().collect();
        if !delta.free_element_vars().iter().all(|v| xs.contains(v))
            || !delta.free_set_vars().is_empty()
        {
            return Err(LogicError::WrongFreeVariables { expected: "δ free variables within x̄" }
                .into());
        }
        let mut xy = xs;
        xy.extend(y_vars.iter().cloned());
        if !edge.free_element_vars().iter().all(|v| xy.contains(v))
            || !edge.free_set_vars().is_empty()
        {
            return Err(LogicError::WrongFreeVariables {
                expected: "φ_E free variables within x̄ ∪ ȳ",
            }
            .into());
        }
        Ok(Interpretation { logic, dim, x_vars, y_vars, delta, edge })
    }

    /// The declared logic tag.
    pub fn logic(&self) -> LogicClass {
        self.logic
    }

    /// The dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Variables of the first edge argument, one per dimension.
    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    /// Variables of the second edge argument.
    pub fn y_vars(&self) -> &[String] {
        &self.y_vars
    }

    /// The domain formula `δ(x̄)`.
    pub fn delta(&self) -> &Formula {
        &self.delta
    }

    /// The edge formula `φ_E(x̄, ȳ)`.
    pub fn edge(&self) -> &Formula {
        &self.edge
    }
}

/// The result of applying an interpretation: the output graph together with
/// the satisfying source tuples, in lexicographic order; output vertex `v`
/// is `tuples[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpreted {
    pub graph: Graph,
    pub tuples: Vec<Vec<usize>>,
}

fn tuple_assignment(vars: &[String], vals: &[usize]) -> Assignment {
    let mut a = Assignment::empty();
    for (v, &x) in vars.iter().zip(vals) {
        a.elems.insert(v.clone(), x);
    }
    a
}

fn pair_assignment(i: &Interpretation, xs: &[usize], ys: &[usize]) -> Assignment {
    let mut a = tuple_assignment(&i.x_vars, xs);
    for (v, &x) in i.y_vars.iter().zip(ys) {
        a.elems.insert(v.clone(), x);
    }
    a
}

/// Applies `i` to `s` with explicit limits.
pub fn apply_interpretation_with(
    i: &Interpretation,
    s: &Structure,
    cfg: &InterpConfig,
) -> Result<Interpreted, InterpError> {
    let n = s.universe_size();
    let total = (n as u128).pow(i.dim as u32);
    if total > cfg.max_tuples as u128 {
        return Err(InterpError::TupleBudget { tuples: total, cap: cfg.max_tuples });
    }
    let mut session = Evaluator::new(s, cfg.eval);
    let mut selected: Vec<Vec<usize>> = Vec::new();
    if n > 0 {
        let mut tuple = vec![0usize; i.dim];
        'tuples: loop {
            let a = tuple_assignment(&i.x_vars, &tuple);
            if session.eval(&i.delta, &a)? {
                selected.push(tuple.clone());
            }
            let mut k = i.dim;
            while k > 0 {
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < n {
                    continue 'tuples;
                }
                tuple[k] = 0;
            }
            break;
        }
    }
    let m = selected.len();
    let mut graph = Graph::new(m);
    for p in 0..m {
        for q in (p + 1)..m {
            let mut hit = session.eval(&i.edge, &pair_assignment(i, &selected[p], &selected[q]))?;
            if !hit {
                hit = session.eval(&i.edge, &pair_assignment(i, &selected[q], &selected[p]))?;
            }
            if hit {
                graph.add_edge(p, q);
            }
        }
    }
    Ok(Interpreted { graph, tuples: selected })
}

/// Applies `i` to `s` with default limits.
pub fn apply_interpretation(i: &Interpretation, s: &Structure) -> Result<Interpreted, InterpError> {
    apply_interpretation_with(i, s, &InterpConfig::default())
}

// ---------------------------------------------------------------------------
// Rewriting formulas through an interpretation
// ---------------------------------------------------------------------------

/// Substitutes free element variables of `f` according to `map`,
/// alpha-renaming bound variables that would capture a replacement.
fn subst_elems(f: &Formula, map: &BTreeMap<String, String>, used: &mut BTreeSet<String>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    let lookup = |name: &String| map.get(name).unwrap_or(name).clone();
    match f {
        Formula::True | Formula::False | Formula::Card { .. } => f.clone(),
        Formula::Atom { rel, args } => {
            Formula::Atom { rel: rel.clone(), args: args.iter().map(lookup).collect() }
        }
        Formula::Eq(a, b) => Formula::Eq(lookup(a), lookup(b)),
        Formula::In { set, elem } => Formula::In { set: set.clone(), elem: lookup(elem) },
        Formula::Conn { x, y, via } => {
            Formula::Conn { x: lookup(x), y: lookup(y), via: via.clone() }
        }
        Formula::Not(g) => not(subst_elems(g, map, used)),
        Formula::And(gs) => and(gs.iter().map(|g| subst_elems(g, map, used)).collect()),
        Formula::Or(gs) => or(gs.iter().map(|g| subst_elems(g, map, used)).collect()),
        Formula::Xor(gs) => {
            Formula::Xor(gs.iter().map(|g| subst_elems(g, map, used)).collect())
        }
        Formula::Implies(a, b) => implies(subst_elems(a, map, used), subst_elems(b, map, used)),
        Formula::Iff(a, b) => iff(subst_elems(a, map, used), subst_elems(b, map, used)),
        Formula::Exists { var, body } | Formula::Forall { var, body } => {
            let is_exists = matches!(f, Formula::Exists { .. });
            let mut inner = map.clone();
            inner.remove(var);
            let (binder, new_body) = if inner.values().any(|v| v == var) {
                // The binder would capture a substituted name; rename it.
                let fresh = fresh_name(var, used);
                let mut rename = BTreeMap::new();
                rename.insert(var.clone(), fresh.clone());
                let renamed = subst_elems(body, &rename, used);
                (fresh, subst_elems(&renamed, &inner, used))
            } else {
                (var.clone(), subst_elems(body, &inner, used))
            };
            if is_exists {
                exists(&binder, new_body)
            } else {
                forall(&binder, new_body)
            }
        }
        Formula::ExistsSet { var, body } => exists_set(var, subst_elems(body, map, used)),
        Formula::ForallSet { var, body } => forall_set(var, subst_elems(body, map, used)),
    }
}

/// Instantiates a formula of the interpretation (its `δ` or `φ_E`) with the
/// given component names standing for `x̄` (and optionally `ȳ`).
fn instantiate(
    f: &Formula,
    xs: &[String],
    xvals: &[String],
    ys: &[String],
    yvals: &[String],
    used: &mut BTreeSet<String>,
) -> Formula {
    let mut map = BTreeMap::new();
    for (v, c) in xs.iter().zip(xvals) {
        if v != c {
            map.insert(v.clone(), c.clone());
        }
    }
    for (v, c) in ys.iter().zip(yvals) {
        if v != c {
            map.insert(v.clone(), c.clone());
        }
    }
    subst_elems(f, &map, used)
}

/// Fresh component names for source variable `v`: `v` itself in dimension
/// one, otherwise `v_1 … v_d` (with underscores appended until fresh).
fn component_names(v: &str, dim: usize, used: &mut BTreeSet<String>) -> Vec<String> {
    if dim == 1 {
        return vec![v.to_string()];
    }
    let mut sep = String::from("_");
    loop {
        let names: Vec<String> = (1..=dim).map(|k| format!("{v}{sep}{k}")).collect();
        if names.iter().all(|n| !used.contains(n)) {
            used.extend(names.iter().cloned());
            return names;
        }
        sep.push('_');
    }
}

struct Rewriter<'a> {
    i: &'a Interpretation,
    used: BTreeSet<String>,
    env: BTreeMap<String, Vec<String>>,
}

impl Rewriter<'_> {
    fn comps(&self, name: &String) -> Result<&Vec<String>, InterpError> {
        self.env
            .get(name)
            .ok_or_else(|| LogicError::UnboundElement { name: name.clone() }.into())
    }

    fn delta_for(&mut self, comps: &[String]) -> Formula {
        let i = self.i;
        instantiate(&i.delta, &i.x_vars, comps, &[], &[], &mut self.used)
    }

    /// The relativization guard `∀w (w ∈ X → δ(w))` for a set variable.
    fn set_guard(&mut self, set: &str) -> Formula {
        let w = fresh_name("w", &mut self.used);
        let body = self.delta_for(core::slice::from_ref(&w));
        forall(&w, implies(in_set(set, &w), body))
    }

    fn rewrite(&mut self, f: &Formula) -> Result<Formula, InterpError> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Card { .. } => f.clone(),
            Formula::Atom { rel, args } => {
                if rel != "E" {
                    return Err(LogicError::UnknownRelation { name: rel.clone() }.into());
                }
                if args.len() != 2 {
                    return Err(LogicError::ArityMismatch {
                        name: rel.clone(),
                        expected: 2,
                        got: args.len(),
                    }
                    .into());
                }
                let ax = self.comps(&args[0])?.clone();
                let ay = self.comps(&args[1])?.clone();
                let i = self.i;
                let distinct = not(and(
                    ax.iter().zip(&ay).map(|(a, b)| eq(a, b)).collect::<Vec<_>>(),
                ));
                let fwd = instantiate(&i.edge, &i.x_vars, &ax, &i.y_vars, &ay, &mut self.used);
                let rev = instantiate(&i.edge, &i.x_vars, &ay, &i.y_vars, &ax, &mut self.used);
                and(vec![distinct, or(vec![fwd, rev])])
            }
            Formula::Eq(a, b) => {
                let ax = self.comps(a)?.clone();
                let ay = self.comps(b)?.clone();
                and(ax.iter().zip(&ay).map(|(a, b)| eq(a, b)).collect::<Vec<_>>())
            }
            Formula::In { set, elem } => {
                debug_assert_eq!(self.i.dim, 1, "set variables force dimension one");
                Formula::In { set: set.clone(), elem: self.comps(elem)?[0].clone() }
            }
            Formula::Conn { .. } => unreachable!("connectivity is expanded before rewriting"),
            Formula::Not(g) => not(self.rewrite(g)?),
            Formula::And(gs) => {
                and(gs.iter().map(|g| self.rewrite(g)).collect::<Result<Vec<_>, _>>()?)
            }
            Formula::Or(gs) => {
                or(gs.iter().map(|g| self.rewrite(g)).collect::<Result<Vec<_>, _>>()?)
            }
            Formula::Xor(gs) => {
                Formula::Xor(gs.iter().map(|g| self.rewrite(g)).collect::<Result<Vec<_>, _>>()?)
            }
            Formula::Implies(a, b) => implies(self.rewrite(a)?, self.rewrite(b)?),
            Formula::Iff(a, b) => iff(self.rewrite(a)?, self.rewrite(b)?),
            Formula::Exists { var, body } | Formula::Forall { var, body } => {
                let is_exists = matches!(f, Formula::Exists { .. });
                let comps = component_names(var, self.i.dim, &mut self.used);
                let prev = self.env.insert(var.clone(), comps.clone());
                let inner = self.rewrite(body);
                match prev {
                    Some(p) => {
                        self.env.insert(var.clone(), p);
                    }
                    None => {
                        self.env.remove(var);
                    }
                }
                let inner = inner?;
                let guard = self.delta_for(&comps);
                let mut acc =
                    if is_exists { and(vec![guard, inner]) } else { implies(guard, inner) };
                for c in comps.iter().rev() {
                    acc = if is_exists { exists(c, acc) } else { forall(c, acc) };
                }
                acc
            }
            Formula::ExistsSet { var, body } => {
                if self.i.dim != 1 {
                    return Err(InterpError::MsoNeedsDimensionOne { dim: self.i.dim });
                }
                let guard = self.set_guard(var);
                exists_set(var, and(vec![guard, self.rewrite(body)?]))
            }
            Formula::ForallSet { var, body } => {
                if self.i.dim != 1 {
                    return Err(InterpError::MsoNeedsDimensionOne { dim: self.i.dim });
                }
                let guard = self.set_guard(var);
                forall_set(var, implies(guard, self.rewrite(body)?))
            }
        })
    }
}

/// Rewrites a formula about the output graph into one about the source:
/// for every source `G` and matching assignment, `I(G) ⊨ φ` exactly when
/// `G ⊨ rewrite_through(I, φ)` — vacuously so on empty output universes,
/// where quantifiers find no tuple satisfying `δ`.
///
/// Free element variables are mapped to component tuples named by the same
/// `v_1 … v_d` scheme used for bound variables (identity in dimension one);
/// free set variables are not supported. Edge atoms become symmetrized,
/// irreflexive instances of `φ_E`, matching [`apply_interpretation`].
pub fn rewrite_through(i: &Interpretation, phi: &Formula) -> Result<Formula, InterpError> {
    let phi = expand_conn(phi);
    if !phi.free_set_vars().is_empty() {
        return Err(LogicError::WrongFreeVariables { expected: "no free set variables" }.into());
    }
    let found = phi.logic_class();
    if found > i.logic {
        return Err(InterpError::FormulaBeyondLogic { declared: i.logic, found });
    }
    let mut used = phi.all_variable_names();
    used.extend(i.delta.all_variable_names());
    used.extend(i.edge.all_variable_names());
    let mut env = BTreeMap::new();
    for v in phi.free_element_vars() {
        let comps = component_names(&v, i.dim, &mut used);
        env.insert(v, comps);
    }
    Rewriter { i, used, env }.rewrite(&phi)
}

// ---------------------------------------------------------------------------
// Transductions
// ---------------------------------------------------------------------------

/// A colored transduction: guess a multi-coloring with `colors` classes, then
/// apply a fixed one-dimensional interpretation over the colored signature.
#[derive(Clone, Debug)]
pub struct Transduction {
    colors: usize,
    interp: Interpretation,
}

impl Transduction {
    /// Validates the dimension-one requirement and builds the transduction.
    pub fn new(colors: usize, interp: Interpretation) -> Result<Self, InterpError> {
        if interp.dim != 1 {
            return Err(InterpError::TransductionDimension { dim: interp.dim });
        }
        Ok(Transduction { colors, interp })
    }

    /// Number of color classes `k`.
    pub fn colors(&self) -> usize {
        self.colors
    }

    /// The underlying interpretation over the `k`-colored graph signature.
    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }
}

/// Applies `t` to `g` under one explicit coloring; `classes[c]` lists the
/// vertices carrying color `c + 1`, and classes may overlap or miss vertices.
pub fn apply_transduction_with(
    t: &Transduction,
    g: &Graph,
    classes: &[BitSet],
    cfg: &InterpConfig,
) -> Result<Interpreted, InterpError> {
    if classes.len() != t.colors {
        return Err(InterpError::ColorCountMismatch { expected: t.colors, got: classes.len() });
    }
    let mut cg = ColoredGraph::new(g.clone(), t.colors);
    for (c, class) in classes.iter().enumerate() {
        for v in class.iter() {
            cg.set_color(c, v);
        }
    }
    apply_interpretation_with(&t.interp, &Structure::from_colored_graph(&cg), cfg)
}

/// Applies `t` under one coloring with default limits.
pub fn apply_transduction(
    t: &Transduction,
    g: &Graph,
    classes: &[BitSet],
) -> Result<Interpreted, InterpError> {
    apply_transduction_with(t, g, classes, &InterpConfig::default())
}

/// Streams `t` over all `2^(k·n)` multi-colorings of `g` in index order; the
/// stream can be restarted by calling again.
pub fn enumerate_transduction_with<'a>(
    t: &'a Transduction,
    g: &'a Graph,
    cfg: &InterpConfig,
) -> Result<TransductionEnumeration<'a>, InterpError> {
    let bits = t.colors * g.vertex_count();
    if bits >= 64 || 1u64 << bits > cfg.max_colorings {
        return Err(InterpError::ColoringBudget { bits, cap: cfg.max_colorings });
    }
    Ok(TransductionEnumeration { t, g, cfg: cfg.clone(), index: 0, total: 1u64 << bits })
}

/// Streams `t` over all multi-colorings with default limits.
pub fn enumerate_transduction<'a>(
    t: &'a Transduction,
    g: &'a Graph,
) -> Result<TransductionEnumeration<'a>, InterpError> {
    enumerate_transduction_with(t, g, &InterpConfig::default())
}

/// Iterator over the outputs of a transduction, one per multi-coloring.
#[derive(Debug)]
pub struct TransductionEnumeration<'a> {
    t: &'a Transduction,
    g: &'a Graph,
    cfg: InterpConfig,
    index: u64,
    total: u64,
}

impl Iterator for TransductionEnumeration<'_> {
    type Item = Result<(Vec<BitSet>, Interpreted), InterpError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.index == self.total {
            return None;
        }
        let n = self.g.vertex_count();
        let k = self.t.colors;
        let mut classes = vec![BitSet::new(n); k];
        for v in 0..n {
            for (c, class) in classes.iter_mut().enumerate() {
                if self.index >> (v * k + c) & 1 == 1 {
                    class.insert(v);
                }
            }
        }
        self.index += 1;
        let out = apply_transduction_with(self.t, self.g, &classes, &self.cfg);
        Some(out.map(|r| (classes, r)))
    }
}

// ---------------------------------------------------------------------------
// Shared formula pieces
// ---------------------------------------------------------------------------

/// `x` has a twin: some other vertex with the same neighborhood outside the
/// pair.
fn has_twin(x: &str) -> Formula {
    debug_assert_ne!(x, "u");
    exists("u", and(vec![neq("u", x), twins("u", x)]))
}

/// `∃ names…` pairwise distinct, each satisfying `each`, all inside `inner`.
fn exists_distinct(names: &[&str], each: &dyn Fn(&str) -> Formula, inner: Formula) -> Formula {
    let mut acc = inner;
    for (idx, &nm) in names.iter().enumerate().rev() {
        let mut conj = vec![each(nm)];
        conj.extend(names[..idx].iter().map(|&p| neq(nm, p)));
        conj.push(acc);
        acc = exists(nm, and(conj));
    }
    acc
}

// ---------------------------------------------------------------------------
// Order-to-path
// ---------------------------------------------------------------------------

/// The interpretation turning the linear order `L_t` into the path `P_t`:
/// tuples are single elements and edges connect immediate `<`-successors.
pub fn order_to_path_interpretation() -> Interpretation {
    let pred = and(vec![
        atom("<", &["x", "y"]),
        not(exists("z", and(vec![atom("<", &["x", "z"]), atom("<", &["z", "y"])]))),
    ]);
    Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        Formula::True,
        pred,
    )
    .expect("builder formulas are valid")
}

// ---------------------------------------------------------------------------
// Swimlane cores and their interpretation
// ---------------------------------------------------------------------------

/// The core subset `A = X ∪ S` of a flipped `5P_t`: all of path 1, plus per
/// column `j` the pair from paths `{2,3}` for odd `j` and `{4,5}` for even
/// `j`. Alternating the donor paths strips every path edge off `S`, so the
/// `S`-pairs are twins of the core no matter which layers were flipped.
pub fn swimlane_core_subset(coords: &MPathsCoords) -> Result<Vec<usize>, InterpError> {
    assert_eq!(coords.m, 5, "swimlane cores live inside 5-path patterns");
    if coords.t < 4 {
        return Err(InterpError::CoreTooSmall { name: "t", min: 4, got: coords.t });
    }
    let mut a: Vec<usize> = (1..=coords.t).map(|j| coords.vertex(1, j)).collect();
    for j in 1..=coords.t {
        let (p1, p2) = if j % 2 == 1 { (2, 3) } else { (4, 5) };
        a.push(coords.vertex(p1, j));
        a.push(coords.vertex(p2, j));
    }
    a.sort_unstable();
    debug_assert_eq!(a.len(), 3 * coords.t);
    Ok(a)
}

/// `x` and `y` look the same from every twin-having vertex outside the pair.
fn swim_pi(x: &str, y: &str) -> Formula {
    debug_assert!(x != "v" && y != "v");
    forall(
        "v",
        implies(
            and(vec![neq("v", x), neq("v", y), has_twin("v")]),
            iff(edge(x, "v"), edge(y, "v")),
        ),
    )
}

fn swim_edge_formula() -> Formula {
    let oplus = exists("w", and(vec![has_twin("w"), swim_pi("w", "y"), edge("x", "w")]));
    xor(edge("x", "y"), oplus)
}

/// The interpretation recovering `P_t` from a swimlane core: keep the
/// twin-free vertices and de-flip each edge by probing a twin-having vertex
/// that sees the world like `y` does.
pub fn swimlane_interpretation() -> Interpretation {
    Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        not(has_twin("x")),
        swim_edge_formula(),
    )
    .expect("builder formulas are valid")
}

// ---------------------------------------------------------------------------
// Half-graph cores and their interpretation
// ---------------------------------------------------------------------------

/// Some twin pair is entirely non-adjacent to `x`, and some twin pair is
/// entirely adjacent to `x`; in an extended half-graph core this pins down
/// exactly the `α` side.
fn hg_delta(x: &str) -> Formula {
    debug_assert!(x != "p" && x != "q");
    let pair = |adjacent: bool| {
        let touch = |v: &str| if adjacent { edge(v, x) } else { not(edge(v, x)) };
        exists(
            "p",
            exists("q", and(vec![neq("p", "q"), twins("p", "q"), touch("p"), touch("q")])),
        )
    };
    and(vec![pair(false), pair(true)])
}

/// Neighborhood containment order: every neighbor of `y` outside the pair is
/// a neighbor of `x`. The comparison skips the pair itself: without that
/// guard a flip on the `α` side would sink every comparison at `z = x`,
/// where `E(y, x)` holds but `E(x, x)` never does.
fn hg_sigma(x: &str, y: &str) -> Formula {
    debug_assert!(x != "s" && y != "s");
    and(vec![
        neq(x, y),
        forall(
            "s",
            implies(and(vec![neq("s", x), neq("s", y)]), implies(edge(y, "s"), edge(x, "s"))),
        ),
    ])
}

/// `x` is the immediate successor of `y` in the containment order, with no
/// domain vertex strictly between them.
fn hg_succ(x: &str, y: &str) -> Formula {
    debug_assert!(x != "z" && y != "z");
    and(vec![
        hg_sigma(y, x),
        not(exists("z", and(vec![hg_delta("z"), hg_sigma(y, "z"), hg_sigma("z", x)]))),
    ])
}

fn hg_edge_formula() -> Formula {
    or(vec![hg_succ("x", "y"), hg_succ("y", "x")])
}

/// The interpretation recovering `P_t` from an extended half-graph core:
/// the twin pairs locate the `α` side, whose containment order is linear,
/// and consecutive elements become path edges.
pub fn halfgraph_interpretation() -> Interpretation {
    Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        hg_delta("x"),
        hg_edge_formula(),
    )
    .expect("builder formulas are valid")
}

// ---------------------------------------------------------------------------
// Combined dispatcher
// ---------------------------------------------------------------------------

fn four_distinct() -> Formula {
    exists_distinct(&["d1", "d2", "d3", "d4"], &|_| Formula::True, Formula::True)
}

fn at_least_twinned(names: &[&str]) -> Formula {
    exists_distinct(names, &has_twin, Formula::True)
}

/// One fixed interpretation covering all supported cores: graphs on at most
/// three vertices pass through unchanged; cores with exactly four
/// twin-having vertices take the half-graph branch; everything else takes
/// the swimlane branch. The three guards are mutually exclusive sentences.
pub fn combined_path_interpretation() -> Interpretation {
    let small = not(four_distinct());
    let exactly4 = and(vec![
        at_least_twinned(&["d1", "d2", "d3", "d4"]),
        not(at_least_twinned(&["d1", "d2", "d3", "d4", "d5"])),
    ]);
    let branch_small = small;
    let branch_hg = and(vec![four_distinct(), exactly4.clone()]);
    let branch_swim = and(vec![four_distinct(), not(exactly4)]);
    let delta = or(vec![
        branch_small.clone(),
        and(vec![branch_hg.clone(), hg_delta("x")]),
        and(vec![branch_swim.clone(), not(has_twin("x"))]),
    ]);
    let edge_f = or(vec![
        and(vec![branch_small, edge("x", "y")]),
        and(vec![branch_hg, hg_edge_formula()]),
        and(vec![branch_swim, swim_edge_formula()]),
    ]);
    Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        delta,
        edge_f,
    )
    .expect("builder formulas are valid")
}

// ---------------------------------------------------------------------------
// Three-path transduction
// ---------------------------------------------------------------------------

fn color_atom(class: usize, v: &str) -> Formula {
    atom(&color_name(class + 1), &[v])
}

/// `x` and `y` agree on every third-color vertex outside the pair.
fn three_path_pi(x: &str, y: &str) -> Formula {
    debug_assert!(x != "v" && y != "v");
    forall(
        "v",
        implies(
            and(vec![color_atom(2, "v"), neq("v", x), neq("v", y)]),
            iff(edge(x, "v"), edge(y, "v")),
        ),
    )
}

/// The transduction recovering `P_t` from a flipped `3P_t`: the three paths
/// are marked with colors 1–3, the output lives on color 1, and an edge is
/// de-flipped by probing the color-2 vertex that matches `y` on color 3.
pub fn three_path_transduction() -> Transduction {
    let oplus =
        exists("w", and(vec![color_atom(1, "w"), three_path_pi("w", "y"), edge("x", "w")]));
    let interp = Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        color_atom(0, "x"),
        xor(edge("x", "y"), oplus),
    )
    .expect("builder formulas are valid");
    Transduction::new(3, interp).expect("dimension is one")
}

/// The canonical coloring certifying a flipped `3P_t`: path `p` carries
/// color `p`.
pub fn three_path_canonical_coloring(coords: &MPathsCoords) -> Vec<BitSet> {
    assert_eq!(coords.m, 3, "the canonical coloring marks exactly three paths");
    let n = 3 * coords.t;
    (1..=3)
        .map(|p| BitSet::from_iter(n, (1..=coords.t).map(|j| coords.vertex(p, j))))
        .collect()
}

// ---------------------------------------------------------------------------
// Order-to-H*
// ---------------------------------------------------------------------------

fn is_min(v: &str) -> Formula {
    debug_assert_ne!(v, "o");
    not(exists("o", atom("<", &["o", v])))
}

fn is_max(v: &str) -> Formula {
    debug_assert_ne!(v, "o");
    not(exists("o", atom("<", &[v, "o"])))
}

/// Min/max pattern over five tuple components; `None` leaves a component
/// unconstrained, `Some(false)` pins it to the minimum, `Some(true)` to the
/// maximum.
fn tuple_pattern(vars: &[String], pat: [Option<bool>; 5]) -> Formula {
    and(pat
        .iter()
        .zip(vars)
        .filter_map(|(p, v)| p.map(|mx| if mx { is_max(v) } else { is_min(v) }))
        .collect())
}

/// The five-dimensional FO interpretation turning `L_t` (for `t ≥ 2`) into
/// the extended half-graph `H*_t` of the given flavor. Tuple patterns over
/// `{min, max, free}` carve out `t` left-side tuples, `t + 3` right-side
/// tuples, and the cross edges follow the first components' order. On `L_1`
/// the patterns collapse and the output degenerates.
pub fn order_to_hstar_interpretation(flavor: Flavor) -> Interpretation {
    let xs: Vec<String> = (1..=5).map(|k| format!("x{k}")).collect();
    let ys: Vec<String> = (1..=5).map(|k| format!("y{k}")).collect();
    let mn = Some(false);
    let mx = Some(true);
    let pat_a = [None, mn, mn, mn, mn];
    let pat_b = [None, mx, mx, mx, mx];
    let pat_l1 = [mx, mn, mx, mn, mn];
    let pat_l2 = [mx, mn, mx, mn, mx];
    let pat_r = [mx, mn, mx, mx, mn];
    let side_a = |vs: &[String]| tuple_pattern(vs, pat_a);
    let non_a = |vs: &[String]| {
        or(vec![
            tuple_pattern(vs, pat_b),
            tuple_pattern(vs, pat_l1),
            tuple_pattern(vs, pat_l2),
            tuple_pattern(vs, pat_r),
        ])
    };
    let delta = or(vec![side_a(&xs), non_a(&xs)]);
    let first_leq = or(vec![eq("x1", "y1"), atom("<", &["x1", "y1"])]);
    let mut arms = vec![
        and(vec![side_a(&xs), tuple_pattern(&ys, pat_b), first_leq]),
        and(vec![side_a(&xs), tuple_pattern(&ys, pat_r)]),
    ];
    if flavor.aa {
        arms.push(and(vec![side_a(&xs), side_a(&ys)]));
    }
    if flavor.bb {
        arms.push(and(vec![non_a(&xs), non_a(&ys)]));
    }
    Interpretation::new(LogicClass::Fo, 5, xs, ys, delta, or(arms))
        .expect("builder formulas are valid")
}

// ---------------------------------------------------------------------------
// De-flipping nibbles and the separating sentence
// ---------------------------------------------------------------------------

/// The neighborhoods of `x` and `y` disagree on at most four vertices
/// outside the pair. In a nibble this holds exactly for vertices of the same
/// witness part, whose neighborhoods differ only at path neighbors.
fn deflip_pi(x: &str, y: &str) -> Formula {
    let names = ["z1", "z2", "z3", "z4", "z5"];
    debug_assert!(!names.contains(&x) && !names.contains(&y));
    let each = |nm: &str| and(vec![xor(edge(x, nm), edge(y, nm)), neq(nm, x), neq(nm, y)]);
    not(exists_distinct(&names, &each, Formula::True))
}

/// `x` has at least three neighbors that look like `y`; `y` itself may be
/// one of them.
fn deflip_oplus(x: &str, y: &str) -> Formula {
    let names = ["w1", "w2", "w3"];
    debug_assert!(!names.contains(&x) && !names.contains(&y));
    let each = |nm: &str| and(vec![edge(x, nm), deflip_pi(nm, y)]);
    exists_distinct(&names, &each, Formula::True)
}

/// The de-flipping interpretation for nibbles of flipped path unions with at
/// least nine paths: the universe is untouched and each edge is toggled back
/// when `x` has three or more neighbors in the part of `y`. Below nine paths
/// the counting thresholds 4 and 3 lose their slack and the part test can
/// misfire.
pub fn deflip_nibble_interpretation() -> Interpretation {
    Interpretation::new(
        LogicClass::Cmso,
        1,
        vec!["x".to_string()],
        vec!["y".to_string()],
        Formula::True,
        xor(edge("x", "y"), deflip_oplus("x", "y")),
    )
    .expect("builder formulas are valid")
}

/// The MSO sentence separating the two nibbles of any flipped `mP_t` with
/// `m ≥ 9`, `t ≥ 3`: the parity sentence for path unions, rewritten through
/// the de-flipping interpretation. The first nibble de-flips to paths of a
/// single parity, the second mixes parities.
pub fn sep_tpt_sentence() -> Formula {
    rewrite_through(&deflip_nibble_interpretation(), &phi_same_parity())
        .expect("a one-dimensional rewrite of a sentence cannot fail")
}
