//! Finite relational structures over explicit signatures.
//!
//! Graphs, colored graphs, and linear orders all embed into [`Structure`],
//! which is what the logic evaluators, the Ehrenfeucht-Fraisse game, and the
//! canonical-form routine operate on. Named constants mark distinguished
//! elements (used for marked balls in locality checks).

use crate::bitset::BitSet;
use crate::graph::{ColoredGraph, Graph};
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Relation symbol: a name and an arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature: relation symbols plus named constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Signature {
    pub relations: Vec<Symbol>,
    pub constants: Vec<String>,
}

impl Signature {
    /// `{E/2}`.
    pub fn graph() -> Self {
        Signature {
            relations: vec![Symbol { name: "E".to_string(), arity: 2 }],
            constants: Vec::new(),
        }
    }

    /// `{E/2, C1/1, .., Ck/1}`.
    pub fn colored_graph(k: usize) -> Self {
        let mut sig = Signature::graph();
        for c in 1..=k {
            sig.relations.push(Symbol { name: color_name(c), arity: 1 });
        }
        sig
    }

    /// `{</2}`.
    pub fn linear_order() -> Self {
        Signature {
            relations: vec![Symbol { name: "<".to_string(), arity: 2 }],
            constants: Vec::new(),
        }
    }

    /// Index of the relation called `name`, if declared.
    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|s| s.name == name)
    }
}

/// Name of the `c`-th color class (1-based): `C1`, `C2`, ...
pub fn color_name(c: usize) -> String {
    let mut s = String::from("C");
    s.push_str(itoa(c).as_str());
    s
}

fn itoa(mut v: usize) -> String {
    if v == 0 {
        return "0".to_string();
    }
    let mut digits = Vec::new();
    while v > 0 {
        digits.push(b'0' + (v % 10) as u8);
        v /= 10;
    }
    digits.reverse();
    String::from_utf8(digits).expect("digits are ascii")
}

/// Relation contents, specialized by arity for fast membership tests.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelData {
    /// Arity 1: the set of elements.
    Unary(BitSet),
    /// Arity 2: row `u` holds all `v` with `(u, v)` in the relation.
    Binary(Vec<BitSet>),
    /// Any other arity: explicit sorted tuple set.
    General(BTreeSet<Vec<usize>>),
}

/// Errors for structure construction and manipulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    ElementOutOfRange { element: usize, n: usize },
    ArityMismatch { symbol: String, expected: usize, got: usize },
    UnknownSymbol { symbol: String },
    DuplicateElement { element: usize },
    /// An induced substructure would lose a named constant.
    ConstantOutsideSubset { constant: String },
}

impl core::fmt::Display for StructureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StructureError::ElementOutOfRange { element, n } => {
                write!(f, "element {element} out of range for universe of size {n}")
            }
            StructureError::ArityMismatch { symbol, expected, got } => {
                write!(f, "relation {symbol} expects arity {expected}, got tuple of length {got}")
            }
            StructureError::UnknownSymbol { symbol } => write!(f, "unknown symbol {symbol}"),
            StructureError::DuplicateElement { element } => {
                write!(f, "duplicate element {element}")
            }
            StructureError::ConstantOutsideSubset { constant } => {
                write!(f, "constant {constant} not contained in the subset")
            }
        }
    }
}

impl core::error::Error for StructureError {}

/// A finite structure: universe `0..n`, one [`RelData`] per signature symbol,
/// and one element per signature constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Structure {
    n: usize,
    sig: Signature,
    data: Vec<RelData>,
    constant_values: Vec<usize>,
}

impl Structure {
    /// An empty structure over `sig` with universe `0..n`.
    pub fn new(n: usize, sig: Signature) -> Self {
        let data = sig
            .relations
            .iter()
            .map(|s| match s.arity {
                1 => RelData::Unary(BitSet::new(n)),
                2 => RelData::Binary(vec![BitSet::new(n); n]),
                _ => RelData::General(BTreeSet::new()),
            })
            .collect();
        let constant_values = vec![0; sig.constants.len()];
        Structure { n, sig, data, constant_values }
    }

    /// Universe size.
    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// The signature.
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Value of the `i`-th signature constant.
    pub fn constant_value(&self, i: usize) -> usize {
        self.constant_values[i]
    }

    /// Sets the `i`-th signature constant to `v`.
    pub fn set_constant(&mut self, i: usize, v: usize) -> Result<(), StructureError> {
        if v >= self.n {
            return Err(StructureError::ElementOutOfRange { element: v, n: self.n });
        }
        self.constant_values[i] = v;
        Ok(())
    }

    /// Inserts `tuple` into the relation at signature index `rel`.
    pub fn insert(&mut self, rel: usize, tuple: &[usize]) -> Result<(), StructureError> {
        let sym = &self.sig.relations[rel];
        if tuple.len() != sym.arity {
            return Err(StructureError::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                got: tuple.len(),
            });
        }
        for &e in tuple {
            if e >= self.n {
                return Err(StructureError::ElementOutOfRange { element: e, n: self.n });
            }
        }
        match &mut self.data[rel] {
            RelData::Unary(set) => set.insert(tuple[0]),
            RelData::Binary(rows) => rows[tuple[0]].insert(tuple[1]),
            RelData::General(set) => {
                set.insert(tuple.to_vec());
            }
        }
        Ok(())
    }

    /// True if `tuple` is in the relation at signature index `rel`.
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.sig.relations[rel].arity);
        match &self.data[rel] {
            RelData::Unary(set) => set.contains(tuple[0]),
            RelData::Binary(rows) => rows[tuple[0]].contains(tuple[1]),
            RelData::General(set) => set.contains(tuple),
        }
    }

    /// Binary-relation row `u`: all `v` with `(u, v)` in the relation.
    /// Panics if `rel` is not binary.
    pub fn binary_row(&self, rel: usize, u: usize) -> &BitSet {
        match &self.data[rel] {
            RelData::Binary(rows) => &rows[u],
            _ => panic!("relation {} is not binary", self.sig.relations[rel].name),
        }
    }

    /// All tuples of the relation at `rel`, sorted.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        match &self.data[rel] {
            RelData::Unary(set) => set.iter().map(|v| vec![v]).collect(),
            RelData::Binary(rows) => {
                let mut out = Vec::new();
                for (u, row) in rows.iter().enumerate() {
                    for v in row.iter() {
                        out.push(vec![u, v]);
                    }
                }
                out
            }
            RelData::General(set) => set.iter().cloned().collect(),
        }
    }

    /// A graph as a `{E/2}` structure (E symmetric, irreflexive).
    pub fn from_graph(g: &Graph) -> Self {
        let mut s = Structure::new(g.vertex_count(), Signature::graph());
        for (u, v) in g.edges() {
            s.insert(0, &[u, v]).expect("valid edge");
            s.insert(0, &[v, u]).expect("valid edge");
        }
        s
    }

    /// A colored graph as a `{E/2, C1..Ck}` structure.
    pub fn from_colored_graph(cg: &ColoredGraph) -> Self {
        let k = cg.color_count();
        let mut s = Structure::new(cg.graph.vertex_count(), Signature::colored_graph(k));
        for (u, v) in cg.graph.edges() {
            s.insert(0, &[u, v]).expect("valid edge");
            s.insert(0, &[v, u]).expect("valid edge");
        }
        for (c, class) in cg.colors.iter().enumerate() {
            for v in class.iter() {
                s.insert(1 + c, &[v]).expect("valid color");
            }
        }
        s
    }

    /// The linear order `0 < 1 < .. < t-1` as a `{</2}` structure.
    pub fn linear_order(t: usize) -> Self {
        let mut s = Structure::new(t, Signature::linear_order());
        for u in 0..t {
            for v in (u + 1)..t {
                s.insert(0, &[u, v]).expect("valid pair");
            }
        }
        s
    }

    /// Extracts the `{E/2}` relation as a [`Graph`], ignoring loops and
    /// symmetrizing. Errors if no binary `E` is declared.
    pub fn to_graph(&self) -> Result<Graph, StructureError> {
        let rel = self
            .sig
            .relation_index("E")
            .ok_or(StructureError::UnknownSymbol { symbol: "E".to_string() })?;
        let mut g = Graph::new(self.n);
        for t in self.tuples(rel) {
            if t[0] != t[1] {
                g.add_edge(t[0], t[1]);
            }
        }
        Ok(g)
    }

    /// Extends the signature with a named constant interpreted as `v`.
    pub fn add_constant(&mut self, name: &str, v: usize) -> Result<(), StructureError> {
        if v >= self.n {
            return Err(StructureError::ElementOutOfRange { element: v, n: self.n });
        }
        self.sig.constants.push(name.to_string());
        self.constant_values.push(v);
        Ok(())
    }

    /// The substructure induced by `verts` (distinct, in range); element `i`
    /// of the result is the `i`-th smallest member. All named constants must
    /// be contained in `verts`.
    pub fn induced_substructure(&self, verts: &[usize]) -> Result<Structure, StructureError> {
        let mut sorted = verts.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(StructureError::DuplicateElement { element: w[0] });
            }
        }
        if let Some(&v) = sorted.last() {
            if v >= self.n {
                return Err(StructureError::ElementOutOfRange { element: v, n: self.n });
            }
        }
        let mut index_of = vec![usize::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            index_of[v] = i;
        }
        let mut s = Structure::new(sorted.len(), self.sig.clone());
        for rel in 0..self.sig.relations.len() {
            for tuple in self.tuples(rel) {
                if tuple.iter().all(|&e| index_of[e] != usize::MAX) {
                    let mapped: Vec<usize> = tuple.iter().map(|&e| index_of[e]).collect();
                    s.insert(rel, &mapped)?;
                }
            }
        }
        for (i, name) in self.sig.constants.iter().enumerate() {
            let v = self.constant_values[i];
            if index_of[v] == usize::MAX {
                return Err(StructureError::ConstantOutsideSubset { constant: name.clone() });
            }
            s.constant_values[i] = index_of[v];
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::with_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = Structure::from_graph(&g);
        assert_eq!(s.universe_size(), 4);
        assert!(s.holds(0, &[0, 1]) && s.holds(0, &[1, 0]));
        assert!(!s.holds(0, &[0, 2]));
        assert_eq!(s.to_graph().unwrap(), g);
    }

    #[test]
    fn linear_order_is_total() {
        let s = Structure::linear_order(4);
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(s.holds(0, &[u, v]), u < v);
            }
        }
    }

    #[test]
    fn colored_graph_structure() {
        let g = Graph::with_edges(3, &[(0, 1)]).unwrap();
        let mut cg = ColoredGraph::new(g, 2);
        cg.set_color(0, 0);
        cg.set_color(1, 2);
        let s = Structure::from_colored_graph(&cg);
        assert_eq!(s.signature().relations.len(), 3);
        assert!(s.holds(1, &[0]));
        assert!(!s.holds(1, &[1]));
        assert!(s.holds(2, &[2]));
        assert_eq!(s.signature().relation_index("C2"), Some(2));
    }

    #[test]
    fn induced_substructure_remaps() {
        let s = Structure::linear_order(5);
        let sub = s.induced_substructure(&[4, 1, 3]).unwrap();
        // Elements 1 < 3 < 4 become 0 < 1 < 2.
        assert_eq!(sub.universe_size(), 3);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(sub.holds(0, &[u, v]), u < v);
            }
        }
        assert!(s.induced_substructure(&[2, 2]).is_err());
        assert!(s.induced_substructure(&[9]).is_err());
    }

    #[test]
    fn constants_survive_induction() {
        let g = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut s = Structure::from_graph(&g);
        s.add_constant("c", 1).unwrap();
        let sub = s.induced_substructure(&[1, 2]).unwrap();
        assert_eq!(sub.constant_value(0), 0);
        assert!(matches!(
            s.induced_substructure(&[0, 2]),
            Err(StructureError::ConstantOutsideSubset { .. })
        ));
    }
}
