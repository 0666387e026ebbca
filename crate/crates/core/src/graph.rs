//! Dense simple graphs: loop-free, undirected, vertices `0..n`.
//!
//! Adjacency is stored as one [`BitSet`] row per vertex, which keeps the
//! neighborhood comparisons behind twin detection, flips, and canonical forms
//! cheap. Vertex identity is positional; operations that select a subset of
//! vertices (induced subgraphs) relabel them in increasing order of the
//! original ids.

use crate::bitset::BitSet;
use alloc::vec;
use alloc::vec::Vec;

/// Distance value of an unreachable vertex in [`Graph::distances_from`].
pub const UNREACHABLE: u32 = u32::MAX;

/// A distance bound: finite radius or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Radius {
    Finite(u32),
    Infinite,
}

/// Errors for graph construction and subset operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// A vertex id was `>= n`.
    VertexOutOfRange { vertex: usize, n: usize },
    /// An edge joined a vertex to itself.
    LoopEdge { vertex: usize },
    /// A vertex list contained a repeated id.
    DuplicateVertex { vertex: usize },
    /// Two graphs that must share a vertex set have different sizes.
    SizeMismatch { left: usize, right: usize },
}

impl core::fmt::Display for GraphError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for graph on {n} vertices")
            }
            GraphError::LoopEdge { vertex } => write!(f, "loop edge at vertex {vertex}"),
            GraphError::DuplicateVertex { vertex } => write!(f, "duplicate vertex {vertex}"),
            GraphError::SizeMismatch { left, right } => {
                write!(f, "graphs have different sizes: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// A finite simple graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    /// Builds a graph from an edge list.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge { vertex: u });
        }
        Ok(())
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.len()).sum::<usize>() / 2
    }

    /// True if `u` and `v` are adjacent. Panics if out of range; `u == v`
    /// always reports false.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].contains(v)
    }

    /// Adds the edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.check_pair(u, v).expect("invalid edge");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Removes the edge `{u, v}` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.check_pair(u, v).expect("invalid edge");
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    /// Toggles the edge `{u, v}`.
    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        self.check_pair(u, v).expect("invalid edge");
        self.adj[u].toggle(v);
        self.adj[v].toggle(u);
    }

    /// The neighborhood of `v` as a set.
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// All edges as pairs `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The subgraph induced by `verts`, which must be distinct and in range.
    /// Vertex `i` of the result is the `i`-th smallest member of `verts`.
    pub fn induced_subgraph(&self, verts: &[usize]) -> Result<Graph, GraphError> {
        let mut sorted: Vec<usize> = verts.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex { vertex: w[0] });
            }
        }
        if let Some(&v) = sorted.last() {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let mut g = Graph::new(sorted.len());
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        Ok(g)
    }

    /// BFS distances from `v`; unreachable vertices get [`UNREACHABLE`].
    pub fn distances_from(&self, v: usize) -> Vec<u32> {
        assert!(v < self.n, "vertex {v} out of range");
        let mut dist = vec![UNREACHABLE; self.n];
        dist[v] = 0;
        let mut frontier = vec![v];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for w in self.adj[u].iter() {
                    if dist[w] == UNREACHABLE {
                        dist[w] = d;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// The ball of radius `r` around `v` (including `v`), as sorted ids.
    pub fn ball(&self, v: usize, r: u32) -> Vec<usize> {
        self.distances_from(v)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d <= r)
            .map(|(u, _)| u)
            .collect()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = BitSet::new(self.n);
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen.contains(v) {
                continue;
            }
            let dist = self.distances_from(v);
            let comp: Vec<usize> = (0..self.n).filter(|&u| dist[u] != UNREACHABLE).collect();
            for &u in &comp {
                seen.insert(u);
            }
            out.push(comp);
        }
        out
    }

    /// True if the graph is connected (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True if `u` and `v` have the same neighbors outside `{u, v}`.
    /// Adjacency between the two is not considered.
    pub fn are_twins(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n && u != v);
        let mut nu = self.adj[u].clone();
        let mut nv = self.adj[v].clone();
        nu.remove(v);
        nv.remove(u);
        nu == nv
    }

    /// True if `v` has a twin partner in the graph.
    pub fn has_twin(&self, v: usize) -> bool {
        (0..self.n).any(|u| u != v && self.are_twins(u, v))
    }

    /// True if all distinct members of `set` are at pairwise distance
    /// strictly greater than `r` (for [`Radius::Infinite`]: in pairwise
    /// different components).
    pub fn is_distance_independent(&self, set: &[usize], r: Radius) -> bool {
        for (i, &u) in set.iter().enumerate() {
            let dist = self.distances_from(u);
            for &v in &set[i + 1..] {
                let d = dist[v];
                let ok = match r {
                    Radius::Finite(r) => d == UNREACHABLE || d > r,
                    Radius::Infinite => d == UNREACHABLE,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Complements adjacency within `set`: every pair of distinct vertices in
    /// `set` has its edge toggled. Vertices outside `set` are untouched.
    pub fn complement_within(&self, set: &BitSet) -> Graph {
        assert_eq!(set.capacity(), self.n, "set capacity mismatch");
        let mut g = self.clone();
        let members = set.to_vec();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                g.toggle_edge(u, v);
            }
        }
        g
    }

    /// Edge-wise symmetric difference of two graphs on the same vertex set.
    pub fn xor(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.n != other.n {
            return Err(GraphError::SizeMismatch { left: self.n, right: other.n });
        }
        let mut g = self.clone();
        for v in 0..self.n {
            g.adj[v].xor_with(&other.adj[v]);
        }
        Ok(g)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::new(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(self.n + u, self.n + v);
        }
        g
    }

    /// True if every component has an even number of vertices, or every
    /// component an odd number. The empty graph qualifies.
    pub fn components_same_parity(&self) -> bool {
        let comps = self.components();
        comps.iter().all(|c| c.len() % 2 == 0) || comps.iter().all(|c| c.len() % 2 == 1)
    }
}

impl core::fmt::Debug for Graph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A graph together with color classes `C_1..C_k`; a vertex may have any
/// number of colors, including none.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub colors: Vec<BitSet>,
}

impl ColoredGraph {
    /// Wraps a graph with `k` initially empty color classes.
    pub fn new(graph: Graph, k: usize) -> Self {
        let n = graph.vertex_count();
        ColoredGraph {
            graph,
            colors: vec![BitSet::new(n); k],
        }
    }

    /// Number of color classes.
    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Assigns color `c` (0-based) to vertex `v`.
    pub fn set_color(&mut self, c: usize, v: usize) {
        self.colors[c].insert(v);
    }
}
