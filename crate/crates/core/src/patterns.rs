//! Generators for the named pattern families: path unions `mP_t`, half-graphs
//! `H_t` and their flips, the extended half-graph `H*_t`, star and clique
//! crossings, rook graphs, linear orders, and nibbles.
//!
//! Every generator documents its vertex numbering through a coordinate struct;
//! pattern coordinates are 1-indexed, while graph ids stay 0-indexed. Flipped
//! variants return the [`FlipSpec`] that produced them so downstream checks
//! can round-trip through [`apply_flip`].

use crate::canon::{canonical_form, CanonError};
use crate::graph::Graph;
use crate::partition::{apply_flip, FlipSpec, VertexPartition};
use crate::structure::Structure;
use alloc::vec::Vec;

/// Errors for pattern construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    /// A size parameter that must be positive was zero.
    ZeroParameter { name: &'static str },
    /// A 1-based layer index fell outside `1..=t`.
    LayerOutOfRange { layer: usize, t: usize },
    /// Nibbles need at least two paths of at least three vertices.
    NibbleParams { m: usize, t: usize },
    /// Nibble selector outside {1, 2}.
    WhichOutOfRange { which: usize },
    /// A family enumeration would exceed the configured member cap.
    FamilyTooLarge { members: u128, cap: u64 },
    /// Canonicalization failed while deduplicating a family.
    Canon(CanonError),
}

impl core::fmt::Display for PatternError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PatternError::ZeroParameter { name } => write!(f, "parameter {name} must be positive"),
            PatternError::LayerOutOfRange { layer, t } => {
                write!(f, "layer {layer} out of range 1..={t}")
            }
            PatternError::NibbleParams { m, t } => {
                write!(f, "nibbles require m >= 2 and t >= 3, got m={m}, t={t}")
            }
            PatternError::WhichOutOfRange { which } => {
                write!(f, "nibble selector must be 1 or 2, got {which}")
            }
            PatternError::FamilyTooLarge { members, cap } => {
                write!(f, "family has {members} members, cap is {cap}")
            }
            PatternError::Canon(e) => write!(f, "dedupe failed: {e}"),
        }
    }
}

impl core::error::Error for PatternError {}

impl From<CanonError> for PatternError {
    fn from(e: CanonError) -> Self {
        PatternError::Canon(e)
    }
}

// ---------------------------------------------------------------------------
// Path unions
// ---------------------------------------------------------------------------

/// Coordinates of `mP_t`: vertex `(i, j)` is the `j`-th vertex of path `i`,
/// both 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MPathsCoords {
    pub m: usize,
    pub t: usize,
}

impl MPathsCoords {
    /// Graph id of `(i, j)`.
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.m).contains(&i) && (1..=self.t).contains(&j),
            "coordinate ({i},{j}) out of range for {}P_{}",
            self.m,
            self.t
        );
        (i - 1) * self.t + (j - 1)
    }

    /// Coordinate `(i, j)` of graph id `v`.
    pub fn coord(&self, v: usize) -> (usize, usize) {
        assert!(v < self.m * self.t, "vertex {v} out of range");
        (v / self.t + 1, v % self.t + 1)
    }

    /// The layer partition: `L_j` collects the `j`-th vertex of every path.
    /// Part index `j - 1` corresponds to `L_j`.
    pub fn layer_partition(&self) -> VertexPartition {
        let parts: Vec<Vec<usize>> = (1..=self.t)
            .map(|j| (1..=self.m).map(|i| self.vertex(i, j)).collect())
            .collect();
        VertexPartition::new(self.m * self.t, &parts).expect("layers partition the grid")
    }
}

/// The path `P_t` in natural vertex order.
pub fn path(t: usize) -> Result<Graph, PatternError> {
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let edges: Vec<(usize, usize)> = (0..t - 1).map(|v| (v, v + 1)).collect();
    Ok(Graph::with_edges(t, &edges).expect("path edges are valid"))
}

/// The disjoint union of `m` paths on `t` vertices each.
pub fn m_paths(m: usize, t: usize) -> Result<(Graph, MPathsCoords), PatternError> {
    if m == 0 {
        return Err(PatternError::ZeroParameter { name: "m" });
    }
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let coords = MPathsCoords { m, t };
    let mut g = Graph::new(m * t);
    for i in 1..=m {
        for j in 1..t {
            g.add_edge(coords.vertex(i, j), coords.vertex(i, j + 1));
        }
    }
    Ok((g, coords))
}

/// Builds the layer [`FlipSpec`] of `mP_t` from 1-based layer pairs.
pub fn layer_flip_spec(
    m: usize,
    t: usize,
    layer_pairs: &[(usize, usize)],
) -> Result<FlipSpec, PatternError> {
    let coords = MPathsCoords { m, t };
    let mut flips = Vec::with_capacity(layer_pairs.len());
    for &(j1, j2) in layer_pairs {
        for j in [j1, j2] {
            if !(1..=t).contains(&j) {
                return Err(PatternError::LayerOutOfRange { layer: j, t });
            }
        }
        flips.push((j1 - 1, j2 - 1));
    }
    Ok(FlipSpec::new(coords.layer_partition(), &flips).expect("layer indices in range"))
}

/// `mP_t` flipped along the given 1-based layer pairs.
pub fn flipped_m_paths(
    m: usize,
    t: usize,
    layer_pairs: &[(usize, usize)],
) -> Result<(Graph, MPathsCoords, FlipSpec), PatternError> {
    let (base, coords) = m_paths(m, t)?;
    let spec = layer_flip_spec(m, t, layer_pairs)?;
    let g = apply_flip(&base, &spec).expect("spec covers the pattern");
    Ok((g, coords, spec))
}

// ---------------------------------------------------------------------------
// Half-graphs
// ---------------------------------------------------------------------------

/// Coordinates of `H_t`: sides `a_1..a_t` and `b_1..b_t`, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfGraphCoords {
    pub t: usize,
}

impl HalfGraphCoords {
    /// Graph id of `a_i`.
    pub fn a(&self, i: usize) -> usize {
        assert!((1..=self.t).contains(&i), "a_{i} out of range for H_{}", self.t);
        i - 1
    }

    /// Graph id of `b_j`.
    pub fn b(&self, j: usize) -> usize {
        assert!((1..=self.t).contains(&j), "b_{j} out of range for H_{}", self.t);
        self.t + j - 1
    }

    /// The `{A, B}` partition; part 0 is the A side.
    pub fn side_partition(&self) -> VertexPartition {
        VertexPartition::new(
            2 * self.t,
            &[(0..self.t).collect(), (self.t..2 * self.t).collect()],
        )
        .expect("sides partition the vertex set")
    }
}

/// A subset of the symmetric side pairs `{(A,A), (B,B), (A,B)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct HalfFlips {
    pub aa: bool,
    pub bb: bool,
    pub ab: bool,
}

impl HalfFlips {
    /// All 8 subsets, in bitmask order (aa = bit 0, bb = bit 1, ab = bit 2).
    pub fn all() -> [HalfFlips; 8] {
        core::array::from_fn(|mask| HalfFlips {
            aa: mask & 1 != 0,
            bb: mask & 2 != 0,
            ab: mask & 4 != 0,
        })
    }
}

/// A flavor: a flip sub-relation over `{(A,A), (B,B)}` only; clean flipped
/// half-graphs never flip the cross pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Flavor {
    pub aa: bool,
    pub bb: bool,
}

impl Flavor {
    /// All 4 flavors, in bitmask order (aa = bit 0, bb = bit 1).
    pub fn all() -> [Flavor; 4] {
        core::array::from_fn(|mask| Flavor { aa: mask & 1 != 0, bb: mask & 2 != 0 })
    }
}

/// The half-graph `H_t`: `a_i` adjacent to `b_j` exactly when `i <= j`.
pub fn half_graph(t: usize) -> Result<(Graph, HalfGraphCoords), PatternError> {
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let coords = HalfGraphCoords { t };
    let mut g = Graph::new(2 * t);
    for i in 1..=t {
        for j in i..=t {
            g.add_edge(coords.a(i), coords.b(j));
        }
    }
    Ok((g, coords))
}

/// `H_t` flipped along the given side pairs.
pub fn flipped_half_graph(
    t: usize,
    flips: HalfFlips,
) -> Result<(Graph, HalfGraphCoords, FlipSpec), PatternError> {
    let (base, coords) = half_graph(t)?;
    let mut pairs = Vec::new();
    if flips.aa {
        pairs.push((0, 0));
    }
    if flips.bb {
        pairs.push((1, 1));
    }
    if flips.ab {
        pairs.push((0, 1));
    }
    let spec = FlipSpec::new(coords.side_partition(), &pairs).expect("side indices in range");
    let g = apply_flip(&base, &spec).expect("spec covers the pattern");
    Ok((g, coords, spec))
}

/// A clean flipped half-graph: `H_t` with only within-side flips applied.
pub fn clean_flipped_half_graph(
    t: usize,
    flavor: Flavor,
) -> Result<(Graph, HalfGraphCoords), PatternError> {
    let (g, coords, _) =
        flipped_half_graph(t, HalfFlips { aa: flavor.aa, bb: flavor.bb, ab: false })?;
    Ok((g, coords))
}

/// Checks that the listed vertices induce a clean flipped `H_t` with the
/// sides and order given: `a[k]` plays `a_{k+1}` and `b[k]` plays `b_{k+1}`.
pub fn is_clean_flipped_in_order(g: &Graph, a: &[usize], b: &[usize], flavor: Flavor) -> bool {
    let t = a.len();
    if b.len() != t || t == 0 {
        return false;
    }
    let mut all: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != 2 * t {
        return false;
    }
    for (ka, &u) in a.iter().enumerate() {
        for (kb, &v) in b.iter().enumerate() {
            if g.has_edge(u, v) != (ka <= kb) {
                return false;
            }
        }
    }
    for (k1, &u) in a.iter().enumerate() {
        for &v in &a[k1 + 1..] {
            if g.has_edge(u, v) != flavor.aa {
                return false;
            }
        }
    }
    for (k1, &u) in b.iter().enumerate() {
        for &v in &b[k1 + 1..] {
            if g.has_edge(u, v) != flavor.bb {
                return false;
            }
        }
    }
    true
}

/// The clean core of a flipped half-graph: vertex ids inside a flipped
/// `H_{t}` (built by [`flipped_half_graph`]) that induce a clean flipped
/// `H_{t-1}`, together with the flavor they realize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanCore {
    /// Ids playing `a_1..a_{t-1}`, in order.
    pub a: Vec<usize>,
    /// Ids playing `b_1..b_{t-1}`, in order.
    pub b: Vec<usize>,
    pub flavor: Flavor,
}

/// Locates a clean flipped `H_{t-1}` inside the flipped `H_t` with side
/// flips `flips`. When the cross pair is not flipped the prefix sides work
/// directly; when it is, reversing both sides complements the cross relation
/// back into half-graph form.
pub fn clean_core(t: usize, flips: HalfFlips) -> Result<CleanCore, PatternError> {
    if t < 2 {
        return Err(PatternError::ZeroParameter { name: "t - 1" });
    }
    let coords = HalfGraphCoords { t };
    let core_t = t - 1;
    let flavor = Flavor { aa: flips.aa, bb: flips.bb };
    if !flips.ab {
        Ok(CleanCore {
            a: (1..=core_t).map(|i| coords.a(i)).collect(),
            b: (1..=core_t).map(|j| coords.b(j)).collect(),
            flavor,
        })
    } else {
        // a'_k := a_{t+1-k}, b'_j := b_{t-j}; the complemented cross
        // adjacency a'_k ~ b'_j holds exactly for k <= j.
        Ok(CleanCore {
            a: (1..=core_t).map(|k| coords.a(t + 1 - k)).collect(),
            b: (1..=core_t).map(|j| coords.b(t - j)).collect(),
            flavor,
        })
    }
}

// ---------------------------------------------------------------------------
// Extended half-graph H*
// ---------------------------------------------------------------------------

/// Coordinates of `H*_t`: A side `α_1..α_t` and B side `b_1..b_{t+3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HStarCoords {
    pub t: usize,
}

impl HStarCoords {
    /// Graph id of `α_k` (the vertex playing `a_{k+2}` of `H_{t+3}`).
    pub fn alpha(&self, k: usize) -> usize {
        assert!((1..=self.t).contains(&k), "alpha_{k} out of range for H*_{}", self.t);
        k - 1
    }

    /// Graph id of `b_j`, `j` in `1..=t+3`.
    pub fn b(&self, j: usize) -> usize {
        assert!((1..=self.t + 3).contains(&j), "b_{j} out of range for H*_{}", self.t);
        self.t + j - 1
    }

    /// Total vertex count `2t + 3`.
    pub fn n(&self) -> usize {
        2 * self.t + 3
    }
}

/// The extended half-graph `H*_t`: the subgraph of a clean flipped `H_{t+3}`
/// induced by `{a_3..a_{t+2}}` and all of `{b_1..b_{t+3}}`.
pub fn h_star(t: usize, flavor: Flavor) -> Result<(Graph, HStarCoords), PatternError> {
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let (big, coords) = clean_flipped_half_graph(t + 3, flavor)?;
    let mut keep: Vec<usize> = (3..=t + 2).map(|i| coords.a(i)).collect();
    keep.extend((1..=t + 3).map(|j| coords.b(j)));
    let g = big.induced_subgraph(&keep).expect("core ids are distinct");
    debug_assert_eq!(g.vertex_count(), 2 * t + 3);
    Ok((g, HStarCoords { t }))
}

/// Checks that the listed vertices induce an `H*_t` of the given flavor with
/// the roles and order given: `alphas[k]` plays `α_{k+1}` and `bs[j]` plays
/// `b_{j+1}`, so `alphas[k] ~ bs[j]` exactly when `k + 3 <= j + 1`.
pub fn is_h_star_in_order(g: &Graph, alphas: &[usize], bs: &[usize], flavor: Flavor) -> bool {
    let t = alphas.len();
    if bs.len() != t + 3 || t == 0 {
        return false;
    }
    let mut all: Vec<usize> = alphas.iter().chain(bs.iter()).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != 2 * t + 3 {
        return false;
    }
    for (ka, &u) in alphas.iter().enumerate() {
        for (kb, &v) in bs.iter().enumerate() {
            // α_{ka+1} plays a_{ka+3} of H_{t+3}, hence the +3 offset.
            if g.has_edge(u, v) != (ka + 3 <= kb + 1) {
                return false;
            }
        }
    }
    for (k1, &u) in alphas.iter().enumerate() {
        for &v in &alphas[k1 + 1..] {
            if g.has_edge(u, v) != flavor.aa {
                return false;
            }
        }
    }
    for (k1, &u) in bs.iter().enumerate() {
        for &v in &bs[k1 + 1..] {
            if g.has_edge(u, v) != flavor.bb {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Crossings and rooks
// ---------------------------------------------------------------------------

/// Coordinates of a star or clique `r`-crossing of order `t`: roots
/// `a_1..a_t` and `b_1..b_t` joined by `t^2` paths `π_{i,j}` of `r` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingCoords {
    pub r: usize,
    pub t: usize,
}

impl CrossingCoords {
    /// Graph id of root `a_i` (layer `L_0`).
    pub fn a(&self, i: usize) -> usize {
        assert!((1..=self.t).contains(&i));
        i - 1
    }

    /// Graph id of the `l`-th vertex of path `π_{i,j}` (layer `L_l`).
    pub fn pi(&self, i: usize, j: usize, l: usize) -> usize {
        assert!((1..=self.t).contains(&i) && (1..=self.t).contains(&j) && (1..=self.r).contains(&l));
        self.t + (l - 1) * self.t * self.t + (i - 1) * self.t + (j - 1)
    }

    /// Graph id of root `b_j` (layer `L_{r+1}`).
    pub fn b(&self, j: usize) -> usize {
        assert!((1..=self.t).contains(&j));
        self.t + self.r * self.t * self.t + j - 1
    }

    /// Total vertex count `2t + r t^2`.
    pub fn n(&self) -> usize {
        2 * self.t + self.r * self.t * self.t
    }

    /// The layer partition `L_0..L_{r+1}`; part index equals layer index.
    pub fn layer_partition(&self) -> VertexPartition {
        let mut parts = Vec::with_capacity(self.r + 2);
        parts.push((1..=self.t).map(|i| self.a(i)).collect::<Vec<_>>());
        for l in 1..=self.r {
            let mut layer = Vec::with_capacity(self.t * self.t);
            for i in 1..=self.t {
                for j in 1..=self.t {
                    layer.push(self.pi(i, j, l));
                }
            }
            parts.push(layer);
        }
        parts.push((1..=self.t).map(|j| self.b(j)).collect::<Vec<_>>());
        VertexPartition::new(self.n(), &parts).expect("layers partition the crossing")
    }
}

fn crossing_base(r: usize, t: usize) -> Result<(Graph, CrossingCoords), PatternError> {
    if r == 0 {
        return Err(PatternError::ZeroParameter { name: "r" });
    }
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let coords = CrossingCoords { r, t };
    let mut g = Graph::new(coords.n());
    for i in 1..=t {
        for j in 1..=t {
            g.add_edge(coords.a(i), coords.pi(i, j, 1));
            for l in 1..r {
                g.add_edge(coords.pi(i, j, l), coords.pi(i, j, l + 1));
            }
            g.add_edge(coords.pi(i, j, r), coords.b(j));
        }
    }
    Ok((g, coords))
}

/// The star `r`-crossing of order `t`: the `r`-subdivision of `K_{t,t}`.
pub fn star_crossing(r: usize, t: usize) -> Result<(Graph, CrossingCoords), PatternError> {
    crossing_base(r, t)
}

/// The clique `r`-crossing of order `t`: the star crossing with each root's
/// neighborhood turned into a clique.
pub fn clique_crossing(r: usize, t: usize) -> Result<(Graph, CrossingCoords), PatternError> {
    let (mut g, coords) = crossing_base(r, t)?;
    for i in 1..=t {
        for j1 in 1..=t {
            for j2 in (j1 + 1)..=t {
                g.add_edge(coords.pi(i, j1, 1), coords.pi(i, j2, 1));
            }
        }
    }
    for j in 1..=t {
        for i1 in 1..=t {
            for i2 in (i1 + 1)..=t {
                g.add_edge(coords.pi(i1, j, r), coords.pi(i2, j, r));
            }
        }
    }
    Ok((g, coords))
}

/// Coordinates of the rook graph: cells `(i, j)` over `[t] × [t]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RookCoords {
    pub t: usize,
}

impl RookCoords {
    /// Graph id of cell `(i, j)`, both 1-indexed.
    pub fn cell(&self, i: usize, j: usize) -> usize {
        assert!((1..=self.t).contains(&i) && (1..=self.t).contains(&j));
        (i - 1) * self.t + (j - 1)
    }
}

/// The rook graph of order `t`: cells adjacent when they share a row or a
/// column.
pub fn rook(t: usize) -> Result<(Graph, RookCoords), PatternError> {
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    let coords = RookCoords { t };
    let mut g = Graph::new(t * t);
    for i in 1..=t {
        for j1 in 1..=t {
            for j2 in (j1 + 1)..=t {
                g.add_edge(coords.cell(i, j1), coords.cell(i, j2));
                g.add_edge(coords.cell(j1, i), coords.cell(j2, i));
            }
        }
    }
    Ok((g, coords))
}

// ---------------------------------------------------------------------------
// Nibbles
// ---------------------------------------------------------------------------

/// Coordinates for a nibble: the surviving vertices of an `mP_t` keep their
/// original `(i, j)` names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NibbleCoords {
    pub base: MPathsCoords,
    /// Sorted original ids of the surviving vertices; the nibble's vertex
    /// `v` corresponds to `survivors[v]` in the base pattern.
    pub survivors: Vec<usize>,
}

impl NibbleCoords {
    /// Coordinate `(i, j)` of the nibble vertex `v`.
    pub fn coord(&self, v: usize) -> (usize, usize) {
        self.base.coord(self.survivors[v])
    }
}

/// Original ids removed by `nibble_which`: `(1,1)` and `(which, t)`.
pub fn nibble_removed(m: usize, t: usize, which: usize) -> Result<[usize; 2], PatternError> {
    if m < 2 || t < 3 {
        return Err(PatternError::NibbleParams { m, t });
    }
    if !(1..=2).contains(&which) {
        return Err(PatternError::WhichOutOfRange { which });
    }
    let coords = MPathsCoords { m, t };
    Ok([coords.vertex(1, 1), coords.vertex(which, t)])
}

/// Removes `(1,1)` and `(which, t)` from a graph laid out as `mP_t`,
/// returning the induced subgraph and the surviving coordinates.
pub fn nibble(
    g: &Graph,
    coords: &MPathsCoords,
    which: usize,
) -> Result<(Graph, NibbleCoords), PatternError> {
    let removed = nibble_removed(coords.m, coords.t, which)?;
    let survivors: Vec<usize> =
        (0..coords.m * coords.t).filter(|v| !removed.contains(v)).collect();
    let sub = g.induced_subgraph(&survivors).expect("survivors are distinct");
    Ok((sub, NibbleCoords { base: *coords, survivors }))
}

// ---------------------------------------------------------------------------
// Linear orders
// ---------------------------------------------------------------------------

/// The linear order `L_t` as a `{</2}` structure.
pub fn linear_order(t: usize) -> Result<Structure, PatternError> {
    if t == 0 {
        return Err(PatternError::ZeroParameter { name: "t" });
    }
    Ok(Structure::linear_order(t))
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// A family of flipped patterns: all flip relations over a base pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlippedFamily {
    /// All layer flips of `mP_t` (over the `t(t+1)/2` unordered layer pairs).
    MPaths { m: usize, t: usize },
    /// All 8 side flips of `H_t`.
    HalfGraph { t: usize },
}

/// One member of a flipped family.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub graph: Graph,
    pub spec: FlipSpec,
}

/// Default cap on enumerated family members.
pub const DEFAULT_FAMILY_CAP: u64 = 1 << 16;

/// Enumerates a flipped family in deterministic bitmask order over flip
/// pairs; with `dedupe`, keeps the first member of each isomorphism class.
pub fn enumerate_flipped_family(
    family: FlippedFamily,
    dedupe: bool,
    cap: u64,
) -> Result<Vec<FamilyMember>, PatternError> {
    let members: Vec<FamilyMember> = match family {
        FlippedFamily::MPaths { m, t } => {
            let pair_list: Vec<(usize, usize)> = (1..=t)
                .flat_map(|j1| (j1..=t).map(move |j2| (j1, j2)))
                .collect();
            let total: u128 = 1u128 << pair_list.len().min(127);
            if pair_list.len() >= 127 || total > cap as u128 {
                return Err(PatternError::FamilyTooLarge { members: total, cap });
            }
            let mut out = Vec::with_capacity(total as usize);
            for mask in 0..total {
                let chosen: Vec<(usize, usize)> = pair_list
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let (graph, _, spec) = flipped_m_paths(m, t, &chosen)?;
                out.push(FamilyMember { graph, spec });
            }
            out
        }
        FlippedFamily::HalfGraph { t } => {
            if 8 > cap {
                return Err(PatternError::FamilyTooLarge { members: 8, cap });
            }
            let mut out = Vec::with_capacity(8);
            for flips in HalfFlips::all() {
                let (graph, _, spec) = flipped_half_graph(t, flips)?;
                out.push(FamilyMember { graph, spec });
            }
            out
        }
    };
    if !dedupe {
        return Ok(members);
    }
    let mut seen: Vec<Vec<u8>> = Vec::new();
    let mut out = Vec::new();
    for member in members {
        let key = canonical_form(&Structure::from_graph(&member.graph))?;
        if !seen.contains(&key) {
            seen.push(key);
            out.push(member);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Path validators
// ---------------------------------------------------------------------------

/// True if `g` is a path (in any vertex order).
pub fn is_path_graph(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return g.edge_count() == 0;
    }
    g.edge_count() == n - 1
        && g.is_connected()
        && (0..n).all(|v| g.degree(v) <= 2)
}

/// True if the listed vertices induce a path in exactly the given order.
pub fn is_path_in_order(g: &Graph, order: &[usize]) -> bool {
    for (ia, &u) in order.iter().enumerate() {
        for (ib, &v) in order.iter().enumerate().skip(ia + 1) {
            let expected = ib == ia + 1;
            if u == v || g.has_edge(u, v) != expected {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_and_m_paths_counts() {
        assert_eq!(path(1).unwrap().vertex_count(), 1);
        assert_eq!(path(1).unwrap().edge_count(), 0);
        let (g, _) = m_paths(3, 8).unwrap();
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.edge_count(), 21);
        assert!(matches!(m_paths(0, 3), Err(PatternError::ZeroParameter { .. })));
        assert!(is_path_graph(&path(6).unwrap()));
        assert!(is_path_in_order(&path(6).unwrap(), &[0, 1, 2, 3, 4, 5]));
        assert!(!is_path_in_order(&path(6).unwrap(), &[0, 2, 1, 3, 4, 5]));
    }

    #[test]
    fn layer_partition_indexing() {
        let coords = MPathsCoords { m: 3, t: 8 };
        let layers = coords.layer_partition();
        assert_eq!(layers.part_count(), 8);
        for j in 1..=8 {
            for i in 1..=3 {
                assert_eq!(layers.part_of(coords.vertex(i, j)), j - 1, "L_{j}");
            }
        }
    }

    #[test]
    fn figure_one_flips() {
        // 3P_8 with L2~L3, L4~L7, L7~L7.
        let (g, c, spec) = flipped_m_paths(3, 8, &[(2, 3), (4, 7), (7, 7)]).unwrap();
        // Path edge (1,2)-(1,3) lies between flipped layers: removed.
        assert!(!g.has_edge(c.vertex(1, 2), c.vertex(1, 3)));
        // Cross pair (1,2)-(2,3) created.
        assert!(g.has_edge(c.vertex(1, 2), c.vertex(2, 3)));
        // L7 self-flip: the three layer-7 vertices form a triangle.
        for i1 in 1..=3 {
            for i2 in (i1 + 1)..=3 {
                assert!(g.has_edge(c.vertex(i1, 7), c.vertex(i2, 7)));
            }
        }
        // Untouched path edge elsewhere.
        assert!(g.has_edge(c.vertex(3, 5), c.vertex(3, 6)));
        // Round-trip through the spec.
        let (base, _) = m_paths(3, 8).unwrap();
        assert_eq!(apply_flip(&g, &spec).unwrap(), base);
        // Empty flip relation reproduces the base pattern.
        let (unflipped, _, _) = flipped_m_paths(3, 8, &[]).unwrap();
        assert_eq!(unflipped, base);
    }

    #[test]
    fn half_graph_degrees() {
        for t in 1..=20 {
            let (g, c) = half_graph(t).unwrap();
            for i in 1..=t {
                assert_eq!(g.degree(c.a(i)), t - i + 1, "deg a_{i} at t={t}");
            }
            for j in 1..=t {
                assert_eq!(g.degree(c.b(j)), j, "deg b_{j} at t={t}");
            }
        }
    }

    #[test]
    fn clean_flavors() {
        let t = 4;
        let (plain, c) = clean_flipped_half_graph(t, Flavor::default()).unwrap();
        assert_eq!(plain, half_graph(t).unwrap().0);
        let (acl, _) = clean_flipped_half_graph(t, Flavor { aa: true, bb: false }).unwrap();
        for i1 in 1..=t {
            for i2 in (i1 + 1)..=t {
                assert!(acl.has_edge(c.a(i1), c.a(i2)), "A clique edge");
                assert!(!acl.has_edge(c.b(i1), c.b(i2)), "B untouched");
            }
        }
        let a: Vec<usize> = (1..=t).map(|i| c.a(i)).collect();
        let b: Vec<usize> = (1..=t).map(|j| c.b(j)).collect();
        assert!(is_clean_flipped_in_order(&acl, &a, &b, Flavor { aa: true, bb: false }));
        assert!(!is_clean_flipped_in_order(&acl, &a, &b, Flavor::default()));
    }

    #[test]
    fn clean_core_all_flips() {
        for t in [3, 4, 5] {
            for flips in HalfFlips::all() {
                let (g, _, _) = flipped_half_graph(t, flips).unwrap();
                let core = clean_core(t, flips).unwrap();
                assert!(
                    is_clean_flipped_in_order(&g, &core.a, &core.b, core.flavor),
                    "clean core of flipped H_{t} with {flips:?}"
                );
            }
        }
    }

    #[test]
    fn flipped_half_family_dedupes_to_six() {
        for t in [3, 4] {
            let all =
                enumerate_flipped_family(FlippedFamily::HalfGraph { t }, false, 1 << 10).unwrap();
            assert_eq!(all.len(), 8);
            let classes =
                enumerate_flipped_family(FlippedFamily::HalfGraph { t }, true, 1 << 10).unwrap();
            assert_eq!(classes.len(), 6, "flipped H_{t} isomorphism classes");
        }
    }

    #[test]
    fn m_paths_family_enumeration() {
        let fam =
            enumerate_flipped_family(FlippedFamily::MPaths { m: 2, t: 3 }, false, 1 << 10).unwrap();
        assert_eq!(fam.len(), 64);
        // First member is the unflipped pattern.
        assert_eq!(fam[0].graph, m_paths(2, 3).unwrap().0);
        assert!(matches!(
            enumerate_flipped_family(FlippedFamily::MPaths { m: 1, t: 8 }, false, 1 << 16),
            Err(PatternError::FamilyTooLarge { .. })
        ));
    }

    #[test]
    fn h_star_shape() {
        for t in 1..=5 {
            for flavor in Flavor::all() {
                let (g, c) = h_star(t, flavor).unwrap();
                assert_eq!(g.vertex_count(), 2 * t + 3);
                // alpha_k ~ b_j iff k + 2 <= j, modulated by nothing (cross
                // pair never flipped).
                for k in 1..=t {
                    for j in 1..=t + 3 {
                        assert_eq!(
                            g.has_edge(c.alpha(k), c.b(j)),
                            k + 2 <= j,
                            "alpha_{k} b_{j} t={t} {flavor:?}"
                        );
                    }
                }
                // b_1, b_2 are twins; b_{t+2}, b_{t+3} are twins.
                assert!(g.are_twins(c.b(1), c.b(2)));
                assert!(g.are_twins(c.b(t + 2), c.b(t + 3)));
                // Exactly 4 vertices have a twin.
                let twin_having = (0..g.vertex_count()).filter(|&v| g.has_twin(v)).count();
                assert_eq!(twin_having, 4, "t={t} {flavor:?}");
                // A-side neighborhoods on B are nested along alpha_1..alpha_t.
                for k in 1..t {
                    for j in 1..=t + 3 {
                        if g.has_edge(c.alpha(k + 1), c.b(j)) {
                            assert!(g.has_edge(c.alpha(k), c.b(j)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_shapes() {
        let (star, c) = star_crossing(4, 3).unwrap();
        assert_eq!(star.vertex_count(), 2 * 3 + 4 * 9);
        let (clique, _) = clique_crossing(4, 3).unwrap();
        assert_eq!(clique.vertex_count(), 2 * 3 + 4 * 9);
        // Every root has degree t in the star crossing.
        for i in 1..=3 {
            assert_eq!(star.degree(c.a(i)), 3);
            assert_eq!(star.degree(c.b(i)), 3);
        }
        // Layer partition sizes [t, t², .., t², t].
        let layers = c.layer_partition();
        let sizes: Vec<usize> = layers.parts().iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![3, 9, 9, 9, 9, 3]);
        // star_crossing(1,1) is P_3 with the subdivision vertex in the middle.
        let (p3, c11) = star_crossing(1, 1).unwrap();
        assert!(is_path_in_order(&p3, &[c11.a(1), c11.pi(1, 1, 1), c11.b(1)]));
    }

    #[test]
    fn rook_degrees() {
        let (g, _) = rook(4).unwrap();
        assert_eq!(g.vertex_count(), 16);
        for v in 0..16 {
            assert_eq!(g.degree(v), 6);
        }
    }

    #[test]
    fn nibbles_of_three_paths() {
        let (g, c) = m_paths(3, 3).unwrap();
        let (n1, nc1) = nibble(&g, &c, 1).unwrap();
        // K_1 + 2P_3: component sizes 1, 3, 3.
        let mut sizes: Vec<usize> = n1.components().iter().map(|cc| cc.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 3]);
        assert_eq!(nc1.coord(0), (1, 2));
        let (n2, _) = nibble(&g, &c, 2).unwrap();
        let mut sizes: Vec<usize> = n2.components().iter().map(|cc| cc.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 3]);
        assert!(matches!(nibble(&g, &c, 3), Err(PatternError::WhichOutOfRange { .. })));
        let (short, sc) = m_paths(2, 2).unwrap();
        assert!(matches!(nibble(&short, &sc, 1), Err(PatternError::NibbleParams { .. })));
    }

    #[test]
    fn nibble_commutes_with_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..30 {
            let m = rng.gen_range(2..5);
            let t = rng.gen_range(3..6);
            let mut pairs = Vec::new();
            for j1 in 1..=t {
                for j2 in j1..=t {
                    if rng.gen_bool(0.3) {
                        pairs.push((j1, j2));
                    }
                }
            }
            let (flipped, c, spec) = flipped_m_paths(m, t, &pairs).unwrap();
            let which = rng.gen_range(1..3);
            let (nib, nc) = nibble(&flipped, &c, which).unwrap();
            // Inducing the flip spec onto the survivors reproduces the nibble
            // from the unflipped nibble.
            let (base, _) = m_paths(m, t).unwrap();
            let base_nib = base.induced_subgraph(&nc.survivors).unwrap();
            let restricted = spec.restrict(&nc.survivors).unwrap();
            assert_eq!(apply_flip(&base_nib, &restricted).unwrap(), nib);
        }
    }

    #[test]
    fn linear_order_pairs() {
        let s = linear_order(4).unwrap();
        assert_eq!(s.tuples(0).len(), 6);
        assert!(linear_order(0).is_err());
    }
}
