//! Structural search: SC-depth, induced embeddings, and the constructive
//! extraction arguments behind the path-pattern machinery.
//!
//! The module has three layers:
//!
//! * **SC-depth** ([`sc_depth`]): the exact minimum nesting depth of
//!   set-complementations needed to build a graph from single vertices, with
//!   a replayable decomposition trace.
//! * **Extraction** ([`flat_or_pattern`], [`kflip_pigeonhole_extract`],
//!   [`setcomp_pigeonhole_extract`], [`component_pigeonhole_extract`],
//!   [`path_to_swimlane_extract`], [`crossing_path_embedding`]): constructive
//!   pigeonhole and cutting arguments that locate an induced (flipped) path
//!   union — or a large distance-infinite independent set — inside a
//!   structured host graph.
//! * **Search** ([`contains_induced`], [`find_flipped_pattern`]):
//!   backtracking induced-subgraph search and its lift to whole flipped
//!   families.
//!
//! Extraction output is never trusted: every operation re-derives the layer
//! flip relation of its output from the host graph's edges and fails loudly
//! if the claimed shape does not certify. Ties are broken lexicographically
//! (smallest vertex, smallest subset mask, smallest path index) so repeated
//! runs produce identical certificates.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::canon::{canonical_form_with, CanonConfig, CanonError};
use crate::graph::{Graph, GraphError, Radius};
use crate::partition::{apply_flip, FlipSpec, PartitionError, VertexPartition};
use crate::patterns::{
    clique_crossing, enumerate_flipped_family, m_paths, path, rook, star_crossing,
    is_path_in_order, FamilyMember, FlippedFamily, MPathsCoords, PatternError,
    DEFAULT_FAMILY_CAP,
};
use crate::structure::Structure;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors reported by the structural-search operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalysisError {
    /// An input exceeds the named operation cap.
    CapExceeded { name: &'static str, cap: usize, got: usize },
    /// A pigeonhole needs more paths than the host provides.
    TooFewPaths { needed: usize, got: usize },
    /// A candidate set is smaller than the argument requires.
    SetTooSmall { needed: usize, got: usize },
    /// Two vertices of a supposedly distance-independent set are too close.
    NotDistanceIndependent { u: usize, v: usize },
    /// The edge difference at `(u, v)` contradicts the promised flip shape.
    FlipMismatch { u: usize, v: usize },
    /// A scalar parameter violates its precondition.
    BadParameter { name: &'static str },
    /// The host has a different vertex count than its coordinates promise.
    WrongVertexCount { expected: usize, got: usize },
    /// An extraction produced output that failed its own validator.
    CertificationFailed { op: &'static str },
    /// A pattern generator rejected its parameters.
    Pattern(PatternError),
    /// A partition or flip specification was malformed.
    Partition(PartitionError),
    /// A graph operation rejected its vertex arguments.
    Graph(GraphError),
    /// Canonicalization gave up.
    Canon(CanonError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::CapExceeded { name, cap, got } => {
                write!(f, "{name} cap exceeded: {got} > {cap}")
            }
            AnalysisError::TooFewPaths { needed, got } => {
                write!(f, "need at least {needed} paths, host has {got}")
            }
            AnalysisError::SetTooSmall { needed, got } => {
                write!(f, "need a set of at least {needed} vertices, got {got}")
            }
            AnalysisError::NotDistanceIndependent { u, v } => {
                write!(f, "vertices {u} and {v} are too close for the required independence")
            }
            AnalysisError::FlipMismatch { u, v } => {
                write!(f, "edge difference at ({u}, {v}) is inconsistent with a flip of the base")
            }
            AnalysisError::BadParameter { name } => {
                write!(f, "parameter {name} violates its precondition")
            }
            AnalysisError::WrongVertexCount { expected, got } => {
                write!(f, "expected a host on {expected} vertices, got {got}")
            }
            AnalysisError::CertificationFailed { op } => {
                write!(f, "{op}: extracted output failed certification")
            }
            AnalysisError::Pattern(e) => write!(f, "{e}"),
            AnalysisError::Partition(e) => write!(f, "{e}"),
            AnalysisError::Graph(e) => write!(f, "{e}"),
            AnalysisError::Canon(e) => write!(f, "{e}"),
        }
    }
}

impl From<PatternError> for AnalysisError {
    fn from(e: PatternError) -> Self {
        AnalysisError::Pattern(e)
    }
}

impl From<PartitionError> for AnalysisError {
    fn from(e: PartitionError) -> Self {
        AnalysisError::Partition(e)
    }
}

impl From<GraphError> for AnalysisError {
    fn from(e: GraphError) -> Self {
        AnalysisError::Graph(e)
    }
}

impl From<CanonError> for AnalysisError {
    fn from(e: CanonError) -> Self {
        AnalysisError::Canon(e)
    }
}

// ---------------------------------------------------------------------------
// Certificates and embeddings
// ---------------------------------------------------------------------------

/// Outcome of the flat-or-pattern dichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A distance-infinite independent set (pairwise in distinct components).
    InfIndependent(Vec<usize>),
    /// An induced plain `mP_t`, path-major: entry `(i-1)*t + (j-1)` of `map`
    /// is the host vertex playing position `j` of path `i`.
    InducedPattern { m: usize, t: usize, map: Vec<usize> },
}

/// A certified induced flipped `mP_t` inside a host graph.
///
/// `vertices` is path-major: entry `(i-1)*t + (j-1)` plays position `j` of
/// path `i`. `layer_flips` is the 1-based layer flip relation the embedding
/// induces; it is re-derived from the host edges on construction, so holding
/// a value of this type is proof of membership in the flipped family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlippedEmbedding {
    pub m: usize,
    pub t: usize,
    pub vertices: Vec<usize>,
    pub layer_flips: Vec<(usize, usize)>,
}

impl FlippedEmbedding {
    /// Certifies `vertices` as an induced flipped `mP_t` in `g`, deriving
    /// the layer flip relation or reporting the first offending pair.
    pub fn certify(
        g: &Graph,
        m: usize,
        t: usize,
        vertices: Vec<usize>,
    ) -> Result<FlippedEmbedding, AnalysisError> {
        if vertices.len() != m * t {
            return Err(AnalysisError::WrongVertexCount { expected: m * t, got: vertices.len() });
        }
        let distinct: BTreeSet<usize> = vertices.iter().copied().collect();
        if distinct.len() != vertices.len() {
            return Err(AnalysisError::BadParameter { name: "vertices" });
        }
        let layer_flips =
            layer_flips_of(g, &vertices, m, t).map_err(|(u, v)| AnalysisError::FlipMismatch {
                u: vertices[u],
                v: vertices[v],
            })?;
        Ok(FlippedEmbedding { m, t, vertices, layer_flips })
    }
}

/// Derives the layer flip relation of a path-major embedding, or returns the
/// first pair of embedding indices whose edge disagrees with its layer block.
///
/// Index `(i-1)*t + (j-1)` is position `j` of path `i`; the base adjacency is
/// `i1 == i2 && |j1 - j2| == 1`. For each unordered layer pair the observed
/// toggle (host edge xor base edge) must be constant over the whole block.
fn layer_flips_of(
    g: &Graph,
    vertices: &[usize],
    m: usize,
    t: usize,
) -> Result<Vec<(usize, usize)>, (usize, usize)> {
    debug_assert_eq!(vertices.len(), m * t);
    let idx = |i: usize, j: usize| (i - 1) * t + (j - 1);
    let mut flips = Vec::new();
    for j1 in 1..=t {
        for j2 in j1..=t {
            let mut block: Option<(bool, (usize, usize))> = None;
            for i1 in 1..=m {
                let i2_lo = if j1 == j2 { i1 + 1 } else { 1 };
                for i2 in i2_lo..=m {
                    let (p, q) = (idx(i1, j1), idx(i2, j2));
                    let base = i1 == i2 && j2 == j1 + 1;
                    let toggled = g.has_edge(vertices[p], vertices[q]) != base;
                    match block {
                        None => block = Some((toggled, (p, q))),
                        Some((seen, _)) if seen != toggled => return Err((p, q)),
                        Some(_) => {}
                    }
                }
            }
            if let Some((true, _)) = block {
                flips.push((j1, j2));
            }
        }
    }
    Ok(flips)
}

/// Reconstructs the flip specification turning `base` into `flipped` over the
/// given partition, or reports the first vertex pair whose edge difference is
/// inconsistent with a constant toggle on its part block.
pub fn flips_for_partition(
    base: &Graph,
    flipped: &Graph,
    partition: &VertexPartition,
) -> Result<FlipSpec, AnalysisError> {
    let n = base.vertex_count();
    if flipped.vertex_count() != n {
        return Err(AnalysisError::WrongVertexCount { expected: n, got: flipped.vertex_count() });
    }
    if partition.universe_size() != n {
        return Err(AnalysisError::WrongVertexCount {
            expected: n,
            got: partition.universe_size(),
        });
    }
    let mut blocks: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let toggled = base.has_edge(u, v) != flipped.has_edge(u, v);
            let (p, q) = (partition.part_of(u), partition.part_of(v));
            let block = (p.min(q), p.max(q));
            match blocks.get(&block) {
                None => {
                    blocks.insert(block, toggled);
                }
                Some(&seen) if seen != toggled => {
                    return Err(AnalysisError::FlipMismatch { u, v });
                }
                Some(_) => {}
            }
        }
    }
    let flip_list: Vec<(usize, usize)> =
        blocks.into_iter().filter(|&(_, t)| t).map(|(b, _)| b).collect();
    Ok(FlipSpec::new(partition.clone(), &flip_list)?)
}

// ---------------------------------------------------------------------------
// Set complementation and SC-depth
// ---------------------------------------------------------------------------

/// Toggles every edge inside `a`, leaving all other pairs unchanged.
///
/// Equivalent to applying the two-part flip `({A, V \ A}, {(A, A)})`.
pub fn set_complement(g: &Graph, a: &BitSet) -> Graph {
    g.complement_within(a)
}

/// Default cap on the vertex count accepted by [`sc_depth`].
pub const DEFAULT_SC_DEPTH_CAP: usize = 11;

/// Configuration for [`sc_depth_with`].
#[derive(Clone, Debug)]
pub struct ScDepthConfig {
    /// Largest vertex count accepted.
    pub cap: usize,
    /// Canonicalization settings for the memo table keys.
    pub canon: CanonConfig,
}

impl Default for ScDepthConfig {
    fn default() -> Self {
        ScDepthConfig {
            cap: DEFAULT_SC_DEPTH_CAP,
            // The permutation budget covers 11! so memo keys never give up
            // within the default cap.
            canon: CanonConfig { cap: DEFAULT_SC_DEPTH_CAP, perm_budget: 1 << 26 },
        }
    }
}

/// One level of an SC-depth decomposition.
///
/// A `Complement` node records the complemented set `a` (in the node's local
/// vertex ids) and the components of the complemented graph, each with its
/// own subtrace; component vertex lists are also in the node's local ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScTrace {
    /// A single vertex.
    Leaf,
    /// Complement `a`, then decompose each component independently.
    Complement { a: Vec<usize>, parts: Vec<(Vec<usize>, ScTrace)> },
}

impl ScTrace {
    /// Nesting depth of the trace: 0 for a leaf, else one more than the
    /// deepest part.
    pub fn depth(&self) -> usize {
        match self {
            ScTrace::Leaf => 0,
            ScTrace::Complement { parts, .. } => {
                1 + parts.iter().map(|(_, sub)| sub.depth()).max().unwrap_or(0)
            }
        }
    }

    /// Number of vertices the trace describes.
    pub fn vertex_count(&self) -> usize {
        match self {
            ScTrace::Leaf => 1,
            ScTrace::Complement { parts, .. } => {
                parts.iter().map(|(verts, _)| verts.len()).sum()
            }
        }
    }

    /// Rebuilds the graph the trace decomposes: replay each part, embed it
    /// along its vertex list, then toggle the edges inside `a`.
    pub fn replay(&self) -> Graph {
        match self {
            ScTrace::Leaf => Graph::new(1),
            ScTrace::Complement { a, parts } => {
                let n = self.vertex_count();
                let mut g = Graph::new(n);
                for (verts, sub) in parts {
                    let sub_g = sub.replay();
                    debug_assert_eq!(sub_g.vertex_count(), verts.len());
                    for (u, v) in sub_g.edges() {
                        g.add_edge(verts[u], verts[v]);
                    }
                }
                for (ai, &u) in a.iter().enumerate() {
                    for &v in &a[ai + 1..] {
                        g.toggle_edge(u, v);
                    }
                }
                g
            }
        }
    }
}

/// Exact SC-depth together with a witnessing decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScDepthResult {
    /// The minimum nesting depth of set-complementations building the graph
    /// from single vertices.
    pub depth: usize,
    /// A lexicographically-least decomposition reaching that depth;
    /// replaying it reconstructs the input graph.
    pub trace: ScTrace,
}

/// Per-graph memo entry: depths in `(max_failed, min_ok]` are undecided.
#[derive(Clone, Copy, Default)]
struct DepthBounds {
    max_failed: Option<usize>,
    min_ok: Option<usize>,
}

struct ScCtx {
    canon: CanonConfig,
    memo: BTreeMap<Vec<u8>, DepthBounds>,
}

/// Complements the edges among the vertices selected by `mask`.
fn complement_masked(g: &Graph, mask: u32) -> Graph {
    let sel: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask >> v & 1 == 1).collect();
    let mut h = g.clone();
    for (i, &u) in sel.iter().enumerate() {
        for &v in &sel[i + 1..] {
            h.toggle_edge(u, v);
        }
    }
    h
}

/// Whether the SC-depth of `g` is at most `budget`.
///
/// Recursion is well-founded because the budget strictly decreases; the memo
/// caps the blow-up by pruning any graph already decided at the same or a
/// more generous budget.
fn depth_at_most(g: &Graph, budget: usize, ctx: &mut ScCtx) -> Result<bool, AnalysisError> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(true);
    }
    if budget == 0 {
        return Ok(false);
    }
    let e = g.edge_count();
    if e == 0 || e == n * (n - 1) / 2 {
        // Edgeless: complement nothing, all parts are single vertices.
        // Complete: complement everything, likewise.
        return Ok(true);
    }
    let key = canonical_form_with(&Structure::from_graph(g), &ctx.canon)?;
    let bounds = ctx.memo.get(&key).copied().unwrap_or_default();
    if bounds.min_ok.is_some_and(|b| b <= budget) {
        return Ok(true);
    }
    if bounds.max_failed.is_some_and(|b| b >= budget) {
        return Ok(false);
    }
    let mut ok = false;
    'masks: for mask in 0..(1u32 << n) {
        let h = complement_masked(g, mask);
        for comp in h.components() {
            let part = if comp.len() == n { h.clone() } else { h.induced_subgraph(&comp)? };
            if !depth_at_most(&part, budget - 1, ctx)? {
                continue 'masks;
            }
        }
        ok = true;
        break;
    }
    let entry = ctx.memo.entry(key).or_default();
    if ok {
        entry.min_ok = Some(entry.min_ok.map_or(budget, |b| b.min(budget)));
    } else {
        entry.max_failed = Some(entry.max_failed.map_or(budget, |b| b.max(budget)));
    }
    Ok(ok)
}

/// Exact SC-depth of `g` (smallest budget that suffices).
fn exact_depth(g: &Graph, ctx: &mut ScCtx) -> Result<usize, AnalysisError> {
    for b in 0..=g.vertex_count() {
        if depth_at_most(g, b, ctx)? {
            return Ok(b);
        }
    }
    // Unreachable: complementing a spanning clique of any graph on n >= 2
    // vertices eventually isolates vertices within n rounds.
    Err(AnalysisError::CertificationFailed { op: "sc_depth" })
}

/// Builds the lexicographically-least decomposition trace at exact depth.
fn build_trace(g: &Graph, ctx: &mut ScCtx) -> Result<(usize, ScTrace), AnalysisError> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok((0, ScTrace::Leaf));
    }
    let d = exact_depth(g, ctx)?;
    for mask in 0..(1u32 << n) {
        let h = complement_masked(g, mask);
        let comps = h.components();
        let mut fits = true;
        for comp in &comps {
            let part = if comp.len() == n { h.clone() } else { h.induced_subgraph(comp)? };
            if !depth_at_most(&part, d - 1, ctx)? {
                fits = false;
                break;
            }
        }
        if !fits {
            continue;
        }
        let a: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut parts = Vec::with_capacity(comps.len());
        for comp in comps {
            let part = if comp.len() == n { h.clone() } else { h.induced_subgraph(&comp)? };
            let (_, sub) = build_trace(&part, ctx)?;
            parts.push((comp, sub));
        }
        let trace = ScTrace::Complement { a, parts };
        debug_assert_eq!(trace.depth(), d);
        return Ok((d, trace));
    }
    Err(AnalysisError::CertificationFailed { op: "sc_depth trace" })
}

/// Exact SC-depth with the default cap of [`DEFAULT_SC_DEPTH_CAP`] vertices.
pub fn sc_depth(g: &Graph) -> Result<ScDepthResult, AnalysisError> {
    sc_depth_with(g, &ScDepthConfig::default())
}

/// Exact SC-depth of `g`: the minimum `d` such that `g` is a complement of a
/// disjoint union of graphs of SC-depth at most `d - 1`, single vertices
/// having depth 0. Exhaustive over complement sets, memoized on canonical
/// form; the returned trace replays to `g`.
pub fn sc_depth_with(g: &Graph, cfg: &ScDepthConfig) -> Result<ScDepthResult, AnalysisError> {
    let n = g.vertex_count();
    if n > cfg.cap {
        return Err(AnalysisError::CapExceeded { name: "sc_depth", cap: cfg.cap, got: n });
    }
    if n == 0 {
        return Err(AnalysisError::BadParameter { name: "vertex count" });
    }
    let mut ctx = ScCtx { canon: cfg.canon, memo: BTreeMap::new() };
    let (depth, trace) = build_trace(g, &mut ctx)?;
    debug_assert_eq!(&trace.replay(), g);
    Ok(ScDepthResult { depth, trace })
}

// ---------------------------------------------------------------------------
// Flat-or-pattern dichotomy
// ---------------------------------------------------------------------------

/// Given a distance-`2t` independent set `a` of size at least `2m`, returns
/// either `m` members of `a` lying in pairwise distinct components, or an
/// induced `mP_t` whose paths start at distinct members of `a`.
///
/// For each candidate the set of vertices at distance exactly `t - 1` is
/// inspected: if it is empty the candidate's whole component sits inside its
/// radius-`(t-2)` ball, so candidates with empty sets are pairwise
/// distance-infinite; otherwise a shortest path to such a vertex is an
/// induced `P_t`. By pigeonhole one side reaches `m`.
pub fn flat_or_pattern(
    g: &Graph,
    a: &[usize],
    t: usize,
    m: usize,
) -> Result<Certificate, AnalysisError> {
    if t == 0 {
        return Err(AnalysisError::BadParameter { name: "t" });
    }
    if m == 0 {
        return Err(AnalysisError::BadParameter { name: "m" });
    }
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != a.len() {
        return Err(AnalysisError::BadParameter { name: "a" });
    }
    if sorted.len() < 2 * m {
        return Err(AnalysisError::SetTooSmall { needed: 2 * m, got: sorted.len() });
    }
    let radius = 2 * t as u32;
    let dists: Vec<Vec<u32>> = sorted.iter().map(|&v| g.distances_from(v)).collect();
    for (i, &u) in sorted.iter().enumerate() {
        for &v in &sorted[i + 1..] {
            if dists[i][v] <= radius {
                return Err(AnalysisError::NotDistanceIndependent { u, v });
            }
        }
    }
    debug_assert!(g.is_distance_independent(&sorted, Radius::Finite(radius)));

    let target = (t - 1) as u32;
    let mut flat: Vec<usize> = Vec::new();
    let mut deep: Vec<usize> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        if dists[i].contains(&target) {
            deep.push(i);
        } else {
            flat.push(v);
        }
        if flat.len() == m {
            debug_assert!(g.is_distance_independent(&flat, Radius::Infinite));
            return Ok(Certificate::InfIndependent(flat));
        }
        if deep.len() == m {
            break;
        }
    }
    debug_assert_eq!(deep.len(), m);

    let mut map = Vec::with_capacity(m * t);
    for &i in &deep {
        // Lexicographically-least shortest path from the candidate to the
        // smallest vertex at distance t - 1; distance levels make it induced.
        let dist = &dists[i];
        let x = (0..g.vertex_count())
            .find(|&u| dist[u] == target)
            .expect("deep candidates have a vertex at distance t - 1");
        let mut rev = vec![x];
        let mut cur = x;
        for d in (0..target).rev() {
            let next = g
                .neighbors(cur)
                .iter()
                .find(|&u| dist[u] == d)
                .expect("breadth-first levels are contiguous");
            rev.push(next);
            cur = next;
        }
        map.extend(rev.into_iter().rev());
    }
    match layer_flips_of(g, &map, m, t) {
        Ok(flips) if flips.is_empty() => Ok(Certificate::InducedPattern { m, t, map }),
        _ => Err(AnalysisError::CertificationFailed { op: "flat_or_pattern" }),
    }
}

// ---------------------------------------------------------------------------
// Pigeonhole extractions
// ---------------------------------------------------------------------------

/// Extracts an induced flipped `mP_t` from a partition flip of a large path
/// union, where `m = coords.m / k^t` and `k` is the number of parts.
///
/// Each path is colored by the sequence of parts its positions lie in; at
/// most `k^t` colors exist, so some color repeats `m` times, and paths of
/// equal color induce a flipped `mP_t`. The input must actually be a flip of
/// the base `coords.m`-fold path union over the given partition.
pub fn kflip_pigeonhole_extract(
    g: &Graph,
    coords: &MPathsCoords,
    partition: &VertexPartition,
) -> Result<FlippedEmbedding, AnalysisError> {
    let (s, t) = (coords.m, coords.t);
    let n = s * t;
    if g.vertex_count() != n {
        return Err(AnalysisError::WrongVertexCount { expected: n, got: g.vertex_count() });
    }
    let k = partition.part_count();
    let k_pow = k
        .checked_pow(t as u32)
        .ok_or(AnalysisError::CapExceeded { name: "k^t", cap: usize::MAX, got: k })?;
    let m = s / k_pow;
    if m == 0 {
        return Err(AnalysisError::TooFewPaths { needed: k_pow, got: s });
    }
    let (base, _) = m_paths(s, t)?;
    flips_for_partition(&base, g, partition)?;

    let mut buckets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 1..=s {
        let sig: Vec<usize> = (1..=t).map(|j| partition.part_of(coords.vertex(i, j))).collect();
        let bucket = buckets.entry(sig).or_default();
        bucket.push(i);
        if bucket.len() == m {
            let mut vertices = Vec::with_capacity(m * t);
            for &path_i in bucket.iter() {
                for j in 1..=t {
                    vertices.push(coords.vertex(path_i, j));
                }
            }
            return FlippedEmbedding::certify(g, m, t, vertices);
        }
    }
    // Unreachable: with s >= m * k^t some color class must fill.
    Err(AnalysisError::CertificationFailed { op: "kflip_pigeonhole_extract" })
}

/// Extracts an induced flipped `tP_t` from a set-complementation of a flipped
/// `sP_t`, for `s >= t * 2^t`.
///
/// Paths are colored by the membership pattern of their positions in the
/// complemented set `a`; some pattern repeats `t` times, and for such paths
/// the complementation toggles edges layer-block-wise, so they induce a
/// flipped `tP_t`.
pub fn setcomp_pigeonhole_extract(
    g: &Graph,
    coords: &MPathsCoords,
    a: &BitSet,
) -> Result<FlippedEmbedding, AnalysisError> {
    let (s, t) = (coords.m, coords.t);
    let n = s * t;
    if g.vertex_count() != n {
        return Err(AnalysisError::WrongVertexCount { expected: n, got: g.vertex_count() });
    }
    if a.capacity() != n {
        return Err(AnalysisError::WrongVertexCount { expected: n, got: a.capacity() });
    }
    if t >= usize::BITS as usize {
        return Err(AnalysisError::CapExceeded { name: "2^t", cap: usize::BITS as usize, got: t });
    }
    let needed = t * (1 << t);
    if s < needed {
        return Err(AnalysisError::TooFewPaths { needed, got: s });
    }
    let mut buckets: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for i in 1..=s {
        let sig: Vec<bool> = (1..=t).map(|j| a.contains(coords.vertex(i, j))).collect();
        let bucket = buckets.entry(sig).or_default();
        bucket.push(i);
        if bucket.len() == t {
            let mut vertices = Vec::with_capacity(t * t);
            for &path_i in bucket.iter() {
                for j in 1..=t {
                    vertices.push(coords.vertex(path_i, j));
                }
            }
            return FlippedEmbedding::certify(g, t, t, vertices);
        }
    }
    // Unreachable: with s >= t * 2^t some membership pattern must fill.
    Err(AnalysisError::CertificationFailed { op: "setcomp_pigeonhole_extract" })
}

/// Recovers the vertex order of an induced path, walking from its smallest
/// endpoint; `None` if the graph is not a path.
fn path_order(g: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n == 1 {
        return Some(vec![0]);
    }
    let start = (0..n).find(|&v| g.degree(v) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let next = g.neighbors(cur).iter().find(|&u| u != prev)?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    if is_path_in_order(g, &order) {
        Some(order)
    } else {
        None
    }
}

/// Cuts the first `t * (t + 1) - 1` entries of an ordered induced path into
/// `t` segments of length `t` separated by single skipped vertices.
fn cut_ordered_path(order: &[usize], t: usize) -> Vec<usize> {
    let mut vertices = Vec::with_capacity(t * t);
    for seg in 0..t {
        for pos in 0..t {
            vertices.push(order[seg * (t + 1) + pos]);
        }
    }
    vertices
}

/// Locates a connected component of a flipped `tP_s`, `s = t^2 + t - 1`, that
/// contains an induced flipped `tP_t`, returning the component's vertices and
/// the certified embedding.
///
/// If no layer flip was performed the host is the plain path union and path 1
/// is cut into `t` segments of length `t` separated by single skipped
/// vertices. If the host is connected the first `t` columns induce a flipped
/// `tP_t` directly. The host can also be disconnected despite a nonempty flip
/// relation: for `t = 2`, flips between adjacent layers make the two paths
/// swap tails, weaving them into disjoint strands — but each strand is then
/// an induced path on `s = t(t+1) - 1` vertices, exactly long enough to cut.
pub fn component_pigeonhole_extract(
    g: &Graph,
    coords: &MPathsCoords,
) -> Result<(Vec<usize>, FlippedEmbedding), AnalysisError> {
    let (t, s) = (coords.m, coords.t);
    if t == 0 {
        return Err(AnalysisError::BadParameter { name: "t" });
    }
    if s != t * t + t - 1 {
        return Err(AnalysisError::BadParameter { name: "s" });
    }
    let n = t * s;
    if g.vertex_count() != n {
        return Err(AnalysisError::WrongVertexCount { expected: n, got: g.vertex_count() });
    }
    let (base, _) = m_paths(t, s)?;
    let layer_parts: Vec<Vec<usize>> =
        (1..=s).map(|j| (1..=t).map(|i| coords.vertex(i, j)).collect()).collect();
    let layers = VertexPartition::new(n, &layer_parts)?;
    let spec = flips_for_partition(&base, g, &layers)?;

    if spec.flips().is_empty() {
        let component: Vec<usize> = (1..=s).map(|j| coords.vertex(1, j)).collect();
        let order = component.clone();
        let vertices: Vec<usize> = cut_ordered_path(&order, t);
        let emb = FlippedEmbedding::certify(g, t, t, vertices)?;
        if !emb.layer_flips.is_empty() {
            return Err(AnalysisError::CertificationFailed { op: "component cut" });
        }
        return Ok((component, emb));
    }
    if g.is_connected() {
        let component: Vec<usize> = (0..n).collect();
        let mut vertices = Vec::with_capacity(t * t);
        for i in 1..=t {
            for j in 1..=t {
                vertices.push(coords.vertex(i, j));
            }
        }
        let emb = FlippedEmbedding::certify(g, t, t, vertices)?;
        return Ok((component, emb));
    }
    // Disconnected despite flips: adjacent-layer flips wove the paths into
    // strands. Find a component that is an induced path long enough to cut.
    for comp in g.components() {
        if comp.len() < t * (t + 1) - 1 {
            continue;
        }
        let sub = g.induced_subgraph(&comp)?;
        let Some(order) = path_order(&sub) else { continue };
        let global: Vec<usize> = cut_ordered_path(&order, t).iter().map(|&v| comp[v]).collect();
        let emb = FlippedEmbedding::certify(g, t, t, global)?;
        if !emb.layer_flips.is_empty() {
            return Err(AnalysisError::CertificationFailed { op: "component strand cut" });
        }
        return Ok((comp, emb));
    }
    Err(AnalysisError::CertificationFailed { op: "component_pigeonhole_extract" })
}

// ---------------------------------------------------------------------------
// Crossing and rook path embeddings
// ---------------------------------------------------------------------------

/// Which crossing hosts the induced path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    /// Star crossing (subdivided complete bipartite); uses `r` and `t`.
    Star,
    /// Clique crossing; with `r = 1` the path is the rook-style staircase.
    Clique,
    /// Rook graph of order `t`; `r` is ignored.
    Rook,
}

/// Returns a vertex order inducing `P_t` in the crossing selected by `kind`.
///
/// Star: zigzag `a_1, pi_{1,1}, b_1, pi_{2,1} (reversed), a_2, pi_{2,2}, ...`
/// — each root sees exactly its two trail neighbors. Clique: the same
/// staircase skipping the roots, linked through the root cliques. Rook: the
/// snake `(1,1), (2,1), (2,2), (3,2), ...`. Each full trail is an induced
/// path longer than `t`, and a prefix of an induced path is induced.
pub fn crossing_path_embedding(
    kind: CrossingKind,
    r: usize,
    t: usize,
) -> Result<Vec<usize>, AnalysisError> {
    let (g, trail) = match kind {
        CrossingKind::Star => {
            let (g, c) = star_crossing(r, t)?;
            let mut trail = Vec::with_capacity(2 * t + (2 * t - 1) * r);
            for i in 1..=t {
                trail.push(c.a(i));
                for l in 1..=r {
                    trail.push(c.pi(i, i, l));
                }
                trail.push(c.b(i));
                if i < t {
                    for l in (1..=r).rev() {
                        trail.push(c.pi(i + 1, i, l));
                    }
                }
            }
            (g, trail)
        }
        CrossingKind::Clique => {
            let (g, c) = clique_crossing(r, t)?;
            let mut trail = Vec::with_capacity((2 * t - 1) * r);
            for i in 1..=t {
                if i > 1 {
                    for l in (1..=r).rev() {
                        trail.push(c.pi(i, i - 1, l));
                    }
                }
                for l in 1..=r {
                    trail.push(c.pi(i, i, l));
                }
            }
            (g, trail)
        }
        CrossingKind::Rook => {
            let (g, c) = rook(t)?;
            let mut trail = Vec::with_capacity(2 * t - 1);
            trail.push(c.cell(1, 1));
            for i in 2..=t {
                trail.push(c.cell(i, i - 1));
                trail.push(c.cell(i, i));
            }
            (g, trail)
        }
    };
    debug_assert!(is_path_in_order(&g, &trail));
    debug_assert!(trail.len() >= t);
    let out: Vec<usize> = trail[..t].to_vec();
    if !is_path_in_order(&g, &out) {
        return Err(AnalysisError::CertificationFailed { op: "crossing_path_embedding" });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Path-to-swimlane extraction
// ---------------------------------------------------------------------------

/// Extracts a certified induced flipped `tP_t` from a `k`-flip of a path on
/// at least `t * k^t * (t + 1)` vertices.
///
/// A long-enough prefix is cut into `t * k^t` segments of length `t`
/// separated by single skipped vertices; the induced subgraph is a partition
/// flip of that many disjoint `P_t`, and the pigeonhole extraction selects
/// `t` segments whose layer-wise parts agree.
pub fn path_to_swimlane_extract(
    g: &Graph,
    spec: &FlipSpec,
    t: usize,
) -> Result<FlippedEmbedding, AnalysisError> {
    if t == 0 {
        return Err(AnalysisError::BadParameter { name: "t" });
    }
    let k = spec.k();
    let t_prime = k
        .checked_pow(t as u32)
        .and_then(|p| p.checked_mul(t))
        .and_then(|p| p.checked_mul(t + 1))
        .ok_or(AnalysisError::CapExceeded { name: "t * k^t * (t + 1)", cap: usize::MAX, got: k })?;
    let n = g.vertex_count();
    if n < t_prime {
        return Err(AnalysisError::SetTooSmall { needed: t_prime, got: n });
    }
    let base = path(n)?;
    let flipped = apply_flip(&base, spec)?;
    if &flipped != g {
        for u in 0..n {
            for v in (u + 1)..n {
                if flipped.has_edge(u, v) != g.has_edge(u, v) {
                    return Err(AnalysisError::FlipMismatch { u, v });
                }
            }
        }
        return Err(AnalysisError::CertificationFailed { op: "path_to_swimlane precondition" });
    }
    let segments = t * k_pow_checked(k, t)?;
    let mut selected = Vec::with_capacity(segments * t);
    for seg in 0..segments {
        for pos in 0..t {
            selected.push(seg * (t + 1) + pos);
        }
    }
    let sub = g.induced_subgraph(&selected)?;
    let sub_coords = MPathsCoords { m: segments, t };
    let sub_spec = spec.restrict(&selected)?;
    let emb = kflip_pigeonhole_extract(&sub, &sub_coords, sub_spec.partition())?;
    // The pigeonhole may deliver more than t equal-colored segments when the
    // restricted partition has fewer than k parts; the first t suffice.
    let global: Vec<usize> = emb.vertices[..t * t].iter().map(|&v| selected[v]).collect();
    FlippedEmbedding::certify(g, t, t, global)
}

fn k_pow_checked(k: usize, t: usize) -> Result<usize, AnalysisError> {
    k.checked_pow(t as u32)
        .ok_or(AnalysisError::CapExceeded { name: "k^t", cap: usize::MAX, got: k })
}

// ---------------------------------------------------------------------------
// Induced-subgraph search
// ---------------------------------------------------------------------------

/// Default cap on the pattern size accepted by [`contains_induced`].
pub const DEFAULT_INDUCED_CAP: usize = 12;

/// Finds the lexicographically-least induced embedding of `h` in `g`, if one
/// exists, with the default pattern-size cap.
pub fn contains_induced(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, AnalysisError> {
    contains_induced_with(g, h, DEFAULT_INDUCED_CAP)
}

/// Finds the lexicographically-least induced embedding of `h` in `g`, if one
/// exists: an injective map preserving and reflecting adjacency, as a vector
/// indexed by the vertices of `h`. Exhaustive backtracking over candidate
/// images in ascending order.
pub fn contains_induced_with(
    g: &Graph,
    h: &Graph,
    cap: usize,
) -> Result<Option<Vec<usize>>, AnalysisError> {
    let nh = h.vertex_count();
    if nh > cap {
        return Err(AnalysisError::CapExceeded { name: "contains_induced", cap, got: nh });
    }
    if nh > g.vertex_count() {
        return Ok(None);
    }
    let mut map: Vec<usize> = Vec::with_capacity(nh);
    let mut used = vec![false; g.vertex_count()];
    if extend_embedding(g, h, &mut map, &mut used) {
        debug_assert!(embedding_valid(g, h, &map));
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn extend_embedding(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let k = map.len();
    if k == h.vertex_count() {
        return true;
    }
    for c in 0..g.vertex_count() {
        if used[c] {
            continue;
        }
        if (0..k).any(|j| g.has_edge(c, map[j]) != h.has_edge(k, j)) {
            continue;
        }
        map.push(c);
        used[c] = true;
        if extend_embedding(g, h, map, used) {
            return true;
        }
        map.pop();
        used[c] = false;
    }
    false
}

fn embedding_valid(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    let nh = h.vertex_count();
    map.len() == nh
        && (0..nh).all(|u| {
            ((u + 1)..nh).all(|v| map[u] != map[v] && g.has_edge(map[u], map[v]) == h.has_edge(u, v))
        })
}

/// Searches `g` for any member of a flipped family as an induced subgraph,
/// returning the first member (in deduplicated enumeration order) found,
/// together with its embedding.
pub fn find_flipped_pattern(
    g: &Graph,
    family: FlippedFamily,
) -> Result<Option<(FamilyMember, Vec<usize>)>, AnalysisError> {
    let members = enumerate_flipped_family(family, true, DEFAULT_FAMILY_CAP)?;
    for member in members {
        if let Some(map) = contains_induced(g, &member.graph)? {
            return Ok(Some((member, map)));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{flipped_m_paths, half_graph};
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

    fn depth_of(g: &Graph) -> usize {
        sc_depth(g).expect("within cap").depth
    }

    #[test]
    fn set_complement_matches_flip_and_trivial_cases() {
        let p3 = path(3).unwrap();
        assert_eq!(set_complement(&p3, &BitSet::new(3)), p3);

        let k3 = Graph::with_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(set_complement(&k3, &BitSet::full(3)).edge_count(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(0x5E7C0);
        for _ in 0..20 {
            let n = rng.gen_range(2..=8);
            let g = random_graph(&mut rng, n, 0.5);
            let a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let set = BitSet::from_iter(n, a.iter().copied());
            let direct = set_complement(&g, &set);

            let mut manual = g.clone();
            for (i, &u) in a.iter().enumerate() {
                for &v in &a[i + 1..] {
                    manual.toggle_edge(u, v);
                }
            }
            assert_eq!(direct, manual);

            if !a.is_empty() && a.len() < n {
                let rest: Vec<usize> = (0..n).filter(|v| !set.contains(*v)).collect();
                let partition = VertexPartition::new(n, &[a.clone(), rest]).unwrap();
                let part = partition.part_of(a[0]);
                let spec = FlipSpec::new(partition, &[(part, part)]).unwrap();
                assert_eq!(direct, apply_flip(&g, &spec).unwrap());
            }
        }
    }

    #[test]
    fn sc_depth_frozen_values() {
        assert_eq!(depth_of(&Graph::new(1)), 0);
        assert_eq!(depth_of(&Graph::new(2)), 1);
        assert_eq!(depth_of(&Graph::new(3)), 1);
        for n in 4..=6 {
            assert_eq!(depth_of(&Graph::new(n)), 1);
        }
        assert_eq!(depth_of(&path(3).unwrap()), 2);
        assert_eq!(depth_of(&path(4).unwrap()), 2);
        let c4 = Graph::with_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(depth_of(&c4), 2);
        let k4 =
            Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(depth_of(&k4), 1);
        assert_eq!(depth_of(&path(5).unwrap()), 3);
    }

    #[test]
    fn sc_depth_trace_replays_and_matches_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5CD7A);
        let mut subjects = vec![
            Graph::new(1),
            Graph::new(3),
            path(4).unwrap(),
            Graph::with_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
        ];
        for _ in 0..15 {
            let n = rng.gen_range(1..=6);
            subjects.push(random_graph(&mut rng, n, 0.5));
        }
        for g in &subjects {
            let res = sc_depth(g).unwrap();
            assert_eq!(res.trace.replay(), *g);
            assert_eq!(res.trace.depth(), res.depth);
        }
    }

    #[test]
    fn sc_depth_monotone_under_induced_subgraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5CD7B);
        for _ in 0..12 {
            let n = rng.gen_range(2..=6);
            let g = random_graph(&mut rng, n, 0.5);
            let sub: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            if sub.is_empty() {
                continue;
            }
            let h = g.induced_subgraph(&sub).unwrap();
            assert!(depth_of(&h) <= depth_of(&g), "induced subgraph got deeper");
        }
    }

    #[test]
    fn sc_depth_complement_changes_depth_by_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5CD7C);
        for _ in 0..12 {
            let n = rng.gen_range(2..=6);
            let g = random_graph(&mut rng, n, 0.5);
            let a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let h = set_complement(&g, &BitSet::from_iter(n, a.iter().copied()));
            let (dg, dh) = (depth_of(&g), depth_of(&h));
            assert!(dg.abs_diff(dh) <= 1, "complementation moved depth {dg} -> {dh}");
        }
    }

    #[test]
    fn sc_depth_rejects_oversized_hosts() {
        let g = Graph::new(12);
        assert_eq!(
            sc_depth(&g),
            Err(AnalysisError::CapExceeded { name: "sc_depth", cap: 11, got: 12 })
        );
    }

    #[test]
    fn contains_induced_basics_and_oracle() {
        let p5 = path(5).unwrap();
        let p3 = path(3).unwrap();
        let found = contains_induced(&p5, &p3).unwrap().expect("P_5 contains P_3");
        assert!(embedding_valid(&p5, &p3, &found));

        let k3 = Graph::with_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(contains_induced(&k3, &p3).unwrap(), None);

        fn brute_exists(g: &Graph, h: &Graph, map: &mut Vec<usize>) -> bool {
            if map.len() == h.vertex_count() {
                return embedding_valid(g, h, map);
            }
            for c in 0..g.vertex_count() {
                if map.contains(&c) {
                    continue;
                }
                map.push(c);
                if brute_exists(g, h, map) {
                    return true;
                }
                map.pop();
            }
            false
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x17D0CE);
        for _ in 0..150 {
            let ng = rng.gen_range(1..=6);
            let nh = rng.gen_range(1..=4);
            let g = random_graph(&mut rng, ng, 0.5);
            let h = random_graph(&mut rng, nh, 0.5);
            let ours = contains_induced(&g, &h).unwrap();
            let oracle = brute_exists(&g, &h, &mut Vec::new());
            assert_eq!(ours.is_some(), oracle);
            if let Some(map) = ours {
                assert!(embedding_valid(&g, &h, &map));
            }
        }
    }

    #[test]
    fn find_flipped_pattern_examples() {
        let (h6, _) = half_graph(6).unwrap();
        let (member, map) =
            find_flipped_pattern(&h6, FlippedFamily::HalfGraph { t: 3 }).unwrap().unwrap();
        assert!(member.spec.flips().is_empty(), "plain H_3 should be found first");
        assert!(embedding_valid(&h6, &member.graph, &map));

        let p10 = path(10).unwrap();
        let (member, map) =
            find_flipped_pattern(&p10, FlippedFamily::MPaths { m: 2, t: 3 }).unwrap().unwrap();
        assert!(embedding_valid(&p10, &member.graph, &map));

        // K_4 neither equals nor contains any flipped 2P_2; cross-check the
        // negative answer member by member.
        let k4 =
            Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(find_flipped_pattern(&k4, FlippedFamily::MPaths { m: 2, t: 2 }).unwrap().is_none());
        for member in enumerate_flipped_family(FlippedFamily::MPaths { m: 2, t: 2 }, false, 1 << 10)
            .unwrap()
        {
            assert_eq!(contains_induced(&k4, &member.graph).unwrap(), None);
        }
    }

    #[test]
    fn flat_or_pattern_flat_side() {
        // Six disjoint stars; centers are distance-infinite apart and have
        // nothing at distance exactly 2, so the flat side wins for t = 3.
        let mut g = Graph::new(24);
        let mut centers = Vec::new();
        for s in 0..6 {
            let c = 4 * s;
            centers.push(c);
            for leaf in 1..4 {
                g.add_edge(c, c + leaf);
            }
        }
        match flat_or_pattern(&g, &centers, 3, 3).unwrap() {
            Certificate::InfIndependent(set) => {
                assert_eq!(set.len(), 3);
                assert!(g.is_distance_independent(&set, Radius::Infinite));
            }
            other => panic!("expected the flat side, got {other:?}"),
        }
    }

    #[test]
    fn flat_or_pattern_pattern_side() {
        // Four disjoint P_4; starts all see a vertex at distance 1 = t - 1.
        let (g, coords) = m_paths(4, 4).unwrap();
        let starts: Vec<usize> = (1..=4).map(|i| coords.vertex(i, 1)).collect();
        match flat_or_pattern(&g, &starts, 2, 2).unwrap() {
            Certificate::InducedPattern { m, t, map } => {
                assert_eq!((m, t), (2, 2));
                assert_eq!(layer_flips_of(&g, &map, 2, 2), Ok(Vec::new()));
                assert!(starts.contains(&map[0]) && starts.contains(&map[2]));
            }
            other => panic!("expected the pattern side, got {other:?}"),
        }
    }

    #[test]
    fn flat_or_pattern_mixed_and_errors() {
        // Two deep P_7 components and two shallow K_2 components, t = 3:
        // the shallow pair has an empty distance-2 shell, the deep pair a
        // non-empty one, and m = 2 means whichever side fills first wins.
        let mut g = Graph::new(18);
        for s in 0..2 {
            let base = 7 * s;
            for j in 0..6 {
                g.add_edge(base + j, base + j + 1);
            }
        }
        g.add_edge(14, 15);
        g.add_edge(16, 17);
        let a = vec![0, 7, 14, 16];
        match flat_or_pattern(&g, &a, 3, 2).unwrap() {
            Certificate::InducedPattern { m, t, map } => {
                // Candidates are scanned in ascending order, so the two deep
                // starts fill the pattern side before the shallow pair.
                assert_eq!((m, t), (2, 3));
                assert_eq!((map[0], map[3]), (0, 7));
                assert_eq!(layer_flips_of(&g, &map, 2, 3), Ok(Vec::new()));
            }
            other => panic!("expected the pattern side, got {other:?}"),
        }

        let p9 = path(9).unwrap();
        assert_eq!(
            flat_or_pattern(&p9, &[0, 4], 2, 1),
            Err(AnalysisError::NotDistanceIndependent { u: 0, v: 4 })
        );
        assert_eq!(
            flat_or_pattern(&p9, &[0], 2, 1),
            Err(AnalysisError::SetTooSmall { needed: 2, got: 1 })
        );
    }

    #[test]
    fn kflip_pigeonhole_trivial_and_random() {
        // k = 1: the host is unchanged or globally complemented; the first
        // m paths come back with the matching layer flips.
        let (base, coords) = m_paths(3, 2).unwrap();
        let trivial = VertexPartition::trivial(6);
        let emb = kflip_pigeonhole_extract(&base, &coords, &trivial).unwrap();
        assert_eq!(emb.m, 3);
        assert!(emb.layer_flips.is_empty());

        let spec = FlipSpec::new(trivial.clone(), &[(0, 0)]).unwrap();
        let complemented = apply_flip(&base, &spec).unwrap();
        let emb = kflip_pigeonhole_extract(&complemented, &coords, &trivial).unwrap();
        assert_eq!(emb.layer_flips, vec![(1, 1), (1, 2), (2, 2)]);

        let mut rng = ChaCha8Rng::seed_from_u64(0xF1B0A1);
        for round in 0..8 {
            let (m, t) = if round % 2 == 0 { (2, 3) } else { (3, 4) };
            let k = 2usize;
            let s = m * k.pow(t as u32);
            let (base, coords) = m_paths(s, t).unwrap();
            let n = s * t;
            let mut parts = vec![Vec::new(), Vec::new()];
            for v in 0..n {
                parts[rng.gen_range(0..k)].push(v);
            }
            if parts.iter().any(Vec::is_empty) {
                continue;
            }
            let partition = VertexPartition::new(n, &parts).unwrap();
            let pairs: Vec<(usize, usize)> = [(0, 0), (0, 1), (1, 1)]
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let spec = FlipSpec::new(partition.clone(), &pairs).unwrap();
            let g = apply_flip(&base, &spec).unwrap();

            let emb = kflip_pigeonhole_extract(&g, &coords, &partition).unwrap();
            assert_eq!((emb.m, emb.t), (m, t));
            let induced = g.induced_subgraph(&emb.vertices).unwrap();
            let flips_1based: Vec<(usize, usize)> = emb.layer_flips.clone();
            let (expect, _, _) = flipped_m_paths(m, t, &flips_1based).unwrap();
            assert_eq!(induced, expect, "embedding must equal its claimed family member");
        }
    }

    #[test]
    fn setcomp_pigeonhole_extracts() {
        // t = 1, s = 2: two isolated vertices; any complementation still
        // contains K_1 = 1P_1.
        let (g, coords) = m_paths(2, 1).unwrap();
        for bits in 0..4u32 {
            let a = BitSet::from_iter(2, (0..2).filter(|&v| bits >> v & 1 == 1));
            let host = set_complement(&g, &a);
            let emb = setcomp_pigeonhole_extract(&host, &coords, &a).unwrap();
            assert_eq!((emb.m, emb.t), (1, 1));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x5E7C02);
        for _ in 0..10 {
            let (s, t) = (8, 2);
            let pairs: Vec<(usize, usize)> = [(1, 1), (1, 2), (2, 2)]
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let (g, coords, _) = flipped_m_paths(s, t, &pairs).unwrap();
            let a = BitSet::from_iter(16, (0..16).filter(|_| rng.gen_bool(0.5)));
            let host = set_complement(&g, &a);
            let emb = setcomp_pigeonhole_extract(&host, &coords, &a).unwrap();
            assert_eq!((emb.m, emb.t), (2, 2));
            let induced = host.induced_subgraph(&emb.vertices).unwrap();
            let (expect, _, _) = flipped_m_paths(2, 2, &emb.layer_flips).unwrap();
            assert_eq!(induced, expect);
        }

        assert!(matches!(
            setcomp_pigeonhole_extract(&m_paths(3, 2).unwrap().0, &MPathsCoords { m: 3, t: 2 },
                &BitSet::new(6)),
            Err(AnalysisError::TooFewPaths { needed: 8, got: 3 })
        ));
    }

    #[test]
    fn component_pigeonhole_cut_and_connected() {
        // Unflipped 2P_5: path 1 is cut into segments {1,2} and {4,5}.
        let (g, coords) = m_paths(2, 5).unwrap();
        let (component, emb) = component_pigeonhole_extract(&g, &coords).unwrap();
        assert_eq!(component, (1..=5).map(|j| coords.vertex(1, j)).collect::<Vec<_>>());
        assert!(emb.layer_flips.is_empty());
        assert_eq!(
            emb.vertices,
            vec![
                coords.vertex(1, 1),
                coords.vertex(1, 2),
                coords.vertex(1, 4),
                coords.vertex(1, 5)
            ]
        );

        // A single adjacent-layer flip weaves 2P_5 into two disjoint
        // strands; the strand cut must still certify inside one of them.
        let (g, coords, spec) = flipped_m_paths(2, 5, &[(2, 3)]).unwrap();
        assert!(!spec.flips().is_empty());
        assert!(!g.is_connected());
        let (component, emb) = component_pigeonhole_extract(&g, &coords).unwrap();
        assert_eq!(component.len(), 5);
        assert!(emb.layer_flips.is_empty());
        assert!(emb.vertices.iter().all(|v| component.contains(v)));

        let mut rng = ChaCha8Rng::seed_from_u64(0xC09401);
        for round in 0..18 {
            let t = if round % 3 == 2 { 3 } else { 2 };
            let s = t * t + t - 1;
            let all_pairs: Vec<(usize, usize)> =
                (1..=s).flat_map(|j1| (j1..=s).map(move |j2| (j1, j2))).collect();
            let pairs: Vec<(usize, usize)> = all_pairs
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(2.0 / all_pairs.len() as f64))
                .collect();
            let (g, coords, spec) = flipped_m_paths(t, s, &pairs).unwrap();
            let (component, emb) = component_pigeonhole_extract(&g, &coords).unwrap();
            assert!(emb.vertices.iter().all(|v| component.contains(v)));
            if spec.flips().is_empty() {
                assert_eq!(component.len(), s);
            } else if g.is_connected() {
                assert_eq!(component.len(), t * s);
            } else {
                assert!(component.len() >= t * (t + 1) - 1);
            }
            let induced = g.induced_subgraph(&emb.vertices).unwrap();
            let (expect, _, _) = flipped_m_paths(t, t, &emb.layer_flips).unwrap();
            assert_eq!(induced, expect);
        }
    }

    #[test]
    fn crossing_embeddings_are_induced_paths() {
        for (kind, r, t) in [
            (CrossingKind::Rook, 1, 4),
            (CrossingKind::Star, 2, 5),
            (CrossingKind::Clique, 1, 6),
        ] {
            let order = crossing_path_embedding(kind, r, t).unwrap();
            assert_eq!(order.len(), t);
        }
        for r in 1..=2 {
            for t in 1..=5 {
                for kind in [CrossingKind::Star, CrossingKind::Clique, CrossingKind::Rook] {
                    let order = crossing_path_embedding(kind, r, t).unwrap();
                    let g = match kind {
                        CrossingKind::Star => star_crossing(r, t).unwrap().0,
                        CrossingKind::Clique => clique_crossing(r, t).unwrap().0,
                        CrossingKind::Rook => rook(t).unwrap().0,
                    };
                    assert!(is_path_in_order(&g, &order), "{kind:?} r={r} t={t}");
                }
            }
        }
    }

    #[test]
    fn path_to_swimlane_examples() {
        // k = 1 identity flip on P_6: the plain cut, 2P_2 with no flips.
        let t = 2;
        let spec = FlipSpec::new(VertexPartition::trivial(6), &[]).unwrap();
        let g = path(6).unwrap();
        let emb = path_to_swimlane_extract(&g, &spec, t).unwrap();
        assert_eq!((emb.m, emb.t), (2, 2));
        assert!(emb.layer_flips.is_empty());

        // k = 1 complemented.
        let spec = FlipSpec::new(VertexPartition::trivial(6), &[(0, 0)]).unwrap();
        let g = apply_flip(&path(6).unwrap(), &spec).unwrap();
        let emb = path_to_swimlane_extract(&g, &spec, t).unwrap();
        let induced = g.induced_subgraph(&emb.vertices).unwrap();
        let (expect, _, _) = flipped_m_paths(2, 2, &emb.layer_flips).unwrap();
        assert_eq!(induced, expect);

        // k = 2 at the minimum host size 24 and at the non-minimal 48.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EA7B3);
        for round in 0..6 {
            let n = if round < 4 { 24 } else { 48 };
            let mut parts = vec![Vec::new(), Vec::new()];
            for v in 0..n {
                parts[rng.gen_range(0..2)].push(v);
            }
            if parts.iter().any(Vec::is_empty) {
                continue;
            }
            let partition = VertexPartition::new(n, &parts).unwrap();
            let pairs: Vec<(usize, usize)> = [(0, 0), (0, 1), (1, 1)]
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let spec = FlipSpec::new(partition, &pairs).unwrap();
            let g = apply_flip(&path(n).unwrap(), &spec).unwrap();
            let emb = path_to_swimlane_extract(&g, &spec, 2).unwrap();
            assert_eq!((emb.m, emb.t), (2, 2));
            let induced = g.induced_subgraph(&emb.vertices).unwrap();
            let (expect, _, _) = flipped_m_paths(2, 2, &emb.layer_flips).unwrap();
            assert_eq!(induced, expect);
        }

        // Host/spec mismatch is caught vertex-pair-first.
        let spec = FlipSpec::new(VertexPartition::trivial(6), &[]).unwrap();
        let wrong = Graph::new(6);
        assert!(matches!(
            path_to_swimlane_extract(&wrong, &spec, 2),
            Err(AnalysisError::FlipMismatch { .. })
        ));
    }

    #[test]
    fn every_flipped_two_p3_contains_p3() {
        // All 64 layer flips of 2P_3 keep an induced P_3, and so do all 8
        // side flips of H_3.
        let p3 = path(3).unwrap();
        let members =
            enumerate_flipped_family(FlippedFamily::MPaths { m: 2, t: 3 }, false, 1 << 10).unwrap();
        assert_eq!(members.len(), 64);
        for member in &members {
            assert!(
                contains_induced(&member.graph, &p3).unwrap().is_some(),
                "flips {:?} lost every induced P_3",
                member.spec.flips()
            );
        }
        let members =
            enumerate_flipped_family(FlippedFamily::HalfGraph { t: 3 }, false, 1 << 10).unwrap();
        assert_eq!(members.len(), 8);
        for member in &members {
            assert!(contains_induced(&member.graph, &p3).unwrap().is_some());
        }
    }

}
