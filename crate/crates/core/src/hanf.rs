//! Marked-ball censuses and the nibble indistinguishability pipeline.
//!
//! A *marked `r`-ball* of a colored graph is the induced substructure on the
//! closed radius-`r` neighborhood of a vertex, with that vertex named by a
//! constant. Counting vertices by the isomorphism type of their marked ball
//! gives a *census*; equal censuses at radius `3^(q-1)` force agreement on
//! all first-order sentences of quantifier rank `q` (a sufficient condition:
//! the check never declares inequivalence).
//!
//! The pipeline part compares the two *nibbles* of a flipped `mP_t` — the
//! host minus `{(1,1), (1,t)}` versus minus `{(1,1), (2,t)}`. De-flipping and
//! coloring each nibble by layer turns both into unions of colored paths that
//! differ only in where one path ends; [`nibble_bijection`] matches them by
//! swapping the right halves of paths 1 and 2, and [`verify_nibble_equiv`]
//! gathers three independent verdicts: pointwise marked-ball agreement under
//! that map, census equality, and a direct rank-`q` game on the nibbles
//! themselves.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_form_with, CanonConfig, CanonError};
use crate::graph::{ColoredGraph, Graph};
use crate::logic::{fo_q_equivalent_with, EfConfig, LogicError};
use crate::partition::{apply_flip, FlipSpec, PartitionError};
use crate::patterns::{m_paths, nibble, nibble_removed, MPathsCoords, PatternError};
use crate::structure::{Structure, StructureError};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors reported by the locality operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HanfError {
    /// The marked ball at `v` has more vertices than canonicalization takes.
    BallTooLarge { v: usize, n: usize, cap: usize },
    /// A scalar parameter violates its precondition.
    Precondition { name: &'static str },
    /// The colored structures have different color counts.
    ColorMismatch { left: usize, right: usize },
    /// The edge difference at `(u, v)` contradicts the given flip.
    FlipMismatch { u: usize, v: usize },
    /// Two verdicts that imply one another disagreed.
    InvariantViolated { name: &'static str },
    /// A pattern generator rejected its parameters.
    Pattern(PatternError),
    /// A flip specification did not fit the host.
    Partition(PartitionError),
    /// A substructure operation rejected its vertex list.
    Structure(StructureError),
    /// Canonicalization gave up for a reason other than size.
    Canon(CanonError),
    /// The rank-`q` game rejected its input.
    Logic(LogicError),
}

impl fmt::Display for HanfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HanfError::BallTooLarge { v, n, cap } => {
                write!(f, "marked ball at {v} has {n} vertices, over the cap {cap}")
            }
            HanfError::Precondition { name } => {
                write!(f, "parameter {name} violates its precondition")
            }
            HanfError::ColorMismatch { left, right } => {
                write!(f, "color counts differ: {left} vs {right}")
            }
            HanfError::FlipMismatch { u, v } => {
                write!(f, "edge difference at ({u}, {v}) is inconsistent with the given flip")
            }
            HanfError::InvariantViolated { name } => {
                write!(f, "internal cross-check failed: {name}")
            }
            HanfError::Pattern(e) => write!(f, "{e}"),
            HanfError::Partition(e) => write!(f, "{e}"),
            HanfError::Structure(e) => write!(f, "{e}"),
            HanfError::Canon(e) => write!(f, "{e}"),
            HanfError::Logic(e) => write!(f, "{e}"),
        }
    }
}

impl From<PatternError> for HanfError {
    fn from(e: PatternError) -> Self {
        HanfError::Pattern(e)
    }
}

impl From<PartitionError> for HanfError {
    fn from(e: PartitionError) -> Self {
        HanfError::Partition(e)
    }
}

impl From<StructureError> for HanfError {
    fn from(e: StructureError) -> Self {
        HanfError::Structure(e)
    }
}

impl From<LogicError> for HanfError {
    fn from(e: LogicError) -> Self {
        HanfError::Logic(e)
    }
}

// ---------------------------------------------------------------------------
// Marked balls and censuses
// ---------------------------------------------------------------------------

/// The marked `r`-ball of `cg` at `v`: the induced substructure on the
/// closed radius-`r` neighborhood, with `v` named by the constant `c`.
pub fn marked_ball(cg: &ColoredGraph, v: usize, r: u32) -> Result<Structure, HanfError> {
    let full = Structure::from_colored_graph(cg);
    marked_ball_from(&full, &cg.graph, v, r)
}

/// [`marked_ball`] against a prebuilt full structure (shared by the census).
fn marked_ball_from(
    full: &Structure,
    g: &Graph,
    v: usize,
    r: u32,
) -> Result<Structure, HanfError> {
    let ball = g.ball(v, r);
    let mut sub = full.induced_substructure(&ball)?;
    let local = ball.binary_search(&v).expect("center lies in its own ball");
    sub.add_constant("c", local)?;
    Ok(sub)
}

/// A census of marked-ball isomorphism types: canonical form of the marked
/// `radius`-ball, mapped to the number of vertices having that type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCensus {
    /// Ball radius the census was taken at.
    pub radius: u32,
    /// Canonical type of the marked ball, to the count of its centers.
    pub counts: BTreeMap<Vec<u8>, usize>,
}

impl BallCensus {
    /// Total count over all types; equals the universe size of the source.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// The complete marked-ball census of `cg` at radius `r` (default
/// canonicalization limits).
pub fn ball_census(cg: &ColoredGraph, r: u32) -> Result<BallCensus, HanfError> {
    ball_census_with(cg, r, &CanonConfig::default())
}

/// [`ball_census`] with explicit canonicalization limits. A ball larger than
/// the cap is reported together with its center.
pub fn ball_census_with(
    cg: &ColoredGraph,
    r: u32,
    canon: &CanonConfig,
) -> Result<BallCensus, HanfError> {
    let full = Structure::from_colored_graph(cg);
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for v in 0..cg.graph.vertex_count() {
        let ball = marked_ball_from(&full, &cg.graph, v, r)?;
        let key = canonical_form_with(&ball, canon).map_err(|e| match e {
            CanonError::TooLarge { n, cap } => HanfError::BallTooLarge { v, n, cap },
            other => HanfError::Canon(other),
        })?;
        *counts.entry(key).or_insert(0) += 1;
    }
    let census = BallCensus { radius: r, counts };
    debug_assert_eq!(census.total(), cg.graph.vertex_count());
    Ok(census)
}

/// Verdict of the locality test: a sufficient condition only, so the
/// negative case is merely inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HanfVerdict {
    /// Censuses at radius `3^(q-1)` agree, forcing rank-`q` equivalence.
    EquivalentByHanf,
    /// Censuses differ; rank-`q` equivalence is neither proved nor refuted.
    Inconclusive,
}

/// Compares marked-ball censuses of two colored graphs at radius `3^(q-1)`;
/// equality forces agreement on all FO sentences of quantifier rank `q`.
/// `q = 0` compares universe sizes only.
pub fn hanf_implies_equiv(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    q: usize,
) -> Result<HanfVerdict, HanfError> {
    if g1.color_count() != g2.color_count() {
        return Err(HanfError::ColorMismatch { left: g1.color_count(), right: g2.color_count() });
    }
    if q == 0 {
        return Ok(if g1.graph.vertex_count() == g2.graph.vertex_count() {
            HanfVerdict::EquivalentByHanf
        } else {
            HanfVerdict::Inconclusive
        });
    }
    let r = hanf_radius(q)?;
    let c1 = ball_census(g1, r)?;
    let c2 = ball_census(g2, r)?;
    Ok(if c1.counts == c2.counts {
        HanfVerdict::EquivalentByHanf
    } else {
        HanfVerdict::Inconclusive
    })
}

/// The locality radius `3^(q-1)` for rank `q >= 1`.
fn hanf_radius(q: usize) -> Result<u32, HanfError> {
    debug_assert!(q >= 1);
    u32::try_from(q - 1)
        .ok()
        .and_then(|e| 3u32.checked_pow(e))
        .ok_or(HanfError::Precondition { name: "3^(q-1)" })
}

// ---------------------------------------------------------------------------
// The nibble pipeline
// ---------------------------------------------------------------------------

/// De-flips a flipped `mP_t`, removes the nibble vertices for side `which`,
/// and colors the survivors by their layer (color `j - 1` for layer `j`).
///
/// The result for `which = 1` is `m-1` full colored paths plus one path
/// missing both ends; for `which = 2`, `m-2` full paths plus one missing its
/// first and one missing its last vertex.
pub fn layer_color_and_deflip(
    g: &Graph,
    coords: &MPathsCoords,
    spec: &FlipSpec,
    which: usize,
) -> Result<(ColoredGraph, crate::patterns::NibbleCoords), HanfError> {
    let deflipped = apply_flip(g, spec)?;
    let (base, _) = m_paths(coords.m, coords.t)?;
    if deflipped != base {
        for u in 0..base.vertex_count() {
            for v in (u + 1)..base.vertex_count() {
                if deflipped.has_edge(u, v) != base.has_edge(u, v) {
                    return Err(HanfError::FlipMismatch { u, v });
                }
            }
        }
    }
    let (nib, ncoords) = nibble(&deflipped, coords, which)?;
    let mut colored = ColoredGraph::new(nib, coords.t);
    for v in 0..colored.graph.vertex_count() {
        let (_, j) = ncoords.coord(v);
        colored.set_color(j - 1, v);
    }
    Ok((colored, ncoords))
}

/// The matching map between the two nibbles of an `mP_t`, as a vector from
/// nibble-1 vertex ids to nibble-2 vertex ids.
///
/// In path coordinates, `(1, j)` and `(2, j)` swap whenever `2j >= 3^q`
/// (the exact rational threshold `j >= 3^q / 2`), and everything else is
/// fixed. Requires `q >= 1`, `m >= 2`, and `t >= 3^q`, which make the map a
/// bijection between the two survivor sets.
pub fn nibble_bijection(m: usize, t: usize, q: usize) -> Result<Vec<usize>, HanfError> {
    if q == 0 {
        return Err(HanfError::Precondition { name: "q" });
    }
    if m < 2 {
        return Err(HanfError::Precondition { name: "m" });
    }
    let threshold = u32::try_from(q)
        .ok()
        .and_then(|e| 3usize.checked_pow(e))
        .ok_or(HanfError::Precondition { name: "3^q" })?;
    if t < threshold {
        return Err(HanfError::Precondition { name: "t" });
    }
    let base = MPathsCoords { m, t };
    let survivors = |which: usize| -> Result<Vec<usize>, HanfError> {
        let removed = nibble_removed(m, t, which)?;
        Ok((0..m * t).filter(|v| !removed.contains(v)).collect())
    };
    let surv1 = survivors(1)?;
    let surv2 = survivors(2)?;
    let mut map = Vec::with_capacity(surv1.len());
    for &orig in &surv1 {
        let (i, j) = base.coord(orig);
        let swapped = 2 * j >= threshold;
        let i2 = match i {
            1 if swapped => 2,
            2 if swapped => 1,
            _ => i,
        };
        let target = base.vertex(i2, j);
        let local = surv2
            .binary_search(&target)
            .map_err(|_| HanfError::InvariantViolated { name: "nibble bijection image" })?;
        map.push(local);
    }
    Ok(map)
}

/// Report of the three-way nibble comparison. `all_pass` is the bundled
/// claim; the applicability flags record for which parameters the colored
/// matching device is actually available (the direct game never needs them).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NibbleEquivReport {
    /// Quantifier rank compared at.
    pub q: usize,
    /// Ball radius `3^(q-1)` used by the colored checks.
    pub radius: u32,
    /// Marked-ball types agree pointwise under the matching map.
    pub pointwise_equal: bool,
    /// The matching map can only preserve ball types for `q >= 2`: its swap
    /// threshold undershoots by one position at `q = 1`, where the check
    /// is expected to fail even though the nibbles are equivalent.
    pub pointwise_applicable: bool,
    /// Censuses of the colored de-flipped pair agree.
    pub census_equal: bool,
    /// Census equality only holds from `t >= 2 * 3^(q-1) + 2` on: below
    /// that, one nibble has a strictly shorter path stub than the other
    /// within a single ball radius of both path ends.
    pub census_applicable: bool,
    /// The nibbles agree on all FO sentences of quantifier rank `q`
    /// (direct game on the flipped host's nibbles, uncolored).
    pub ef_equivalent: bool,
}

impl NibbleEquivReport {
    /// All three verdicts hold.
    pub fn all_pass(&self) -> bool {
        self.pointwise_equal && self.census_equal && self.ef_equivalent
    }
}

/// Runs the full three-way comparison of the two nibbles of a flipped
/// `mP_t`: pointwise marked-ball equality under [`nibble_bijection`], census
/// equality of the colored de-flipped pair, and the direct rank-`q` game on
/// the nibbles of the flipped host. Requires `q >= 1`, `m >= 2`, `t >= 3^q`.
///
/// The pointwise and census verdicts use one pipeline (colors, balls,
/// canonical forms), the game another (structures, back-and-forth search);
/// the report carries all three so a defect in either pipeline shows up as
/// disagreement. Pointwise equality implies census equality, and that
/// implication is re-checked on every run.
pub fn verify_nibble_equiv(
    g: &Graph,
    coords: &MPathsCoords,
    spec: &FlipSpec,
    q: usize,
    ef: &EfConfig,
) -> Result<NibbleEquivReport, HanfError> {
    let (m, t) = (coords.m, coords.t);
    let radius = if q == 0 {
        return Err(HanfError::Precondition { name: "q" });
    } else {
        hanf_radius(q)?
    };
    let f = nibble_bijection(m, t, q)?;

    let (g1p, _) = layer_color_and_deflip(g, coords, spec, 1)?;
    let (g2p, _) = layer_color_and_deflip(g, coords, spec, 2)?;

    let full1 = Structure::from_colored_graph(&g1p);
    let full2 = Structure::from_colored_graph(&g2p);
    let canon = CanonConfig::default();
    let mut pointwise_equal = true;
    for (v1, &v2) in f.iter().enumerate() {
        let b1 = marked_ball_from(&full1, &g1p.graph, v1, radius)?;
        let b2 = marked_ball_from(&full2, &g2p.graph, v2, radius)?;
        if canonical_form_with(&b1, &canon).map_err(HanfError::Canon)?
            != canonical_form_with(&b2, &canon).map_err(HanfError::Canon)?
        {
            pointwise_equal = false;
            break;
        }
    }

    let census_equal = {
        let c1 = ball_census(&g1p, radius)?;
        let c2 = ball_census(&g2p, radius)?;
        c1.counts == c2.counts
    };
    if pointwise_equal && !census_equal {
        return Err(HanfError::InvariantViolated { name: "pointwise implies census" });
    }

    let (nib1, _) = nibble(g, coords, 1)?;
    let (nib2, _) = nibble(g, coords, 2)?;
    let ef_equivalent =
        fo_q_equivalent_with(&Structure::from_graph(&nib1), &Structure::from_graph(&nib2), q, ef)?;

    Ok(NibbleEquivReport {
        q,
        radius,
        pointwise_equal,
        pointwise_applicable: q >= 2,
        census_equal,
        census_applicable: t >= 2 * radius as usize + 2,
        ef_equivalent,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
