//! Irreducible flip-witness computation: given two graphs on the same vertex
//! set, find the coarsest partition and flip relation transforming one into
//! the other, plus a brute-force oracle for cross-checking.
//!
//! The edge symmetric difference `D` drives everything. A partition is a
//! valid witness exactly when `D` is constant on every block between (and
//! within) parts; vertices in a common part must then have equal `D`-rows
//! outside the pair, so grouping by that twin relation yields the coarsest
//! valid partition directly.

use crate::graph::{Graph, GraphError};
use crate::partition::{apply_flip, xor_graphs, FlipSpec, VertexPartition};
use alloc::vec;
use alloc::vec::Vec;

/// Vertex-count cap for the brute-force witness search.
pub const BRUTE_FORCE_CAP: usize = 7;

/// Errors for witness computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessError {
    /// The two graphs have different vertex counts.
    SizeMismatch { left: usize, right: usize },
    /// Brute-force search refused a graph above [`BRUTE_FORCE_CAP`].
    TooLarge { n: usize, cap: usize },
    /// A part id fell outside the spec's partition.
    PartOutOfRange { part: usize, count: usize },
    /// Both arguments named the same part.
    SamePart { part: usize },
    /// No part discerns the two given parts, so the spec is reducible.
    NotIrreducible { q1: usize, q2: usize },
}

impl core::fmt::Display for WitnessError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WitnessError::SizeMismatch { left, right } => {
                write!(f, "vertex counts differ: {left} vs {right}")
            }
            WitnessError::TooLarge { n, cap } => {
                write!(f, "brute-force witness capped at {cap} vertices, got {n}")
            }
            WitnessError::PartOutOfRange { part, count } => {
                write!(f, "part {part} out of range for {count} parts")
            }
            WitnessError::SamePart { part } => {
                write!(f, "discerning part needs two distinct parts, got {part} twice")
            }
            WitnessError::NotIrreducible { q1, q2 } => {
                write!(f, "no part discerns parts {q1} and {q2}; spec is reducible")
            }
        }
    }
}

impl core::error::Error for WitnessError {}

impl From<GraphError> for WitnessError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::SizeMismatch { left, right } => WitnessError::SizeMismatch { left, right },
            _ => unreachable!("xor only raises size mismatches"),
        }
    }
}

/// A witness that some flip turns one graph into the other, with the
/// discerning-part table over all part pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// The witnessing partition and flip relation.
    pub spec: FlipSpec,
    /// `discerning[q1][q2]` is a part whose flip-row differs between `q1`
    /// and `q2`; `None` on the diagonal.
    pub discerning: Vec<Vec<Option<usize>>>,
}

impl WitnessReport {
    /// Number of parts in the witnessing partition.
    pub fn part_count(&self) -> usize {
        self.spec.partition().part_count()
    }
}

/// True if `D` is constant on every block induced by `parts` (both cross
/// blocks and within-part blocks); returns the first offending part on
/// failure.
fn first_invalid_part(d: &Graph, parts: &[Vec<usize>]) -> Option<usize> {
    for (pi, part) in parts.iter().enumerate() {
        // Within-part block.
        let mut within: Option<bool> = None;
        for (k, &u) in part.iter().enumerate() {
            for &v in &part[k + 1..] {
                let e = d.has_edge(u, v);
                if *within.get_or_insert(e) != e {
                    return Some(pi);
                }
            }
        }
        // Cross blocks against later parts.
        for other in &parts[pi + 1..] {
            let mut cross: Option<bool> = None;
            for &u in part {
                for &v in other {
                    let e = d.has_edge(u, v);
                    if *cross.get_or_insert(e) != e {
                        return Some(pi);
                    }
                }
            }
        }
    }
    None
}

/// Reads the flip relation off `D`: a part pair is flipped exactly when its
/// (constant) block is complete.
fn flips_from_blocks(d: &Graph, partition: &VertexPartition) -> Vec<(usize, usize)> {
    let parts = partition.parts();
    let mut flips = Vec::new();
    for (i, pi) in parts.iter().enumerate() {
        if pi.len() >= 2 && d.has_edge(pi[0], pi[1]) {
            flips.push((i, i));
        }
        for (j, pj) in parts.iter().enumerate().skip(i + 1) {
            if d.has_edge(pi[0], pj[0]) {
                flips.push((i, j));
            }
        }
    }
    flips
}

fn report_from_partition(d: &Graph, partition: VertexPartition) -> WitnessReport {
    let flips = flips_from_blocks(d, &partition);
    let spec = FlipSpec::new(partition, &flips).expect("flip ids come from the partition");
    let k = spec.partition().part_count();
    let mut discerning = vec![vec![None; k]; k];
    let pairs = (0..k).flat_map(|q1| (q1 + 1..k).map(move |q2| (q1, q2)));
    for (q1, q2) in pairs {
        let dq = discerning_part(&spec, q1, q2).ok();
        discerning[q1][q2] = dq;
        discerning[q2][q1] = dq;
    }
    WitnessReport { spec, discerning }
}

/// Computes the unique irreducible flip-witness between `g` and `h`: the
/// coarsest partition whose blocks are `D`-constant, with the flip relation
/// read off the complete blocks.
pub fn irreducible_witness(g: &Graph, h: &Graph) -> Result<WitnessReport, WitnessError> {
    if g.vertex_count() != h.vertex_count() {
        return Err(WitnessError::SizeMismatch {
            left: g.vertex_count(),
            right: h.vertex_count(),
        });
    }
    let d = xor_graphs(g, h)?;
    let n = d.vertex_count();

    // Group vertices by equal D-rows outside the pair. The relation is
    // transitive, so comparing against one representative per class works.
    let mut reps: Vec<usize> = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        match reps.iter().position(|&r| d.are_twins(r, v)) {
            Some(i) => parts[i].push(v),
            None => {
                reps.push(v);
                parts.push(vec![v]);
            }
        }
    }

    // The twin grouping is always block-constant; the split loop below is a
    // safety net that refines any offending part by exact D-row.
    while let Some(bad) = first_invalid_part(&d, &parts) {
        debug_assert!(false, "twin grouping produced a non-constant block");
        let part = parts.remove(bad);
        let mut sub: Vec<Vec<usize>> = Vec::new();
        for v in part {
            match sub.iter().position(|s| d.neighbors(s[0]) == d.neighbors(v)) {
                Some(i) => sub[i].push(v),
                None => sub.push(vec![v]),
            }
        }
        parts.extend(sub);
    }

    let partition = VertexPartition::new(n, &parts).expect("twin classes partition the vertices");
    let report = report_from_partition(&d, partition);
    debug_assert_eq!(&apply_flip(g, &report.spec).expect("spec covers g"), h);
    report
        .discerning
        .iter()
        .enumerate()
        .for_each(|(q1, row)| {
            row.iter().enumerate().for_each(|(q2, e)| {
                debug_assert!(q1 == q2 || e.is_some(), "parts {q1},{q2} lack a discerning part")
            })
        });
    Ok(report)
}

/// Finds a part whose flip-row differs between `q1` and `q2`, scanning part
/// ids in ascending order.
pub fn discerning_part(spec: &FlipSpec, q1: usize, q2: usize) -> Result<usize, WitnessError> {
    let k = spec.partition().part_count();
    for part in [q1, q2] {
        if part >= k {
            return Err(WitnessError::PartOutOfRange { part, count: k });
        }
    }
    if q1 == q2 {
        return Err(WitnessError::SamePart { part: q1 });
    }
    let toggled = |a: usize, b: usize| spec.flips().contains(&(a.min(b), a.max(b)));
    (0..k)
        .find(|&d| toggled(q1, d) != toggled(q2, d))
        .ok_or(WitnessError::NotIrreducible { q1, q2 })
}

/// Exhaustive minimum-part-count witness over all set partitions; the cap
/// keeps the Bell-number search affordable.
pub fn brute_force_witness(g: &Graph, h: &Graph) -> Result<WitnessReport, WitnessError> {
    if g.vertex_count() != h.vertex_count() {
        return Err(WitnessError::SizeMismatch {
            left: g.vertex_count(),
            right: h.vertex_count(),
        });
    }
    let n = g.vertex_count();
    if n > BRUTE_FORCE_CAP {
        return Err(WitnessError::TooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let d = xor_graphs(g, h)?;
    if n == 0 {
        let partition = VertexPartition::new(0, &[]).expect("empty partition");
        return Ok(report_from_partition(&d, partition));
    }

    // Enumerate set partitions via restricted growth strings; blocks appear
    // ordered by first occurrence, which is the minimum-vertex order.
    let mut rgs = vec![0usize; n];
    let mut best: Option<Vec<Vec<usize>>> = None;
    loop {
        let blocks = rgs.iter().copied().max().unwrap() + 1;
        if best.as_ref().is_none_or(|b| blocks < b.len()) {
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); blocks];
            for (v, &b) in rgs.iter().enumerate() {
                parts[b].push(v);
            }
            if first_invalid_part(&d, &parts).is_none() {
                best = Some(parts);
            }
        }
        // Advance the restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                rgs = Vec::new();
                break;
            }
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
            i -= 1;
        }
        if rgs.is_empty() {
            break;
        }
    }

    let parts = best.expect("the discrete partition is always valid");
    let partition = VertexPartition::new(n, &parts).expect("partition covers all vertices");
    let report = report_from_partition(&d, partition);
    debug_assert_eq!(&apply_flip(g, &report.spec).expect("spec covers g"), h);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{flipped_m_paths, m_paths, path, MPathsCoords};
    use alloc::collections::BTreeSet;
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

    fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> FlipSpec {
        let k = rng.gen_range(1..=n.max(1));
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
        for v in 0..n {
            parts[rng.gen_range(0..k)].push(v);
        }
        parts.retain(|p| !p.is_empty());
        let k = parts.len();
        let partition = VertexPartition::new(n, &parts).unwrap();
        let mut flips = Vec::new();
        for i in 0..k {
            for j in i..k {
                if rng.gen_bool(0.4) {
                    flips.push((i, j));
                }
            }
        }
        FlipSpec::new(partition, &flips).unwrap()
    }

    #[test]
    fn xor_of_flipped_paths_is_block_constant() {
        let (base, coords) = m_paths(3, 6).unwrap();
        let (flipped, _, _) = flipped_m_paths(3, 6, &[(1, 4), (2, 2), (5, 6)]).unwrap();
        let d = xor_graphs(&base, &flipped).unwrap();
        let layers = coords.layer_partition();
        assert!(first_invalid_part(&d, layers.parts()).is_none());
    }

    #[test]
    fn identity_witness_is_one_part() {
        let g = path(5).unwrap();
        let report = irreducible_witness(&g, &g).unwrap();
        assert_eq!(report.part_count(), 1);
        assert!(report.spec.flips().is_empty());
    }

    #[test]
    fn single_edge_toggle_merges_both_endpoints() {
        let g = Graph::new(2);
        let h = Graph::with_edges(2, &[(0, 1)]).unwrap();
        let report = irreducible_witness(&g, &h).unwrap();
        assert_eq!(report.part_count(), 1);
        assert_eq!(report.spec.flips().iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn triangle_witness_is_small() {
        let g = path(3).unwrap();
        let h = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let report = irreducible_witness(&g, &h).unwrap();
        assert!(report.part_count() <= 2);
        assert_eq!(report.part_count(), brute_force_witness(&g, &h).unwrap().part_count());
    }

    #[test]
    fn figure_one_witness() {
        let (base, coords, _) = flipped_m_paths(3, 8, &[]).unwrap();
        let (flipped, _, _) = flipped_m_paths(3, 8, &[(2, 3), (4, 7), (7, 7)]).unwrap();
        let report = irreducible_witness(&base, &flipped).unwrap();
        assert_eq!(report.part_count(), 5);
        let partition = report.spec.partition();
        // Quiet layers 1, 5, 6, 8 merge into one part; flipped layers stay.
        let layer_part = |j: usize| partition.part_of(coords.vertex(1, j));
        assert_eq!(layer_part(1), layer_part(5));
        assert_eq!(layer_part(1), layer_part(6));
        assert_eq!(layer_part(1), layer_part(8));
        let expect: BTreeSet<(usize, usize)> = [
            (layer_part(2).min(layer_part(3)), layer_part(2).max(layer_part(3))),
            (layer_part(4).min(layer_part(7)), layer_part(4).max(layer_part(7))),
            (layer_part(7), layer_part(7)),
        ]
        .into_iter()
        .collect();
        assert_eq!(report.spec.flips(), &expect);
        // The quiet part and the layer-2 part are discerned by the layer-3
        // part under the ascending scan.
        assert_eq!(
            discerning_part(&report.spec, layer_part(1), layer_part(2)).unwrap(),
            layer_part(3)
        );
        // Distinct rows everywhere: the full table is populated.
        for q1 in 0..5 {
            for q2 in 0..5 {
                assert_eq!(report.discerning[q1][q2].is_some(), q1 != q2);
            }
        }
    }

    #[test]
    fn discerning_part_errors() {
        let partition =
            VertexPartition::new(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let spec = FlipSpec::new(partition.clone(), &[(0, 0)]).unwrap();
        assert_eq!(discerning_part(&spec, 0, 1), Ok(0));
        assert_eq!(discerning_part(&spec, 0, 0), Err(WitnessError::SamePart { part: 0 }));
        assert_eq!(
            discerning_part(&spec, 0, 5),
            Err(WitnessError::PartOutOfRange { part: 5, count: 2 })
        );
        // Identical rows: reducible.
        let reducible = FlipSpec::new(partition, &[]).unwrap();
        assert_eq!(
            discerning_part(&reducible, 0, 1),
            Err(WitnessError::NotIrreducible { q1: 0, q2: 1 })
        );
    }

    #[test]
    fn brute_force_matches_on_all_four_vertex_pairs() {
        let all: Vec<Graph> = (0u32..64)
            .map(|mask| {
                let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                Graph::with_edges(4, &edges).unwrap()
            })
            .collect();
        for g in &all {
            for h in &all {
                let fast = irreducible_witness(g, h).unwrap();
                let brute = brute_force_witness(g, h).unwrap();
                assert_eq!(fast.part_count(), brute.part_count());
                assert_eq!(&apply_flip(g, &fast.spec).unwrap(), h);
                assert_eq!(&apply_flip(g, &brute.spec).unwrap(), h);
            }
        }
    }

    #[test]
    fn witness_is_sound_and_minimal_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF03);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let g = random_graph(&mut rng, n, 0.5);
            let h = random_graph(&mut rng, n, 0.5);
            let fast = irreducible_witness(&g, &h).unwrap();
            assert_eq!(&apply_flip(&g, &fast.spec).unwrap(), &h);
            let brute = brute_force_witness(&g, &h).unwrap();
            assert_eq!(fast.part_count(), brute.part_count());
        }
    }

    #[test]
    fn irreducible_partition_coarsens_every_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..80 {
            let n = rng.gen_range(1..=10);
            let g = random_graph(&mut rng, n, 0.5);
            let spec = random_spec(&mut rng, n);
            let h = apply_flip(&g, &spec).unwrap();
            let report = irreducible_witness(&g, &h).unwrap();
            assert!(
                spec.partition().refines(report.spec.partition()),
                "sampled witness partition must refine the irreducible one"
            );
            assert!(report.part_count() <= spec.partition().part_count());
        }
    }

    #[test]
    fn size_mismatch_and_cap_errors() {
        let g = Graph::new(3);
        let h = Graph::new(4);
        assert!(matches!(
            irreducible_witness(&g, &h),
            Err(WitnessError::SizeMismatch { .. })
        ));
        let big = Graph::new(8);
        assert!(matches!(
            brute_force_witness(&big, &big),
            Err(WitnessError::TooLarge { n: 8, cap: 7 })
        ));
    }

    #[test]
    fn layer_coords_round_trip() {
        let coords = MPathsCoords { m: 3, t: 8 };
        for v in 0..24 {
            let (i, j) = coords.coord(v);
            assert_eq!(coords.vertex(i, j), v);
        }
    }
}
