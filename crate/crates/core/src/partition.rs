//! Vertex partitions and partition-based edge flips.
//!
//! A flip specification is a partition `P` of the vertex set together with a
//! symmetric relation `F` on its parts. Applying it to a graph toggles the
//! edge `{u, v}` exactly when the pair of parts containing `u` and `v` is in
//! `F`. Applying the same specification twice restores the original graph,
//! and specifications restrict to induced subgraphs part by part.

use crate::graph::{Graph, GraphError};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

/// Errors for partition and flip-specification construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionError {
    EmptyPart { part: usize },
    VertexOutOfRange { vertex: usize, n: usize },
    VertexInMultipleParts { vertex: usize },
    VertexUncovered { vertex: usize },
    PartIndexOutOfRange { index: usize, parts: usize },
    SizeMismatch { left: usize, right: usize },
}

impl core::fmt::Display for PartitionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PartitionError::EmptyPart { part } => write!(f, "part {part} is empty"),
            PartitionError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
            PartitionError::VertexInMultipleParts { vertex } => {
                write!(f, "vertex {vertex} appears in more than one part")
            }
            PartitionError::VertexUncovered { vertex } => {
                write!(f, "vertex {vertex} not covered by any part")
            }
            PartitionError::PartIndexOutOfRange { index, parts } => {
                write!(f, "part index {index} out of range for {parts} parts")
            }
            PartitionError::SizeMismatch { left, right } => {
                write!(f, "vertex-set sizes differ: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for PartitionError {}

/// A partition of `0..n` into nonempty parts, stored in normal form: each
/// part sorted increasingly and parts ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexPartition {
    n: usize,
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl VertexPartition {
    /// Builds and normalizes a partition; the parts must be disjoint,
    /// nonempty, and cover `0..n`.
    pub fn new(n: usize, parts: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(PartitionError::EmptyPart { part: i });
            }
            for &v in part {
                if v >= n {
                    return Err(PartitionError::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(PartitionError::VertexInMultipleParts { vertex: v });
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(PartitionError::VertexUncovered { vertex: v });
        }
        let mut normalized: Vec<Vec<usize>> = parts.to_vec();
        for p in normalized.iter_mut() {
            p.sort_unstable();
        }
        normalized.sort();
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in normalized.iter().enumerate() {
            for &v in part {
                part_of[v] = i;
            }
        }
        Ok(VertexPartition { n, parts: normalized, part_of })
    }

    /// The partition of `0..n` into singletons.
    pub fn discrete(n: usize) -> Self {
        let parts: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        VertexPartition::new(n, &parts).expect("singletons form a partition")
    }

    /// The one-part partition of `0..n` (requires `n > 0`).
    pub fn trivial(n: usize) -> Self {
        VertexPartition::new(n, &[(0..n).collect()]).expect("single part covers")
    }

    /// Universe size.
    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// Number of parts.
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// The parts, each sorted, ordered by smallest member.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// True if every part of `self` is contained in a part of `coarser`.
    pub fn refines(&self, coarser: &VertexPartition) -> bool {
        self.n == coarser.n
            && self
                .parts
                .iter()
                .all(|p| p.iter().all(|&v| coarser.part_of(v) == coarser.part_of(p[0])))
    }
}

/// A flip specification: a vertex partition plus a symmetric set of part
/// pairs to toggle. Pairs are stored with `i <= j`; a diagonal pair on a
/// singleton part would toggle nothing and is removed during normalization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlipSpec {
    partition: VertexPartition,
    flips: BTreeSet<(usize, usize)>,
}

impl FlipSpec {
    /// Builds a flip specification; flip pairs may be given in either order.
    pub fn new(
        partition: VertexPartition,
        flips: &[(usize, usize)],
    ) -> Result<Self, PartitionError> {
        let parts = partition.part_count();
        let mut set = BTreeSet::new();
        for &(a, b) in flips {
            for idx in [a, b] {
                if idx >= parts {
                    return Err(PartitionError::PartIndexOutOfRange { index: idx, parts });
                }
            }
            let pair = (a.min(b), a.max(b));
            if pair.0 == pair.1 && partition.parts()[pair.0].len() == 1 {
                continue; // no-op on a singleton part
            }
            set.insert(pair);
        }
        Ok(FlipSpec { partition, flips: set })
    }

    /// The all-identity specification (discrete partition, no flips).
    pub fn identity(n: usize) -> Self {
        FlipSpec {
            partition: VertexPartition::discrete(n),
            flips: BTreeSet::new(),
        }
    }

    /// The underlying partition.
    pub fn partition(&self) -> &VertexPartition {
        &self.partition
    }

    /// The flip pairs, normalized with `i <= j`.
    pub fn flips(&self) -> &BTreeSet<(usize, usize)> {
        &self.flips
    }

    /// Number of parts (the `k` of a `k`-flip).
    pub fn k(&self) -> usize {
        self.partition.part_count()
    }

    /// True if the parts of `u` and `v` form a flipped pair.
    pub fn toggles(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.partition.part_of(u), self.partition.part_of(v));
        self.flips.contains(&(a.min(b), a.max(b)))
    }

    /// Restricts the specification to the sorted distinct vertex subset
    /// `verts`, renaming vertex `verts[i]` to `i`. Parts are intersected with
    /// the subset, empty parts dropped, and flips reindexed.
    pub fn restrict(&self, verts: &[usize]) -> Result<FlipSpec, PartitionError> {
        let mut sorted = verts.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != verts.len() {
            // A duplicate was removed; find it for the error message.
            let mut seen = BTreeSet::new();
            for &v in verts {
                if !seen.insert(v) {
                    return Err(PartitionError::VertexInMultipleParts { vertex: v });
                }
            }
        }
        if let Some(&v) = sorted.last() {
            if v >= self.partition.n {
                return Err(PartitionError::VertexOutOfRange { vertex: v, n: self.partition.n });
            }
        }
        let mut new_parts: Vec<Vec<usize>> = Vec::new();
        // A surviving relabeled vertex per old part, to re-locate the part
        // after normalization reorders by minimum member.
        let mut representative: Vec<Option<usize>> = vec![None; self.partition.part_count()];
        for (old_idx, part) in self.partition.parts().iter().enumerate() {
            let survivors: Vec<usize> = part
                .iter()
                .filter_map(|&v| sorted.binary_search(&v).ok())
                .collect();
            if !survivors.is_empty() {
                representative[old_idx] = Some(survivors[0]);
                new_parts.push(survivors);
            }
        }
        let partition = VertexPartition::new(sorted.len(), &new_parts)?;
        let flips: Vec<(usize, usize)> = self
            .flips
            .iter()
            .filter(|&&(a, b)| representative[a].is_some() && representative[b].is_some())
            .map(|&(a, b)| {
                (
                    partition.part_of(representative[a].unwrap()),
                    partition.part_of(representative[b].unwrap()),
                )
            })
            .collect();
        FlipSpec::new(partition, &flips)
    }
}

/// Applies a flip specification: returns `G ⊕ (P, F)` with every edge between
/// a flipped part pair toggled.
pub fn apply_flip(g: &Graph, spec: &FlipSpec) -> Result<Graph, PartitionError> {
    if g.vertex_count() != spec.partition.universe_size() {
        return Err(PartitionError::SizeMismatch {
            left: g.vertex_count(),
            right: spec.partition.universe_size(),
        });
    }
    let mut out = g.clone();
    for &(a, b) in &spec.flips {
        let pa = &spec.partition.parts()[a];
        let pb = &spec.partition.parts()[b];
        if a == b {
            for (i, &u) in pa.iter().enumerate() {
                for &v in &pa[i + 1..] {
                    out.toggle_edge(u, v);
                }
            }
        } else {
            for &u in pa {
                for &v in pb {
                    out.toggle_edge(u, v);
                }
            }
        }
    }
    Ok(out)
}

/// Convenience re-export of the graph xor with partition-flavored errors.
pub fn xor_graphs(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    g.xor(h)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn random_spec(rng: &mut ChaCha8Rng, n: usize, max_parts: usize) -> FlipSpec {
        let k = rng.gen_range(1..=max_parts.min(n));
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
        for v in 0..n {
            parts[rng.gen_range(0..k)].push(v);
        }
        parts.retain(|p| !p.is_empty());
        let partition = VertexPartition::new(n, &parts).unwrap();
        let k = partition.part_count();
        let mut flips = Vec::new();
        for a in 0..k {
            for b in a..k {
                if rng.gen_bool(0.4) {
                    flips.push((a, b));
                }
            }
        }
        FlipSpec::new(partition, &flips).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(3, &[vec![0, 1], vec![2]]).is_ok());
        assert_eq!(
            VertexPartition::new(3, &[vec![0, 1], vec![]]),
            Err(PartitionError::EmptyPart { part: 1 })
        );
        assert_eq!(
            VertexPartition::new(3, &[vec![0, 1], vec![1, 2]]),
            Err(PartitionError::VertexInMultipleParts { vertex: 1 })
        );
        assert_eq!(
            VertexPartition::new(3, &[vec![0, 1]]),
            Err(PartitionError::VertexUncovered { vertex: 2 })
        );
        assert_eq!(
            VertexPartition::new(2, &[vec![0, 1, 5]]),
            Err(PartitionError::VertexOutOfRange { vertex: 5, n: 2 })
        );
    }

    #[test]
    fn normal_form_is_stable() {
        let a = VertexPartition::new(5, &[vec![3, 1], vec![4, 0], vec![2]]).unwrap();
        let b = VertexPartition::new(5, &[vec![0, 4], vec![2], vec![1, 3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.parts(), &[vec![0, 4], vec![1, 3], vec![2]]);
        assert_eq!(a.part_of(4), 0);
        assert_eq!(a.part_of(2), 2);
    }

    #[test]
    fn refinement() {
        let fine = VertexPartition::discrete(4);
        let coarse = VertexPartition::new(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(fine.refines(&coarse));
        assert!(coarse.refines(&VertexPartition::trivial(4)));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
    }

    #[test]
    fn flip_toggles_expected_pairs() {
        // Parts {0,1} and {2,3}; flip between them plus inside the first.
        let p = VertexPartition::new(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let spec = FlipSpec::new(p, &[(0, 1), (0, 0)]).unwrap();
        let g = Graph::new(4);
        let h = apply_flip(&g, &spec).unwrap();
        assert!(h.has_edge(0, 1)); // inside part 0
        assert!(!h.has_edge(2, 3)); // inside part 1: untouched
        for u in 0..2 {
            for v in 2..4 {
                assert!(h.has_edge(u, v), "cross edge {u},{v}");
            }
        }
    }

    #[test]
    fn flip_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..100 {
            let n = rng.gen_range(1..16);
            let g = random_graph(&mut rng, n, 0.4);
            let spec = random_spec(&mut rng, n, 4);
            let once = apply_flip(&g, &spec).unwrap();
            let twice = apply_flip(&once, &spec).unwrap();
            assert_eq!(twice, g);
        }
    }

    #[test]
    fn flip_restricts_hereditarily() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBADA55);
        for _ in 0..100 {
            let n = rng.gen_range(2..14);
            let g = random_graph(&mut rng, n, 0.4);
            let spec = random_spec(&mut rng, n, 4);
            let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            if subset.is_empty() {
                continue;
            }
            let flipped_then_induce =
                apply_flip(&g, &spec).unwrap().induced_subgraph(&subset).unwrap();
            let induce_then_flip = apply_flip(
                &g.induced_subgraph(&subset).unwrap(),
                &spec.restrict(&subset).unwrap(),
            )
            .unwrap();
            assert_eq!(flipped_then_induce, induce_then_flip);
        }
    }

    #[test]
    fn singleton_diagonal_flip_is_dropped() {
        let p = VertexPartition::new(3, &[vec![0], vec![1, 2]]).unwrap();
        let spec = FlipSpec::new(p.clone(), &[(0, 0)]).unwrap();
        assert!(spec.flips().is_empty());
        let with = FlipSpec::new(p, &[(1, 1), (1, 0)]).unwrap();
        assert_eq!(with.flips().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
    }
}
