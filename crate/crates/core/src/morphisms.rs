//! Bounded morphisms and their kernels on reflexive symmetric frames.
//!
//! A surjective bounded morphism out of a frame is determined by its kernel,
//! a *stable* partition: whenever two distinct blocks are joined by at least
//! one edge, every vertex of each block has a neighbour in the other.
//! Edges inside a block are unconstrained because every quotient point is
//! reflexive. This module provides the partition type, stability and
//! bounded-morphism checks, quotient construction, a pruned enumerator over
//! all stable partitions, and the cover check built on it.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use thiserror::Error;

use crate::frames::{Frame, Subset, MAX_VERTICES};

/// Largest frame size accepted by [`enumerate_stable_partitions`], which
/// materializes every stable partition.
pub const ENUMERATION_MAX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("partition covers {got} vertices, frame has {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("partition text is empty")]
    EmptyPartition,
    #[error("bad block id {text:?} in partition text")]
    BadBlockId { text: String },
    #[error("partition has {n} entries, limit is {max}")]
    TooManyEntries { n: usize, max: usize },
    #[error("partition is not stable, so it is no bounded-morphism kernel")]
    NotStable,
    #[error("map assigns {got} vertices, domain frame has {expected}")]
    MapLengthMismatch { expected: usize, got: usize },
    #[error("map sends vertex {vertex} to {image}, codomain has only {n} vertices")]
    MapTargetOutOfRange { vertex: usize, image: usize, n: usize },
    #[error("stable-partition enumeration needs n <= {max}, frame has {n} vertices")]
    EnumerationTooLarge { n: usize, max: usize },
}

/// A partition of `{0, …, n-1}`, stored as a block id per vertex in
/// restricted-growth form: vertex 0 is in block 0, and each later vertex's
/// id exceeds the ids seen so far by at most one. Construction normalizes
/// arbitrary ids into that form, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assign: Vec<usize>,
}

impl Partition {
    /// Normalize an arbitrary assignment of block ids into canonical form.
    pub fn from_assignment(assign: &[usize]) -> Result<Partition, MorphismError> {
        if assign.is_empty() {
            return Err(MorphismError::EmptyPartition);
        }
        if assign.len() > MAX_VERTICES {
            return Err(MorphismError::TooManyEntries { n: assign.len(), max: MAX_VERTICES });
        }
        let mut relabel: Vec<(usize, usize)> = Vec::new();
        let mut out = Vec::with_capacity(assign.len());
        for &id in assign {
            let new = match relabel.iter().find(|(old, _)| *old == id) {
                Some((_, new)) => *new,
                None => {
                    let new = relabel.len();
                    relabel.push((id, new));
                    new
                }
            };
            out.push(new);
        }
        Ok(Partition { assign: out })
    }

    /// Everyone in one block.
    pub fn total(n: usize) -> Partition {
        Partition::from_assignment(&vec![0; n]).unwrap()
    }

    /// Every vertex its own block.
    pub fn discrete(n: usize) -> Partition {
        Partition::from_assignment(&(0..n).collect::<Vec<_>>()).unwrap()
    }

    /// Number of vertices covered.
    pub fn width(&self) -> usize {
        self.assign.len()
    }

    pub fn block_count(&self) -> usize {
        self.assign.iter().copied().max().unwrap() + 1
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.assign[v]
    }

    /// Block ids per vertex, in canonical form.
    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    /// The blocks as vertex subsets, indexed by block id.
    pub fn blocks(&self) -> Vec<Subset> {
        let n = self.width();
        let mut bits = vec![0u128; self.block_count()];
        for (v, &b) in self.assign.iter().enumerate() {
            bits[b] |= 1 << v;
        }
        bits.into_iter().map(|b| Subset::from_bits(n, b)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        let k = self.block_count();
        k == 1 || k == self.width()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.assign.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Partition, MorphismError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(MorphismError::EmptyPartition);
        }
        let ids = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| MorphismError::BadBlockId { text: part.trim().to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::from_assignment(&ids)
    }
}

/// Whether `partition` is the kernel of a bounded morphism out of `frame`:
/// for every ordered pair of distinct blocks with at least one edge between
/// them, each vertex of the first block has a neighbour in the second.
pub fn is_stable_partition(frame: &Frame, partition: &Partition) -> bool {
    if partition.width() != frame.n() {
        return false;
    }
    let blocks = partition.blocks();
    let k = blocks.len();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let mut seen_any = false;
            let mut seen_all = true;
            for v in blocks[a].iter() {
                if frame.adjacency_bits(v) & blocks[b].bits() != 0 {
                    seen_any = true;
                } else {
                    seen_all = false;
                }
            }
            if seen_any && !seen_all {
                return false;
            }
        }
    }
    true
}

/// Whether the vertex map `map` (domain vertex → codomain vertex) is a
/// bounded morphism from `from` to `to`. On reflexive frames this is the
/// single condition that the image of each closed neighbourhood is exactly
/// the closed neighbourhood of the image.
pub fn is_bounded_morphism(from: &Frame, to: &Frame, map: &[usize]) -> Result<bool, MorphismError> {
    if map.len() != from.n() {
        return Err(MorphismError::MapLengthMismatch { expected: from.n(), got: map.len() });
    }
    for (vertex, &image) in map.iter().enumerate() {
        if image >= to.n() {
            return Err(MorphismError::MapTargetOutOfRange { vertex, image, n: to.n() });
        }
    }
    for v in 0..from.n() {
        let mut image_bits = 1u128 << map[v];
        let mut rest = from.adjacency_bits(v);
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            image_bits |= 1 << map[w];
        }
        let target = to.adjacency_bits(map[v]) | (1u128 << map[v]);
        if image_bits != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The quotient frame of `frame` by a stable partition: one vertex per
/// block, an edge between distinct blocks joined by any cross edge.
pub fn quotient(frame: &Frame, partition: &Partition) -> Result<Frame, MorphismError> {
    if partition.width() != frame.n() {
        return Err(MorphismError::WidthMismatch {
            expected: frame.n(),
            got: partition.width(),
        });
    }
    if !is_stable_partition(frame, partition) {
        return Err(MorphismError::NotStable);
    }
    let mut edges = Vec::new();
    for (u, v) in frame.edges() {
        let (a, b) = (partition.block_of(u), partition.block_of(v));
        if a != b {
            edges.push((a, b));
        }
    }
    // Block ids are in range and cross edges join distinct blocks, so this
    // cannot fail.
    Ok(Frame::from_edges(partition.block_count(), &edges).expect("quotient edges are well-formed"))
}

/// Visit every stable partition of `frame` with a block count in
/// `min_blocks..=max_blocks`, in a fixed deterministic order. The visitor
/// can stop the walk early by returning `ControlFlow::Break(())`; the return
/// value reports whether that happened.
///
/// Partitions are generated by assigning vertices along a breadth-first
/// order and pruning as soon as some already-fully-assigned vertex can no
/// longer meet the stability requirement against a block pair that is
/// already joined by an edge.
pub fn for_each_stable_partition<F>(
    frame: &Frame,
    min_blocks: usize,
    max_blocks: usize,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&Partition) -> ControlFlow<()>,
{
    let n = frame.n();
    let min_blocks = min_blocks.max(1);
    if min_blocks > max_blocks || max_blocks == 0 || min_blocks > n {
        return ControlFlow::Continue(());
    }

    let order = frame.bfs_order();
    let mut pos_of = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        pos_of[v] = pos;
    }
    // A vertex is "finished" once it and all its neighbours are assigned:
    // from then on, which blocks it can see is fixed.
    let mut finished_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut finish = pos_of[v];
        let mut rest = frame.adjacency_bits(v);
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            finish = finish.max(pos_of[w]);
        }
        finished_at[finish].push(v);
    }

    let mut search = StableSearch {
        frame,
        order,
        finished_at,
        min_blocks,
        max_blocks,
        assign: vec![usize::MAX; n],
        members: vec![0u128; n],
        edged: vec![0u128; n],
        finished: 0,
        used: 0,
        visit: &mut visit,
    };
    search.rec(0)
}

struct StableSearch<'a, F> {
    frame: &'a Frame,
    order: Vec<usize>,
    finished_at: Vec<Vec<usize>>,
    min_blocks: usize,
    max_blocks: usize,
    assign: Vec<usize>,
    /// Vertex bitset per block id.
    members: Vec<u128>,
    /// For each block, the blocks it currently shares an edge with.
    edged: Vec<u128>,
    /// Vertices whose closed neighbourhood is fully assigned.
    finished: u128,
    used: usize,
    visit: &'a mut F,
}

struct Undo {
    block: usize,
    vertex_bit: u128,
    newly_edged: u128,
    finished_before: u128,
    opened_block: bool,
}

impl<F: FnMut(&Partition) -> ControlFlow<()>> StableSearch<'_, F> {
    fn rec(&mut self, pos: usize) -> ControlFlow<()> {
        let n = self.order.len();
        if pos == n {
            if self.used >= self.min_blocks {
                let p = Partition::from_assignment(&self.assign).unwrap();
                debug_assert!(is_stable_partition(self.frame, &p));
                return (self.visit)(&p);
            }
            return ControlFlow::Continue(());
        }
        let v = self.order[pos];
        let remaining = n - pos - 1;
        let top = if self.used < self.max_blocks { self.used } else { self.used - 1 };
        for b in 0..=top {
            let used_after = if b == self.used { self.used + 1 } else { self.used };
            if used_after + remaining < self.min_blocks {
                continue;
            }
            if let Some(undo) = self.apply(pos, v, b) {
                let flow = self.rec(pos + 1);
                self.undo(undo, v);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Put `v` into block `b` if no finished vertex thereby loses its last
    /// chance at stability; report what to undo, or `None` if rejected.
    fn apply(&mut self, pos: usize, v: usize, b: usize) -> Option<Undo> {
        let adj = self.frame.adjacency_bits(v);
        let vertex_bit = 1u128 << v;

        // Which block pairs (b, c) become edged by this assignment?
        let mut newly_edged = 0u128;
        for c in 0..self.used {
            if c == b || self.edged[b] & (1u128 << c) != 0 {
                continue;
            }
            if adj & self.members[c] != 0 {
                newly_edged |= 1u128 << c;
            }
        }
        // A pair that just became edged must already be survivable by every
        // finished vertex on either side.
        let members_b_after = self.members[b] | vertex_bit;
        let mut rest = newly_edged;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut fin = self.finished & self.members[c];
            while fin != 0 {
                let u = fin.trailing_zeros() as usize;
                fin &= fin - 1;
                if self.frame.adjacency_bits(u) & members_b_after == 0 {
                    return None;
                }
            }
            let mut fin = self.finished & self.members[b];
            while fin != 0 {
                let u = fin.trailing_zeros() as usize;
                fin &= fin - 1;
                if self.frame.adjacency_bits(u) & self.members[c] == 0 {
                    return None;
                }
            }
        }

        let opened_block = b == self.used;
        let finished_before = self.finished;
        self.assign[v] = b;
        self.members[b] |= vertex_bit;
        self.edged[b] |= newly_edged;
        let mut rest = newly_edged;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.edged[c] |= 1u128 << b;
        }
        if opened_block {
            self.used += 1;
        }
        let undo = Undo { block: b, vertex_bit, newly_edged, finished_before, opened_block };

        // Vertices finishing here must see every block currently edged to
        // their own; later edgings re-check them as finished members.
        for i in 0..self.finished_at[pos].len() {
            let u = self.finished_at[pos][i];
            let bu = self.assign[u];
            let mut rest = self.edged[bu];
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if self.frame.adjacency_bits(u) & self.members[c] == 0 {
                    self.undo(undo, v);
                    return None;
                }
            }
            self.finished |= 1u128 << u;
        }
        Some(undo)
    }

    fn undo(&mut self, undo: Undo, v: usize) {
        let Undo { block, vertex_bit, newly_edged, finished_before, opened_block } = undo;
        self.assign[v] = usize::MAX;
        self.members[block] &= !vertex_bit;
        self.edged[block] &= !newly_edged;
        let mut rest = newly_edged;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.edged[c] &= !(1u128 << block);
        }
        self.finished = finished_before;
        if opened_block {
            self.used -= 1;
        }
    }
}

/// All stable partitions with block counts in `min_blocks..=max_blocks`,
/// materialized. Only for frames of at most [`ENUMERATION_MAX_VERTICES`]
/// vertices; use [`for_each_stable_partition`] to stream larger frames.
pub fn enumerate_stable_partitions(
    frame: &Frame,
    min_blocks: usize,
    max_blocks: usize,
) -> Result<Vec<Partition>, MorphismError> {
    if frame.n() > ENUMERATION_MAX_VERTICES {
        return Err(MorphismError::EnumerationTooLarge {
            n: frame.n(),
            max: ENUMERATION_MAX_VERTICES,
        });
    }
    let mut out = Vec::new();
    let _ = for_each_stable_partition(frame, min_blocks, max_blocks, |p| {
        out.push(p.clone());
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Outcome of the cover check: does the frame admit *no* stable partition
/// into at least 3 and at most n-1 blocks? The one-block and all-singleton
/// partitions always exist, and a two-block quotient is permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    /// No such partition: every bounded-morphic image beyond the trivial
    /// ones collapses the frame to at most two points.
    Pass,
    /// A disqualifying stable partition, the first one found.
    Fail { witness: Partition },
    /// The check needs a connected frame on at least 3 vertices.
    NotApplicable { reason: String },
}

/// Search for a stable partition with `3..=n-1` blocks; see [`CoverVerdict`].
pub fn cover_check(frame: &Frame) -> CoverVerdict {
    let n = frame.n();
    if n <= 2 {
        return CoverVerdict::NotApplicable {
            reason: format!("needs at least 3 vertices, frame has {n}"),
        };
    }
    if !frame.is_connected() {
        return CoverVerdict::NotApplicable { reason: "frame is disconnected".to_string() };
    }
    let mut witness = None;
    let _ = for_each_stable_partition(frame, 3, n - 1, |p| {
        witness = Some(p.clone());
        ControlFlow::Break(())
    });
    match witness {
        Some(w) => CoverVerdict::Fail { witness: w },
        None => CoverVerdict::Pass,
    }
}

/// The two-block stable partition given by breadth-first parity from vertex
/// 0. Defined for every connected frame with at least one edge; its
/// quotient is the single-edge frame.
pub fn k2_partition(frame: &Frame) -> Option<Partition> {
    if frame.n() < 2 || !frame.is_connected() {
        return None;
    }
    let assign: Vec<usize> = frame
        .bfs_distances(0)
        .into_iter()
        .map(|d| d.unwrap() % 2)
        .collect();
    Some(Partition::from_assignment(&assign).unwrap())
}

/// Search for a partition into at least `min_blocks` blocks whose quotient
/// is a complete graph: every vertex must have a neighbour in every block
/// other than its own. Returns the first such partition found, preferring
/// fewer blocks. Vertices of degree `d` rule out more than `d + 1` blocks,
/// which caps the search.
pub fn find_complete_quotient_partition(frame: &Frame, min_blocks: usize) -> Option<Partition> {
    let n = frame.n();
    let min_blocks = min_blocks.max(1);
    let min_degree = (0..n).map(|v| frame.degree(v)).min()?;
    let k_max = n.min(min_degree + 1);
    for k in min_blocks..=k_max {
        let mut found = None;
        complete_quotient_rec(frame, k, 0, &mut vec![usize::MAX; n], &mut vec![0u128; k], 0, &mut found);
        if let Some(assign) = found {
            return Some(Partition::from_assignment(&assign).unwrap());
        }
    }
    None
}

fn complete_quotient_rec(
    frame: &Frame,
    k: usize,
    v: usize,
    assign: &mut Vec<usize>,
    members: &mut Vec<u128>,
    used: usize,
    found: &mut Option<Vec<usize>>,
) {
    let n = frame.n();
    if found.is_some() {
        return;
    }
    if v == n {
        if used == k {
            *found = Some(assign.clone());
        }
        return;
    }
    // All blocks must end up occupied.
    if used + (n - v) < k {
        return;
    }
    let top = used.min(k - 1);
    for b in 0..=top {
        assign[v] = b;
        members[b] |= 1u128 << v;
        // Vertices whose neighbourhood is now fully assigned must already
        // see every other block; unopened blocks can never become visible
        // to them, so they must all be open.
        let mut ok = true;
        let used_after = used.max(b + 1);
        for u in 0..=v {
            let adj = frame.adjacency_bits(u);
            if v + 1 < n && adj >> (v + 1) != 0 {
                continue; // u still has unassigned neighbours
            }
            if used_after < k {
                ok = false;
                break;
            }
            for (c, m) in members.iter().enumerate() {
                if c != assign[u] && adj & m == 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            complete_quotient_rec(frame, k, v + 1, assign, members, used_after, found);
        }
        members[b] &= !(1u128 << v);
        assign[v] = usize::MAX;
        if found.is_some() {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Frame {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Frame::from_edges(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Frame {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Frame::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Frame {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Frame::from_edges(n, &edges).unwrap()
    }

    fn part(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn partitions_normalize_and_round_trip() {
        let p = Partition::from_assignment(&[5, 7, 5, 9]).unwrap();
        assert_eq!(p.to_string(), "0,1,0,2");
        assert_eq!(part("0,1,0,2"), p);
        assert_eq!(p.block_count(), 3);
        assert_eq!(p.width(), 4);
        assert_eq!(p.blocks(), vec![
            Subset::from_indices(4, [0, 2]),
            Subset::from_indices(4, [1]),
            Subset::from_indices(4, [3]),
        ]);
        assert!(Partition::total(3).is_trivial());
        assert!(Partition::discrete(3).is_trivial());
        assert!(!part("0,1,0").is_trivial());
    }

    #[test]
    fn partition_parse_errors() {
        assert_eq!("".parse::<Partition>().unwrap_err(), MorphismError::EmptyPartition);
        assert!(matches!(
            "0,x".parse::<Partition>().unwrap_err(),
            MorphismError::BadBlockId { .. }
        ));
    }

    #[test]
    fn stability_on_the_three_path() {
        let f = path(3);
        // Exactly these three partitions are stable.
        let stable = ["0,0,0", "0,1,0", "0,1,2"];
        let unstable = ["0,0,1", "0,1,1"];
        for s in stable {
            assert!(is_stable_partition(&f, &part(s)), "{s} should be stable");
        }
        for s in unstable {
            assert!(!is_stable_partition(&f, &part(s)), "{s} should not be stable");
        }
        let all = enumerate_stable_partitions(&f, 1, 3).unwrap();
        assert_eq!(all.len(), 3);
        for s in stable {
            assert!(all.contains(&part(s)));
        }
    }

    #[test]
    fn every_partition_of_a_complete_frame_is_stable() {
        let f = complete(3);
        let all = enumerate_stable_partitions(&f, 1, 3).unwrap();
        assert_eq!(all.len(), 5); // Bell number of 3
    }

    #[test]
    fn six_cycle_midsize_stable_partitions() {
        // The six-cycle folds in several ways: onto a triangle by opposite
        // vertices, onto paths by consecutive pairs, and onto four-block
        // shapes. All seven are confirmed stable by the definitional check.
        let f = cycle(6);
        let mut mid = enumerate_stable_partitions(&f, 3, 5).unwrap();
        mid.sort_by_key(|p| p.assignment().to_vec());
        let expected = [
            "0,0,1,2,2,1",
            "0,1,0,2,3,2",
            "0,1,1,0,2,2",
            "0,1,2,0,1,2",
            "0,1,2,1,0,3",
            "0,1,2,2,1,0",
            "0,1,2,3,2,1",
        ];
        assert_eq!(mid.len(), expected.len());
        for (got, want) in mid.iter().zip(expected) {
            assert_eq!(got, &part(want));
            assert!(is_stable_partition(&f, got));
        }
    }

    #[test]
    fn quotients_of_known_partitions() {
        let q = quotient(&cycle(6), &part("0,1,2,0,1,2")).unwrap();
        assert_eq!((q.n(), q.edge_count()), (3, 3)); // a triangle

        let q = quotient(&path(3), &part("0,1,0")).unwrap();
        assert_eq!((q.n(), q.edge_count()), (2, 1)); // a single edge

        assert_eq!(
            quotient(&path(3), &part("0,0,1")).unwrap_err(),
            MorphismError::NotStable
        );
        assert_eq!(
            quotient(&path(3), &part("0,1")).unwrap_err(),
            MorphismError::WidthMismatch { expected: 3, got: 2 }
        );
    }

    #[test]
    fn quotient_maps_are_bounded_morphisms() {
        for (f, p) in [
            (cycle(6), part("0,1,2,0,1,2")),
            (path(3), part("0,1,0")),
            (complete(4), part("0,1,0,1")),
        ] {
            let q = quotient(&f, &p).unwrap();
            assert!(is_bounded_morphism(&f, &q, p.assignment()).unwrap());
        }
    }

    #[test]
    fn bounded_morphism_rejects_non_morphisms() {
        let f = path(3);
        let k2 = path(2);
        // Vertex 2 maps next to block 1 but has no neighbour mapping to 0.
        assert!(!is_bounded_morphism(&f, &k2, &[0, 1, 1]).unwrap());
        // Identity and reversal are automorphisms of the path.
        assert!(is_bounded_morphism(&f, &f, &[0, 1, 2]).unwrap());
        assert!(is_bounded_morphism(&f, &f, &[2, 1, 0]).unwrap());
        // Malformed maps error out.
        assert_eq!(
            is_bounded_morphism(&f, &k2, &[0, 1]).unwrap_err(),
            MorphismError::MapLengthMismatch { expected: 3, got: 2 }
        );
        assert_eq!(
            is_bounded_morphism(&f, &k2, &[0, 1, 7]).unwrap_err(),
            MorphismError::MapTargetOutOfRange { vertex: 2, image: 7, n: 2 }
        );
    }

    #[test]
    fn enumeration_agrees_with_definitional_filter() {
        // Cross-check the pruned search against a filter over all
        // restricted-growth assignments.
        for f in [path(4), cycle(5), complete(4), cycle(6)] {
            let n = f.n();
            let mut expected: Vec<Partition> = Vec::new();
            for code in 0..(n as u64).pow(n as u32) {
                let mut c = code;
                let mut assign = vec![0usize; n];
                for slot in assign.iter_mut() {
                    *slot = (c % n as u64) as usize;
                    c /= n as u64;
                }
                let p = Partition::from_assignment(&assign).unwrap();
                if is_stable_partition(&f, &p) && !expected.contains(&p) {
                    expected.push(p);
                }
            }
            let mut got = enumerate_stable_partitions(&f, 1, n).unwrap();
            got.sort_by_key(|p| p.assignment().to_vec());
            expected.sort_by_key(|p| p.assignment().to_vec());
            assert_eq!(got, expected, "mismatch on frame with {n} vertices");
        }
    }

    #[test]
    fn block_count_bounds_are_respected() {
        let f = cycle(6);
        for p in enumerate_stable_partitions(&f, 2, 3).unwrap() {
            assert!(p.block_count() >= 2 && p.block_count() <= 3);
        }
        // Discrete and total land outside the bounds above.
        let all = enumerate_stable_partitions(&f, 1, 6).unwrap();
        assert!(all.contains(&Partition::total(6)));
        assert!(all.contains(&Partition::discrete(6)));
    }

    #[test]
    fn enumeration_tier_is_enforced() {
        let f = path(17);
        assert_eq!(
            enumerate_stable_partitions(&f, 1, 17).unwrap_err(),
            MorphismError::EnumerationTooLarge { n: 17, max: ENUMERATION_MAX_VERTICES }
        );
    }

    #[test]
    fn cover_check_verdicts_on_small_frames() {
        assert!(matches!(cover_check(&path(2)), CoverVerdict::NotApplicable { .. }));
        let disconnected = Frame::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(cover_check(&disconnected), CoverVerdict::NotApplicable { .. }));

        assert_eq!(cover_check(&complete(3)), CoverVerdict::Pass);
        assert_eq!(cover_check(&path(4)), CoverVerdict::Pass);

        match cover_check(&cycle(6)) {
            CoverVerdict::Fail { witness } => {
                assert!(is_stable_partition(&cycle(6), &witness));
                let k = witness.block_count();
                assert!((3..=5).contains(&k), "witness has {k} blocks");
            }
            other => panic!("expected failure with witness, got {other:?}"),
        }
        // The four-cycle also fails: opposite vertices can share a block.
        assert!(matches!(cover_check(&cycle(4)), CoverVerdict::Fail { .. }));
    }

    #[test]
    fn parity_partition_reaches_the_single_edge_quotient() {
        for f in [path(4), cycle(6), cycle(5), complete(4)] {
            let p = k2_partition(&f).unwrap();
            assert!(is_stable_partition(&f, &p));
            let q = quotient(&f, &p).unwrap();
            assert_eq!((q.n(), q.edge_count()), (2, 1));
        }
        assert!(k2_partition(&path(1)).is_none());
        let disconnected = Frame::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(k2_partition(&disconnected).is_none());
    }

    #[test]
    fn complete_quotient_search_on_small_frames() {
        // A triangle is its own complete quotient.
        let p = find_complete_quotient_partition(&complete(3), 3).unwrap();
        assert_eq!(p.block_count(), 3);

        // The six-cycle folds onto a triangle.
        let p = find_complete_quotient_partition(&cycle(6), 3).unwrap();
        assert_eq!(p, part("0,1,2,0,1,2"));
        let q = quotient(&cycle(6), &p).unwrap();
        assert_eq!((q.n(), q.edge_count()), (3, 3));

        // Low-degree vertices cap the block count below 3.
        assert!(find_complete_quotient_partition(&path(4), 3).is_none());
        let star = Frame::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(find_complete_quotient_partition(&star, 3).is_none());

        // The four-cycle has a stable 3-block partition but no complete one.
        assert!(find_complete_quotient_partition(&cycle(4), 3).is_none());

        // Two disjoint triangles fold block-by-block onto a triangle.
        let two_triangles =
            Frame::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let p = find_complete_quotient_partition(&two_triangles, 3).unwrap();
        assert_eq!(p.block_count(), 3);
        for v in 0..6 {
            for c in 0..3 {
                if c != p.block_of(v) {
                    let block = p.blocks()[c];
                    assert_ne!(two_triangles.adjacency_bits(v) & block.bits(), 0);
                }
            }
        }
    }
}
