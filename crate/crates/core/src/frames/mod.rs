//! Reflexive-symmetric Kripke frames as simple graphs over a bit-vector vertex set.
//!
//! A [`Frame`] stores only the irreflexive symmetric part of its relation; the
//! reflexive closure is implicit in every operation, so self-loops are never
//! stored, encoded, or exported. Vertex sets are manipulated as [`Subset`]
//! values: fixed-width bit vectors tied to the width of their frame.

mod canon;
mod graph6;

pub use canon::{are_isomorphic, canonical_form, CANONICAL_MAX_VERTICES};
pub use graph6::{decode_graph6, encode_graph6, GRAPH6_MAX_VERTICES};

use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

/// Hard upper bound on frame size; adjacency rows and subsets are `u128` words.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame must have between 1 and {MAX_VERTICES} vertices, got {0}")]
    BadVertexCount(usize),
    #[error("vertex {vertex} out of range for a frame on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop {0}-{0} rejected: loops are implicit")]
    SelfLoop(usize),
    #[error("expected {n} labels, got {got}")]
    LabelCountMismatch { n: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("graph6: empty input")]
    Graph6Empty,
    #[error("graph6: strip the optional `>>graph6<<` header before decoding")]
    Graph6Header,
    #[error("graph6: byte {byte:#04x} at position {pos} outside 63..=126")]
    Graph6IllegalByte { pos: usize, byte: u8 },
    #[error("graph6: only the short form (n <= 62) is supported here")]
    Graph6LongForm,
    #[error("graph6: payload holds {got} bytes, expected {expected} for n = {n}")]
    Graph6PayloadLength { n: usize, expected: usize, got: usize },
    #[error("graph6: padding bits must be zero")]
    Graph6Padding,
    #[error("graph6: short form encodes at most {GRAPH6_MAX_VERTICES} vertices, got {0}")]
    Graph6TooLarge(usize),
    #[error("canonical form supports at most {CANONICAL_MAX_VERTICES} vertices, got {0}")]
    CanonicalTooLarge(usize),
}

/// A finite reflexive-symmetric frame, stored as the simple graph of its
/// non-loop edges. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    n: usize,
    adj: Vec<u128>,
    labels: Option<Vec<String>>,
}

impl Frame {
    /// Edgeless frame on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, FrameError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(FrameError::BadVertexCount(n));
        }
        Ok(Frame { n, adj: vec![0; n], labels: None })
    }

    /// Build a frame from an undirected edge list. Rejects out-of-range
    /// endpoints and self-loop pairs; duplicate edges are harmless.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, FrameError> {
        let mut f = Frame::empty(n)?;
        for &(u, v) in edges {
            if u >= n {
                return Err(FrameError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(FrameError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(FrameError::SelfLoop(u));
            }
            f.adj[u] |= 1u128 << v;
            f.adj[v] |= 1u128 << u;
        }
        Ok(f)
    }

    /// Attach one distinct label per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, FrameError> {
        if labels.len() != self.n {
            return Err(FrameError::LabelCountMismatch { n: self.n, got: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(FrameError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same adjacency, no labels.
    pub fn without_labels(&self) -> Frame {
        Frame { n: self.n, adj: self.adj.clone(), labels: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut row = self.adj[u] & !((1u128 << (u + 1)) - 1);
            while row != 0 {
                let v = row.trailing_zeros() as usize;
                out.push((u, v));
                row &= row - 1;
            }
        }
        out
    }

    /// Open neighborhood of `v` (excludes `v` itself).
    pub fn neighbors(&self, v: usize) -> Subset {
        debug_assert!(v < self.n);
        Subset { width: self.n, bits: self.adj[v] }
    }

    /// Raw adjacency row for hot loops; bit `u` set iff `u` is adjacent to `v`.
    #[inline]
    pub fn adjacency_bits(&self, v: usize) -> u128 {
        self.adj[v]
    }

    pub fn vertices(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Breadth-first distances from `start`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        assert!(start < self.n, "start vertex {start} out of range");
        let mut dist = vec![None; self.n];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            let mut row = self.adj[v];
            while row != 0 {
                let u = row.trailing_zeros() as usize;
                row &= row - 1;
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// BFS order from vertex 0, continuing from the lowest unvisited vertex of
    /// each further component; neighbors are visited in index order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut row = self.adj[v];
                while row != 0 {
                    let u = row.trailing_zeros() as usize;
                    row &= row - 1;
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        order
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Longest shortest path; `None` iff the frame is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for v in 0..self.n {
            for d in self.bfs_distances(v) {
                diam = diam.max(d?);
            }
        }
        Some(diam)
    }

    /// Relabel vertices: old vertex `v` becomes `perm[v]`. `perm` must be a
    /// permutation of `0..n`. Labels travel with their vertices.
    pub fn permuted(&self, perm: &[usize]) -> Frame {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut check = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !check[p], "not a permutation of 0..{}", self.n);
            check[p] = true;
        }
        let mut adj = vec![0u128; self.n];
        for v in 0..self.n {
            let mut row = self.adj[v];
            while row != 0 {
                let u = row.trailing_zeros() as usize;
                row &= row - 1;
                adj[perm[v]] |= 1u128 << perm[u];
            }
        }
        let labels = self.labels.as_ref().map(|ls| {
            let mut out = vec![String::new(); self.n];
            for v in 0..self.n {
                out[perm[v]] = ls[v].clone();
            }
            out
        });
        Frame { n: self.n, adj, labels }
    }

    /// DOT rendering of the simple graph; implicit loops are omitted.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("graph frame {\n");
        for v in 0..self.n {
            match self.label(v) {
                Some(l) => writeln!(out, "  {v} [label=\"{}\"];", escape_dot(l)).unwrap(),
                None => writeln!(out, "  {v};").unwrap(),
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// Render a subset as `{d, c1}`, using labels when present, indices
    /// otherwise, in vertex-index order.
    pub fn render_subset(&self, s: &Subset) -> String {
        assert_eq!(s.width(), self.n, "subset width mismatch");
        let mut out = String::from("{");
        for (k, v) in s.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            match self.label(v) {
                Some(l) => out.push_str(l),
                None => out.push_str(&v.to_string()),
            }
        }
        out.push('}');
        out
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A subset of the vertices of a frame of width `width`. Value type; all
/// binary operations require equal widths and panic otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    width: usize,
    bits: u128,
}

#[inline]
fn width_mask(width: usize) -> u128 {
    debug_assert!(width >= 1 && width <= MAX_VERTICES);
    if width == 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl Subset {
    pub fn empty(width: usize) -> Self {
        assert!(width >= 1 && width <= MAX_VERTICES, "bad subset width {width}");
        Subset { width, bits: 0 }
    }

    pub fn full(width: usize) -> Self {
        assert!(width >= 1 && width <= MAX_VERTICES, "bad subset width {width}");
        Subset { width, bits: width_mask(width) }
    }

    pub fn singleton(width: usize, v: usize) -> Self {
        Subset::empty(width).with(v)
    }

    /// Wrap a raw bit word; bits outside the width must be clear.
    pub fn from_bits(width: usize, bits: u128) -> Self {
        assert!(width >= 1 && width <= MAX_VERTICES, "bad subset width {width}");
        assert_eq!(bits & !width_mask(width), 0, "bits outside subset width");
        Subset { width, bits }
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subset::empty(width);
        for v in indices {
            s = s.with(v);
        }
        s
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        assert!(v < self.width, "vertex {v} out of range");
        self.bits >> v & 1 == 1
    }

    pub fn with(mut self, v: usize) -> Self {
        assert!(v < self.width, "vertex {v} out of range");
        self.bits |= 1u128 << v;
        self
    }

    pub fn without(mut self, v: usize) -> Self {
        assert!(v < self.width, "vertex {v} out of range");
        self.bits &= !(1u128 << v);
        self
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.bits == width_mask(self.width)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        assert_eq!(self.width, other.width, "subset width mismatch");
        Subset { width: self.width, bits: self.bits | other.bits }
    }

    #[inline]
    pub fn intersect(self, other: Self) -> Self {
        assert_eq!(self.width, other.width, "subset width mismatch");
        Subset { width: self.width, bits: self.bits & other.bits }
    }

    #[inline]
    pub fn minus(self, other: Self) -> Self {
        assert_eq!(self.width, other.width, "subset width mismatch");
        Subset { width: self.width, bits: self.bits & !other.bits }
    }

    #[inline]
    pub fn complement(self) -> Self {
        Subset { width: self.width, bits: !self.bits & width_mask(self.width) }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width, "subset width mismatch");
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> SubsetIter {
        SubsetIter { bits: self.bits }
    }
}

impl std::ops::BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        self.union(rhs)
    }
}

impl std::ops::BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        self.intersect(rhs)
    }
}

impl std::ops::Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        self.minus(rhs)
    }
}

impl std::ops::Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        self.complement()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset(width={}, {{", self.width)?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}})")
    }
}

pub struct SubsetIter {
    bits: u128,
}

impl Iterator for SubsetIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let v = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(v)
    }
}
