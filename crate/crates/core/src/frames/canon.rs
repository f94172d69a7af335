//! Canonical forms for small frames by pruned permutation search.
//!
//! The canonical form of a frame is the graph6 encoding of the relabeling that
//! maximizes the adjacency bit string (read in graph6 column order). Vertices
//! are first partitioned by an iterated degree/neighborhood refinement; the
//! search only considers relabelings that keep refinement classes contiguous,
//! which is sound because the class sequence is itself isomorphism-invariant.

use super::{encode_graph6, Frame, FrameError};

/// Brute-force tier: the permutation search is for desk-scale frames only.
pub const CANONICAL_MAX_VERTICES: usize = 12;

/// Canonical byte string; equal outputs iff the frames are isomorphic.
/// Labels are ignored: the canonical form names the unlabeled graph.
pub fn canonical_form(frame: &Frame) -> Result<Vec<u8>, FrameError> {
    if frame.n() > CANONICAL_MAX_VERTICES {
        return Err(FrameError::CanonicalTooLarge(frame.n()));
    }
    let order = canonical_order(frame);
    let n = frame.n();
    let mut perm = vec![0usize; n]; // old vertex -> canonical position
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    let relabeled = frame.without_labels().permuted(&perm);
    Ok(encode_graph6(&relabeled)?.into_bytes())
}

pub fn are_isomorphic(a: &Frame, b: &Frame) -> Result<bool, FrameError> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        // Still enforce the tier so the answer never silently degrades.
        if a.n() > CANONICAL_MAX_VERTICES {
            return Err(FrameError::CanonicalTooLarge(a.n()));
        }
        if b.n() > CANONICAL_MAX_VERTICES {
            return Err(FrameError::CanonicalTooLarge(b.n()));
        }
        return Ok(false);
    }
    let mut da: Vec<_> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<_> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Iterated refinement: start from degrees, repeatedly re-key every vertex by
/// (its class, the sorted multiset of neighbor classes). Class ids are handed
/// out in key order, so they depend only on the isomorphism type.
fn refine_classes(frame: &Frame) -> Vec<usize> {
    let n = frame.n();
    let mut class: Vec<usize> = (0..n).map(|v| frame.degree(v)).collect();
    loop {
        let mut keys: Vec<(Vec<usize>, usize)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut key = vec![class[v]];
            let mut nbr: Vec<usize> = frame.neighbors(v).iter().map(|u| class[u]).collect();
            nbr.sort_unstable();
            key.extend(nbr);
            keys.push((key, v));
        }
        let mut sorted: Vec<&(Vec<usize>, usize)> = keys.iter().collect();
        sorted.sort();
        let mut next = vec![0usize; n];
        let mut next_id = 0usize;
        for (k, entry) in sorted.iter().enumerate() {
            if k > 0 && entry.0 != sorted[k - 1].0 {
                next_id += 1;
            }
            next[entry.1] = next_id;
        }
        if next == class {
            return class;
        }
        class = next;
    }
}

/// Two vertices are twins when swapping them is an automorphism: identical
/// adjacency outside the pair. Twin candidates are interchangeable at every
/// search position, so only one of each twin group is tried.
fn twin_masks(frame: &Frame) -> Vec<u128> {
    let n = frame.n();
    let mut masks = vec![0u128; n];
    for u in 0..n {
        for w in u + 1..n {
            let bu = 1u128 << u;
            let bw = 1u128 << w;
            if frame.adjacency_bits(u) & !bw == frame.adjacency_bits(w) & !bu {
                masks[u] |= bw;
                masks[w] |= bu;
            }
        }
    }
    masks
}

/// Position -> vertex order maximizing the column bit string.
fn canonical_order(frame: &Frame) -> Vec<usize> {
    let n = frame.n();
    let class = refine_classes(frame);
    // Cell layout: positions are grouped by class id in ascending order.
    let mut cell_of_pos = vec![0usize; n];
    {
        let mut classes: Vec<usize> = class.clone();
        classes.sort_unstable();
        for (pos, c) in classes.into_iter().enumerate() {
            cell_of_pos[pos] = c;
        }
    }
    let twins = twin_masks(frame);

    struct Search<'a> {
        frame: &'a Frame,
        class: &'a [usize],
        cell_of_pos: &'a [usize],
        twins: &'a [u128],
        n: usize,
        used: u128,
        order: Vec<usize>,
        cols: Vec<u16>,
        best_cols: Option<Vec<u16>>,
        best_order: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, t: usize) {
            if let Some(best) = &self.best_cols {
                use std::cmp::Ordering;
                match self.cols.as_slice().cmp(&best[..t]) {
                    Ordering::Less => return,
                    Ordering::Equal | Ordering::Greater => {}
                }
            }
            if t == self.n {
                let better = match &self.best_cols {
                    None => true,
                    Some(best) => self.cols.as_slice() > best.as_slice(),
                };
                if better {
                    self.best_cols = Some(self.cols.clone());
                    self.best_order = self.order.clone();
                }
                return;
            }
            let want = self.cell_of_pos[t];
            let mut tried = 0u128;
            for v in 0..self.n {
                if self.used >> v & 1 == 1 || self.class[v] != want {
                    continue;
                }
                if self.twins[v] & tried != 0 {
                    continue; // interchangeable with an already-tried candidate
                }
                tried |= 1u128 << v;
                let mut col = 0u16;
                for &u in &self.order {
                    col = col << 1 | u16::from(self.frame.has_edge(u, v));
                }
                self.used |= 1u128 << v;
                self.order.push(v);
                self.cols.push(col);
                self.run(t + 1);
                self.cols.pop();
                self.order.pop();
                self.used &= !(1u128 << v);
            }
        }
    }

    let mut s = Search {
        frame,
        class: &class,
        cell_of_pos: &cell_of_pos,
        twins: &twins,
        n,
        used: 0,
        order: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        best_cols: None,
        best_order: Vec::new(),
    };
    s.run(0);
    s.best_order
}
