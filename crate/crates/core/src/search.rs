//! Connected-graph enumeration and the parallel cover-test pipeline.
//!
//! [`enumerate_connected_graphs`] yields one representative per isomorphism
//! class of connected simple graphs on `n` vertices, built level by level:
//! every connected graph on `k + 1` vertices arises from a connected graph
//! on `k` vertices by re-attaching a non-cut vertex, so extending each
//! `k`-vertex representative by a new vertex with every nonempty neighbour
//! set reaches every class; canonical forms deduplicate each level.
//!
//! [`filter_covers`] maps the cover check over a stream of frames on a
//! worker pool. Inputs are batched by sequence number and results are
//! released strictly in input order, so the emitted records are identical
//! regardless of the worker count.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crossbeam_channel::bounded;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{canonical_form, encode_graph6, Frame};
use crate::morphisms::{cover_check, CoverVerdict, Partition, ENUMERATION_MAX_VERTICES};

/// Largest `n` for the built-in enumerator. Bigger runs ingest externally
/// generated graph6 streams instead of enumerating in-process.
pub const ENUMERATION_MAX_N: usize = 10;

/// Largest frame the definitional partition oracle will scan (Bell(8) =
/// 4140 partitions).
pub const ORACLE_MAX_VERTICES: usize = 8;

/// Batch granularity for the worker pool; results are re-ordered by batch.
const BATCH_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("connected-graph enumeration covers 1 <= n <= {max}, got {n}")]
    EnumerationOutOfTier { n: usize, max: usize },
    #[error("the exhaustive partition oracle covers n <= {max}, got {n}")]
    OracleTooLarge { n: usize, max: usize },
}

/// Attach a fresh vertex to `parent`, adjacent to the vertices of `neighbours`.
fn extend(parent: &Frame, neighbours: u128) -> Frame {
    let k = parent.n();
    let mut edges = parent.edges();
    let mut rest = neighbours;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        edges.push((v, k));
    }
    Frame::from_edges(k + 1, &edges).expect("extension edges stay in range")
}

/// One fully deduplicated level: all connected classes on `k + 1` vertices,
/// where `prev` holds all classes on `k` vertices.
fn next_level(prev: &[Frame]) -> Vec<Frame> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for parent in prev {
        for neighbours in 1u128..(1u128 << parent.n()) {
            let candidate = extend(parent, neighbours);
            let key = canonical_form(&candidate).expect("enumeration stays below the canonical tier");
            if seen.insert(key) {
                out.push(candidate);
            }
        }
    }
    out
}

/// Lazy stream over the classes on the target vertex count. Levels below
/// the target are materialized up front; the final level is generated and
/// deduplicated on the fly so callers can stop early without paying for the
/// whole level.
#[derive(Debug)]
pub struct ConnectedGraphs {
    /// All classes on `target - 1` vertices (empty when target is 1).
    prev: Vec<Frame>,
    idx: usize,
    neighbours: u128,
    seen: HashSet<Vec<u8>>,
    single: Option<Frame>,
}

impl Iterator for ConnectedGraphs {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        if let Some(k1) = self.single.take() {
            return Some(k1);
        }
        while self.idx < self.prev.len() {
            let parent = &self.prev[self.idx];
            while self.neighbours < (1u128 << parent.n()) {
                let candidate = extend(parent, self.neighbours);
                self.neighbours += 1;
                let key =
                    canonical_form(&candidate).expect("enumeration stays below the canonical tier");
                if self.seen.insert(key) {
                    return Some(candidate);
                }
            }
            self.idx += 1;
            self.neighbours = 1;
        }
        None
    }
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices, for `1 <= n <=` [`ENUMERATION_MAX_N`].
pub fn enumerate_connected_graphs(n: usize) -> Result<ConnectedGraphs, SearchError> {
    if n == 0 || n > ENUMERATION_MAX_N {
        return Err(SearchError::EnumerationOutOfTier { n, max: ENUMERATION_MAX_N });
    }
    let k1 = Frame::from_edges(1, &[]).expect("the one-vertex frame is well-formed");
    if n == 1 {
        return Ok(ConnectedGraphs {
            prev: Vec::new(),
            idx: 0,
            neighbours: 1,
            seen: HashSet::new(),
            single: Some(k1),
        });
    }
    let mut level = vec![k1];
    for _ in 2..n {
        level = next_level(&level);
    }
    Ok(ConnectedGraphs { prev: level, idx: 0, neighbours: 1, seen: HashSet::new(), single: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One line of pipeline output: the verdict for the `seq`-th input graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub seq: u64,
    pub graph6: String,
    pub status: SearchStatus,
    /// Failing stable partition, in assignment text, when status is `fail`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Per-graph wall time; only populated when timing is requested, so that
    /// default output is byte-identical across runs and worker counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

/// Closing totals for one pipeline run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub pass: u64,
    pub fail: u64,
    pub na: u64,
}

impl Summary {
    fn tally(&mut self, record: &SearchRecord) {
        self.total += 1;
        match record.status {
            SearchStatus::Pass => self.pass += 1,
            SearchStatus::Fail => self.fail += 1,
            SearchStatus::NotApplicable => self.na += 1,
        }
    }
}

fn evaluate(seq: u64, frame: &Frame, timing: bool) -> SearchRecord {
    let start = Instant::now();
    let graph6 = match encode_graph6(frame) {
        Ok(text) => text,
        Err(_) => format!("n={};edges={}", frame.n(), frame.edge_count()),
    };
    // Frames past the stable-partition tier are recorded, not fatal.
    let (status, witness) = if frame.n() > ENUMERATION_MAX_VERTICES {
        (SearchStatus::NotApplicable, None)
    } else {
        match cover_check(frame) {
            CoverVerdict::Pass => (SearchStatus::Pass, None),
            CoverVerdict::Fail { witness } => (SearchStatus::Fail, Some(witness.to_string())),
            CoverVerdict::NotApplicable { .. } => (SearchStatus::NotApplicable, None),
        }
    };
    SearchRecord {
        seq,
        graph6,
        status,
        witness,
        millis: timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Run the cover check over every frame in the stream, in order, on `jobs`
/// workers (`0` = available parallelism). Records are handed to `sink` in
/// input order regardless of scheduling; the returned summary counts them.
pub fn filter_covers<I>(
    frames: I,
    jobs: usize,
    timing: bool,
    sink: &mut dyn FnMut(&SearchRecord),
) -> Summary
where
    I: IntoIterator<Item = Frame>,
    I::IntoIter: Send,
{
    let jobs = if jobs == 0 {
        std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
    } else {
        jobs
    };
    let mut summary = Summary::default();

    if jobs == 1 {
        for (seq, frame) in frames.into_iter().enumerate() {
            let record = evaluate(seq as u64, &frame, timing);
            summary.tally(&record);
            sink(&record);
        }
        return summary;
    }

    let mut input = frames.into_iter();
    std::thread::scope(|scope| {
        let (batch_tx, batch_rx) = bounded::<(u64, Vec<(u64, Frame)>)>(jobs * 2);
        let (out_tx, out_rx) = bounded::<(u64, Vec<SearchRecord>)>(jobs * 2);
        for _ in 0..jobs {
            let rx = batch_rx.clone();
            let tx = out_tx.clone();
            scope.spawn(move || {
                while let Ok((batch_seq, items)) = rx.recv() {
                    let records: Vec<SearchRecord> =
                        items.iter().map(|(seq, frame)| evaluate(*seq, frame, timing)).collect();
                    if tx.send((batch_seq, records)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(batch_rx);
        drop(out_tx);

        scope.spawn(move || {
            let mut seq = 0u64;
            let mut batch_seq = 0u64;
            loop {
                let batch: Vec<(u64, Frame)> = input
                    .by_ref()
                    .take(BATCH_SIZE)
                    .map(|frame| {
                        let s = seq;
                        seq += 1;
                        (s, frame)
                    })
                    .collect();
                if batch.is_empty() || batch_tx.send((batch_seq, batch)).is_err() {
                    break;
                }
                batch_seq += 1;
            }
        });

        // Release results strictly by batch number.
        let mut pending: BTreeMap<u64, Vec<SearchRecord>> = BTreeMap::new();
        let mut next = 0u64;
        while let Ok((batch_seq, records)) = out_rx.recv() {
            pending.insert(batch_seq, records);
            while let Some(records) = pending.remove(&next) {
                for record in &records {
                    summary.tally(record);
                    sink(record);
                }
                next += 1;
            }
        }
    });
    summary
}

/// Is there an edge between blocks `a` and `b`, and if so does every vertex
/// of `a` see into `b`? Checked straight off the definition, independent of
/// the pruned search.
fn block_pair_ok(frame: &Frame, assign: &[usize], a: usize, b: usize) -> bool {
    let n = frame.n();
    let mut edged = false;
    'outer: for u in 0..n {
        if assign[u] != a {
            continue;
        }
        for v in 0..n {
            if assign[v] == b && frame.has_edge(u, v) {
                edged = true;
                break 'outer;
            }
        }
    }
    if !edged {
        return true;
    }
    (0..n).filter(|&u| assign[u] == a).all(|u| {
        (0..n).any(|v| assign[v] == b && frame.has_edge(u, v))
    })
}

fn definitionally_stable(frame: &Frame, assign: &[usize], blocks: usize) -> bool {
    for a in 0..blocks {
        for b in 0..blocks {
            if a != b && !block_pair_ok(frame, assign, a, b) {
                return false;
            }
        }
    }
    true
}

/// Independent naive cover oracle: enumerate *all* set partitions as
/// restricted-growth strings, test stability definitionally, and apply the
/// same verdict rule as the pruned check.
pub fn oracle_partition_check(frame: &Frame) -> Result<CoverVerdict, SearchError> {
    let n = frame.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(SearchError::OracleTooLarge { n, max: ORACLE_MAX_VERTICES });
    }
    if n <= 2 {
        return Ok(CoverVerdict::NotApplicable {
            reason: format!("needs at least 3 vertices, frame has {n}"),
        });
    }
    if !frame.is_connected() {
        return Ok(CoverVerdict::NotApplicable { reason: "frame is disconnected".to_string() });
    }

    let mut assign = vec![0usize; n];
    let mut witness: Option<Partition> = None;
    fn rec(
        frame: &Frame,
        assign: &mut Vec<usize>,
        pos: usize,
        used: usize,
        witness: &mut Option<Partition>,
    ) {
        if witness.is_some() {
            return;
        }
        let n = frame.n();
        if pos == n {
            if (3..n).contains(&used) && definitionally_stable(frame, assign, used) {
                *witness =
                    Some(Partition::from_assignment(assign).expect("assignments are well-formed"));
            }
            return;
        }
        for block in 0..=used.min(n - 1) {
            assign[pos] = block;
            let now_used = used.max(block + 1);
            rec(frame, assign, pos + 1, now_used, witness);
            if witness.is_some() {
                return;
            }
        }
    }
    rec(frame, &mut assign, 1, 1, &mut witness);
    Ok(match witness {
        Some(w) => CoverVerdict::Fail { witness: w },
        None => CoverVerdict::Pass,
    })
}
