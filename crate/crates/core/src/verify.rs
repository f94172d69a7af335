//! Lemma catalog and structured pass/fail reports.
//!
//! [`verify_lemma`] runs one named check against a [`Target`] — a plain
//! frame, a truncation-family member, or a pair of members — and produces a
//! [`Report`]: which law ran, on what frame, in which mode, how many cases
//! were examined, and — on failure — a JSON counterexample rendered with
//! vertex labels so it can be re-evaluated independently. Reports serialize
//! to JSON with a stable field set; timing is opt-in so that serialized
//! output stays byte-reproducible.
//!
//! Subset-quantified checks scan all `2^n` subsets up to
//! [`SUBSET_EXHAUSTIVE_MAX_VERTICES`] vertices and fall back to seeded
//! sampling beyond that; pair-quantified checks (the axioms) scan `2^(2n)`
//! pairs up to [`PAIR_EXHAUSTIVE_MAX_VERTICES`].

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{diamond_bits, simplicity_index};
use crate::algebra::term::eval_term;
use crate::family::{
    build_truncation, distinguishing_term, expected_schedule_value, named_subset,
    safe_index_bound, singleton_term_schedule, FamilyError, FamilySpec, NamedSet,
};
use crate::frames::{Frame, Subset};
use crate::morphisms::{
    cover_check, find_complete_quotient_partition, is_stable_partition, quotient, CoverVerdict,
    Partition,
};

/// Seed used by sampled checks when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Number of random cases drawn by sampled checks by default.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Largest frame a subset-quantified check will scan exhaustively (2^22
/// subsets); this admits every family member with tail length up to 7.
pub const SUBSET_EXHAUSTIVE_MAX_VERTICES: usize = 22;

/// Largest frame a pair-quantified check will scan exhaustively (2^28
/// pairs of subsets).
pub const PAIR_EXHAUSTIVE_MAX_VERTICES: usize = 14;

/// How a check should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Scan every case; checkers reject frames past their size tier.
    Exhaustive,
    /// Draw `samples` pseudo-random cases from a seeded generator.
    Sampled { seed: u64, samples: u64 },
}

/// Which mode a report's cases were generated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeTag {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Identifier of the law or check that ran.
    pub lemma: String,
    /// Human-readable frame descriptor (family form or graph6).
    pub frame: String,
    pub mode: ModeTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of cases examined (including the failing one, if any).
    pub cases: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    /// Wall-clock duration; only populated when timing is requested, so that
    /// default output stays deterministic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl Report {
    pub fn new(lemma: impl Into<String>, frame: impl Into<String>) -> Report {
        Report {
            lemma: lemma.into(),
            frame: frame.into(),
            mode: ModeTag::Exhaustive,
            seed: None,
            cases: 0,
            status: Status::Pass,
            counterexample: None,
            millis: None,
        }
    }

    /// Drop the timing field, for byte-stable serialized output.
    pub fn without_timing(mut self) -> Report {
        self.millis = None;
        self
    }

    fn fail(&mut self, counterexample: serde_json::Value) {
        self.status = Status::Fail;
        self.counterexample = Some(counterexample);
    }
}

/// Short textual identity for a frame: its graph6 form when it fits, or a
/// size summary otherwise.
pub fn frame_descriptor(frame: &Frame) -> String {
    match crate::frames::encode_graph6(frame) {
        Ok(text) => format!("graph6:{text}"),
        Err(_) => format!("n={};edges={}", frame.n(), frame.edge_count()),
    }
}

/// A subset as JSON: the array of its vertex labels, or of vertex indices
/// when the frame is unlabeled. This is the counterexample currency — it can
/// be mapped back to a [`Subset`] and re-evaluated.
pub fn subset_json(frame: &Frame, subset: &Subset) -> serde_json::Value {
    match frame.labels() {
        Some(labels) => subset.iter().map(|v| labels[v].clone()).collect::<Vec<_>>().into(),
        None => subset.iter().map(|v| v as u64).collect::<Vec<_>>().into(),
    }
}

/// Mode requested by the caller; `Auto` picks exhaustive exactly when the
/// full case space fits the lemma's exhaustive tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeChoice {
    #[default]
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: ModeChoice,
    /// Seed for sampled runs; reports echo it so runs can be replayed.
    pub seed: u64,
    /// Number of random cases drawn per sampled run.
    pub samples: u64,
    /// Record wall-clock time in the report.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            mode: ModeChoice::Auto,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            timing: false,
        }
    }
}

/// What a lemma check runs against.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    /// Any reflexive-symmetric frame.
    Frame(&'a Frame),
    /// A truncation-family member, given by its spec.
    Family(&'a FamilySpec),
    /// Two family members with the same tail length.
    Pair(&'a FamilySpec, &'a FamilySpec),
}

/// Where a lemma is stated, and hence what targets it accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    /// Meaningful on any frame (family targets are built and accepted too).
    AnyFrame,
    /// Stated for truncation members only; needs the family spec, not just
    /// the built frame.
    FamilyOnly,
    /// Compares two family members.
    Pair,
}

#[derive(Debug, Clone, Copy)]
pub struct LemmaInfo {
    pub id: &'static str,
    pub applicability: Applicability,
    pub summary: &'static str,
}

const LEMMAS: &[LemmaInfo] = &[
    LemmaInfo {
        id: "axioms",
        applicability: Applicability::AnyFrame,
        summary: "dia is normal, additive, extensive, satisfies the return law, and is self-conjugate",
    },
    LemmaInfo {
        id: "natclo",
        applicability: Applicability::AnyFrame,
        summary: "dia gamma X = dia X, and gamma-closed X satisfies the complement identities",
    },
    LemmaInfo {
        id: "nicegen",
        applicability: Applicability::AnyFrame,
        summary: "nonempty X with dia X not full yields gamma-closed Y with dia Y not full, dia^2 Y full (connected frames)",
    },
    LemmaInfo {
        id: "singletons",
        applicability: Applicability::FamilyOnly,
        summary: "the singleton term schedule evaluates to exactly the named tail vertices",
    },
    LemmaInfo {
        id: "embed",
        applicability: Applicability::FamilyOnly,
        summary: "folding onto {B,D,L} versus the rest is stable, with a single-edge quotient",
    },
    LemmaInfo {
        id: "simple",
        applicability: Applicability::FamilyOnly,
        summary: "the simplicity index is at most 5",
    },
    LemmaInfo {
        id: "clo",
        applicability: Applicability::FamilyOnly,
        summary: "gamma-closed X with dia X not full and dia^2 X full has dia of the complement not full",
    },
    LemmaInfo {
        id: "ddd",
        applicability: Applicability::FamilyOnly,
        summary: "nonempty X with dia^4 X not full is D itself, or has dia^4 X equal to the complement of D",
    },
    LemmaInfo {
        id: "subD",
        applicability: Applicability::FamilyOnly,
        summary: "D arises as a complemented dia-iterate from sets that avoid P or absorb P",
    },
    LemmaInfo {
        id: "small_analog",
        applicability: Applicability::AnyFrame,
        summary: "no stable partition with three or more blocks has a complete-graph quotient",
    },
    LemmaInfo {
        id: "diff",
        applicability: Applicability::Pair,
        summary: "one term separates two members whose step sets differ",
    },
    LemmaInfo {
        id: "big_analog",
        applicability: Applicability::AnyFrame,
        summary: "cover-check outcome on the given frame, recorded for exploration",
    },
];

/// The lemma catalog, in presentation order.
pub fn list_lemmas() -> &'static [LemmaInfo] {
    LEMMAS
}

pub fn lemma_info(id: &str) -> Option<&'static LemmaInfo> {
    LEMMAS.iter().find(|l| l.id == id)
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown lemma {0:?}")]
    UnknownLemma(String),
    #[error("lemma {lemma:?} is stated for family members; pass a family spec, not a plain frame")]
    FamilyOnly { lemma: String },
    #[error("lemma {lemma:?} expects {expected}")]
    WrongTarget {
        lemma: String,
        expected: &'static str,
    },
    #[error("lemma {lemma:?} is not applicable here: {reason}")]
    NotApplicable { lemma: String, reason: String },
    #[error("exhaustive mode covers at most {max} vertices for this lemma, the frame has {n}")]
    ExhaustiveTooLarge { n: usize, max: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Run one catalog lemma against a target.
pub fn verify_lemma(
    lemma: &str,
    target: Target<'_>,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let info = lemma_info(lemma).ok_or_else(|| VerifyError::UnknownLemma(lemma.to_string()))?;
    match (info.applicability, &target) {
        (Applicability::Pair, Target::Pair(..)) => {}
        (Applicability::Pair, _) => {
            return Err(VerifyError::WrongTarget {
                lemma: info.id.to_string(),
                expected: "a pair of family specs",
            });
        }
        (_, Target::Pair(..)) => {
            return Err(VerifyError::WrongTarget {
                lemma: info.id.to_string(),
                expected: "a single frame or family spec",
            });
        }
        (Applicability::FamilyOnly, Target::Frame(_)) => {
            return Err(VerifyError::FamilyOnly { lemma: info.id.to_string() });
        }
        _ => {}
    }

    match target {
        Target::Pair(a, b) => check_diff(a, b, opts),
        Target::Frame(frame) => {
            dispatch_frame(info.id, frame, frame_descriptor(frame), None, opts)
        }
        Target::Family(spec) => {
            let frame = build_truncation(spec);
            dispatch_frame(info.id, &frame, spec.to_string(), Some(spec), opts)
        }
    }
}

fn dispatch_frame(
    id: &str,
    frame: &Frame,
    descriptor: String,
    spec: Option<&FamilySpec>,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    match id {
        "axioms" => check_axioms(frame, descriptor, opts),
        "natclo" => check_natclo(frame, descriptor, opts),
        "nicegen" => check_nicegen(frame, descriptor, opts),
        "small_analog" => check_small_analog(frame, descriptor, opts),
        "big_analog" => check_big_analog(frame, descriptor, opts),
        // Family-only lemmas: applicability was gated above, so spec is present.
        _ => {
            let spec = spec.expect("family-only lemma reached dispatch without a spec");
            match id {
                "singletons" => check_singletons(spec, frame, opts),
                "embed" => check_embed(spec, frame, opts),
                "simple" => check_simple(spec, frame, opts),
                "clo" => check_clo(spec, frame, opts),
                "ddd" => check_ddd(spec, frame, opts),
                "subD" => check_sub_d(spec, frame, opts),
                other => unreachable!("lemma {other:?} missing from dispatch"),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Scan machinery.

/// Modal operators on raw subset codes, with a memoized dia table on frames
/// small enough for one (the table has `2^n` entries).
struct Ops<'a> {
    frame: &'a Frame,
    mask: u128,
    table: Option<Vec<u128>>,
}

impl<'a> Ops<'a> {
    fn new(frame: &'a Frame) -> Ops<'a> {
        let table = (frame.n() <= PAIR_EXHAUSTIVE_MAX_VERTICES)
            .then(|| crate::algebra::dia_table(frame));
        Ops { frame, mask: Subset::full(frame.n()).bits(), table }
    }

    fn dia(&self, x: u128) -> u128 {
        match &self.table {
            Some(table) => table[x as usize],
            None => diamond_bits(self.frame, x),
        }
    }

    fn not(&self, x: u128) -> u128 {
        self.mask & !x
    }

    fn box_(&self, x: u128) -> u128 {
        self.not(self.dia(self.not(x)))
    }

    fn gamma(&self, x: u128) -> u128 {
        self.box_(self.dia(x))
    }

    fn dia_k(&self, mut x: u128, k: usize) -> u128 {
        for _ in 0..k {
            if x == self.mask {
                return x;
            }
            x = self.dia(x);
        }
        x
    }

    fn render(&self, bits: u128) -> serde_json::Value {
        subset_json(self.frame, &Subset::from_bits(self.frame.n(), bits))
    }
}

fn resolve_subset_mode(n: usize, opts: &VerifyOptions) -> Result<Mode, VerifyError> {
    let sampled = Mode::Sampled { seed: opts.seed, samples: opts.samples };
    match opts.mode {
        ModeChoice::Exhaustive => {
            if n > SUBSET_EXHAUSTIVE_MAX_VERTICES {
                Err(VerifyError::ExhaustiveTooLarge { n, max: SUBSET_EXHAUSTIVE_MAX_VERTICES })
            } else {
                Ok(Mode::Exhaustive)
            }
        }
        ModeChoice::Sampled => Ok(sampled),
        ModeChoice::Auto => {
            if n <= SUBSET_EXHAUSTIVE_MAX_VERTICES {
                Ok(Mode::Exhaustive)
            } else {
                Ok(sampled)
            }
        }
    }
}

fn resolve_pair_mode(n: usize, opts: &VerifyOptions) -> Result<Mode, VerifyError> {
    let sampled = Mode::Sampled { seed: opts.seed, samples: opts.samples };
    match opts.mode {
        ModeChoice::Exhaustive => {
            if n > PAIR_EXHAUSTIVE_MAX_VERTICES {
                Err(VerifyError::ExhaustiveTooLarge { n, max: PAIR_EXHAUSTIVE_MAX_VERTICES })
            } else {
                Ok(Mode::Exhaustive)
            }
        }
        ModeChoice::Sampled => Ok(sampled),
        ModeChoice::Auto => {
            // Exhaustive when the 2^(2n) pair space stays within the subset
            // scan budget of 2^SUBSET_EXHAUSTIVE_MAX_VERTICES cases.
            if 2 * n <= SUBSET_EXHAUSTIVE_MAX_VERTICES {
                Ok(Mode::Exhaustive)
            } else {
                Ok(sampled)
            }
        }
    }
}

/// Drive a per-subset predicate over the frame, exhaustively or sampled.
/// The predicate returns a counterexample for a failing subset; vacuous
/// subsets simply return `None` and still count as cases.
fn scan_subsets(
    lemma: &str,
    descriptor: String,
    frame: &Frame,
    opts: &VerifyOptions,
    check: impl Fn(&Ops, u128) -> Option<serde_json::Value>,
) -> Result<Report, VerifyError> {
    let n = frame.n();
    let mode = resolve_subset_mode(n, opts)?;
    let ops = Ops::new(frame);
    let start = Instant::now();
    let mut report = Report::new(lemma, descriptor);
    match mode {
        Mode::Exhaustive => {
            for x in 0..(1u128 << n) {
                report.cases += 1;
                if let Some(cx) = check(&ops, x) {
                    report.fail(cx);
                    break;
                }
            }
        }
        Mode::Sampled { seed, samples } => {
            report.mode = ModeTag::Sampled;
            report.seed = Some(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                report.cases += 1;
                let x = rng.gen::<u128>() & ops.mask;
                if let Some(cx) = check(&ops, x) {
                    report.fail(cx);
                    break;
                }
            }
        }
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lemma checkers.

/// The defining laws of the operator, checked pointwise on the complex
/// algebra: dia 0 = 0, additivity, x <= dia x, x <= box dia x, and
/// self-conjugacy. Quantifies over pairs of subsets.
fn check_axioms(
    frame: &Frame,
    descriptor: String,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let n = frame.n();
    let mode = resolve_pair_mode(n, opts)?;
    let ops = Ops::new(frame);
    let start = Instant::now();
    let mut report = Report::new("axioms", descriptor);

    let single = |ops: &Ops, x: u128| -> Option<serde_json::Value> {
        let dx = ops.dia(x);
        if x & !dx != 0 {
            return Some(serde_json::json!({ "law": "extensive", "x": ops.render(x) }));
        }
        if x & !ops.box_(dx) != 0 {
            return Some(serde_json::json!({ "law": "return", "x": ops.render(x) }));
        }
        None
    };
    let pair = |ops: &Ops, x: u128, y: u128| -> Option<serde_json::Value> {
        let dx = ops.dia(x);
        let dy = ops.dia(y);
        if ops.dia(x | y) != dx | dy {
            return Some(serde_json::json!({
                "law": "additive", "x": ops.render(x), "y": ops.render(y),
            }));
        }
        if (x & dy == 0) != (dx & y == 0) {
            return Some(serde_json::json!({
                "law": "self_conjugate", "x": ops.render(x), "y": ops.render(y),
            }));
        }
        None
    };

    // dia 0 = 0 is a single fixed case.
    report.cases += 1;
    if ops.dia(0) != 0 {
        report.fail(serde_json::json!({ "law": "normal", "x": ops.render(0) }));
    }

    if report.status == Status::Pass {
        match mode {
            Mode::Exhaustive => {
                'scan: {
                    for x in 0..(1u128 << n) {
                        report.cases += 1;
                        if let Some(cx) = single(&ops, x) {
                            report.fail(cx);
                            break 'scan;
                        }
                    }
                    for x in 0..(1u128 << n) {
                        for y in 0..(1u128 << n) {
                            report.cases += 1;
                            if let Some(cx) = pair(&ops, x, y) {
                                report.fail(cx);
                                break 'scan;
                            }
                        }
                    }
                }
            }
            Mode::Sampled { seed, samples } => {
                report.mode = ModeTag::Sampled;
                report.seed = Some(seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    report.cases += 1;
                    let x = rng.gen::<u128>() & ops.mask;
                    let y = rng.gen::<u128>() & ops.mask;
                    if let Some(cx) = single(&ops, x).or_else(|| pair(&ops, x, y)) {
                        report.fail(cx);
                        break;
                    }
                }
            }
        }
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The natural-closure laws: dia gamma X = dia X holds outright, and a
/// gamma-closed X has complement dia of its dia-complement, together with
/// the dia'd form of that identity.
fn check_natclo(
    frame: &Frame,
    descriptor: String,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    scan_subsets("natclo", descriptor, frame, opts, |ops, x| {
        let dx = ops.dia(x);
        let gx = ops.not(ops.dia(ops.not(dx))); // box dia x
        if ops.dia(gx) != dx {
            return Some(serde_json::json!({ "claim": "dia_gamma", "x": ops.render(x) }));
        }
        if gx == x {
            let witness = ops.dia(ops.not(dx));
            if witness != ops.not(x) {
                return Some(serde_json::json!({ "claim": "closed_complement", "x": ops.render(x) }));
            }
            if ops.dia(ops.not(x)) != ops.dia(witness) {
                return Some(serde_json::json!({
                    "claim": "closed_complement_dia", "x": ops.render(x),
                }));
            }
        }
        None
    })
}

/// From any nonempty X with dia X not full, the gamma closure of the
/// next-to-saturating dia-iterate is a gamma-closed Y with dia Y not full
/// and dia^2 Y full. Needs a connected frame so the iterates saturate.
fn check_nicegen(
    frame: &Frame,
    descriptor: String,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    if !frame.is_connected() {
        return Err(VerifyError::NotApplicable {
            lemma: "nicegen".to_string(),
            reason: "the frame is disconnected, so dia-iterates need not saturate".to_string(),
        });
    }
    scan_subsets("nicegen", descriptor, frame, opts, |ops, x| {
        if x == 0 {
            return None;
        }
        let dx = ops.dia(x);
        if dx == ops.mask {
            return None;
        }
        // Find the least m >= 1 with dia^(m+1) X = W; prev ends at dia^(m-1) X.
        let mut prev = x;
        let mut cur = dx;
        let mut m = 1usize;
        while ops.dia(cur) != ops.mask {
            prev = cur;
            cur = ops.dia(cur);
            m += 1;
        }
        let y = ops.gamma(prev);
        let cx = |claim: &str| {
            Some(serde_json::json!({
                "claim": claim, "x": ops.render(x), "m": m, "y": ops.render(y),
            }))
        };
        if ops.gamma(y) != y {
            return cx("gamma_closed");
        }
        let dy = ops.dia(y);
        if dy == ops.mask {
            return cx("dia_not_full");
        }
        if ops.dia(dy) != ops.mask {
            return cx("dia2_full");
        }
        None
    })
}

/// Every schedule term, evaluated at `x = {d}`, lands on exactly the named
/// vertex set, out to the safe index for the member's tail length.
fn check_singletons(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("singletons", spec.to_string());
    let schedule = singleton_term_schedule(spec.n_set(), safe_index_bound(spec.p()));
    let mut env = std::collections::HashMap::new();
    env.insert("x".to_string(), named_subset(spec, NamedSet::D)?);
    for entry in &schedule {
        report.cases += 1;
        let got = eval_term(frame, &entry.term, &env)
            .expect("schedule terms bind only x at the frame width");
        let expected = expected_schedule_value(spec, &entry.name)?;
        if got != expected {
            report.fail(serde_json::json!({
                "entry": entry.name,
                "got": subset_json(frame, &got),
                "expected": subset_json(frame, &expected),
            }));
            break;
        }
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The two-block partition separating {B, D, L} from the rest is stable and
/// its quotient is the one-edge two-vertex frame.
fn check_embed(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("embed", spec.to_string());
    report.cases = 1;
    let bdl = named_subset(spec, NamedSet::Bdl)?;
    let assign: Vec<usize> = (0..frame.n()).map(|v| usize::from(!bdl.contains(v))).collect();
    let partition = Partition::from_assignment(&assign)
        .expect("a two-block assignment over the frame is well-formed");
    let stable = is_stable_partition(frame, &partition);
    let quotient_is_edge = stable
        && quotient(frame, &partition)
            .map(|q| q.n() == 2 && q.edge_count() == 1)
            .unwrap_or(false);
    if !(stable && quotient_is_edge) {
        report.fail(serde_json::json!({
            "stable": stable,
            "blocks": [subset_json(frame, &bdl), subset_json(frame, &(!bdl))],
        }));
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The member's simplicity index is at most 5.
fn check_simple(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("simple", spec.to_string());
    report.cases = 1;
    let index = simplicity_index(frame);
    if !matches!(index, Some(k) if k <= 5) {
        report.fail(serde_json::json!({ "simplicity_index": index }));
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// A gamma-closed X with dia X not full but dia^2 X full keeps dia of its
/// complement away from full as well.
fn check_clo(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    scan_subsets("clo", spec.to_string(), frame, opts, |ops, x| {
        let dx = ops.dia(x);
        if ops.gamma(x) != x || dx == ops.mask || ops.dia(dx) != ops.mask {
            return None;
        }
        if ops.dia(ops.not(x)) == ops.mask {
            return Some(serde_json::json!({ "x": ops.render(x) }));
        }
        None
    })
}

/// A nonempty X whose 4-step dia stays short of full is either D itself, or
/// its 4-step dia is exactly the complement of D.
fn check_ddd(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let d = named_subset(spec, NamedSet::D)?.bits();
    scan_subsets("ddd", spec.to_string(), frame, opts, |ops, x| {
        if x == 0 {
            return None;
        }
        let reach = ops.dia_k(x, 4);
        if reach == ops.mask || x == d || reach == ops.not(d) {
            return None;
        }
        Some(serde_json::json!({
            "x": ops.render(x),
            "dia4": ops.render(reach),
        }))
    })
}

/// D is recovered as the complement of a 2-, 3-, or 4-step dia-iterate:
/// (i) from any nonempty X avoiding P; (ii) from the complement of dia X
/// when P lands inside dia X and dia X is not full; (iii) from the
/// complement of dia of the complement, for gamma-closed X as in the clo
/// premise with P inside dia of the complement.
fn check_sub_d(
    spec: &FamilySpec,
    frame: &Frame,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let d = named_subset(spec, NamedSet::D)?.bits();
    let p = named_subset(spec, NamedSet::P)?.bits();
    let recovers_d = |ops: &Ops, y: u128| {
        let target = ops.not(d);
        (2..=4).any(|k| ops.dia_k(y, k) == target)
    };
    scan_subsets("subD", spec.to_string(), frame, opts, |ops, x| {
        if x != 0 && x & p == 0 && !recovers_d(ops, x) {
            return Some(serde_json::json!({ "part": "i", "x": ops.render(x) }));
        }
        let dx = ops.dia(x);
        if p & !dx == 0 && dx != ops.mask && !recovers_d(ops, ops.not(dx)) {
            return Some(serde_json::json!({ "part": "ii", "x": ops.render(x) }));
        }
        if ops.gamma(x) == x && dx != ops.mask && ops.dia(dx) == ops.mask {
            let dnx = ops.dia(ops.not(x));
            if p & !dnx == 0 && (dnx == ops.mask || !recovers_d(ops, ops.not(dnx))) {
                return Some(serde_json::json!({ "part": "iii", "x": ops.render(x) }));
            }
        }
        None
    })
}

/// No stable partition with three or more blocks folds the frame onto a
/// complete graph.
fn check_small_analog(
    frame: &Frame,
    descriptor: String,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("small_analog", descriptor);
    report.cases = 1;
    if let Some(partition) = find_complete_quotient_partition(frame, 3) {
        let blocks: Vec<serde_json::Value> =
            partition.blocks().iter().map(|b| subset_json(frame, b)).collect();
        report.fail(serde_json::json!({
            "partition": partition.to_string(),
            "blocks": blocks,
        }));
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The cover check, recorded as a report: pass when no stable midsize
/// partition exists, fail with the witness otherwise.
fn check_big_analog(
    frame: &Frame,
    descriptor: String,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("big_analog", descriptor);
    report.cases = 1;
    match cover_check(frame) {
        CoverVerdict::Pass => {}
        CoverVerdict::Fail { witness } => {
            let blocks: Vec<serde_json::Value> =
                witness.blocks().iter().map(|b| subset_json(frame, b)).collect();
            report.fail(serde_json::json!({
                "partition": witness.to_string(),
                "blocks": blocks,
            }));
        }
        CoverVerdict::NotApplicable { reason } => {
            return Err(VerifyError::NotApplicable { lemma: "big_analog".to_string(), reason });
        }
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The distinguishing term hits `{u i}` on the member without the least
/// differing index `i`, and `{u i, u (i+1)}` on the member with it.
fn check_diff(
    a: &FamilySpec,
    b: &FamilySpec,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new("diff", format!("{a} vs {b}"));
    if a.p() != b.p() {
        return Err(VerifyError::NotApplicable {
            lemma: "diff".to_string(),
            reason: format!("tail lengths differ: {} vs {}", a.p(), b.p()),
        });
    }
    let (i, term) = distinguishing_term(a.n_set(), b.n_set())?;
    if a.p() < i + 4 {
        return Err(VerifyError::NotApplicable {
            lemma: "diff".to_string(),
            reason: format!("needs tail length at least {} to separate on index {i}", i + 4),
        });
    }
    for spec in [a, b] {
        report.cases += 1;
        let frame = build_truncation(spec);
        let names = spec.vertices();
        let mut env = std::collections::HashMap::new();
        env.insert("x".to_string(), named_subset(spec, NamedSet::D)?);
        let got = eval_term(&frame, &term, &env)
            .expect("the distinguishing term binds only x at the frame width");
        let mut expected_vertices = vec![names.u(i)?];
        if spec.n_set().contains(&i) {
            expected_vertices.push(names.u(i + 1)?);
        }
        let expected = Subset::from_indices(frame.n(), expected_vertices);
        if got != expected {
            report.fail(serde_json::json!({
                "family": spec.to_string(),
                "index": i,
                "got": subset_json(&frame, &got),
                "expected": subset_json(&frame, &expected),
            }));
            break;
        }
    }
    if opts.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::Frame;

    fn spec(members: &[usize], p: usize) -> FamilySpec {
        FamilySpec::new(members.iter().copied(), p).unwrap()
    }

    fn cycle(n: usize) -> Frame {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Frame::from_edges(n, &edges).unwrap()
    }

    fn path(n: usize) -> Frame {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Frame::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn report_serialization_omits_unset_optionals() {
        let r = Report::new("self_conjugacy", "graph6:A_");
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"lemma":"self_conjugacy","frame":"graph6:A_","mode":"exhaustive","cases":0,"status":"pass"}"#
        );
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn report_serialization_includes_set_optionals() {
        let mut r = Report::new("x", "y");
        r.mode = ModeTag::Sampled;
        r.seed = Some(5);
        r.status = Status::Fail;
        r.counterexample = Some(serde_json::json!({"x": ["a"]}));
        r.millis = Some(12);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""seed":5"#));
        assert!(json.contains(r#""mode":"sampled""#));
        assert!(json.contains(r#""status":"fail""#));
        assert!(json.contains(r#""millis":12"#));
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), r);
    }

    #[test]
    fn frame_descriptor_uses_graph6_for_small_frames() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(frame_descriptor(&k2), "graph6:A_");
    }

    #[test]
    fn subset_json_uses_labels_or_indices() {
        let member = build_truncation(&spec(&[], 2));
        let d = Subset::from_indices(member.n(), [0, 1]);
        assert_eq!(subset_json(&member, &d), serde_json::json!(["d", "c1"]));
        let plain = path(3);
        let s = Subset::from_indices(3, [0, 2]);
        assert_eq!(subset_json(&plain, &s), serde_json::json!([0, 2]));
    }

    #[test]
    fn catalog_lists_every_lemma_in_order() {
        let ids: Vec<&str> = list_lemmas().iter().map(|l| l.id).collect();
        assert_eq!(
            ids,
            [
                "axioms", "natclo", "nicegen", "singletons", "embed", "simple", "clo", "ddd",
                "subD", "small_analog", "diff", "big_analog",
            ]
        );
        assert_eq!(lemma_info("axioms").unwrap().applicability, Applicability::AnyFrame);
        assert_eq!(lemma_info("ddd").unwrap().applicability, Applicability::FamilyOnly);
        assert_eq!(lemma_info("diff").unwrap().applicability, Applicability::Pair);
        assert!(lemma_info("nope").is_none());
    }

    #[test]
    fn unknown_lemma_is_an_error() {
        let f = path(3);
        let err = verify_lemma("nope", Target::Frame(&f), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::UnknownLemma(name) if name == "nope"));
    }

    #[test]
    fn family_only_lemma_rejects_plain_frames() {
        let triangle = cycle(3);
        let err =
            verify_lemma("ddd", Target::Frame(&triangle), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::FamilyOnly { lemma } if lemma == "ddd"));
    }

    #[test]
    fn pair_lemma_rejects_single_targets_and_vice_versa() {
        let s = spec(&[], 6);
        let err = verify_lemma("diff", Target::Family(&s), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::WrongTarget { .. }));
        let s2 = spec(&[2], 6);
        let err = verify_lemma("ddd", Target::Pair(&s, &s2), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::WrongTarget { .. }));
    }

    #[test]
    fn natclo_scans_the_full_powerset_of_the_smallest_member() {
        let s = spec(&[], 2);
        let opts = VerifyOptions { mode: ModeChoice::Exhaustive, ..Default::default() };
        let report = verify_lemma("natclo", Target::Family(&s), &opts).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 2048);
        assert_eq!(report.mode, ModeTag::Exhaustive);
        assert_eq!(report.frame, "N=;p=2");
        assert_eq!(report.seed, None);
        assert_eq!(report.millis, None);
    }

    #[test]
    fn natclo_holds_on_arbitrary_frames() {
        for f in [path(4), cycle(6), cycle(5)] {
            let report =
                verify_lemma("natclo", Target::Frame(&f), &VerifyOptions::default()).unwrap();
            assert_eq!(report.status, Status::Pass);
            assert_eq!(report.cases, 1 << f.n());
        }
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_frames() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let report = verify_lemma("axioms", Target::Frame(&k2), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);
        // One normality case, 2^2 singles, 2^4 pairs.
        assert_eq!(report.cases, 1 + 4 + 16);
        assert_eq!(report.mode, ModeTag::Exhaustive);
    }

    #[test]
    fn axioms_hold_exhaustively_on_the_smallest_member() {
        let s = spec(&[], 2);
        let opts = VerifyOptions { mode: ModeChoice::Exhaustive, ..Default::default() };
        let report = verify_lemma("axioms", Target::Family(&s), &opts).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 1 + (1 << 11) + (1 << 22));
    }

    #[test]
    fn axioms_auto_mode_samples_medium_frames() {
        let f = cycle(12);
        let opts = VerifyOptions { samples: 2_000, ..Default::default() };
        let report = verify_lemma("axioms", Target::Frame(&f), &opts).unwrap();
        assert_eq!(report.mode, ModeTag::Sampled);
        assert_eq!(report.seed, Some(DEFAULT_SEED));
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 1 + 2_000);
    }

    #[test]
    fn axioms_exhaustive_mode_enforces_the_pair_tier() {
        let f = cycle(15);
        let opts = VerifyOptions { mode: ModeChoice::Exhaustive, ..Default::default() };
        let err = verify_lemma("axioms", Target::Frame(&f), &opts).unwrap_err();
        assert!(matches!(err, VerifyError::ExhaustiveTooLarge { n: 15, max } if max == PAIR_EXHAUSTIVE_MAX_VERTICES));
    }

    #[test]
    fn sampled_runs_with_the_same_seed_are_identical() {
        let s = spec(&[2], 8);
        let opts = VerifyOptions {
            mode: ModeChoice::Sampled,
            seed: 99,
            samples: 5_000,
            timing: false,
        };
        let a = verify_lemma("clo", Target::Family(&s), &opts).unwrap();
        let b = verify_lemma("clo", Target::Family(&s), &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mode, ModeTag::Sampled);
        assert_eq!(a.seed, Some(99));
        assert_eq!(a.cases, 5_000);
        assert_eq!(a.status, Status::Pass);
    }

    #[test]
    fn auto_mode_samples_past_the_subset_tier() {
        // p = 8 gives n = 23 vertices, one past the exhaustive subset tier.
        let s = spec(&[], 8);
        let opts = VerifyOptions { samples: 3_000, ..Default::default() };
        let report = verify_lemma("natclo", Target::Family(&s), &opts).unwrap();
        assert_eq!(report.mode, ModeTag::Sampled);
        assert_eq!(report.cases, 3_000);
        assert_eq!(report.status, Status::Pass);
        let opts = VerifyOptions { mode: ModeChoice::Exhaustive, ..Default::default() };
        let err = verify_lemma("natclo", Target::Family(&s), &opts).unwrap_err();
        assert!(matches!(err, VerifyError::ExhaustiveTooLarge { n: 23, max } if max == SUBSET_EXHAUSTIVE_MAX_VERTICES));
    }

    #[test]
    fn timing_is_recorded_only_on_request() {
        let s = spec(&[], 2);
        let timed = VerifyOptions { timing: true, ..Default::default() };
        assert!(verify_lemma("simple", Target::Family(&s), &timed).unwrap().millis.is_some());
        let plain = VerifyOptions::default();
        assert!(verify_lemma("simple", Target::Family(&s), &plain).unwrap().millis.is_none());
    }

    #[test]
    fn nicegen_holds_on_connected_frames_and_members() {
        for f in [path(3), cycle(6)] {
            let report =
                verify_lemma("nicegen", Target::Frame(&f), &VerifyOptions::default()).unwrap();
            assert_eq!(report.status, Status::Pass);
        }
        let s = spec(&[], 2);
        let report = verify_lemma("nicegen", Target::Family(&s), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 2048);
    }

    #[test]
    fn nicegen_rejects_disconnected_frames() {
        let f = Frame::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let err = verify_lemma("nicegen", Target::Frame(&f), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::NotApplicable { lemma, .. } if lemma == "nicegen"));
    }

    #[test]
    fn singleton_schedule_verifies_on_members() {
        for s in [spec(&[], 6), spec(&[2], 6)] {
            let report =
                verify_lemma("singletons", Target::Family(&s), &VerifyOptions::default()).unwrap();
            assert_eq!(report.status, Status::Pass, "failed on {s}");
            // Base entries plus two rounds out to the safe index.
            assert_eq!(report.cases, 13);
        }
    }

    #[test]
    fn embed_and_simple_hold_on_members() {
        for s in [spec(&[], 2), spec(&[2], 4), spec(&[2, 4], 6)] {
            for lemma in ["embed", "simple"] {
                let report =
                    verify_lemma(lemma, Target::Family(&s), &VerifyOptions::default()).unwrap();
                assert_eq!(report.status, Status::Pass, "{lemma} failed on {s}");
                assert_eq!(report.cases, 1);
            }
        }
    }

    #[test]
    fn clo_and_ddd_and_sub_d_hold_on_small_members() {
        for s in [spec(&[], 2), spec(&[2], 4)] {
            for lemma in ["clo", "ddd", "subD"] {
                let report =
                    verify_lemma(lemma, Target::Family(&s), &VerifyOptions::default()).unwrap();
                assert_eq!(report.status, Status::Pass, "{lemma} failed on {s}");
                assert_eq!(report.cases, 1 << (2 * s.p() + 7), "{lemma} on {s}");
                assert_eq!(report.mode, ModeTag::Exhaustive);
            }
        }
    }

    #[test]
    fn small_analog_passes_on_members_and_fails_on_even_cycles() {
        let s = spec(&[], 2);
        let report =
            verify_lemma("small_analog", Target::Family(&s), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);

        let c6 = cycle(6);
        let report =
            verify_lemma("small_analog", Target::Frame(&c6), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Fail);
        // The counterexample must be re-checkable: a stable partition with at
        // least three blocks whose quotient is complete.
        let cx = report.counterexample.unwrap();
        let partition: Partition = cx["partition"].as_str().unwrap().parse().unwrap();
        assert!(partition.block_count() >= 3);
        assert!(is_stable_partition(&c6, &partition));
        let q = quotient(&c6, &partition).unwrap();
        assert_eq!(q.edge_count(), q.n() * (q.n() - 1) / 2);
    }

    #[test]
    fn big_analog_records_cover_outcomes() {
        let s = spec(&[], 2);
        let report =
            verify_lemma("big_analog", Target::Family(&s), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);

        let c6 = cycle(6);
        let report =
            verify_lemma("big_analog", Target::Frame(&c6), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Fail);
        let cx = report.counterexample.unwrap();
        let partition: Partition = cx["partition"].as_str().unwrap().parse().unwrap();
        assert!(is_stable_partition(&c6, &partition));
        assert!((3..6).contains(&partition.block_count()));

        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let err =
            verify_lemma("big_analog", Target::Frame(&k2), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::NotApplicable { .. }));
    }

    #[test]
    fn diff_separates_members_and_reports_both_sides() {
        let a = spec(&[], 6);
        let b = spec(&[2], 6);
        let report =
            verify_lemma("diff", Target::Pair(&a, &b), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 2);
        assert_eq!(report.frame, "N=;p=6 vs N=2;p=6");

        // Adjacent members: the separating index 4 sits right after member 2,
        // so the schedule's corrective subtraction is load-bearing here.
        let a = spec(&[2], 8);
        let b = spec(&[2, 4], 8);
        let report =
            verify_lemma("diff", Target::Pair(&a, &b), &VerifyOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.frame, "N=2;p=8 vs N=2,4;p=8");
    }

    #[test]
    fn diff_rejects_identical_or_mismatched_pairs() {
        let a = spec(&[2], 6);
        let err = verify_lemma("diff", Target::Pair(&a, &a), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::Family(FamilyError::IdenticalSets)));

        let b = spec(&[], 4);
        let err = verify_lemma("diff", Target::Pair(&a, &b), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::NotApplicable { .. }));

        // Differ on index 2 but the tails are too short to separate reliably.
        let short_a = spec(&[], 5);
        let short_b = spec(&[2], 5);
        let err = verify_lemma("diff", Target::Pair(&short_a, &short_b), &VerifyOptions::default())
            .unwrap_err();
        assert!(matches!(err, VerifyError::NotApplicable { lemma, .. } if lemma == "diff"));
    }

    #[test]
    fn ddd_passes_exhaustively_on_the_flagged_member() {
        let s = spec(&[2], 4);
        let opts = VerifyOptions { mode: ModeChoice::Exhaustive, ..Default::default() };
        let report = verify_lemma("ddd", Target::Family(&s), &opts).unwrap();
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.cases, 1 << 15);
    }
}
