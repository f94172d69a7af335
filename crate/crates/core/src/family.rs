//! The two-parameter family of truncated frames and its term schedules.
//!
//! A member is described by a set `N` of positive even numbers and a tail
//! length `p >= 2`. The frame has a guarded core (`d — c1 — b1 — a`, with
//! `a — b2 — c2` and `a — b3`), a ladder of low vertices `l0 … lp` all tied
//! to the hub `a`, and upper vertices `u1 … u(p-1)` attached to the ladder
//! in a rung pattern that `N` perturbs. Every member is connected, has
//! diameter 5, and supports a schedule of one-variable terms that pick out
//! each vertex from the generator `{d}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::term::Term;
use crate::frames::{Frame, Subset};

/// Largest admissible tail length: `2p + 7` must fit the frame bit width.
pub const MAX_TAIL_LENGTH: usize = (crate::frames::MAX_VERTICES - 7) / 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("tail length p must be at least 2, got {0}")]
    TailTooShort(usize),
    #[error("tail length p must be at most {max} so the frame fits in {} vertices, got {p}", 2 * max + 7)]
    TailTooLong { p: usize, max: usize },
    #[error("step-set members must be positive even numbers, got {0}")]
    BadMember(usize),
    #[error("bad family text {text:?}: {message}")]
    Parse { text: String, message: String },
    #[error("index {index} is out of range for tail length {p}")]
    IndexOutOfRange { index: usize, p: usize },
    #[error("named-set text {0:?} is not recognized")]
    BadSetName(String),
    #[error("the two step sets are identical, nothing distinguishes them")]
    IdenticalSets,
}

/// Parameters of one family member: the step set `N` (positive evens) and
/// the tail length `p >= 2`. Canonical text form is `N=2,4;p=6`, with an
/// empty step set written `N=;p=6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    n_set: BTreeSet<usize>,
    p: usize,
}

impl FamilySpec {
    pub fn new(n_set: impl IntoIterator<Item = usize>, p: usize) -> Result<FamilySpec, FamilyError> {
        if p < 2 {
            return Err(FamilyError::TailTooShort(p));
        }
        if p > MAX_TAIL_LENGTH {
            return Err(FamilyError::TailTooLong { p, max: MAX_TAIL_LENGTH });
        }
        let n_set: BTreeSet<usize> = n_set.into_iter().collect();
        for &m in &n_set {
            if m == 0 || m % 2 != 0 {
                return Err(FamilyError::BadMember(m));
            }
        }
        Ok(FamilySpec { n_set, p })
    }

    pub fn n_set(&self) -> &BTreeSet<usize> {
        &self.n_set
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of vertices of the member frame.
    pub fn vertex_count(&self) -> usize {
        2 * self.p + 7
    }

    /// Step-set members too large to add their extra rung (`m > p - 2`).
    /// They still suppress a default rung via the parity clause, so the
    /// built frame is *not* the same as for the trimmed set.
    pub fn ineffective_members(&self) -> Vec<usize> {
        self.n_set.iter().copied().filter(|&m| m > self.p.saturating_sub(2)).collect()
    }

    pub fn vertices(&self) -> NamedVertices {
        NamedVertices { p: self.p }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N=")?;
        for (i, m) in self.n_set.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ";p={}", self.p)
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<FamilySpec, FamilyError> {
        let parse_err = |message: &str| FamilyError::Parse {
            text: s.to_string(),
            message: message.to_string(),
        };
        let body = s.trim();
        let (n_part, p_part) = body
            .split_once(';')
            .ok_or_else(|| parse_err("expected two parts separated by ';'"))?;
        let n_text = n_part
            .trim()
            .strip_prefix("N=")
            .ok_or_else(|| parse_err("first part must start with 'N='"))?;
        let p_text = p_part
            .trim()
            .strip_prefix("p=")
            .ok_or_else(|| parse_err("second part must start with 'p='"))?;
        let mut members = Vec::new();
        if !n_text.trim().is_empty() {
            for piece in n_text.split(',') {
                let m: usize = piece
                    .trim()
                    .parse()
                    .map_err(|_| parse_err("step-set members must be numbers"))?;
                members.push(m);
            }
        }
        let p: usize = p_text
            .trim()
            .parse()
            .map_err(|_| parse_err("tail length must be a number"))?;
        FamilySpec::new(members, p)
    }
}

/// Vertex indices of a member frame, fixed by the layout
/// `[d, c1, b1, a, b2, c2, b3, l0 … lp, u1 … u(p-1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedVertices {
    p: usize,
}

impl NamedVertices {
    pub fn d(&self) -> usize {
        0
    }
    pub fn c1(&self) -> usize {
        1
    }
    pub fn b1(&self) -> usize {
        2
    }
    pub fn a(&self) -> usize {
        3
    }
    pub fn b2(&self) -> usize {
        4
    }
    pub fn c2(&self) -> usize {
        5
    }
    pub fn b3(&self) -> usize {
        6
    }

    /// Index of the low vertex `l i`, defined for `0 <= i <= p`.
    pub fn l(&self, i: usize) -> Result<usize, FamilyError> {
        if i > self.p {
            return Err(FamilyError::IndexOutOfRange { index: i, p: self.p });
        }
        Ok(7 + i)
    }

    /// Index of the upper vertex `u j`, defined for `1 <= j <= p - 1`.
    pub fn u(&self, j: usize) -> Result<usize, FamilyError> {
        if j == 0 || j > self.p - 1 {
            return Err(FamilyError::IndexOutOfRange { index: j, p: self.p });
        }
        Ok(self.p + 7 + j)
    }

    pub fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> =
            ["d", "c1", "b1", "a", "b2", "c2", "b3"].iter().map(|s| s.to_string()).collect();
        for i in 0..=self.p {
            labels.push(format!("l{i}"));
        }
        for j in 1..self.p {
            labels.push(format!("u{j}"));
        }
        labels
    }
}

/// Build the member frame for `spec`, with vertex labels attached.
pub fn build_truncation(spec: &FamilySpec) -> Frame {
    let p = spec.p;
    let nv = spec.vertices();
    let l = |i: usize| nv.l(i).unwrap();
    let u = |j: usize| nv.u(j).unwrap();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    // Core: hub to guards, guards to outposts, outpost c1 to the tip d.
    for b in [nv.b1(), nv.b2(), nv.b3()] {
        edges.push((nv.a(), b));
    }
    edges.push((nv.b1(), nv.c1()));
    edges.push((nv.b2(), nv.c2()));
    edges.push((nv.c1(), nv.d()));

    // Ladder floor: every low vertex hangs off the hub; l0 also leans on l1.
    edges.push((l(0), l(1)));
    for i in 0..=p {
        edges.push((nv.a(), l(i)));
    }

    // Default rungs: straight at every index, plus a back-rung into each
    // even floor slot.
    for i in 1..p {
        edges.push((l(i), u(i)));
    }
    for i in (2..=p).step_by(2) {
        edges.push((l(i), u(i - 1)));
    }

    // Step-set perturbation: members add a forward rung where it fits and
    // suppress the even parity rung at their own index.
    for &i in &spec.n_set {
        if i + 2 <= p {
            edges.push((l(i), u(i + 1)));
        }
    }
    for i in (2..p).step_by(2) {
        if !spec.n_set.contains(&i) {
            edges.push((l(i + 1), u(i)));
        }
    }

    Frame::from_edges(spec.vertex_count(), &edges)
        .expect("member edges are in range and loop-free")
        .with_labels(nv.labels())
        .expect("member labels are distinct")
}

/// Distinguished vertex subsets of a member frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSet {
    /// The hub `{a}`.
    A,
    B1,
    B2,
    B3,
    C1,
    C2,
    /// The tip `{d}`, the generator of interest.
    D,
    /// The guarded approach `{b1, c1, d}`.
    P,
    /// One low vertex `{l i}`.
    L(usize),
    /// One upper vertex `{u j}`.
    U(usize),
    /// Guards, tip, and floor together: `B ∪ D ∪ L`.
    Bdl,
    /// Far outpost and all upper vertices: `C2 ∪ U`.
    C2U,
}

impl fmt::Display for NamedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSet::A => write!(f, "A"),
            NamedSet::B1 => write!(f, "B1"),
            NamedSet::B2 => write!(f, "B2"),
            NamedSet::B3 => write!(f, "B3"),
            NamedSet::C1 => write!(f, "C1"),
            NamedSet::C2 => write!(f, "C2"),
            NamedSet::D => write!(f, "D"),
            NamedSet::P => write!(f, "P"),
            NamedSet::L(i) => write!(f, "L{i}"),
            NamedSet::U(j) => write!(f, "U{j}"),
            NamedSet::Bdl => write!(f, "BDL"),
            NamedSet::C2U => write!(f, "C2U"),
        }
    }
}

impl FromStr for NamedSet {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<NamedSet, FamilyError> {
        let bad = || FamilyError::BadSetName(s.to_string());
        match s {
            "A" => Ok(NamedSet::A),
            "B1" => Ok(NamedSet::B1),
            "B2" => Ok(NamedSet::B2),
            "B3" => Ok(NamedSet::B3),
            "C1" => Ok(NamedSet::C1),
            "C2" => Ok(NamedSet::C2),
            "D" => Ok(NamedSet::D),
            "P" => Ok(NamedSet::P),
            "BDL" => Ok(NamedSet::Bdl),
            "C2U" => Ok(NamedSet::C2U),
            _ => {
                if let Some(tail) = s.strip_prefix('L') {
                    Ok(NamedSet::L(tail.parse().map_err(|_| bad())?))
                } else if let Some(tail) = s.strip_prefix('U') {
                    Ok(NamedSet::U(tail.parse().map_err(|_| bad())?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Resolve a named set to a concrete subset of the member frame for `spec`.
pub fn named_subset(spec: &FamilySpec, set: NamedSet) -> Result<Subset, FamilyError> {
    let nv = spec.vertices();
    let n = spec.vertex_count();
    let single = |v: usize| Subset::singleton(n, v);
    Ok(match set {
        NamedSet::A => single(nv.a()),
        NamedSet::B1 => single(nv.b1()),
        NamedSet::B2 => single(nv.b2()),
        NamedSet::B3 => single(nv.b3()),
        NamedSet::C1 => single(nv.c1()),
        NamedSet::C2 => single(nv.c2()),
        NamedSet::D => single(nv.d()),
        NamedSet::P => Subset::from_indices(n, [nv.b1(), nv.c1(), nv.d()]),
        NamedSet::L(i) => single(nv.l(i)?),
        NamedSet::U(j) => single(nv.u(j)?),
        NamedSet::Bdl => {
            let mut s = Subset::from_indices(n, [nv.b1(), nv.b2(), nv.b3(), nv.d()]);
            for i in 0..=spec.p() {
                s = s.with(nv.l(i)?);
            }
            s
        }
        NamedSet::C2U => {
            let mut s = single(nv.c2());
            for j in 1..spec.p() {
                s = s.with(nv.u(j)?);
            }
            s
        }
    })
}

/// One step of the singleton schedule: a one-variable term and the name of
/// the set it is expected to carve out when `x` is bound to `{d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub name: String,
    pub term: Term,
}

fn entry(name: impl Into<String>, term: Term) -> ScheduleEntry {
    ScheduleEntry { name: name.into(), term }
}

fn or3(a: Term, b: Term, c: Term) -> Term {
    Term::or(a, Term::or(b, c))
}

/// The schedule of one-variable terms that, evaluated at `x = {d}` on a
/// member frame built from the same step set, name the core vertices and
/// then walk the ladder outward: `L2, U2, L3, U3, …` up to `max_index`.
///
/// The walk advances two ladder slots per round. A round anchored at an odd
/// index `i` either steps plainly or, when `i + 1` lies in the step set,
/// untangles the doubled rung before emitting its four entries.
pub fn singleton_term_schedule(n_set: &BTreeSet<usize>, max_index: usize) -> Vec<ScheduleEntry> {
    let x = Term::var("x");
    let c1 = Term::and(Term::dia(x.clone()), Term::not(x.clone()));
    let b1 = Term::and(Term::dia(c1.clone()), Term::not(Term::dia(x.clone())));
    let c2u = Term::not(Term::dia_n(x.clone(), 4));
    let a = Term::and(Term::dia(b1.clone()), Term::not(Term::dia(c1.clone())));
    let b3 = Term::not(Term::or(
        Term::dia_n(c2u.clone(), 2),
        Term::dia_n(x.clone(), 2),
    ));
    let l0 = Term::not(or3(
        b3.clone(),
        Term::dia(c2u.clone()),
        Term::dia_n(x.clone(), 3),
    ));
    let b2l = Term::and(
        Term::or(Term::dia(c2u.clone()), l0.clone()),
        Term::not(c2u.clone()),
    );
    let l1 = Term::and(Term::dia(l0.clone()), Term::not(Term::or(a.clone(), l0.clone())));
    let u1 = Term::and(Term::dia(l1.clone()), Term::not(Term::dia(a.clone())));

    let dia_a = Term::dia(a.clone());
    let mut out = vec![
        entry("C1", c1),
        entry("B1", b1),
        entry("C2U", c2u),
        entry("A", a),
        entry("B3", b3),
        entry("L0", l0.clone()),
        entry("B2L", b2l),
        entry("L1", l1.clone()),
        entry("U1", u1.clone()),
    ];

    let mut l_prev = l0;
    let mut l_i = l1;
    let mut u_i = u1;
    let mut i = 1usize;
    while i + 1 <= max_index {
        // When the slot two back is in the step set, its extra rung reaches
        // u_i, so one diamond step would pick up that floor vertex again;
        // subtracting the singleton derived last round keeps the step exact.
        let l_next = Term::and(
            Term::dia(u_i.clone()),
            Term::not(Term::or(Term::dia(l_i.clone()), l_prev.clone())),
        );
        let (u_next, l_after, u_after);
        if n_set.contains(&(i + 1)) {
            // The doubled rung makes one diamond step land on two upper
            // vertices at once; peel them apart before continuing.
            let uu = Term::and(
                Term::dia(l_next.clone()),
                Term::not(Term::or(dia_a.clone(), u_i.clone())),
            );
            let ll = Term::and(Term::dia(uu.clone()), Term::not(Term::dia(l_next.clone())));
            u_after = Term::and(uu.clone(), Term::dia(ll.clone()));
            u_next = Term::and(uu, Term::not(u_after.clone()));
            let stray = Term::and(
                Term::dia(ll.clone()),
                Term::not(Term::or(dia_a.clone(), u_after.clone())),
            );
            l_after = Term::and(ll, Term::not(Term::dia(stray)));
        } else {
            u_next = Term::and(
                Term::dia(l_next.clone()),
                Term::not(Term::or(dia_a.clone(), u_i.clone())),
            );
            l_after = Term::and(Term::dia(u_next.clone()), Term::not(Term::dia(l_next.clone())));
            u_after = Term::and(
                Term::dia(l_after.clone()),
                Term::not(Term::or(dia_a.clone(), u_next.clone())),
            );
        }
        out.push(entry(format!("L{}", i + 1), l_next.clone()));
        out.push(entry(format!("U{}", i + 1), u_next.clone()));
        if i + 2 <= max_index {
            out.push(entry(format!("L{}", i + 2), l_after.clone()));
            out.push(entry(format!("U{}", i + 2), u_after.clone()));
        }
        l_prev = l_next;
        l_i = l_after;
        u_i = u_after;
        i += 2;
    }
    out
}

/// Largest ladder index whose schedule entry is guaranteed to name its
/// vertex on a member with tail length `p`: rounds anchored at odd
/// `i <= p - 4` stay clear of the frayed end of the ladder.
pub fn safe_index_bound(p: usize) -> usize {
    if p < 5 {
        return 1;
    }
    let anchor = if (p - 4) % 2 == 1 { p - 4 } else { p - 5 };
    anchor + 2
}

/// The set a schedule entry should evaluate to at `x = {d}`, by entry name.
pub fn expected_schedule_value(spec: &FamilySpec, name: &str) -> Result<Subset, FamilyError> {
    if name == "B2L" {
        // Schedule-internal combination: the remaining guard plus the floor.
        let mut s = named_subset(spec, NamedSet::B2)?;
        for i in 0..=spec.p() {
            s = s.with(spec.vertices().l(i)?);
        }
        return Ok(s);
    }
    named_subset(spec, name.parse()?)
}

/// A term separating two step sets: evaluated at `x = {d}`, it yields
/// `{u i}` on the member built from the side *without* `i`, but
/// `{u i, u (i+1)}` on the member built from the side *with* `i`, where `i`
/// is the smallest index on which the sets disagree. Requires tail length
/// `p >= i + 4` on both members for the schedule sub-terms to be reliable.
pub fn distinguishing_term(
    m_set: &BTreeSet<usize>,
    n_set: &BTreeSet<usize>,
) -> Result<(usize, Term), FamilyError> {
    let i = m_set
        .symmetric_difference(n_set)
        .min()
        .copied()
        .ok_or(FamilyError::IdenticalSets)?;
    let plain_side = if n_set.contains(&i) { m_set } else { n_set };
    let schedule = singleton_term_schedule(plain_side, i);
    let find = |name: String| {
        schedule
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.term.clone())
            .expect("schedule reaches the requested index")
    };
    let t_l = find(format!("L{i}"));
    let t_u_prev = find(format!("U{}", i - 1));
    let t_a = find("A".to_string());
    let term = Term::and(
        Term::dia(t_l.clone()),
        Term::not(or3(t_a, t_l, t_u_prev)),
    );
    Ok((i, term))
}
