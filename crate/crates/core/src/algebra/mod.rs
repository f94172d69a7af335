//! Complex-algebra operations over reflexive symmetric frames.
//!
//! A frame's powerset carries the Boolean operations plus the possibility
//! operator `diamond(X) = X ∪ N(X)`; `box` is its dual. This module provides
//! those operators, term evaluation, a self-conjugacy checker, and generated
//! subalgebra closure.

pub mod closure;
pub mod term;

pub use closure::{closure, AlgebraSet, DEFAULT_CLOSURE_BUDGET};
pub use term::{eval_term, Term, TermError};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::frames::{Frame, Subset};
use crate::verify::{Mode, ModeTag, Report, Status};

/// Largest vertex count for which `check_self_conjugacy` will scan all
/// `2^n * 2^n` subset pairs.
pub const SELF_CONJUGACY_EXHAUSTIVE_MAX: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("exhaustive check over subset pairs needs n <= {max}, frame has {n} vertices (use sampled mode)")]
    ExhaustiveTooLarge { n: usize, max: usize },
    #[error("closure exceeded the element budget of {budget}")]
    ClosureBudgetExceeded { budget: usize },
}

/// `X ∪ N(X)`: the points with a neighbour in `X`, together with `X` itself
/// (frames are reflexive, every point being its own neighbour).
pub fn diamond(frame: &Frame, x: &Subset) -> Subset {
    assert_eq!(x.width(), frame.n(), "subset width must match frame size");
    Subset::from_bits(frame.n(), diamond_bits(frame, x.bits()))
}

/// Raw-bitmask version of [`diamond`], for inner loops over subset codes.
pub(crate) fn diamond_bits(frame: &Frame, bits: u128) -> u128 {
    let mut acc = bits;
    let mut rest = bits;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        acc |= frame.adjacency_bits(v);
    }
    acc
}

/// The dual operator `¬ diamond ¬`: points all of whose neighbours lie in `X`.
pub fn box_(frame: &Frame, x: &Subset) -> Subset {
    !diamond(frame, &!*x)
}

/// `diamond` iterated `k` times. Stops early once the full set is reached,
/// which `diamond` can never leave.
pub fn dia_n(frame: &Frame, x: &Subset, k: usize) -> Subset {
    let mut cur = *x;
    for _ in 0..k {
        if cur.is_full() {
            break;
        }
        cur = diamond(frame, &cur);
    }
    cur
}

/// The natural closure operator `box dia`.
pub fn gamma(frame: &Frame, x: &Subset) -> Subset {
    box_(frame, &diamond(frame, x))
}

/// Least `k` such that `dia_n(X, k)` is the full set for every nonempty `X`,
/// or `None` when no such `k` exists. Equals the diameter: the singleton
/// orbit `{v}` needs exactly the eccentricity of `v` steps, and every larger
/// set needs no more than its worst member.
pub fn simplicity_index(frame: &Frame) -> Option<usize> {
    frame.diameter()
}

/// Precomputed `diamond` of every subset of a small frame, indexed by the
/// subset's bits. Memory is `2^n` words, so callers keep `n` small.
pub(crate) fn dia_table(frame: &Frame) -> Vec<u128> {
    let n = frame.n();
    let mut table = vec![0u128; 1 << n];
    for bits in 1..(1u128 << n) as usize {
        let v = bits.trailing_zeros() as usize;
        let rest = bits & (bits - 1);
        table[bits] = table[rest] | frame.adjacency_bits(v) | (1 << v);
    }
    table
}

/// Check the self-conjugacy law `x ∧ dia y = 0  ⟺  dia x ∧ y = 0` over
/// subset pairs of `frame`, exhaustively for small frames or by seeded
/// sampling.
pub fn check_self_conjugacy(frame: &Frame, mode: Mode) -> Result<Report, AlgebraError> {
    let n = frame.n();
    let mut report = Report::new("self_conjugacy", crate::verify::frame_descriptor(frame));

    match mode {
        Mode::Exhaustive => {
            if n > SELF_CONJUGACY_EXHAUSTIVE_MAX {
                return Err(AlgebraError::ExhaustiveTooLarge {
                    n,
                    max: SELF_CONJUGACY_EXHAUSTIVE_MAX,
                });
            }
            let table = dia_table(frame);
            report.mode = ModeTag::Exhaustive;
            for x in 0..(1u128 << n) {
                let dia_x = table[x as usize];
                for y in 0..(1u128 << n) {
                    report.cases += 1;
                    let left = x & table[y as usize] == 0;
                    let right = dia_x & y == 0;
                    if left != right {
                        report.status = Status::Fail;
                        report.counterexample = Some(serde_json::json!({
                            "x": crate::verify::subset_json(frame, &Subset::from_bits(n, x)),
                            "y": crate::verify::subset_json(frame, &Subset::from_bits(n, y)),
                        }));
                        return Ok(report);
                    }
                }
            }
        }
        Mode::Sampled { seed, samples } => {
            report.mode = ModeTag::Sampled;
            report.seed = Some(seed);
            let mask = Subset::full(n).bits();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                report.cases += 1;
                let x = Subset::from_bits(n, rng.gen::<u128>() & mask);
                let y = Subset::from_bits(n, rng.gen::<u128>() & mask);
                let left = (x & diamond(frame, &y)).is_empty();
                let right = (diamond(frame, &x) & y).is_empty();
                if left != right {
                    report.status = Status::Fail;
                    report.counterexample = Some(serde_json::json!({
                        "x": crate::verify::subset_json(frame, &x),
                        "y": crate::verify::subset_json(frame, &y),
                    }));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}
