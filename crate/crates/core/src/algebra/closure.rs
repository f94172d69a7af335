//! Generated subalgebras of a frame's complex algebra.
//!
//! [`closure`] grows the smallest family of subsets containing the
//! generators that is closed under complement, binary union, and `diamond`
//! (hence, by De Morgan, under intersection and `box` as well). Every
//! element remembers how it was first derived, so a defining term over the
//! generators can be reproduced for any member.

use std::collections::HashMap;

use crate::algebra::term::Term;
use crate::algebra::AlgebraError;
use crate::frames::{Frame, Subset};

/// Default cap on the number of elements a closure may reach.
pub const DEFAULT_CLOSURE_BUDGET: usize = 1 << 20;

/// How an element of an [`AlgebraSet`] was first obtained. Operands are
/// indices of earlier elements, so derivations always unfold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Derivation {
    Zero,
    One,
    Generator(usize),
    Not(usize),
    Dia(usize),
    Union(usize, usize),
}

/// A generated subalgebra: its elements in discovery order, plus enough
/// provenance to rebuild a witness term for each.
#[derive(Debug, Clone)]
pub struct AlgebraSet {
    width: usize,
    elems: Vec<Subset>,
    derivs: Vec<Derivation>,
    index: HashMap<u128, usize>,
    generators: Vec<(String, Subset)>,
}

impl AlgebraSet {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Number of vertices of the underlying frame.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Elements in discovery order (zero and one first, then generators).
    pub fn elements(&self) -> &[Subset] {
        &self.elems
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.position(s).is_some()
    }

    pub fn position(&self, s: &Subset) -> Option<usize> {
        if s.width() != self.width {
            return None;
        }
        self.index.get(&s.bits()).copied()
    }

    /// Generator names (`x0`, `x1`, …) paired with their subsets, in the
    /// order they were supplied to [`closure`].
    pub fn generators(&self) -> &[(String, Subset)] {
        &self.generators
    }

    /// Environment binding each generator name to its subset, suitable for
    /// [`crate::algebra::eval_term`].
    pub fn witness_env(&self) -> HashMap<String, Subset> {
        self.generators.iter().cloned().collect()
    }

    /// A term over the generators that evaluates to element `i`.
    pub fn witness_term(&self, i: usize) -> Term {
        match self.derivs[i] {
            Derivation::Zero => Term::Zero,
            Derivation::One => Term::One,
            Derivation::Generator(k) => Term::var(&self.generators[k].0),
            Derivation::Not(a) => Term::not(self.witness_term(a)),
            Derivation::Dia(a) => Term::dia(self.witness_term(a)),
            Derivation::Union(a, b) => Term::or(self.witness_term(a), self.witness_term(b)),
        }
    }

    /// Insert `bits` if new; `Ok(true)` means growth happened.
    fn push(&mut self, bits: u128, deriv: Derivation, budget: usize) -> Result<bool, AlgebraError> {
        if self.index.contains_key(&bits) {
            return Ok(false);
        }
        if self.elems.len() == budget {
            return Err(AlgebraError::ClosureBudgetExceeded { budget });
        }
        self.index.insert(bits, self.elems.len());
        self.elems.push(Subset::from_bits(self.width, bits));
        self.derivs.push(deriv);
        Ok(true)
    }
}

/// Subalgebra of the complex algebra of `frame` generated by `generators`.
/// `budget` caps the element count (default [`DEFAULT_CLOSURE_BUDGET`]);
/// exceeding it aborts with [`AlgebraError::ClosureBudgetExceeded`].
pub fn closure(
    frame: &Frame,
    generators: &[Subset],
    budget: Option<usize>,
) -> Result<AlgebraSet, AlgebraError> {
    let n = frame.n();
    let budget = budget.unwrap_or(DEFAULT_CLOSURE_BUDGET);
    let mut set = AlgebraSet {
        width: n,
        elems: Vec::new(),
        derivs: Vec::new(),
        index: HashMap::new(),
        generators: generators
            .iter()
            .enumerate()
            .map(|(k, s)| {
                assert_eq!(s.width(), n, "generator width must match frame size");
                (format!("x{k}"), *s)
            })
            .collect(),
    };

    set.push(Subset::empty(n).bits(), Derivation::Zero, budget)?;
    set.push(Subset::full(n).bits(), Derivation::One, budget)?;
    for (k, s) in generators.iter().enumerate() {
        set.push(s.bits(), Derivation::Generator(k), budget)?;
    }

    // Breadth-first saturation: each element, once reached, contributes its
    // complement, its diamond, and its union with every element up to and
    // including itself. Unions with later elements are contributed when the
    // later element is processed, so all pairs are covered.
    let mut i = 0;
    while i < set.elems.len() {
        let bits = set.elems[i].bits();
        set.push((!set.elems[i]).bits(), Derivation::Not(i), budget)?;
        set.push(
            super::diamond(frame, &set.elems[i]).bits(),
            Derivation::Dia(i),
            budget,
        )?;
        for j in 0..=i {
            let union = bits | set.elems[j].bits();
            set.push(union, Derivation::Union(i, j), budget)?;
        }
        i += 1;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{diamond, eval_term};
    use crate::frames::Frame;

    fn check_is_closed(frame: &Frame, set: &AlgebraSet) {
        for a in set.elements() {
            assert!(set.contains(&!*a), "missing complement of {a:?}");
            assert!(set.contains(&diamond(frame, a)), "missing diamond of {a:?}");
            for b in set.elements() {
                assert!(set.contains(&(*a | *b)), "missing union of {a:?}, {b:?}");
            }
        }
    }

    fn check_witnesses(frame: &Frame, set: &AlgebraSet) {
        let env = set.witness_env();
        for (i, s) in set.elements().iter().enumerate() {
            let t = set.witness_term(i);
            assert_eq!(eval_term(frame, &t, &env).unwrap(), *s, "witness {t} mismatch");
        }
    }

    #[test]
    fn edge_closure_from_one_endpoint_is_the_whole_powerset() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let set = closure(&k2, &[Subset::singleton(2, 0)], None).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.contains(&Subset::empty(2)));
        assert!(set.contains(&Subset::full(2)));
        assert!(set.contains(&Subset::singleton(2, 0)));
        assert!(set.contains(&Subset::singleton(2, 1)));
        check_is_closed(&k2, &set);
        check_witnesses(&k2, &set);
    }

    #[test]
    fn empty_generator_list_yields_zero_and_one() {
        let k1 = Frame::from_edges(1, &[]).unwrap();
        let set = closure(&k1, &[], None).unwrap();
        assert_eq!(set.len(), 2);

        let p3 = Frame::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let set = closure(&p3, &[], None).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.elements(), &[Subset::empty(3), Subset::full(3)]);
    }

    #[test]
    fn path_end_generates_the_full_powerset() {
        let p3 = Frame::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let set = closure(&p3, &[Subset::singleton(3, 0)], None).unwrap();
        assert_eq!(set.len(), 8);
        check_is_closed(&p3, &set);
        check_witnesses(&p3, &set);
    }

    #[test]
    fn duplicate_generators_collapse() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let s = Subset::singleton(2, 0);
        let set = closure(&k2, &[s, s], None).unwrap();
        assert_eq!(set.len(), 4);
        // Both names still evaluate, even though x1 never appears in a witness.
        assert_eq!(set.generators().len(), 2);
        check_witnesses(&k2, &set);
    }

    #[test]
    fn budget_is_enforced() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let err = closure(&k2, &[Subset::singleton(2, 0)], Some(3)).unwrap_err();
        assert_eq!(err, AlgebraError::ClosureBudgetExceeded { budget: 3 });
        // The exact budget needed succeeds.
        assert!(closure(&k2, &[Subset::singleton(2, 0)], Some(4)).is_ok());
    }

    #[test]
    fn positions_report_discovery_order() {
        let k2 = Frame::from_edges(2, &[(0, 1)]).unwrap();
        let set = closure(&k2, &[Subset::singleton(2, 0)], None).unwrap();
        assert_eq!(set.position(&Subset::empty(2)), Some(0));
        assert_eq!(set.position(&Subset::full(2)), Some(1));
        assert_eq!(set.position(&Subset::singleton(2, 0)), Some(2));
        assert_eq!(set.position(&Subset::singleton(2, 1)), Some(3));
        let p3 = Subset::singleton(3, 0);
        assert_eq!(set.position(&p3), None); // width mismatch is just "absent"
    }
}
