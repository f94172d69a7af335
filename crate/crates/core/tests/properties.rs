//! Randomized invariants over frames, subsets, terms, and partitions.

use std::collections::HashSet;

use proptest::prelude::*;

use ktb_core::algebra::term::{eval_term, Term};
use ktb_core::algebra::{box_, closure, diamond, dia_n, gamma};
use ktb_core::family::{build_truncation, FamilySpec};
use ktb_core::frames::{canonical_form, decode_graph6, encode_graph6, Frame, Subset};
use ktb_core::morphisms::{
    is_bounded_morphism, is_stable_partition, k2_partition, quotient, Partition,
};

/// Any frame on 1..=max_n vertices, via independent coin flips per edge slot.
fn arb_frame(max_n: usize) -> impl Strategy<Value = Frame> {
    (1..=max_n).prop_flat_map(|n| {
        let slots = n * (n.saturating_sub(1)) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |include| {
            let mut edges = Vec::new();
            let mut it = include.into_iter();
            for u in 0..n {
                for v in (u + 1)..n {
                    if it.next().expect("one flag per slot") {
                        edges.push((u, v));
                    }
                }
            }
            Frame::from_edges(n, &edges).expect("generated edges are in range")
        })
    })
}

/// A frame together with one subset of its vertices.
fn frame_and_subset(max_n: usize) -> impl Strategy<Value = (Frame, Subset)> {
    arb_frame(max_n).prop_flat_map(|frame| {
        let n = frame.n();
        (Just(frame), 0..(1u128 << n)).prop_map(move |(frame, bits)| {
            let s = Subset::from_bits(frame.n(), bits);
            (frame, s)
        })
    })
}

/// A frame together with two subsets of its vertices.
fn frame_and_two_subsets(max_n: usize) -> impl Strategy<Value = (Frame, Subset, Subset)> {
    arb_frame(max_n).prop_flat_map(|frame| {
        let n = frame.n();
        (Just(frame), 0..(1u128 << n), 0..(1u128 << n)).prop_map(move |(frame, a, b)| {
            let x = Subset::from_bits(frame.n(), a);
            let y = Subset::from_bits(frame.n(), b);
            (frame, x, y)
        })
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        "[a-z][a-z0-9_]{0,3}".prop_map(Term::var),
        Just(Term::One),
        Just(Term::Zero),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::not),
            inner.clone().prop_map(Term::dia),
            inner.clone().prop_map(Term::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::or(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn graph6_round_trips((frame, _) in frame_and_subset(12)) {
        let text = encode_graph6(&frame).expect("fits the format");
        let back = decode_graph6(&text).expect("own output decodes");
        prop_assert_eq!(back, frame.without_labels());
    }

    #[test]
    fn canonical_form_ignores_vertex_order(
        frame in arb_frame(7),
        seed in any::<u64>(),
    ) {
        // Derive a permutation from the seed with a splitmix-style scramble.
        let n = frame.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = frame.permuted(&perm);
        prop_assert_eq!(
            canonical_form(&frame).expect("small frame"),
            canonical_form(&shuffled).expect("small frame")
        );
    }

    #[test]
    fn diamond_is_additive((frame, x, y) in frame_and_two_subsets(10)) {
        let joint = diamond(&frame, &x.union(y));
        let split = diamond(&frame, &x).union(diamond(&frame, &y));
        prop_assert_eq!(joint, split);
    }

    #[test]
    fn diamond_is_extensive((frame, x) in frame_and_subset(10)) {
        prop_assert!(x.is_subset_of(&diamond(&frame, &x)));
    }

    #[test]
    fn diamond_is_monotone((frame, x, y) in frame_and_two_subsets(10)) {
        let smaller = diamond(&frame, &x.intersect(y));
        prop_assert!(smaller.is_subset_of(&diamond(&frame, &x)));
    }

    #[test]
    fn box_is_dual_to_diamond((frame, x) in frame_and_subset(10)) {
        prop_assert_eq!(box_(&frame, &x), diamond(&frame, &x.complement()).complement());
    }

    #[test]
    fn diamond_is_self_conjugate((frame, x, y) in frame_and_two_subsets(10)) {
        let left = x.intersect(diamond(&frame, &y)).is_empty();
        let right = diamond(&frame, &x).intersect(y).is_empty();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn gamma_is_idempotent((frame, x) in frame_and_subset(10)) {
        let once = gamma(&frame, &x);
        prop_assert_eq!(gamma(&frame, &once), once.clone());
        // And gamma is a closure operator between x and dia x.
        prop_assert!(x.is_subset_of(&once));
        prop_assert!(once.is_subset_of(&diamond(&frame, &x)));
    }

    #[test]
    fn dia_n_composes((frame, x) in frame_and_subset(8), a in 0usize..3, b in 0usize..3) {
        let stepwise = dia_n(&frame, &dia_n(&frame, &x, a), b);
        prop_assert_eq!(dia_n(&frame, &x, a + b), stepwise);
    }

    #[test]
    fn term_text_round_trips(term in arb_term()) {
        let text = term.to_string();
        let back: Term = text.parse().expect("own rendering parses");
        prop_assert_eq!(back, term);
    }

    #[test]
    fn term_json_round_trips(term in arb_term()) {
        let text = serde_json::to_string(&term).expect("serializes");
        let back: Term = serde_json::from_str(&text).expect("own json parses");
        prop_assert_eq!(back, term);
    }

    #[test]
    fn stability_matches_bounded_morphism_onto_quotient(
        frame in arb_frame(7),
        raw in proptest::collection::vec(0usize..7, 1..=7),
    ) {
        let mut assign = raw;
        assign.resize(frame.n(), 0);
        let partition = Partition::from_assignment(&assign).expect("nonempty");
        // Build the edge-induced image by hand, since `quotient` refuses
        // unstable partitions: projection onto this image is a bounded
        // morphism exactly when the partition is stable.
        let mut edges = Vec::new();
        for (u, v) in frame.edges() {
            let (a, b) = (partition.block_of(u), partition.block_of(v));
            if a != b {
                edges.push((a, b));
            }
        }
        let image = Frame::from_edges(partition.block_count(), &edges).expect("ids in range");
        let stable = is_stable_partition(&frame, &partition);
        let bounded = is_bounded_morphism(&frame, &image, partition.assignment())
            .expect("assignment maps into the image");
        prop_assert_eq!(stable, bounded);
        if stable {
            prop_assert_eq!(quotient(&frame, &partition).expect("stable"), image);
        }
    }

    #[test]
    fn closure_is_closed_under_the_operations((frame, x) in frame_and_subset(5)) {
        let set = closure(&frame, &[x], None).expect("budget is ample");
        let have: HashSet<u128> = set.elements().iter().map(Subset::bits).collect();
        for e in set.elements() {
            prop_assert!(have.contains(&e.complement().bits()));
            prop_assert!(have.contains(&diamond(&frame, e).bits()));
            for f in set.elements() {
                prop_assert!(have.contains(&e.union(*f).bits()));
            }
        }
        // Every element's recorded witness term really evaluates to it.
        let env = set.witness_env();
        for (i, e) in set.elements().iter().enumerate() {
            let got = eval_term(&frame, &set.witness_term(i), &env).expect("witness evaluates");
            prop_assert_eq!(&got, e);
        }
    }

    #[test]
    fn family_fold_is_stable_with_edge_quotient(
        p in 2usize..=8,
        picks in proptest::collection::vec(any::<bool>(), 4),
    ) {
        let members: Vec<usize> = picks
            .iter()
            .enumerate()
            .filter_map(|(i, &keep)| keep.then_some(2 * (i + 1)))
            .collect();
        let spec = FamilySpec::new(members, p).expect("even members");
        let frame = build_truncation(&spec);
        let partition = k2_partition(&frame).expect("members always fold");
        prop_assert!(is_stable_partition(&frame, &partition));
        let image = quotient(&frame, &partition).expect("widths match");
        prop_assert_eq!(image.n(), 2);
        prop_assert_eq!(image.edge_count(), 1);
    }
}
