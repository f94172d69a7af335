//! Desk-scale workbench for the modal logic KTB.
//!
//! Frames are finite simple graphs read as reflexive-symmetric Kripke frames;
//! their complex algebras are Boolean algebras of vertex subsets with the
//! possibility operator `dia X = X together with its neighbors`. The crate
//! builds the frames, evaluates modal terms, enumerates bounded-morphism
//! quotients, checks a catalog of structural facts about a two-parameter
//! family of truncations, and surveys which small graphs admit no proper
//! quotient beyond the two trivial ones.

pub mod algebra;
pub mod family;
pub mod frames;
pub mod morphisms;
pub mod search;
pub mod verify;
