//! Configurations of lines attached to marked plane conics.
//!
//! A conic with weighted markings determines a configuration of lines: the
//! chords between pairs of markings and the tangents at repeated markings,
//! counted with multiplicity. This crate computes that configuration exactly,
//! decides its GIT stability with the Hilbert–Mumford numerical criterion,
//! inverts the construction on the locus of smooth supports, and provides the
//! dual-tree combinatorics of pointed stable rational curves that feed into it.

pub mod exact_projective;
pub mod marked_conic;
pub mod moduli_maps;
pub mod reconstruction;
pub mod schema;
pub mod stability;
pub mod stable_trees;
