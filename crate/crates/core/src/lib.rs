//! Word maps on finite permutation groups.
//!
//! This crate is `no_std` (it needs `alloc`). It contains a deterministic
//! Schreier–Sims engine whose strong generators carry straight-line programs
//! over the input generators, free-group words and straight-line programs,
//! structural analysis of small groups (automorphisms, maximal subgroups,
//! just non-solvable quotients), subdirect products of coordinate groups, and
//! two synthesis pipelines:
//!
//! * [`synthesis::synth_solvable_word`] builds `w` in `F_n` such that an
//!   `n`-tuple of `G` satisfies `w` exactly when it generates a solvable
//!   subgroup.
//! * [`synthesis::synth_probability_word`] builds words whose satisfaction
//!   count on generating tuples is prescribed, orbit by orbit.
//!
//! Every construction can be checked by exhaustive or Monte Carlo evaluation
//! through [`probability`].
//!
//! Composition convention: `a * b` applies `a` first, then `b`. Commutators
//! are `[a, b] = a⁻¹ b⁻¹ a b`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod perm;
pub mod probability;
pub mod product;
pub mod slp;
pub mod structure;
pub mod synthesis;

pub use error::{Error, Result};
pub use perm::{Permutation, PermutationGroup, StabilizerChain};
pub use slp::{Instruction, StraightLineProgram, Word};

/// Default cap for naive element enumeration.
pub const DEFAULT_ORACLE_CAP: usize = 100_000;
/// Default cap for structural brute force (automorphisms, subgroup lattice).
pub const DEFAULT_STRUCTURE_CAP: usize = 10_000;
/// Default cap on `|G|^n` for tuple enumeration.
pub const DEFAULT_TUPLE_CAP: u64 = 10_000_000;
/// Default cap on `|G|^n` for exact probability evaluation.
pub const DEFAULT_EXACT_CAP: u64 = 100_000_000;
/// Default cap on the length of expanded words.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;
