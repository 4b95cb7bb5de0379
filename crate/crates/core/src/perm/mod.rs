//! Permutations, stabilizer chains and permutation groups.

mod chain;
mod group;
mod permutation;

pub use chain::{SiftResult, StabilizerChain};
pub use group::PermutationGroup;
pub use permutation::Permutation;
