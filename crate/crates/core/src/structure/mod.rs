//! Structural analysis of small permutation groups: normal structure,
//! just non-solvable quotients, automorphisms, maximal subgroups and
//! generating tuples.
//!
//! Everything here enumerates elements and is meant for groups of at most a
//! few thousand elements; each entry point takes an element cap.

mod automorphism;
mod elements;
mod normal;
mod quotient;
mod subgroups;

pub use automorphism::{
    aut_orbits_on_tuples, automorphism_group, automorphism_independent, AutomorphismTable,
    GroupAutomorphism, TupleOrbit,
};
pub use elements::{ElementIndex, MarkedKey};
pub use normal::{
    is_just_nonsolvable, is_simple, just_nonsolvable_quotient, minimal_normal_subgroups,
    simple_factor_decomposition,
};
pub use quotient::QuotientMap;
pub use subgroups::{generating_tuples, maximal_subgroup_count, MaximalSubgroups};
