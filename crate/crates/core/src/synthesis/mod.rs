//! Word synthesis: a word detecting solvability of the generated subgroup,
//! and words with a prescribed number of satisfying generating tuples.
//!
//! Both constructions follow the same shape. Tuples are mapped into a product
//! group whose coordinates are indexed by tuple classes, an element with a
//! chosen support pattern is found there, and the word is read off from its
//! straight-line program in the generators `x1, …, xn`.

mod classes;
mod solvable;
mod targeted;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::perm::Permutation;
use crate::probability::Ratio;
use crate::slp::{Expansion, StraightLineProgram, Word};

pub use classes::{classify_tuples, ClassShard, TupleClass, TupleClassifier};
pub use solvable::{
    synth_solvable_word, synth_solvable_word_from_classes, verify_solvable_word, Counterexample,
    SolvableVerifier, VerifyReport, VerifyShard,
};
pub use targeted::{quotient_obstruction_check, synth_probability_word};

/// Resource limits shared by the pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Bound on `|G|^n` for tuple enumeration.
    pub tuple: u64,
    /// Bound on naive element enumeration.
    pub oracle: usize,
    /// Bound on `|G|` for automorphism and subgroup-lattice searches.
    pub structure: usize,
    /// Bound on `|G|^L` for exact probability evaluation.
    pub exact: u64,
    /// Bound on the length of a flat word expansion.
    pub word: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            tuple: crate::DEFAULT_TUPLE_CAP,
            oracle: crate::DEFAULT_ORACLE_CAP,
            structure: crate::DEFAULT_STRUCTURE_CAP,
            exact: crate::DEFAULT_EXACT_CAP,
            word: crate::DEFAULT_WORD_CAP,
        }
    }
}

/// One tuple class as used by the solvability pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSummary {
    pub representative: Vec<Permutation>,
    pub members: u64,
    pub subgroup_order: BigUint,
    pub solvable: bool,
    /// `|φ(⟨t⟩)|` for the quotient map used on this class.
    pub quotient_order: BigUint,
    /// Whether the synthesized word vanishes on the representative.
    pub satisfied: bool,
    /// Whether `satisfied == solvable` on the representative and all samples.
    pub agrees: bool,
}

/// One Aut-orbit of generating tuples as used by the probability pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSummary {
    pub representative: Vec<Permutation>,
    pub size: usize,
    /// Whether the orbit is a coordinate of the product.
    pub selected: bool,
    /// Members of the orbit satisfying the word.
    pub satisfied: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Ratio,
    /// Only asserted when every orbit was selected.
    pub upper: Option<Ratio>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    /// `n` for the solvability word, `d` for the probability words.
    pub arity: usize,
    pub group_order: BigUint,
    pub word: StraightLineProgram,
    /// Flat form when it fits the word cap.
    pub word_flat: Option<Word>,
    pub classes: Vec<ClassSummary>,
    pub orbits: Vec<OrbitSummary>,
    pub exact: Option<Ratio>,
    pub bounds: Option<Bounds>,
    /// Satisfying generating tuples, over all of `G^d`.
    pub satisfying_generating: Option<u64>,
    /// Satisfying tuples among the selected orbits.
    pub selected_satisfying: Option<u64>,
    pub verified: bool,
    /// 0-based letters occurring in the reduced word.
    pub letters_used: Vec<usize>,
    /// Set when the expansion overflowed and `letters_used` is only an upper bound.
    pub letters_upper_bound_only: bool,
    pub notes: Vec<String>,
    /// The product the word was read from: `columns[j][i]` is the value of
    /// letter `j` at coordinate `i`.
    pub columns: Vec<Vec<Permutation>>,
    /// The element the word evaluates to on `columns`, one entry per coordinate.
    pub target: Vec<Permutation>,
}

impl SynthesisReport {
    fn new(arity: usize, group_order: BigUint, word: StraightLineProgram, word_cap: usize) -> Self {
        let word = word.compact();
        let (word_flat, letters_used, letters_upper_bound_only) = match word.expand(word_cap) {
            Expansion::Word(w) => {
                let letters = w.distinct_letters().into_iter().collect();
                (Some(w), letters, false)
            }
            Expansion::Overflow => (None, word.reachable_letters().into_iter().collect(), true),
        };
        SynthesisReport {
            arity,
            group_order,
            word,
            word_flat,
            classes: Vec::new(),
            orbits: Vec::new(),
            exact: None,
            bounds: None,
            satisfying_generating: None,
            selected_satisfying: None,
            verified: false,
            letters_used,
            letters_upper_bound_only,
            notes: Vec::new(),
            columns: Vec::new(),
            target: Vec::new(),
        }
    }
}
