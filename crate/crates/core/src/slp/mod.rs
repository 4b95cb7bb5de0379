//! Free-group words and straight-line programs.

mod program;
mod word;

pub use program::{
    Expansion, Instruction, LetterSet, SlpBuilder, SlpEvaluator, StraightLineProgram, Tag,
};
pub use word::Word;

/// A word given either flat or as a straight-line program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordLike {
    Word(Word),
    Slp(StraightLineProgram),
}

impl WordLike {
    pub fn arity(&self) -> usize {
        match self {
            WordLike::Word(w) => w.arity(),
            WordLike::Slp(s) => s.arity(),
        }
    }

    pub fn to_slp(&self) -> StraightLineProgram {
        match self {
            WordLike::Word(w) => w.to_slp(),
            WordLike::Slp(s) => s.clone(),
        }
    }

    pub fn distinct_letters(&self, cap: usize) -> LetterSet {
        match self {
            WordLike::Word(w) => LetterSet {
                letters: w.distinct_letters(),
                upper_bound_only: false,
            },
            WordLike::Slp(s) => s.distinct_letters(cap),
        }
    }
}

impl From<Word> for WordLike {
    fn from(w: Word) -> Self {
        WordLike::Word(w)
    }
}

impl From<StraightLineProgram> for WordLike {
    fn from(s: StraightLineProgram) -> Self {
        WordLike::Slp(s)
    }
}
