use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::perm::Permutation;
use crate::slp::{Instruction, StraightLineProgram};
use crate::{Error, Result};

/// A freely reduced element of the free group `F_n`.
///
/// Letters are 0-based internally (`x1` is letter 0). Syllables are
/// `(letter, exponent)` pairs with nonzero exponents and no two adjacent
/// syllables on the same letter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    arity: usize,
    syllables: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity(arity: usize) -> Self {
        Word {
            arity,
            syllables: Vec::new(),
        }
    }

    /// The single letter `x_{letter+1}`.
    pub fn letter(arity: usize, letter: usize) -> Self {
        assert!(letter < arity, "letter out of range");
        Word {
            arity,
            syllables: alloc::vec![(letter, 1)],
        }
    }

    /// Builds a word from arbitrary syllables and reduces it.
    pub fn from_syllables(arity: usize, syllables: Vec<(usize, i64)>) -> Result<Self> {
        if let Some(&(l, _)) = syllables.iter().find(|(l, _)| *l >= arity) {
            return Err(Error::Precondition(alloc::format!(
                "letter x{} exceeds arity {arity}",
                l + 1
            )));
        }
        Ok(Word { arity, syllables }.reduce())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length: the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Freely reduced normal form.
    pub fn reduce(self) -> Word {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.syllables.len());
        for (l, e) in self.syllables {
            push_syllable(&mut out, l, e);
        }
        Word {
            arity: self.arity,
            syllables: out,
        }
    }

    /// The same word viewed in `F_arity` for a larger arity.
    pub fn with_arity(&self, arity: usize) -> Result<Word> {
        if arity < self.arity && self.syllables.iter().any(|(l, _)| *l >= arity) {
            return Err(Error::Precondition(alloc::format!(
                "word uses letters beyond arity {arity}"
            )));
        }
        Ok(Word {
            arity,
            syllables: self.syllables.clone(),
        })
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.syllables.clone();
        for &(l, e) in &other.syllables {
            push_syllable(&mut out, l, e);
        }
        Word {
            arity: self.arity.max(other.arity),
            syllables: out,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            arity: self.arity,
            syllables: self.syllables.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    /// `self^k`, computed through the cyclically reduced core.
    pub fn pow(&self, k: i64) -> Word {
        self.pow_capped(k, u64::MAX).expect("uncapped power")
    }

    pub(crate) fn pow_capped(&self, k: i64, cap: u64) -> Option<Word> {
        if k == 0 || self.is_identity() {
            return Some(Word::identity(self.arity));
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let k = k.unsigned_abs();
        let (prefix, core) = base.cyclic_split();
        let prefix_len: u64 = prefix.iter().map(|(_, e)| e.unsigned_abs()).sum();
        let core_len: u64 = core.iter().map(|(_, e)| e.unsigned_abs()).sum();
        let total = (core_len as u128) * (k as u128) + 2 * prefix_len as u128;
        if total > cap as u128 {
            return None;
        }
        let mut out = prefix.clone();
        if core.len() == 1 {
            let (l, e) = core[0];
            push_syllable(&mut out, l, e.checked_mul(k as i64)?);
        } else {
            for _ in 0..k {
                for &(l, e) in &core {
                    push_syllable(&mut out, l, e);
                }
            }
        }
        for &(l, e) in prefix.iter().rev() {
            push_syllable(&mut out, l, -e);
        }
        Some(Word {
            arity: self.arity,
            syllables: out,
        })
    }

    /// Splits a reduced word as `u · c · u⁻¹` with `c` cyclically reduced.
    fn cyclic_split(&self) -> (Vec<(usize, i64)>, Vec<(usize, i64)>) {
        let s = &self.syllables;
        let mut lo = 0;
        let mut hi = s.len();
        let mut prefix = Vec::new();
        while hi - lo >= 2 && s[lo].0 == s[hi - 1].0 {
            let (l, a) = s[lo];
            let b = s[hi - 1].1;
            if a + b == 0 {
                prefix.push((l, a));
                lo += 1;
                hi -= 1;
            } else {
                // x^a v x^b = x^{-b} (x^{a+b} v) x^b
                prefix.push((l, -b));
                let mut core = alloc::vec![(l, a + b)];
                core.extend_from_slice(&s[lo + 1..hi - 1]);
                return (prefix, core);
            }
        }
        (prefix, s[lo..hi].to_vec())
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Letters occurring with nonzero exponent (0-based).
    pub fn distinct_letters(&self) -> BTreeSet<usize> {
        self.syllables.iter().map(|(l, _)| *l).collect()
    }

    /// Substitutes `tuple[i]` for letter `i` and multiplies left to right.
    pub fn evaluate(&self, tuple: &[Permutation]) -> Result<Permutation> {
        let degree = check_tuple(self.arity, tuple)?;
        let mut acc = Permutation::identity(degree);
        for &(l, e) in &self.syllables {
            acc = &acc * &tuple[l].pow(e);
        }
        Ok(acc)
    }

    /// A straight-line program computing the same word.
    pub fn to_slp(&self) -> StraightLineProgram {
        let mut instructions = Vec::new();
        let mut inputs = alloc::vec![None; self.arity];
        let mut acc: Option<usize> = None;
        for &(l, e) in &self.syllables {
            let input = *inputs[l].get_or_insert_with(|| {
                instructions.push(Instruction::Input(l));
                instructions.len() - 1
            });
            let factor = if e == 1 {
                input
            } else {
                instructions.push(Instruction::Pow(input, e));
                instructions.len() - 1
            };
            acc = Some(match acc {
                None => factor,
                Some(a) => {
                    instructions.push(Instruction::Mul(a, factor));
                    instructions.len() - 1
                }
            });
        }
        StraightLineProgram::from_parts(self.arity, instructions, acc)
            .expect("well-formed by construction")
    }

    /// Parses the word grammar
    /// `word := term* ; term := atom ("^" int)? ; atom := letter | "(" word ")" | "[" word "," word "]"`.
    ///
    /// The arity is the largest letter index used (at least 1).
    pub fn parse(text: &str) -> Result<Word> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            max_letter: 0,
        };
        let w = parser.word()?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        let arity = parser.max_letter.max(1);
        Ok(Word {
            arity,
            syllables: w.syllables,
        })
    }

    /// Parses a word and places it in `F_arity`, rejecting letters beyond `arity`.
    pub fn parse_with_arity(text: &str, arity: usize) -> Result<Word> {
        let w = Word::parse(text)?;
        w.with_arity(arity)
    }
}

pub(crate) fn check_tuple(arity: usize, tuple: &[Permutation]) -> Result<usize> {
    if tuple.len() < arity {
        return Err(Error::TupleTooShort {
            arity,
            len: tuple.len(),
        });
    }
    let degree = tuple.first().map(|p| p.degree()).unwrap_or(0);
    if let Some(p) = tuple.iter().find(|p| p.degree() != degree) {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: p.degree(),
        });
    }
    Ok(degree)
}

fn push_syllable(out: &mut Vec<(usize, i64)>, l: usize, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.0 == l => {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((l, e)),
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    max_letter: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::identity(0);
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let t = self.term()?;
            acc = acc.mul(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                let start = self.pos;
                let n = self.digits()?;
                if n == 0 {
                    self.pos = start;
                    return Err(self.error("letters are numbered from x1"));
                }
                self.max_letter = self.max_letter.max(n);
                Ok(Word {
                    arity: n,
                    syllables: alloc::vec![(n - 1, 1)],
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&a, &b))
            }
            Some(_) => Err(self.error("expected a letter, '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&alloc::format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut v: usize = 0;
        while let Some(&c) = self.bytes.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as usize))
                .ok_or_else(|| self.error("number too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        Ok(v)
    }

    fn int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let v = self.digits()?;
        let v = i64::try_from(v).map_err(|_| self.error("exponent too large"))?;
        Ok(if neg { -v } else { v })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(l, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", l + 1)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "Word<F{}>(1)", self.arity)
        } else {
            write!(f, "Word<F{}>({})", self.arity, self)
        }
    }
}

impl core::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl From<&Word> for String {
    fn from(w: &Word) -> String {
        w.to_string()
    }
}
