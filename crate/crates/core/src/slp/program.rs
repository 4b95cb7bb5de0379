use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::Permutation;
use crate::slp::word::check_tuple;
use crate::slp::Word;
use crate::{Error, Result};

/// One step of a straight-line program. References point to strictly earlier
/// instructions; `Input` letters are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Input(usize),
    Mul(usize, usize),
    Inv(usize),
    Pow(usize, i64),
    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    Comm(usize, usize),
}

impl Instruction {
    pub(crate) fn refs(&self) -> (Option<usize>, Option<usize>) {
        match *self {
            Instruction::Input(_) => (None, None),
            Instruction::Mul(a, b) | Instruction::Comm(a, b) => (Some(a), Some(b)),
            Instruction::Inv(a) | Instruction::Pow(a, _) => (Some(a), None),
        }
    }
}

/// A compressed word: a DAG of group operations over the letters `x1..xn`.
///
/// An absent output denotes the identity word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StraightLineProgram {
    arity: usize,
    instructions: Vec<Instruction>,
    output: Option<usize>,
}

/// Result of expanding an SLP into a flat word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    Word(Word),
    /// The reduced word (or an intermediate value) is longer than the cap.
    Overflow,
}

impl Expansion {
    pub fn word(&self) -> Option<&Word> {
        match self {
            Expansion::Word(w) => Some(w),
            Expansion::Overflow => None,
        }
    }
}

/// Letters of a word or SLP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterSet {
    /// 0-based letter indices.
    pub letters: BTreeSet<usize>,
    /// Set when expansion overflowed and `letters` are merely the reachable inputs.
    pub upper_bound_only: bool,
}

impl StraightLineProgram {
    pub fn identity(arity: usize) -> Self {
        StraightLineProgram {
            arity,
            instructions: Vec::new(),
            output: None,
        }
    }

    pub fn from_parts(
        arity: usize,
        instructions: Vec<Instruction>,
        output: Option<usize>,
    ) -> Result<Self> {
        for (i, ins) in instructions.iter().enumerate() {
            if let Instruction::Input(l) = ins {
                if *l >= arity {
                    return Err(Error::Precondition(alloc::format!(
                        "instruction {i}: input x{} exceeds arity {arity}",
                        l + 1
                    )));
                }
            }
            let (a, b) = ins.refs();
            for r in [a, b].into_iter().flatten() {
                if r >= i {
                    return Err(Error::Precondition(alloc::format!(
                        "instruction {i} references {r}, which is not strictly earlier"
                    )));
                }
            }
        }
        if let Some(o) = output {
            if o >= instructions.len() {
                return Err(Error::Precondition(alloc::format!(
                    "output {o} out of range"
                )));
            }
        }
        Ok(StraightLineProgram {
            arity,
            instructions,
            output,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn output(&self) -> Option<usize> {
        self.output
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.output.is_none()
    }

    /// Same program viewed over a larger alphabet.
    pub fn with_arity(&self, arity: usize) -> Result<Self> {
        Self::from_parts(arity, self.instructions.clone(), self.output)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut live = vec![false; self.instructions.len()];
        if let Some(o) = self.output {
            live[o] = true;
        }
        for i in (0..self.instructions.len()).rev() {
            if !live[i] {
                continue;
            }
            let (a, b) = self.instructions[i].refs();
            for r in [a, b].into_iter().flatten() {
                live[r] = true;
            }
        }
        live
    }

    /// Input letters reachable from the output.
    pub fn reachable_letters(&self) -> BTreeSet<usize> {
        let live = self.reachable();
        self.instructions
            .iter()
            .zip(live)
            .filter_map(|(ins, l)| match ins {
                Instruction::Input(x) if l => Some(*x),
                _ => None,
            })
            .collect()
    }

    /// Evaluates the program on a tuple of permutations.
    pub fn evaluate(&self, tuple: &[Permutation]) -> Result<Permutation> {
        let degree = check_tuple(self.arity, tuple)?;
        let Some(out) = self.output else {
            return Ok(Permutation::identity(degree));
        };
        let live = self.reachable();
        let mut values: Vec<Option<Permutation>> = vec![None; self.instructions.len()];
        for (i, ins) in self.instructions.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let get = |r: usize| values[r].as_ref().expect("reachable operand");
            let v = match *ins {
                Instruction::Input(l) => tuple[l].clone(),
                Instruction::Mul(a, b) => get(a) * get(b),
                Instruction::Inv(a) => get(a).inverse(),
                Instruction::Pow(a, k) => get(a).pow(k),
                Instruction::Comm(a, b) => Permutation::commutator(get(a), get(b)),
            };
            values[i] = Some(v);
        }
        Ok(values[out].take().expect("output evaluated"))
    }

    /// Expands to a reduced flat word, or reports overflow past `cap` letters.
    pub fn expand(&self, cap: usize) -> Expansion {
        let Some(out) = self.output else {
            return Expansion::Word(Word::identity(self.arity));
        };
        let cap = cap as u64;
        let live = self.reachable();
        let mut last_use = vec![0usize; self.instructions.len()];
        for (i, ins) in self.instructions.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let (a, b) = ins.refs();
            for r in [a, b].into_iter().flatten() {
                last_use[r] = i;
            }
        }
        let mut words: Vec<Option<Word>> = vec![None; self.instructions.len()];
        for (i, ins) in self.instructions.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let get = |r: usize| words[r].as_ref().expect("reachable operand");
            let v = match *ins {
                Instruction::Input(l) => Word::letter(self.arity, l),
                Instruction::Mul(a, b) => {
                    if get(a).len() + get(b).len() > cap.saturating_mul(2) {
                        return Expansion::Overflow;
                    }
                    get(a).mul(get(b))
                }
                Instruction::Inv(a) => get(a).inverse(),
                Instruction::Pow(a, k) => match get(a).pow_capped(k, cap) {
                    Some(w) => w,
                    None => return Expansion::Overflow,
                },
                Instruction::Comm(a, b) => {
                    if 2 * (get(a).len() + get(b).len()) > cap.saturating_mul(2) {
                        return Expansion::Overflow;
                    }
                    Word::commutator(get(a), get(b))
                }
            };
            if v.len() > cap {
                return Expansion::Overflow;
            }
            words[i] = Some(v);
            let (a, b) = ins.refs();
            for r in [a, b].into_iter().flatten() {
                if last_use[r] == i && r != out {
                    words[r] = None;
                }
            }
        }
        Expansion::Word(words[out].take().expect("output expanded"))
    }

    /// Letters surviving reduction of the expanded word; falls back to reachable
    /// inputs (flagged) when the expansion overflows `cap`.
    pub fn distinct_letters(&self, cap: usize) -> LetterSet {
        match self.expand(cap) {
            Expansion::Word(w) => LetterSet {
                letters: w.distinct_letters(),
                upper_bound_only: false,
            },
            Expansion::Overflow => LetterSet {
                letters: self.reachable_letters(),
                upper_bound_only: true,
            },
        }
    }

    /// Keeps only instructions reachable from the output, renumbered.
    pub fn compact(&self) -> StraightLineProgram {
        let mut b = SlpBuilder::new(self.arity);
        let inputs: Vec<Tag> = (0..self.arity).map(Tag::Letter).collect();
        let out = b.inline(self, &inputs);
        b.extract(out)
    }
}

/// Reference to a value under construction in an [`SlpBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Identity,
    /// A letter whose `Input` instruction is emitted lazily.
    Letter(usize),
    Node(usize),
}

/// Append-only arena of SLP instructions with identity folding.
///
/// Stabilizer chains and tagged subgroups keep one arena and refer to values
/// by [`Tag`]; [`SlpBuilder::extract`] produces a compact standalone program.
#[derive(Clone, Debug)]
pub struct SlpBuilder {
    arity: usize,
    instructions: Vec<Instruction>,
    inputs: Vec<Option<usize>>,
}

impl SlpBuilder {
    pub fn new(arity: usize) -> Self {
        SlpBuilder {
            arity,
            instructions: Vec::new(),
            inputs: vec![None; arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Adds a new letter and returns its tag.
    pub fn push_letter(&mut self) -> Tag {
        self.arity += 1;
        self.inputs.push(None);
        Tag::Letter(self.arity - 1)
    }

    pub fn input(&self, letter: usize) -> Tag {
        assert!(letter < self.arity);
        Tag::Letter(letter)
    }

    fn node(&mut self, t: Tag) -> Option<usize> {
        match t {
            Tag::Identity => None,
            Tag::Node(i) => Some(i),
            Tag::Letter(l) => Some(*self.inputs[l].get_or_insert_with(|| {
                self.instructions.push(Instruction::Input(l));
                self.instructions.len() - 1
            })),
        }
    }

    fn push(&mut self, ins: Instruction) -> Tag {
        self.instructions.push(ins);
        Tag::Node(self.instructions.len() - 1)
    }

    pub fn mul(&mut self, a: Tag, b: Tag) -> Tag {
        match (self.node(a), self.node(b)) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) => self.push(Instruction::Mul(x, y)),
        }
    }

    pub fn inv(&mut self, a: Tag) -> Tag {
        match self.node(a) {
            None => Tag::Identity,
            Some(x) => {
                if let Instruction::Inv(y) = self.instructions[x] {
                    return Tag::Node(y);
                }
                self.push(Instruction::Inv(x))
            }
        }
    }

    pub fn pow(&mut self, a: Tag, k: i64) -> Tag {
        match (self.node(a), k) {
            (None, _) | (_, 0) => Tag::Identity,
            (Some(_), 1) => a,
            (Some(x), _) => self.push(Instruction::Pow(x, k)),
        }
    }

    pub fn comm(&mut self, a: Tag, b: Tag) -> Tag {
        match (self.node(a), self.node(b)) {
            (Some(x), Some(y)) => self.push(Instruction::Comm(x, y)),
            _ => Tag::Identity,
        }
    }

    /// `g⁻¹ k g`.
    pub fn conj(&mut self, k: Tag, g: Tag) -> Tag {
        let gi = self.inv(g);
        let t = self.mul(gi, k);
        self.mul(t, g)
    }

    /// Inlines `slp`, substituting `inputs[l]` for its letter `l`.
    pub fn inline(&mut self, slp: &StraightLineProgram, inputs: &[Tag]) -> Tag {
        assert!(inputs.len() >= slp.arity, "not enough inputs to inline");
        let Some(out) = slp.output else {
            return Tag::Identity;
        };
        let live = slp.reachable();
        let mut map = vec![Tag::Identity; slp.instructions.len()];
        for (i, ins) in slp.instructions.iter().enumerate() {
            if !live[i] {
                continue;
            }
            map[i] = match *ins {
                Instruction::Input(l) => inputs[l],
                Instruction::Mul(a, b) => self.mul(map[a], map[b]),
                Instruction::Inv(a) => self.inv(map[a]),
                Instruction::Pow(a, k) => self.pow(map[a], k),
                Instruction::Comm(a, b) => self.comm(map[a], map[b]),
            };
        }
        map[out]
    }

    /// Copies the value `tag` of this arena into `target`, substituting
    /// `map[l]` for letter `l`. Shared nodes are translated once via `memo`.
    pub fn translate(
        &self,
        tag: Tag,
        target: &mut SlpBuilder,
        map: &[Tag],
        memo: &mut alloc::collections::BTreeMap<usize, Tag>,
    ) -> Tag {
        let root = match tag {
            Tag::Identity => return Tag::Identity,
            Tag::Letter(l) => return map[l],
            Tag::Node(r) => r,
        };
        let mut needed = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if memo.contains_key(&i) || !needed.insert(i) {
                continue;
            }
            let (a, b) = self.instructions[i].refs();
            stack.extend([a, b].into_iter().flatten());
        }
        for i in needed {
            let m = |x: usize| memo[&x];
            let t = match self.instructions[i] {
                Instruction::Input(l) => map[l],
                Instruction::Mul(a, b) => {
                    let (a, b) = (m(a), m(b));
                    target.mul(a, b)
                }
                Instruction::Inv(a) => {
                    let a = m(a);
                    target.inv(a)
                }
                Instruction::Pow(a, k) => {
                    let a = m(a);
                    target.pow(a, k)
                }
                Instruction::Comm(a, b) => {
                    let (a, b) = (m(a), m(b));
                    target.comm(a, b)
                }
            };
            memo.insert(i, t);
        }
        memo[&root]
    }

    /// Extracts the sub-DAG reachable from `output` as a standalone program.
    pub fn extract(&self, output: Tag) -> StraightLineProgram {
        let root = match output {
            Tag::Identity => return StraightLineProgram::identity(self.arity),
            Tag::Letter(l) => {
                return StraightLineProgram {
                    arity: self.arity,
                    instructions: vec![Instruction::Input(l)],
                    output: Some(0),
                }
            }
            Tag::Node(i) => i,
        };
        let mut live = vec![false; root + 1];
        live[root] = true;
        for i in (0..=root).rev() {
            if !live[i] {
                continue;
            }
            let (a, b) = self.instructions[i].refs();
            for r in [a, b].into_iter().flatten() {
                live[r] = true;
            }
        }
        let mut renumber = vec![usize::MAX; root + 1];
        let mut instructions = Vec::new();
        for i in 0..=root {
            if !live[i] {
                continue;
            }
            let r = |x: usize| renumber[x];
            let ins = match self.instructions[i] {
                Instruction::Input(l) => Instruction::Input(l),
                Instruction::Mul(a, b) => Instruction::Mul(r(a), r(b)),
                Instruction::Inv(a) => Instruction::Inv(r(a)),
                Instruction::Pow(a, k) => Instruction::Pow(r(a), k),
                Instruction::Comm(a, b) => Instruction::Comm(r(a), r(b)),
            };
            renumber[i] = instructions.len();
            instructions.push(ins);
        }
        StraightLineProgram {
            arity: self.arity,
            output: Some(instructions.len() - 1),
            instructions,
        }
    }
}

/// Allocation-free repeated evaluation of one program on many tuples.
///
/// Values live in one flat buffer (`degree` slots per instruction).
pub struct SlpEvaluator {
    program: StraightLineProgram,
    degree: usize,
    buf: Vec<usize>,
    mark: Vec<bool>,
    identity: Vec<usize>,
}

impl SlpEvaluator {
    pub fn new(program: &StraightLineProgram, degree: usize) -> Self {
        let program = program.compact();
        let buf = vec![0; program.instructions.len() * degree];
        SlpEvaluator {
            program,
            degree,
            buf,
            mark: vec![false; degree],
            identity: (0..degree).collect(),
        }
    }

    pub fn program(&self) -> &StraightLineProgram {
        &self.program
    }

    /// Evaluates on image lists; `tuple[l]` must have length `degree`.
    pub fn eval(&mut self, tuple: &[&[usize]]) -> &[usize] {
        let n = self.degree;
        let Some(out) = self.program.output else {
            return &self.identity;
        };
        for (i, ins) in self.program.instructions.iter().enumerate() {
            let (before, rest) = self.buf.split_at_mut(i * n);
            let dst = &mut rest[..n];
            let src = |r: usize| &before[r * n..(r + 1) * n];
            match *ins {
                Instruction::Input(l) => dst.copy_from_slice(tuple[l]),
                Instruction::Mul(a, b) => {
                    let (a, b) = (src(a), src(b));
                    for p in 0..n {
                        dst[p] = b[a[p]];
                    }
                }
                Instruction::Inv(a) => {
                    let a = src(a);
                    for p in 0..n {
                        dst[a[p]] = p;
                    }
                }
                Instruction::Pow(a, k) => {
                    let a = src(a);
                    self.mark.iter_mut().for_each(|m| *m = false);
                    for start in 0..n {
                        if self.mark[start] {
                            continue;
                        }
                        let mut len = 0usize;
                        let mut p = start;
                        loop {
                            self.mark[p] = true;
                            len += 1;
                            p = a[p];
                            if p == start {
                                break;
                            }
                        }
                        let shift = k.rem_euclid(len as i64) as usize;
                        let mut q = start;
                        for _ in 0..shift {
                            q = a[q];
                        }
                        let mut p = start;
                        for _ in 0..len {
                            dst[p] = q;
                            p = a[p];
                            q = a[q];
                        }
                    }
                }
                Instruction::Comm(a, b) => {
                    // [a,b] = (ba)⁻¹(ab): maps a[b[p]] to b[a[p]].
                    let (a, b) = (src(a), src(b));
                    for p in 0..n {
                        dst[a[b[p]]] = b[a[p]];
                    }
                }
            }
        }
        &self.buf[out * n..(out + 1) * n]
    }

    /// True when the program evaluates to the identity on `tuple`.
    pub fn satisfied_by(&mut self, tuple: &[&[usize]]) -> bool {
        self.eval(tuple).iter().enumerate().all(|(i, &p)| i == p)
    }
}
