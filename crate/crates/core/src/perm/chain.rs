use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;

use crate::perm::Permutation;
use crate::slp::{SlpBuilder, StraightLineProgram, Tag};
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct StrongGen {
    perm: Permutation,
    tag: Tag,
}

#[derive(Clone, Debug)]
struct Rep {
    perm: Permutation,
    inv: Permutation,
    tag: Tag,
    inv_tag: Tag,
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Indices into the strong generator list; all of them fix the earlier base points.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    reps: Vec<Option<Rep>>,
    checked: BTreeSet<(usize, usize)>,
}

/// Outcome of sifting an element through a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiftResult {
    /// The element is in the group; the program over the input generators evaluates to it.
    Member(StraightLineProgram),
    /// The element is not in the group.
    NonMember { level: usize, residue: Permutation },
}

/// A base and strong generating set built by deterministic Schreier–Sims.
///
/// Every strong generator and transversal representative carries a [`Tag`]
/// into a shared straight-line program arena whose letters are the input
/// generators in the order they were added.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    inputs: Vec<Permutation>,
    arena: SlpBuilder,
    strong: Vec<StrongGen>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Chain of the trivial group on `degree` points.
    pub fn new(degree: usize) -> Self {
        Self::with_base_prefix(degree, &[])
    }

    /// Empty chain whose base will start with `prefix` (points may end up with trivial orbits).
    pub fn with_base_prefix(degree: usize, prefix: &[usize]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            inputs: Vec::new(),
            arena: SlpBuilder::new(0),
            strong: Vec::new(),
            levels: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        for &b in prefix {
            assert!(b < degree, "base point out of range");
            if seen.insert(b) {
                chain.push_level(b);
            }
        }
        chain
    }

    /// Builds the chain of `⟨generators⟩`.
    pub fn build(degree: usize, generators: &[Permutation]) -> Self {
        Self::build_with_base_prefix(degree, generators, &[])
    }

    pub fn build_with_base_prefix(
        degree: usize,
        generators: &[Permutation],
        prefix: &[usize],
    ) -> Self {
        let mut chain = Self::with_base_prefix(degree, prefix);
        for g in generators {
            chain.add_generator(g.clone());
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The input generators, in the order they were added (letters of every tag).
    pub fn inputs(&self) -> &[Permutation] {
        &self.inputs
    }

    pub fn arena(&self) -> &SlpBuilder {
        &self.arena
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Transversal representative at `level` mapping the base point to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<&Permutation> {
        self.levels[level].reps[point].as_ref().map(|r| &r.perm)
    }

    pub fn strong_generators(&self) -> impl Iterator<Item = &Permutation> {
        self.strong.iter().map(|s| &s.perm)
    }

    pub fn strong_generator_count(&self) -> usize {
        self.strong.len()
    }

    /// Strong generators fixing the first `level` base points, with their programs
    /// over the input generators.
    pub fn stabilizer_generators(&self, level: usize) -> Vec<(Permutation, StraightLineProgram)> {
        match self.levels.get(level) {
            None => Vec::new(),
            Some(l) => l
                .gens
                .iter()
                .map(|&i| {
                    (
                        self.strong[i].perm.clone(),
                        self.arena.extract(self.strong[i].tag),
                    )
                })
                .collect(),
        }
    }

    pub(crate) fn stabilizer_generator_tags(&self, level: usize) -> Vec<(Permutation, Tag)> {
        match self.levels.get(level) {
            None => Vec::new(),
            Some(l) => l
                .gens
                .iter()
                .map(|&i| (self.strong[i].perm.clone(), self.strong[i].tag))
                .collect(),
        }
    }

    /// Product of the fundamental orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    /// Order as `u128`, saturating on overflow.
    pub fn order_u128(&self) -> u128 {
        self.levels
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    fn push_level(&mut self, base: usize) {
        let mut reps = vec![None; self.degree];
        reps[base] = Some(Rep {
            perm: Permutation::identity(self.degree),
            inv: Permutation::identity(self.degree),
            tag: Tag::Identity,
            inv_tag: Tag::Identity,
        });
        self.levels.push(Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            reps,
            checked: BTreeSet::new(),
        });
    }

    /// Sifts from `start`; returns the residue, the drop-out level and the
    /// `(level, point)` steps taken.
    fn sift_from(
        &self,
        g: &Permutation,
        start: usize,
    ) -> (Permutation, usize, Vec<(usize, usize)>) {
        let mut h = g.clone();
        let mut steps = Vec::new();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = h.image(level.base);
            match &level.reps[beta] {
                None => return (h, i, steps),
                Some(rep) => {
                    if beta != level.base {
                        h = &h * &rep.inv;
                        steps.push((i, beta));
                    }
                }
            }
        }
        let depth = self.levels.len();
        (h, depth, steps)
    }

    fn replay_tag(&mut self, mut tag: Tag, steps: &[(usize, usize)]) -> Tag {
        for &(lvl, pt) in steps {
            let inv_tag = self.levels[lvl].reps[pt].as_ref().expect("rep").inv_tag;
            tag = self.arena.mul(tag, inv_tag);
        }
        tag
    }

    /// Adds an input generator and restores the BSGS property.
    pub fn add_generator(&mut self, g: Permutation) {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        let tag = self.arena.push_letter();
        self.inputs.push(g.clone());
        if g.is_identity() {
            return;
        }
        let (h, j, steps) = self.sift_from(&g, 0);
        if h.is_identity() {
            return;
        }
        let tag = self.replay_tag(tag, &steps);
        self.insert_strong(h, tag, j);
        self.complete_from(j);
    }

    fn insert_strong(&mut self, h: Permutation, tag: Tag, level: usize) {
        let idx = self.strong.len();
        if level == self.levels.len() {
            let b = h.first_moved().expect("nontrivial residue");
            self.push_level(b);
        }
        self.strong.push(StrongGen { perm: h, tag });
        for l in 0..=level {
            self.levels[l].gens.push(idx);
            self.extend_orbit(l);
        }
    }

    fn extend_orbit(&mut self, l: usize) {
        let mut i = 0;
        while i < self.levels[l].orbit.len() {
            let p = self.levels[l].orbit[i];
            for gi in 0..self.levels[l].gens.len() {
                let x = self.levels[l].gens[gi];
                let q = self.strong[x].perm.image(p);
                if self.levels[l].reps[q].is_some() {
                    continue;
                }
                let (perm, ptag) = {
                    let rp = self.levels[l].reps[p]
                        .as_ref()
                        .expect("orbit point has rep");
                    (&rp.perm * &self.strong[x].perm, rp.tag)
                };
                let tag = self.arena.mul(ptag, self.strong[x].tag);
                let inv_tag = self.arena.inv(tag);
                let inv = perm.inverse();
                self.levels[l].reps[q] = Some(Rep {
                    perm,
                    inv,
                    tag,
                    inv_tag,
                });
                self.levels[l].orbit.push(q);
            }
            i += 1;
        }
    }

    fn complete_from(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let l = i as usize;
            match self.find_unsifted_schreier_generator(l) {
                Some((h, tag, j)) => {
                    self.insert_strong(h, tag, j);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn find_unsifted_schreier_generator(&mut self, l: usize) -> Option<(Permutation, Tag, usize)> {
        let mut oi = 0;
        while oi < self.levels[l].orbit.len() {
            let beta = self.levels[l].orbit[oi];
            for gi in 0..self.levels[l].gens.len() {
                let x = self.levels[l].gens[gi];
                if !self.levels[l].checked.insert((beta, x)) {
                    continue;
                }
                let level = &self.levels[l];
                let xp = &self.strong[x].perm;
                let gamma = xp.image(beta);
                let u = level.reps[beta].as_ref().expect("rep");
                let v = level.reps[gamma].as_ref().expect("orbit closed");
                let s = &(&u.perm * xp) * &v.inv;
                if s.is_identity() {
                    continue;
                }
                let (h, j, steps) = self.sift_from(&s, l + 1);
                if h.is_identity() {
                    continue;
                }
                let (ut, vt) = (u.tag, v.inv_tag);
                let xt = self.strong[x].tag;
                let t = self.arena.mul(ut, xt);
                let t = self.arena.mul(t, vt);
                let tag = self.replay_tag(t, &steps);
                return Some((h, tag, j));
            }
            oi += 1;
        }
        None
    }

    fn check_degree(&self, g: &Permutation) -> Result<()> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        self.check_degree(g)?;
        Ok(self.sift_from(g, 0).0.is_identity())
    }

    /// Constructive membership: a program over the input generators, or the residue.
    pub fn sift(&self, g: &Permutation) -> Result<SiftResult> {
        self.check_degree(g)?;
        let (h, level, steps) = self.sift_from(g, 0);
        if !h.is_identity() {
            return Ok(SiftResult::NonMember { level, residue: h });
        }
        // g = u_k ⋯ u_1 where u_1 is the representative used at the first step.
        let mut arena = self.arena.clone();
        let mut tag = Tag::Identity;
        for &(lvl, pt) in steps.iter().rev() {
            let t = self.levels[lvl].reps[pt].as_ref().expect("rep").tag;
            tag = arena.mul(tag, t);
        }
        Ok(SiftResult::Member(arena.extract(tag)))
    }

    pub(crate) fn factor_tag(
        &self,
        g: &Permutation,
        arena: &mut SlpBuilder,
        map: &[Tag],
    ) -> Option<Tag> {
        let (h, _, steps) = self.sift_from(g, 0);
        if !h.is_identity() {
            return None;
        }
        let mut tag = Tag::Identity;
        let mut memo = alloc::collections::BTreeMap::new();
        for &(lvl, pt) in steps.iter().rev() {
            let t = self.levels[lvl].reps[pt].as_ref().expect("rep").tag;
            let mapped = self.translate_tag(t, arena, map, &mut memo);
            tag = arena.mul(tag, mapped);
        }
        Some(tag)
    }

    /// Translates a tag of this chain's arena into `arena`, with input letters
    /// mapped by `map`. `memo` caches translated nodes across calls.
    pub(crate) fn translate_tag(
        &self,
        tag: Tag,
        arena: &mut SlpBuilder,
        map: &[Tag],
        memo: &mut alloc::collections::BTreeMap<usize, Tag>,
    ) -> Tag {
        self.arena.translate(tag, arena, map, memo)
    }

    /// Exactly uniform random element: one transversal representative per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let pt = level.orbit[rng.random_range(0..level.orbit.len())];
            let rep = &level.reps[pt].as_ref().expect("rep").perm;
            g = &g * rep;
        }
        g
    }

    /// Checks the structural invariants (used by tests).
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: alloc::string::String| Err(Error::InvariantViolation(m));
        let base = self.base();
        for (i, level) in self.levels.iter().enumerate() {
            for &gi in &level.gens {
                let g = &self.strong[gi].perm;
                if base[..i].iter().any(|&b| g.image(b) != b) {
                    return fail(alloc::format!(
                        "strong generator {gi} moves an earlier base point"
                    ));
                }
            }
            for &pt in &level.orbit {
                let rep = level.reps[pt].as_ref().expect("rep");
                if rep.perm.image(level.base) != pt {
                    return fail(alloc::format!(
                        "level {i}: representative misses point {pt}"
                    ));
                }
                let v = self.arena.extract(rep.tag).evaluate(&self.inputs)?;
                if v != rep.perm {
                    return fail(alloc::format!("level {i}: representative tag mismatch"));
                }
            }
        }
        for (i, s) in self.strong.iter().enumerate() {
            let v = self.arena.extract(s.tag).evaluate(&self.inputs)?;
            if v != s.perm {
                return fail(alloc::format!("strong generator {i}: tag mismatch"));
            }
        }
        for g in &self.inputs {
            if !self.contains(g)? {
                return fail(alloc::string::String::from("input generator does not sift"));
            }
        }
        Ok(())
    }
}
