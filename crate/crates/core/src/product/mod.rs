//! Direct products on disjoint domains and subgroups of them generated by
//! tagged columns.
//!
//! Coordinate `i` acts on the points `offset_i .. offset_i + degree_i`, so a
//! projection is a restriction and the kernel of a set of projections is a
//! pointwise stabilizer.

mod blocks;
mod lemmas;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigUint;

use crate::perm::{Permutation, PermutationGroup, SiftResult, StabilizerChain};
use crate::slp::{SlpBuilder, StraightLineProgram, Tag};
use crate::{Error, Result};

pub use blocks::{diagonal_blocks, pattern_element, Demand};
pub use lemmas::{verify_lemma_subdir, verify_lemma_trukk, SubdirReport, TrukkReport};

/// `G_1 × ⋯ × G_k` acting on the disjoint union of the coordinate domains.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    coordinates: Vec<PermutationGroup>,
    offsets: Vec<usize>,
    degree: usize,
}

impl ProductGroup {
    pub fn new(coordinates: Vec<PermutationGroup>) -> Self {
        let mut offsets = Vec::with_capacity(coordinates.len());
        let mut degree = 0;
        for g in &coordinates {
            offsets.push(degree);
            degree += g.degree();
        }
        ProductGroup {
            coordinates,
            offsets,
            degree,
        }
    }

    /// `k` copies of `g`.
    pub fn power(g: &PermutationGroup, k: usize) -> Self {
        Self::new(alloc::vec![g.clone(); k])
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coordinates(&self) -> &[PermutationGroup] {
        &self.coordinates
    }

    pub fn coordinate(&self, i: usize) -> &PermutationGroup {
        &self.coordinates[i]
    }

    pub fn domain(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.coordinates[i].degree()
    }

    pub fn order(&self) -> BigUint {
        self.coordinates.iter().map(|g| g.order()).product()
    }

    /// `x ∈ G_i` placed in coordinate `i`, identity elsewhere.
    pub fn embed(&self, i: usize, x: &Permutation) -> Result<Permutation> {
        self.check_coordinate(i, x)?;
        Ok(Permutation::embed(x, self.offsets[i], self.degree))
    }

    /// `π_i`.
    pub fn project(&self, i: usize, x: &Permutation) -> Permutation {
        x.restrict(self.offsets[i], self.coordinates[i].degree())
    }

    /// `(x_1, …, x_k)` with `x_i ∈ G_i`.
    pub fn combine(&self, entries: &[Permutation]) -> Result<Permutation> {
        if entries.len() != self.len() {
            return Err(Error::Precondition(alloc::format!(
                "expected {} coordinates, got {}",
                self.len(),
                entries.len()
            )));
        }
        for (i, x) in entries.iter().enumerate() {
            self.check_coordinate(i, x)?;
        }
        Ok(Permutation::concat(entries))
    }

    /// Image of `⟨gens⟩` under the projection onto the listed coordinates.
    pub fn projection(&self, gens: &[Permutation], coords: &[usize]) -> PermutationGroup {
        let degree = coords.iter().map(|&i| self.coordinates[i].degree()).sum();
        let images = gens
            .iter()
            .map(|g| {
                let parts: Vec<Permutation> = coords.iter().map(|&i| self.project(i, g)).collect();
                Permutation::concat(&parts)
            })
            .collect();
        PermutationGroup::new(degree, images).expect("degrees add up")
    }

    fn check_coordinate(&self, i: usize, x: &Permutation) -> Result<()> {
        if !self.coordinates[i].contains(x)? {
            return Err(Error::Precondition(alloc::format!(
                "{x} is not in coordinate group {}",
                i + 1
            )));
        }
        Ok(())
    }

    fn points(&self, coords: &[usize]) -> Vec<usize> {
        coords.iter().flat_map(|&i| self.domain(i)).collect()
    }
}

/// A subgroup of a [`ProductGroup`] whose generators carry programs over
/// abstract letters `x1, …, xn`.
///
/// The defining columns of [`assemble`] are the letters themselves; derived
/// subgroups and kernels carry programs built from those.
#[derive(Clone, Debug)]
pub struct TaggedSubgroup {
    ambient: ProductGroup,
    arena: SlpBuilder,
    generators: Vec<Permutation>,
    tags: Vec<Tag>,
    chain: StabilizerChain,
}

/// `L = ⟨p_1, …, p_n⟩` where `p_j` is the element whose `i`-th coordinate is
/// `columns[j][i]`.
pub fn assemble(ambient: &ProductGroup, columns: &[Vec<Permutation>]) -> Result<TaggedSubgroup> {
    let generators = columns
        .iter()
        .map(|c| ambient.combine(c))
        .collect::<Result<Vec<_>>>()?;
    let arena = SlpBuilder::new(columns.len());
    let tags = (0..columns.len()).map(|j| arena.input(j)).collect();
    Ok(TaggedSubgroup::from_parts(
        ambient.clone(),
        arena,
        generators,
        tags,
    ))
}

impl TaggedSubgroup {
    fn from_parts(
        ambient: ProductGroup,
        arena: SlpBuilder,
        generators: Vec<Permutation>,
        tags: Vec<Tag>,
    ) -> Self {
        let chain = StabilizerChain::build(ambient.degree(), &generators);
        TaggedSubgroup {
            ambient,
            arena,
            generators,
            tags,
            chain,
        }
    }

    pub fn ambient(&self) -> &ProductGroup {
        &self.ambient
    }

    /// Number of abstract letters.
    pub fn arity(&self) -> usize {
        self.arena.arity()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Program for the `i`-th generator over `x1, …, xn`.
    pub fn tag(&self, i: usize) -> StraightLineProgram {
        self.arena.extract(self.tags[i])
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.is_trivial()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        self.chain.contains(g)
    }

    pub fn to_group(&self) -> PermutationGroup {
        PermutationGroup::new(self.ambient.degree(), self.generators.clone()).expect("same degree")
    }

    /// `π_i` of the subgroup.
    pub fn projection(&self, coords: &[usize]) -> PermutationGroup {
        self.ambient.projection(&self.generators, coords)
    }

    /// A program over `x1, …, xn` evaluating to `g` at the defining columns.
    pub fn constructive_membership(&self, g: &Permutation) -> Result<StraightLineProgram> {
        if g.degree() != self.ambient.degree() {
            return Err(Error::DegreeMismatch {
                left: self.ambient.degree(),
                right: g.degree(),
            });
        }
        let mut arena = self.arena.clone();
        match self.chain.factor_tag(g, &mut arena, &self.tags) {
            Some(tag) => Ok(arena.extract(tag)),
            None => match self.chain.sift(g)? {
                SiftResult::NonMember { level, residue } => Err(Error::NonMember {
                    level,
                    residue: residue.to_string(),
                }),
                SiftResult::Member(_) => unreachable!("sift disagrees with factor_tag"),
            },
        }
    }

    /// Each generator's program evaluates to it at `columns`.
    pub fn check_tags(&self, columns: &[Permutation]) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            if &self.tag(i).evaluate(columns)? != g {
                return Err(Error::InvariantViolation(alloc::format!(
                    "tag of generator {i} does not evaluate to it"
                )));
            }
        }
        Ok(())
    }

    /// The derived subgroup: normal closure of generator commutators,
    /// conjugating by this group's generators.
    pub fn derived_subgroup(&self) -> TaggedSubgroup {
        let degree = self.ambient.degree();
        let mut arena = self.arena.clone();
        let mut chain = StabilizerChain::new(degree);
        let mut gens: Vec<Permutation> = Vec::new();
        let mut tags: Vec<Tag> = Vec::new();
        let mut queue = VecDeque::new();
        let admit = |c: Permutation,
                     t: Tag,
                     chain: &mut StabilizerChain,
                     gens: &mut Vec<Permutation>,
                     tags: &mut Vec<Tag>,
                     queue: &mut VecDeque<usize>| {
            chain.add_generator(c.clone());
            gens.push(c);
            tags.push(t);
            queue.push_back(gens.len() - 1);
        };
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let c = Permutation::commutator(&self.generators[i], &self.generators[j]);
                if !c.is_identity() && !chain.contains(&c).expect("same degree") {
                    let t = arena.comm(self.tags[i], self.tags[j]);
                    admit(c, t, &mut chain, &mut gens, &mut tags, &mut queue);
                }
            }
        }
        while let Some(k) = queue.pop_front() {
            for (h, &th) in self.generators.iter().zip(&self.tags) {
                let c = gens[k].conjugate_by(h);
                if !chain.contains(&c).expect("same degree") {
                    let t = arena.conj(tags[k], th);
                    admit(c, t, &mut chain, &mut gens, &mut tags, &mut queue);
                }
            }
        }
        TaggedSubgroup {
            ambient: self.ambient.clone(),
            arena,
            generators: gens,
            tags,
            chain,
        }
    }

    /// The terminal member `L^(r)` of the derived series, with `r`.
    pub fn perfect_core(&self) -> (TaggedSubgroup, usize) {
        let mut current = self.clone();
        let mut r = 0;
        loop {
            let next = current.derived_subgroup();
            if next.order() == current.order() {
                return (current, r);
            }
            current = next;
            r += 1;
        }
    }

    /// Elements acting trivially on every listed coordinate, with programs.
    pub fn coordinate_kernel(&self, coords: &[usize]) -> TaggedSubgroup {
        if coords.is_empty() {
            return self.clone();
        }
        let (gens, chain_tags, chain) = self.kernel_parts(coords);
        let mut arena = self.arena.clone();
        let mut memo = BTreeMap::new();
        let tags = chain_tags
            .into_iter()
            .map(|t| chain.translate_tag(t, &mut arena, &self.tags, &mut memo))
            .collect();
        TaggedSubgroup::from_parts(self.ambient.clone(), arena, gens, tags)
    }

    /// Generators of the coordinate kernel without building its own chain.
    pub(crate) fn kernel_generators(&self, coords: &[usize]) -> Vec<Permutation> {
        if coords.is_empty() {
            return self.generators.clone();
        }
        self.kernel_parts(coords).0
    }

    fn kernel_parts(&self, coords: &[usize]) -> (Vec<Permutation>, Vec<Tag>, StabilizerChain) {
        let prefix = self.ambient.points(coords);
        let chain = StabilizerChain::build_with_base_prefix(
            self.ambient.degree(),
            &self.generators,
            &prefix,
        );
        let level = chain
            .base()
            .iter()
            .take_while(|b| prefix.contains(b))
            .count();
        let (gens, tags) = chain.stabilizer_generator_tags(level).into_iter().unzip();
        (gens, tags, chain)
    }
}
