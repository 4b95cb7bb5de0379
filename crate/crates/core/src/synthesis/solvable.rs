use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::perm::{Permutation, PermutationGroup};
use crate::probability::Ratio;
use crate::product::{assemble, pattern_element, Demand, ProductGroup};
use crate::slp::{SlpBuilder, SlpEvaluator, StraightLineProgram, WordLike};
use crate::structure::{just_nonsolvable_quotient, QuotientMap};
use crate::synthesis::{
    classify_tuples, Caps, ClassSummary, SynthesisReport, TupleClass, TupleClassifier,
};
use crate::{Error, Result};

/// Counterexamples kept per verification run.
const COUNTEREXAMPLES: usize = 5;

/// A word `w ∈ F_n` such that an `n`-tuple of `G` satisfies `w` exactly when
/// it generates a solvable subgroup.
pub fn synth_solvable_word(g: &PermutationGroup, n: usize, caps: &Caps) -> Result<SynthesisReport> {
    let classes = classify_tuples(g, n, caps.tuple, caps.oracle)?;
    synth_solvable_word_from_classes(g, n, &classes, caps)
}

fn class_error(i: usize, e: Error) -> Error {
    match e {
        Error::InvariantViolation(msg) => Error::InvariantViolation(format!("class {i}: {msg}")),
        other => other,
    }
}

/// Same as [`synth_solvable_word`] with the classes supplied, e.g. after a
/// parallel classification.
pub fn synth_solvable_word_from_classes(
    g: &PermutationGroup,
    n: usize,
    classes: &[TupleClass],
    caps: &Caps,
) -> Result<SynthesisReport> {
    let denominator = num_traits::pow(g.order(), n);
    let total: u64 = classes.iter().map(|c| c.members).sum();
    if BigUint::from(total) != denominator {
        return Err(Error::InvariantViolation(format!(
            "classes cover {total} tuples, expected {denominator}"
        )));
    }

    if g.is_solvable() {
        let mut report = SynthesisReport::new(
            n,
            g.order(),
            SlpBuilder::new(n).extract(crate::slp::Tag::Identity),
            caps.word,
        );
        report.classes = classes
            .iter()
            .map(|c| ClassSummary {
                representative: c.representative.clone(),
                members: c.members,
                subgroup_order: c.generated_subgroup_order.clone(),
                solvable: true,
                quotient_order: c.generated_subgroup_order.clone(),
                satisfied: true,
                agrees: true,
            })
            .collect();
        report.exact = Some(Ratio::new(denominator.clone(), denominator));
        report.verified = true;
        report
            .notes
            .push("the group is solvable, so every tuple generates a solvable subgroup".into());
        return Ok(report);
    }

    let quotients = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let h = PermutationGroup::new(g.degree(), c.representative.clone())?;
            let q = if c.solvable {
                QuotientMap::by_normal_subgroup(
                    &h,
                    &PermutationGroup::trivial(g.degree()),
                    caps.oracle,
                )
            } else {
                just_nonsolvable_quotient(&h, caps.oracle)
            };
            q.map_err(|e| class_error(i, e))
        })
        .collect::<Result<Vec<_>>>()?;

    let ambient = ProductGroup::new(quotients.iter().map(|q| q.image().clone()).collect());
    let columns = (0..n)
        .map(|j| {
            quotients
                .iter()
                .zip(classes)
                .map(|(q, c)| q.apply(&c.representative[j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let l = assemble(&ambient, &columns)?;
    let (m, _) = l.perfect_core();
    let pattern: Vec<Demand> = classes
        .iter()
        .map(|c| {
            if c.solvable {
                Demand::Trivial
            } else {
                Demand::Nontrivial
            }
        })
        .collect();
    let (element, word) = pattern_element(&m, &pattern)?;

    let mut report = SynthesisReport::new(n, g.order(), word, caps.word);
    report.target = (0..ambient.len())
        .map(|i| ambient.project(i, &element))
        .collect();
    report.columns = columns;
    let mut eval = SlpEvaluator::new(&report.word, g.degree());
    let mut satisfying = 0u64;
    let mut first_failure = None;
    for (i, c) in classes.iter().enumerate() {
        let mut holds = |t: &[Permutation]| {
            let refs: Vec<&[usize]> = t.iter().map(|p| p.images()).collect();
            eval.satisfied_by(&refs)
        };
        let satisfied = holds(&c.representative);
        // Class members are marked isomorphic, so the samples must agree.
        let agrees = satisfied == c.solvable && c.samples.iter().all(|s| holds(s) == satisfied);
        if satisfied {
            satisfying += c.members;
        }
        if !agrees && first_failure.is_none() {
            first_failure = Some(i);
        }
        report.classes.push(ClassSummary {
            representative: c.representative.clone(),
            members: c.members,
            subgroup_order: c.generated_subgroup_order.clone(),
            solvable: c.solvable,
            quotient_order: quotients[i].image().order(),
            satisfied,
            agrees,
        });
    }
    report.exact = Some(Ratio::new(satisfying, denominator));
    report.verified = first_failure.is_none();
    if let Some(i) = first_failure {
        report
            .notes
            .push(format!("class {i} disagrees with its solvability flag"));
    }
    // A verified word for a non-solvable group needs at least n - 2 letters.
    if report.verified && !report.letters_upper_bound_only && report.letters_used.len() + 2 < n {
        return Err(Error::InvariantViolation(format!(
            "verified word uses only {} of {n} letters",
            report.letters_used.len()
        )));
    }
    Ok(report)
}

/// A tuple on which a word and the solvability of the generated subgroup disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub tuple: Vec<Permutation>,
    pub solvable: bool,
    pub satisfied: bool,
}

/// Partial verification result over one or more shards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyShard {
    checked: u64,
    agreed: u64,
    counterexamples: Vec<Vec<u32>>,
    flags: Vec<(bool, bool)>,
}

impl VerifyShard {
    pub fn merge(mut self, other: VerifyShard) -> VerifyShard {
        self.checked += other.checked;
        self.agreed += other.agreed;
        let mut all: Vec<(Vec<u32>, (bool, bool))> = self
            .counterexamples
            .into_iter()
            .zip(self.flags)
            .chain(other.counterexamples.into_iter().zip(other.flags))
            .collect();
        all.sort();
        all.truncate(COUNTEREXAMPLES);
        (self.counterexamples, self.flags) = all.into_iter().unzip();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: u64,
    pub agreed: u64,
    pub passed: bool,
    /// The least few counterexamples in lexicographic order.
    pub counterexamples: Vec<Counterexample>,
}

/// Exhaustive check of the solvability biconditional, tuple by tuple.
///
/// Solvability of `⟨t⟩` is decided from the element set of the subgroup,
/// computed directly, with results cached per subgroup.
#[derive(Clone, Debug)]
pub struct SolvableVerifier {
    classifier: TupleClassifier,
    program: StraightLineProgram,
}

impl SolvableVerifier {
    pub fn new(g: &PermutationGroup, n: usize, w: &WordLike, caps: &Caps) -> Result<Self> {
        if w.arity() > n {
            return Err(Error::TupleTooShort {
                arity: w.arity(),
                len: n,
            });
        }
        Ok(SolvableVerifier {
            classifier: TupleClassifier::new(g, n, caps.tuple, caps.oracle)?,
            program: w.to_slp().with_arity(n)?,
        })
    }

    pub fn shard_count(&self) -> usize {
        self.classifier.shard_count()
    }

    fn closure(&self, tuple: &[u32], seen: &mut [u64], queue: &mut Vec<u32>) {
        seen.iter_mut().for_each(|w| *w = 0);
        queue.clear();
        let id = self
            .classifier
            .index()
            .index_of(&self.classifier.group().identity())
            .expect("identity") as u32;
        seen[id as usize / 64] |= 1 << (id % 64);
        queue.push(id);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            for &t in tuple {
                let y = self.classifier.mul(e, t);
                let (word, bit) = (y as usize / 64, y % 64);
                if seen[word] >> bit & 1 == 0 {
                    seen[word] |= 1 << bit;
                    queue.push(y);
                }
            }
            i += 1;
        }
    }

    /// Checks every tuple whose first entry is element `leading`.
    pub fn check_shard(&self, leading: usize) -> VerifyShard {
        let index = self.classifier.index();
        let n = self.classifier.arity();
        let size = index.len() as u32;
        let degree = self.classifier.group().degree();
        let mut eval = SlpEvaluator::new(&self.program, degree);
        let mut cache: BTreeMap<Vec<u64>, bool> = BTreeMap::new();
        let mut seen = vec![0u64; index.len().div_ceil(64)];
        let mut queue = Vec::new();
        let mut shard = VerifyShard::default();
        let mut digits = vec![0u32; n];
        if n > 0 {
            digits[0] = leading as u32;
        }
        loop {
            self.closure(&digits, &mut seen, &mut queue);
            let solvable = match cache.get(&seen) {
                Some(&s) => s,
                None => {
                    let gens: Vec<Permutation> = digits
                        .iter()
                        .map(|&d| index.get(d as usize).clone())
                        .collect();
                    let s = PermutationGroup::new(degree, gens)
                        .expect("same degree")
                        .is_solvable();
                    cache.insert(seen.clone(), s);
                    s
                }
            };
            let refs: Vec<&[usize]> = digits
                .iter()
                .map(|&d| index.get(d as usize).images())
                .collect();
            let satisfied = eval.satisfied_by(&refs);
            shard.checked += 1;
            if satisfied == solvable {
                shard.agreed += 1;
            } else if shard.counterexamples.len() < COUNTEREXAMPLES {
                shard.counterexamples.push(digits.clone());
                shard.flags.push((solvable, satisfied));
            }
            let mut k = n;
            loop {
                if k <= 1 {
                    return shard;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < size {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    pub fn finish(&self, shard: VerifyShard) -> VerifyReport {
        let index = self.classifier.index();
        VerifyReport {
            passed: shard.checked == shard.agreed,
            checked: shard.checked,
            agreed: shard.agreed,
            counterexamples: shard
                .counterexamples
                .iter()
                .zip(&shard.flags)
                .map(|(t, &(solvable, satisfied))| Counterexample {
                    tuple: t.iter().map(|&d| index.get(d as usize).clone()).collect(),
                    solvable,
                    satisfied,
                })
                .collect(),
        }
    }
}

/// Evaluates `w` on all of `G^n` and compares with solvability of `⟨t⟩`.
pub fn verify_solvable_word(
    g: &PermutationGroup,
    n: usize,
    w: &WordLike,
    caps: &Caps,
) -> Result<VerifyReport> {
    let v = SolvableVerifier::new(g, n, w, caps)?;
    let shard = (0..v.shard_count())
        .map(|i| v.check_shard(i))
        .fold(VerifyShard::default(), VerifyShard::merge);
    Ok(v.finish(shard))
}
