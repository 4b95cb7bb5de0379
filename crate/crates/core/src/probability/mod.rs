//! `P(G, w)`: the probability that a uniform random tuple satisfies `w`,
//! exactly by enumeration or by seeded Monte Carlo sampling.

mod ratio;

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::{Permutation, PermutationGroup};
use crate::slp::{SlpBuilder, SlpEvaluator, StraightLineProgram, Tag, WordLike};
use crate::structure::QuotientMap;
use crate::synthesis::classify_tuples;
use crate::{Error, Result};

pub use ratio::Ratio;

/// Samples per Monte Carlo batch; batch `b` uses stream `b` of the seed.
pub const MC_BATCH: u64 = 10_000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

/// A Monte Carlo estimate with its Wilson score interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub p: f64,
    pub lo: f64,
    pub hi: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityResult {
    /// Numerator over `|G|^L`, `L` the number of letters evaluated.
    pub exact: Option<Ratio>,
    pub estimate: Option<Estimate>,
    /// 0-based letters the evaluation ranged over.
    pub letters: Vec<usize>,
}

/// 95% Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The endpoints at 0 and n are exact; rounding would leave them off by an ulp.
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes as f64 == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// The word restricted to the letters it actually uses, renumbered `0..L`.
fn restrict_letters(w: &WordLike, word_cap: usize) -> (StraightLineProgram, Vec<usize>) {
    let slp = w.to_slp();
    let letters: Vec<usize> = w.distinct_letters(word_cap).letters.into_iter().collect();
    let mut b = SlpBuilder::new(letters.len());
    let inputs: Vec<Tag> = (0..slp.arity())
        .map(|l| match letters.binary_search(&l) {
            Ok(pos) => b.input(pos),
            Err(_) => Tag::Identity,
        })
        .collect();
    let out = b.inline(&slp, &inputs);
    (b.extract(out), letters)
}

/// Exhaustive evaluation of a word over `G^L`, split into shards by the
/// value of the first letter so callers can run shards in parallel.
#[derive(Clone, Debug)]
pub struct ExactPlan {
    elements: Vec<Permutation>,
    program: StraightLineProgram,
    letters: Vec<usize>,
    degree: usize,
}

impl ExactPlan {
    pub fn new(
        g: &PermutationGroup,
        w: &WordLike,
        tuple_cap: u64,
        word_cap: usize,
    ) -> Result<Self> {
        let (program, letters) = restrict_letters(w, word_cap);
        let total = num_traits::pow(g.order(), letters.len());
        if total > BigUint::from(tuple_cap) {
            return Err(Error::CapExceeded {
                what: "exact evaluation (use Monte Carlo instead)",
                required: total.to_string(),
                cap: tuple_cap.to_string(),
            });
        }
        let elements = if letters.is_empty() {
            Vec::new()
        } else {
            g.elements(tuple_cap.min(usize::MAX as u64) as usize)?
        };
        Ok(ExactPlan {
            elements,
            program,
            letters,
            degree: g.degree(),
        })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn shard_count(&self) -> usize {
        if self.letters.is_empty() {
            1
        } else {
            self.elements.len()
        }
    }

    pub fn denominator(&self) -> BigUint {
        num_traits::pow(
            BigUint::from(self.elements.len().max(1)),
            self.letters.len(),
        )
    }

    /// Satisfying tuples in shard `leading`.
    pub fn count_shard(&self, leading: usize) -> u64 {
        self.count_shard_where(leading, |v| v.iter().enumerate().all(|(i, &p)| i == p))
    }

    /// Tuples in shard `leading` whose value is accepted by `accept`.
    pub fn count_shard_where<F: Fn(&[usize]) -> bool>(&self, leading: usize, accept: F) -> u64 {
        let mut eval = SlpEvaluator::new(&self.program, self.degree);
        let l = self.letters.len();
        if l == 0 {
            return accept(eval.eval(&[])) as u64;
        }
        let size = self.elements.len();
        let mut digits = vec![0usize; l];
        digits[0] = leading;
        let mut count = 0;
        loop {
            let tuple: Vec<&[usize]> = digits.iter().map(|&d| self.elements[d].images()).collect();
            if accept(eval.eval(&tuple)) {
                count += 1;
            }
            let mut k = l;
            loop {
                if k <= 1 {
                    return count;
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

    pub fn result(&self, count: u64) -> ProbabilityResult {
        ProbabilityResult {
            exact: Some(Ratio::new(count, self.denominator())),
            estimate: None,
            letters: self.letters.clone(),
        }
    }
}

/// Exact `P(G, w)`; only letters occurring in `w` are enumerated, so padding
/// `w` with unused letters does not change the cost or the value.
pub fn exact_probability(
    g: &PermutationGroup,
    w: &WordLike,
    tuple_cap: u64,
    word_cap: usize,
) -> Result<ProbabilityResult> {
    let plan = ExactPlan::new(g, w, tuple_cap, word_cap)?;
    let count = (0..plan.shard_count()).map(|s| plan.count_shard(s)).sum();
    Ok(plan.result(count))
}

/// Seeded sampling of uniform tuples in fixed-size batches.
#[derive(Clone, Debug)]
pub struct McPlan {
    group: PermutationGroup,
    program: StraightLineProgram,
    letters: Vec<usize>,
}

impl McPlan {
    pub fn new(g: &PermutationGroup, w: &WordLike, word_cap: usize) -> Self {
        let (program, letters) = restrict_letters(w, word_cap);
        McPlan {
            group: g.clone(),
            program,
            letters,
        }
    }

    pub fn batch_count(&self, samples: u64) -> u64 {
        samples.div_ceil(MC_BATCH)
    }

    /// Satisfying samples in batch `b` of a run of `samples` draws.
    pub fn run_batch(&self, seed: u64, b: u64, samples: u64) -> u64 {
        let size = MC_BATCH.min(samples - b * MC_BATCH);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let mut eval = SlpEvaluator::new(&self.program, self.group.degree());
        let mut hits = 0;
        for _ in 0..size {
            let tuple: Vec<Permutation> = self
                .letters
                .iter()
                .map(|_| self.group.random_element(&mut rng))
                .collect();
            let refs: Vec<&[usize]> = tuple.iter().map(|p| p.images()).collect();
            if eval.satisfied_by(&refs) {
                hits += 1;
            }
        }
        hits
    }

    pub fn result(&self, hits: u64, samples: u64, seed: u64) -> ProbabilityResult {
        let (p, lo, hi) = if self.letters.is_empty() {
            // A letter-free word is constant.
            let v = if hits > 0 { 1.0 } else { 0.0 };
            (v, v, v)
        } else {
            let (lo, hi) = wilson_interval(hits, samples);
            (hits as f64 / samples as f64, lo, hi)
        };
        ProbabilityResult {
            exact: None,
            estimate: Some(Estimate {
                p,
                lo,
                hi,
                samples,
                seed,
            }),
            letters: self.letters.clone(),
        }
    }
}

/// Monte Carlo estimate of `P(G, w)`; the result depends only on `seed` and
/// `samples`, not on how batches are scheduled.
pub fn mc_probability(
    g: &PermutationGroup,
    w: &WordLike,
    samples: u64,
    seed: u64,
    word_cap: usize,
) -> Result<ProbabilityResult> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is needed".into()));
    }
    let plan = McPlan::new(g, w, word_cap);
    let hits = (0..plan.batch_count(samples))
        .map(|b| plan.run_batch(seed, b, samples))
        .sum();
    Ok(plan.result(hits, samples, seed))
}

/// One marked-isomorphism class of tuples and whether it satisfies the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub representative: Vec<Permutation>,
    pub members: u64,
    pub subgroup_order: BigUint,
    pub solvable: bool,
    pub satisfied: bool,
}

/// Satisfaction of `w` on each class of `n`-tuples. A word has the same value
/// pattern on all members of a class, so this covers all of `G^n`.
pub fn satisfaction_profile(
    g: &PermutationGroup,
    w: &WordLike,
    n: usize,
    tuple_cap: u64,
    oracle_cap: usize,
) -> Result<Vec<ProfileRow>> {
    if w.arity() > n {
        return Err(Error::TupleTooShort {
            arity: w.arity(),
            len: n,
        });
    }
    let slp = w.to_slp();
    let classes = classify_tuples(g, n, tuple_cap, oracle_cap)?;
    classes
        .into_iter()
        .map(|c| {
            let satisfied = slp.evaluate(&c.representative)?.is_identity();
            Ok(ProfileRow {
                representative: c.representative,
                members: c.members,
                subgroup_order: c.generated_subgroup_order,
                solvable: c.solvable,
                satisfied,
            })
        })
        .collect()
}

/// Satisfying tuples split by whether they generate a solvable subgroup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProfileCounts {
    pub solvable_satisfying: u64,
    pub nonsolvable_satisfying: u64,
    pub total: u64,
}

pub fn profile_counts(rows: &[ProfileRow]) -> ProfileCounts {
    let mut c = ProfileCounts::default();
    for r in rows {
        c.total += r.members;
        if r.satisfied {
            if r.solvable {
                c.solvable_satisfying += r.members;
            } else {
                c.nonsolvable_satisfying += r.members;
            }
        }
    }
    c
}

/// `P(G, w)` against `P(G/K, w)` and the lifted count of values in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub p_group: Ratio,
    pub p_quotient: Ratio,
    /// Fraction of tuples of `G` whose value lies in `K`.
    pub lifted: Ratio,
    /// `P(G, w) ≤ P(G/K, w)`.
    pub inequality_holds: bool,
    /// `P(G/K, w)` equals the lifted fraction.
    pub identity_holds: bool,
}

pub fn quotient_monotonicity(
    g: &PermutationGroup,
    k: &PermutationGroup,
    w: &WordLike,
    tuple_cap: u64,
    word_cap: usize,
) -> Result<MonotonicityReport> {
    let q = QuotientMap::by_normal_subgroup(g, k, tuple_cap.min(usize::MAX as u64) as usize)?;
    let plan = ExactPlan::new(g, w, tuple_cap, word_cap)?;
    let mut kernel: Vec<Vec<usize>> = k
        .elements(tuple_cap.min(usize::MAX as u64) as usize)?
        .into_iter()
        .map(|p| p.images().to_vec())
        .collect();
    kernel.sort();
    let (mut sat, mut lifted) = (0, 0);
    for s in 0..plan.shard_count() {
        sat += plan.count_shard(s);
        lifted += plan.count_shard_where(s, |v| {
            kernel.binary_search_by(|e| e.as_slice().cmp(v)).is_ok()
        });
    }
    let p_group = Ratio::new(sat, plan.denominator());
    let lifted = Ratio::new(lifted, plan.denominator());
    let p_quotient = exact_probability(q.image(), w, tuple_cap, word_cap)?
        .exact
        .expect("exact mode");
    Ok(MonotonicityReport {
        inequality_holds: p_group <= p_quotient,
        identity_holds: lifted.cmp(&p_quotient).is_eq(),
        p_group,
        p_quotient,
        lifted,
    })
}
