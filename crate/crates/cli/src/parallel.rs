//! Shard-parallel drivers over the core enumeration APIs.
//!
//! Shards are collected in index order and merged left to right, so results
//! do not depend on the number of worker threads.

use rayon::prelude::*;
use solvword_core::probability::{ExactPlan, McPlan, ProbabilityResult};
use solvword_core::slp::WordLike;
use solvword_core::synthesis::{
    Caps, ClassShard, SolvableVerifier, TupleClass, TupleClassifier, VerifyReport, VerifyShard,
};
use solvword_core::{PermutationGroup, Result};

pub fn classify(g: &PermutationGroup, n: usize, caps: &Caps) -> Result<Vec<TupleClass>> {
    let c = TupleClassifier::new(g, n, caps.tuple, caps.oracle)?;
    let shards: Vec<ClassShard> = (0..c.shard_count())
        .into_par_iter()
        .map(|i| c.classify_shard(i))
        .collect();
    Ok(c.finish(
        shards
            .into_iter()
            .fold(ClassShard::default(), ClassShard::merge),
    ))
}

pub fn exact(g: &PermutationGroup, w: &WordLike, caps: &Caps) -> Result<ProbabilityResult> {
    let plan = ExactPlan::new(g, w, caps.exact, caps.word)?;
    let count = (0..plan.shard_count())
        .into_par_iter()
        .map(|s| plan.count_shard(s))
        .sum();
    Ok(plan.result(count))
}

pub fn monte_carlo(
    g: &PermutationGroup,
    w: &WordLike,
    samples: u64,
    seed: u64,
    caps: &Caps,
) -> ProbabilityResult {
    let plan = McPlan::new(g, w, caps.word);
    let hits = (0..plan.batch_count(samples))
        .into_par_iter()
        .map(|b| plan.run_batch(seed, b, samples))
        .sum();
    plan.result(hits, samples, seed)
}

pub fn verify_solvable(
    g: &PermutationGroup,
    n: usize,
    w: &WordLike,
    caps: &Caps,
) -> Result<VerifyReport> {
    let v = SolvableVerifier::new(g, n, w, caps)?;
    let shards: Vec<VerifyShard> = (0..v.shard_count())
        .into_par_iter()
        .map(|i| v.check_shard(i))
        .collect();
    Ok(v.finish(
        shards
            .into_iter()
            .fold(VerifyShard::default(), VerifyShard::merge),
    ))
}
