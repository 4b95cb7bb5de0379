use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::perm::{Permutation, PermutationGroup};
use crate::probability::{exact_probability, Ratio};
use crate::product::{assemble, ProductGroup};
use crate::slp::{SlpEvaluator, WordLike};
use crate::structure::{
    aut_orbits_on_tuples, automorphism_group, generating_tuples, is_just_nonsolvable,
    maximal_subgroup_count, minimal_normal_subgroups, simple_factor_decomposition,
    AutomorphismTable,
};
use crate::synthesis::{Bounds, Caps, OrbitSummary, SynthesisReport};
use crate::{Error, Result};

/// A word `w ∈ F_d` vanishing on exactly the first `k` of `s` selected
/// Aut-orbits of generating `d`-tuples.
///
/// Orbits are ordered by least member and the first `s` are selected (all of
/// them when `orbits` is `None`). The product `H ≤ G^s` generated by the
/// columns of the orbit representatives contains the `s`-fold power of the
/// minimal normal subgroup `N`; the word is the program of the element that is
/// trivial on the first `k` coordinates and equal to a fixed `1 ≠ g ∈ N`
/// elsewhere.
pub fn synth_probability_word(
    g: &PermutationGroup,
    d: usize,
    k: usize,
    orbits: Option<usize>,
    caps: &Caps,
) -> Result<SynthesisReport> {
    if !is_just_nonsolvable(g, caps.structure)? {
        return Err(Error::NotJustNonSolvable);
    }
    let auts = automorphism_group(g, caps.structure)?;
    let tuples = generating_tuples(g, d, caps.tuple)?;
    let all = aut_orbits_on_tuples(g, &tuples, &auts, caps.structure)?;
    let r = all.len();
    let s = orbits.unwrap_or(r);
    if s == 0 {
        return Err(Error::EmptyProduct(format!(
            "no orbits selected ({r} orbits of generating {d}-tuples)"
        )));
    }
    if s > r {
        return Err(Error::Precondition(format!(
            "{s} orbits requested but only {r} exist"
        )));
    }
    if k > s {
        return Err(Error::Precondition(format!(
            "k = {k} exceeds the {s} selected orbits"
        )));
    }

    let ambient = ProductGroup::power(g, s);
    let columns: Vec<Vec<Permutation>> = (0..d)
        .map(|j| {
            all[..s]
                .iter()
                .map(|o| o.representative[j].clone())
                .collect()
        })
        .collect();
    let h = assemble(&ambient, &columns)?;

    let mut mins = minimal_normal_subgroups(g, caps.structure)?;
    let n = mins.remove(0);
    for i in 0..s {
        for x in n.generators() {
            if !h.contains(&ambient.embed(i, x)?)? {
                return Err(Error::InvariantViolation(format!(
                    "the product does not contain the minimal normal subgroup at coordinate {}",
                    i + 1
                )));
            }
        }
    }
    let factors = simple_factor_decomposition(&n, caps.structure)?;
    // Elements are sorted with the identity first.
    let target = factors[0].elements(caps.oracle)?[1].clone();
    let entries: Vec<Permutation> = (0..s)
        .map(|i| {
            if i < k {
                Permutation::identity(g.degree())
            } else {
                target.clone()
            }
        })
        .collect();
    let element = ambient.combine(&entries)?;
    let word = h.constructive_membership(&element)?;

    let mut report = SynthesisReport::new(d, g.order(), word, caps.word);
    report.columns = columns;
    report.target = entries;

    // Count satisfying tuples per orbit through the orbit's least member.
    let table = AutomorphismTable::new(g, &auts, caps.structure)?;
    let position: BTreeMap<Vec<u32>, usize> = all
        .iter()
        .enumerate()
        .map(|(i, o)| Ok((table.encode(&o.representative)?, i)))
        .collect::<Result<_>>()?;
    let mut satisfied = alloc::vec![0u64; r];
    let mut eval = SlpEvaluator::new(&report.word, g.degree());
    for t in &tuples {
        let refs: Vec<&[usize]> = t.iter().map(|p| p.images()).collect();
        if eval.satisfied_by(&refs) {
            let code = table.encode(t)?;
            let least = (0..table.len())
                .map(|a| table.apply_encoded(a, &code))
                .min()
                .expect("identity automorphism");
            satisfied[position[&least]] += 1;
        }
    }
    report.orbits = all
        .iter()
        .zip(&satisfied)
        .enumerate()
        .map(|(i, (o, &c))| OrbitSummary {
            representative: o.representative.clone(),
            size: o.size,
            selected: i < s,
            satisfied: c,
        })
        .collect();
    let aut_order = auts.len() as u64;
    let selected: u64 = satisfied[..s].iter().sum();
    report.selected_satisfying = Some(selected);
    report.satisfying_generating = Some(satisfied.iter().sum());

    let denominator = num_traits::pow(g.order(), d);
    let lower = Ratio::new(k as u64 * aut_order, denominator);
    let upper = if s == r {
        let m = maximal_subgroup_count(g, caps.structure)?.count();
        Some(lower.add(&Ratio::new(m as u64, BigUint::from(1u32) << d)))
    } else {
        report.notes.push(format!(
            "{s} of {r} orbits selected: the upper bound is not asserted"
        ));
        None
    };
    let exact = match exact_probability(
        g,
        &WordLike::Slp(report.word.clone()),
        caps.exact,
        caps.word,
    ) {
        Ok(p) => p.exact,
        Err(Error::CapExceeded { .. }) => {
            report
                .notes
                .push("exact probability skipped: tuple count exceeds the cap".into());
            None
        }
        Err(e) => return Err(e),
    };

    let pattern_ok = report.orbits[..s]
        .iter()
        .enumerate()
        .all(|(i, o)| o.satisfied == if i < k { o.size as u64 } else { 0 });
    let bounds_ok = exact
        .as_ref()
        .is_none_or(|p| *p >= lower && upper.as_ref().is_none_or(|u| p <= u));
    report.verified = pattern_ok && selected == k as u64 * aut_order && bounds_ok;
    report.exact = exact;
    report.bounds = Some(Bounds { lower, upper });
    Ok(report)
}

/// True iff no generating `n`-tuple of `G` satisfies `w`, i.e. `G` is not a
/// quotient of the one-relator group `F_n / ⟨⟨w⟩⟩`.
pub fn quotient_obstruction_check(
    g: &PermutationGroup,
    n: usize,
    w: &WordLike,
    caps: &Caps,
) -> Result<bool> {
    if w.arity() > n {
        return Err(Error::TupleTooShort {
            arity: w.arity(),
            len: n,
        });
    }
    let program = w.to_slp().with_arity(n)?;
    let mut eval = SlpEvaluator::new(&program, g.degree());
    for t in generating_tuples(g, n, caps.tuple)? {
        let refs: Vec<&[usize]> = t.iter().map(|p| p.images()).collect();
        if eval.satisfied_by(&refs) {
            return Ok(false);
        }
    }
    Ok(true)
}
