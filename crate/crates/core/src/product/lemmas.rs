//! Checks of the structural facts the pipelines rely on, used as test oracles.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::perm::{Permutation, PermutationGroup};
use crate::product::{assemble, ProductGroup, TaggedSubgroup};
use crate::structure::{minimal_normal_subgroups, AutomorphismTable, GroupAutomorphism};
use crate::{Error, Result};

/// Both sides of `K ∩ M = ∏_{π_j(K) ≠ 1} N_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdirReport {
    pub holds: bool,
    pub left_order: BigUint,
    pub right_order: BigUint,
    /// Coordinates on which `K` projects nontrivially.
    pub nontrivial_coordinates: Vec<usize>,
}

fn unique_minimal_normal(g: &PermutationGroup, j: usize, cap: usize) -> Result<PermutationGroup> {
    let mut mins = minimal_normal_subgroups(g, cap)?;
    if mins.len() != 1 {
        return Err(Error::Precondition(format!(
            "coordinate {} has {} minimal normal subgroups",
            j + 1,
            mins.len()
        )));
    }
    Ok(mins.remove(0))
}

/// For `H` projecting onto every coordinate and `K ⊴ H`, compares `K ∩ M`
/// (by enumeration) with the product of the `N_j` that `K` touches.
pub fn verify_lemma_subdir(
    h: &TaggedSubgroup,
    k: &PermutationGroup,
    cap: usize,
) -> Result<SubdirReport> {
    let amb = h.ambient();
    let mut m_gens = Vec::new();
    let mut n_gens = Vec::new();
    for j in 0..amb.len() {
        if h.projection(&[j]).order() != amb.coordinate(j).order() {
            return Err(Error::Precondition(format!(
                "H does not project onto coordinate {}",
                j + 1
            )));
        }
        let n = unique_minimal_normal(amb.coordinate(j), j, cap)?;
        let embedded = n
            .generators()
            .iter()
            .map(|x| amb.embed(j, x))
            .collect::<Result<Vec<_>>>()?;
        m_gens.extend(embedded.iter().cloned());
        n_gens.push(embedded);
    }
    for x in &m_gens {
        if !h.contains(x)? {
            return Err(Error::Precondition("M is not contained in H".into()));
        }
    }
    let hg = h.to_group();
    if !k.is_subgroup_of(&hg) || !hg.normalizes(k) {
        return Err(Error::NotNormal);
    }
    let nontrivial: Vec<usize> = (0..amb.len())
        .filter(|&j| !amb.projection(k.generators(), &[j]).is_trivial())
        .collect();
    let right_gens: Vec<Permutation> = nontrivial
        .iter()
        .flat_map(|&j| n_gens[j].iter().cloned())
        .collect();
    let right = PermutationGroup::new(amb.degree(), right_gens)?;
    let m = PermutationGroup::new(amb.degree(), m_gens)?;
    let (small, big) = if k.order() <= m.order() {
        (k, &m)
    } else {
        (&m, k)
    };
    let left: BTreeSet<Permutation> = small
        .elements(cap)?
        .into_iter()
        .filter(|x| big.contains(x).unwrap_or(false))
        .collect();
    let left_order = BigUint::from(left.len());
    let holds =
        left_order == right.order() && left.iter().all(|x| right.contains(x).unwrap_or(false));
    Ok(SubdirReport {
        holds,
        left_order,
        right_order: right.order(),
        nontrivial_coordinates: nontrivial,
    })
}

/// Outcome of checking `N_1 × ⋯ × N_n ≤ H` for automorphism-independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrukkReport {
    pub holds: bool,
    pub h_order: BigUint,
    /// Embedded `N_j` generators tested for membership.
    pub checked: usize,
    /// First `(coordinate, generator)` missing from `H`, if any.
    pub missing: Option<(usize, Permutation)>,
}

/// `tuples[j]` is the `j`-th column `(a_{1,j}, …, a_{k,j})`; builds
/// `H = ⟨h_1, …, h_k⟩` with `h_i = (a_{i,1}, …, a_{i,n})` and tests that every
/// embedded generator of the minimal normal subgroup lies in `H`.
pub fn verify_lemma_trukk(
    g: &PermutationGroup,
    tuples: &[Vec<Permutation>],
    auts: &[GroupAutomorphism],
    cap: usize,
) -> Result<TrukkReport> {
    let Some(first) = tuples.first() else {
        return Err(Error::EmptyProduct("no columns".into()));
    };
    let k = first.len();
    for (j, t) in tuples.iter().enumerate() {
        if t.len() != k {
            return Err(Error::Precondition("columns of different lengths".into()));
        }
        for x in t {
            if !g.contains(x)? {
                return Err(Error::NotGenerating(j));
            }
        }
        if PermutationGroup::new(g.degree(), t.clone())?.order() != g.order() {
            return Err(Error::NotGenerating(j));
        }
    }
    let table = AutomorphismTable::new(g, auts, cap)?;
    let codes = tuples
        .iter()
        .map(|t| table.encode(t))
        .collect::<Result<Vec<_>>>()?;
    for j in 0..codes.len() {
        for l in j + 1..codes.len() {
            if let Some(a) =
                (0..table.len()).find(|&a| table.apply_encoded(a, &codes[j]) == codes[l])
            {
                return Err(Error::AutomorphismDependent {
                    first: j,
                    second: l,
                    automorphism: a,
                });
            }
        }
    }
    let mins = minimal_normal_subgroups(g, cap)?;
    if mins.len() != 1 || g.is_solvable() {
        return Err(Error::NotJustNonSolvable);
    }
    let amb = ProductGroup::power(g, tuples.len());
    let columns: Vec<Vec<Permutation>> = (0..k)
        .map(|i| tuples.iter().map(|t| t[i].clone()).collect())
        .collect();
    let h = assemble(&amb, &columns)?;
    let mut checked = 0;
    let mut missing = None;
    'outer: for j in 0..tuples.len() {
        for x in mins[0].generators() {
            checked += 1;
            if !h.contains(&amb.embed(j, x)?)? {
                missing = Some((j, x.clone()));
                break 'outer;
            }
        }
    }
    Ok(TrukkReport {
        holds: missing.is_none(),
        h_order: h.order(),
        checked,
        missing,
    })
}
