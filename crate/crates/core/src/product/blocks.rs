use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::{Permutation, PermutationGroup};
use crate::product::TaggedSubgroup;
use crate::slp::StraightLineProgram;
use crate::structure::is_simple;
use crate::{Error, Result};

/// What a pattern element must look like on one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demand {
    Nontrivial,
    Trivial,
    Free,
}

/// Random draws tried when the coordinate-by-coordinate construction gets stuck.
const FALLBACK_DRAWS: usize = 10_000;

/// Partition of the coordinates into diagonal blocks of a subdirect product
/// of nonabelian simple groups.
///
/// Coordinates `i` and `j` share a block when the projection onto `G_i × G_j`
/// has order `|G_i|`.
pub fn diagonal_blocks(m: &TaggedSubgroup, cap: usize) -> Result<Vec<Vec<usize>>> {
    let amb = m.ambient();
    let k = amb.len();
    for i in 0..k {
        let gi = amb.coordinate(i);
        if gi.is_abelian() || !is_simple(gi, cap)? {
            return Err(Error::Precondition(format!(
                "coordinate {} is not nonabelian simple",
                i + 1
            )));
        }
        if m.projection(&[i]).order() != gi.order() {
            return Err(Error::Precondition(format!(
                "the subgroup does not project onto coordinate {}",
                i + 1
            )));
        }
    }
    let mut linked = alloc::vec![alloc::vec![false; k]; k];
    for i in 0..k {
        linked[i][i] = true;
        for j in i + 1..k {
            let l = m.projection(&[i, j]).order() == amb.coordinate(i).order();
            linked[i][j] = l;
            linked[j][i] = l;
        }
    }
    let mut assigned = alloc::vec![false; k];
    let mut blocks = Vec::new();
    for i in 0..k {
        if assigned[i] {
            continue;
        }
        let block: Vec<usize> = (i..k).filter(|&j| linked[i][j]).collect();
        for &a in &block {
            if assigned[a] || block.iter().any(|&b| !linked[a][b]) {
                return Err(Error::InvariantViolation(format!(
                    "diagonal linkage is not transitive at coordinate {}",
                    a + 1
                )));
            }
            assigned[a] = true;
        }
        blocks.push(block);
    }
    let mut product = BigUint::from(1u32);
    for block in &blocks {
        let others: Vec<usize> = (0..k).filter(|c| !block.contains(c)).collect();
        product *= m.coordinate_kernel(&others).order();
    }
    if product != m.order() {
        return Err(Error::InvariantViolation(format!(
            "block subgroups multiply to {product}, expected {}",
            m.order()
        )));
    }
    Ok(blocks)
}

/// An element of `M` meeting `pattern`, with a program over the letters of `M`.
///
/// Coordinates demanding nontriviality are handled in order: if the current
/// element is trivial there, it is multiplied by a generator of the kernel of
/// the coordinates already settled that moves it. This always succeeds for
/// subdirect products of simple groups when the pattern is feasible; if it
/// gets stuck otherwise, seeded random elements of the kernel of the
/// trivial-demand coordinates are tried.
pub fn pattern_element(
    m: &TaggedSubgroup,
    pattern: &[Demand],
) -> Result<(Permutation, StraightLineProgram)> {
    let amb = m.ambient();
    if pattern.len() != amb.len() {
        return Err(Error::Precondition(format!(
            "pattern has {} entries for {} coordinates",
            pattern.len(),
            amb.len()
        )));
    }
    let trivial: Vec<usize> = (0..amb.len())
        .filter(|&i| pattern[i] == Demand::Trivial)
        .collect();
    let nontrivial: Vec<usize> = (0..amb.len())
        .filter(|&i| pattern[i] == Demand::Nontrivial)
        .collect();
    for &i in &nontrivial {
        if m.projection(&[i]).is_trivial() {
            return Err(Error::InfeasiblePattern {
                block: alloc::vec![i],
            });
        }
    }
    let meets = |g: &Permutation| {
        nontrivial.iter().all(|&i| !amb.project(i, g).is_identity())
            && trivial.iter().all(|&i| amb.project(i, g).is_identity())
    };

    let mut g = Permutation::identity(amb.degree());
    let mut settled = trivial.clone();
    let mut stuck = None;
    for &t in &nontrivial {
        if amb.project(t, &g).is_identity() {
            let kernel = m.kernel_generators(&settled);
            match kernel.iter().find(|x| !amb.project(t, x).is_identity()) {
                Some(x) => g = &g * x,
                None => {
                    stuck = Some(t);
                    break;
                }
            }
        }
        settled.push(t);
    }
    if let Some(t) = stuck {
        let kernel = PermutationGroup::new(amb.degree(), m.kernel_generators(&trivial))?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        match (0..FALLBACK_DRAWS)
            .map(|_| kernel.random_element(&mut rng))
            .find(|x| meets(x))
        {
            Some(x) => g = x,
            None => {
                let mut block: Vec<usize> = trivial
                    .iter()
                    .copied()
                    .filter(|&c| m.projection(&[c, t]).order() == m.projection(&[c]).order())
                    .collect();
                block.push(t);
                block.sort_unstable();
                return Err(Error::InfeasiblePattern { block });
            }
        }
    }
    debug_assert!(meets(&g));
    let slp = m.constructive_membership(&g)?;
    Ok((g, slp))
}
