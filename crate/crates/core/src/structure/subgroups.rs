use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::{Permutation, PermutationGroup};
use crate::structure::ElementIndex;
use crate::{Error, Result};

/// Maximal subgroups found by brute force over the subgroup lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalSubgroups {
    /// Generators of each maximal subgroup.
    pub generators: Vec<Vec<Permutation>>,
    /// `|G : M|` for each maximal subgroup, in the same order.
    pub indices: Vec<u64>,
}

impl MaximalSubgroups {
    pub fn count(&self) -> usize {
        self.indices.len()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Lattice<'a> {
    index: &'a ElementIndex,
}

impl Lattice<'_> {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.index
            .index_of(&(self.index.get(a) * self.index.get(b)))
            .expect("closed")
    }

    /// `⟨S, x⟩` where `S` is given by its elements and generators.
    fn extend(&self, elements: &Bits, gens: &[usize], x: usize) -> Bits {
        let mut set = elements.clone();
        let mut queue: VecDeque<usize> = (0..self.index.len()).filter(|&i| set.get(i)).collect();
        let mut all: Vec<usize> = gens.to_vec();
        all.push(x);
        while let Some(e) = queue.pop_front() {
            for &g in &all {
                let y = self.mul(e, g);
                if !set.get(y) {
                    set.set(y);
                    queue.push_back(y);
                }
            }
        }
        set
    }
}

/// Every maximal subgroup of `G`, by closing the full subgroup lattice
/// under adjoining single elements, starting from the trivial subgroup.
///
/// A proper subgroup is maximal exactly when adjoining any outside element
/// yields `G`. Every subgroup is reached, so the count is exact.
pub fn maximal_subgroup_count(g: &PermutationGroup, cap: usize) -> Result<MaximalSubgroups> {
    let index = ElementIndex::new(g, cap)?;
    let n = index.len();
    let lattice = Lattice { index: &index };
    let id = index.index_of(&g.identity()).expect("identity");
    let mut trivial = Bits::new(n);
    trivial.set(id);

    let mut seen: BTreeSet<Bits> = BTreeSet::new();
    seen.insert(trivial.clone());
    let mut queue: VecDeque<(Bits, Vec<usize>)> = VecDeque::from([(trivial, Vec::new())]);
    let mut maximal: Vec<(Vec<usize>, usize)> = Vec::new();
    while let Some((elements, gens)) = queue.pop_front() {
        let size = elements.count();
        if size == n {
            continue;
        }
        let mut is_maximal = true;
        for x in 0..n {
            if elements.get(x) {
                continue;
            }
            let bigger = lattice.extend(&elements, &gens, x);
            if bigger.count() != n {
                is_maximal = false;
            }
            if seen.insert(bigger.clone()) {
                let mut more = gens.clone();
                more.push(x);
                queue.push_back((bigger, more));
            }
        }
        if is_maximal {
            maximal.push((gens, size));
        }
    }
    maximal.sort_by(|a, b| a.1.cmp(&b.1).reverse().then_with(|| a.0.cmp(&b.0)));
    Ok(MaximalSubgroups {
        indices: maximal.iter().map(|(_, s)| (n / s) as u64).collect(),
        generators: maximal
            .into_iter()
            .map(|(gens, _)| gens.into_iter().map(|i| index.get(i).clone()).collect())
            .collect(),
    })
}

/// All `d`-tuples of elements of `G` that generate `G`, in lexicographic order.
pub fn generating_tuples(
    g: &PermutationGroup,
    d: usize,
    cap: u64,
) -> Result<Vec<Vec<Permutation>>> {
    let order = g.order();
    let total = num_traits::pow(order.clone(), d);
    if total > num_bigint::BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "generating tuple enumeration",
            required: total.to_string(),
            cap: cap.to_string(),
        });
    }
    let index = ElementIndex::new(g, cap as usize)?;
    let n = index.len();
    let mut out = Vec::new();
    if d == 0 {
        if n == 1 {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    let mut digits = vec![0usize; d];
    loop {
        if index.closure_size(&digits, n) == n {
            out.push(digits.iter().map(|&i| index.get(i).clone()).collect());
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
        }
    }
}
