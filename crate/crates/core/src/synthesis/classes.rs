use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::perm::{Permutation, PermutationGroup};
use crate::structure::{ElementIndex, MarkedKey};
use crate::{Error, Result};

/// Largest group for which a full multiplication table is precomputed.
const TABLE_LIMIT: usize = 2048;

/// Extra members kept per class for equivariance spot checks.
const SAMPLES: usize = 3;

/// `n`-tuples of `G` up to marked isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleClass {
    /// Lexicographically least member.
    pub representative: Vec<Permutation>,
    pub members: u64,
    pub generated_subgroup_order: BigUint,
    pub solvable: bool,
    /// A few further members, the least ones after the representative.
    pub samples: Vec<Vec<Permutation>>,
}

#[derive(Clone, Debug)]
struct RawClass {
    /// Least members in element-index order (which is permutation order).
    least: Vec<Vec<u32>>,
    members: u64,
}

/// Classes found among the tuples with a fixed leading entry.
#[derive(Clone, Debug, Default)]
pub struct ClassShard {
    classes: BTreeMap<MarkedKey, RawClass>,
}

impl ClassShard {
    /// Merge is associative and commutative, so shards can be combined in any order.
    pub fn merge(mut self, other: ClassShard) -> ClassShard {
        for (key, raw) in other.classes {
            match self.classes.get_mut(&key) {
                Some(mine) => {
                    mine.members += raw.members;
                    mine.least.extend(raw.least);
                    mine.least.sort();
                    mine.least.truncate(SAMPLES + 1);
                }
                None => {
                    self.classes.insert(key, raw);
                }
            }
        }
        self
    }
}

/// Enumerates `G^n` in shards by leading entry and groups tuples into
/// marked-isomorphism classes via canonical Cayley keys.
#[derive(Clone, Debug)]
pub struct TupleClassifier {
    group: PermutationGroup,
    index: ElementIndex,
    table: Option<Vec<u32>>,
    n: usize,
}

impl TupleClassifier {
    pub fn new(g: &PermutationGroup, n: usize, tuple_cap: u64, oracle_cap: usize) -> Result<Self> {
        let total = num_traits::pow(g.order(), n);
        if total > BigUint::from(tuple_cap) {
            return Err(Error::CapExceeded {
                what: "tuple enumeration",
                required: total.to_string(),
                cap: tuple_cap.to_string(),
            });
        }
        let index =
            ElementIndex::new(g, oracle_cap.max(tuple_cap.min(usize::MAX as u64) as usize))?;
        let size = index.len();
        let table = (size <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(size * size);
            for a in index.elements() {
                for b in index.elements() {
                    t.push(index.index_of(&(a * b)).expect("closed") as u32);
                }
            }
            t
        });
        Ok(TupleClassifier {
            group: g.clone(),
            index,
            table,
            n,
        })
    }

    pub fn index(&self) -> &ElementIndex {
        &self.index
    }

    pub fn shard_count(&self) -> usize {
        if self.n == 0 {
            1
        } else {
            self.index.len()
        }
    }

    pub(crate) fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub(crate) fn arity(&self) -> usize {
        self.n
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.index.len() + b as usize],
            None => self
                .index
                .index_of(&(self.index.get(a as usize) * self.index.get(b as usize)))
                .expect("closed") as u32,
        }
    }

    fn key(&self, tuple: &[u32], labels: &mut [u32], order: &mut Vec<u32>) -> MarkedKey {
        let id = self
            .index
            .index_of(&self.group.identity())
            .expect("identity") as u32;
        order.clear();
        order.push(id);
        labels[id as usize] = 0;
        let mut table = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let e = order[i];
            for &t in tuple {
                let y = self.mul(e, t);
                if labels[y as usize] == u32::MAX {
                    labels[y as usize] = order.len() as u32;
                    order.push(y);
                }
                table.push(labels[y as usize]);
            }
            i += 1;
        }
        for &e in order.iter() {
            labels[e as usize] = u32::MAX;
        }
        MarkedKey::from_table(tuple.len(), table)
    }

    /// Classes of the tuples whose first entry is element `leading`.
    pub fn classify_shard(&self, leading: usize) -> ClassShard {
        let size = self.index.len() as u32;
        let mut labels = vec![u32::MAX; size as usize];
        let mut order = Vec::new();
        let mut shard = ClassShard::default();
        let mut digits = vec![0u32; self.n];
        if self.n > 0 {
            digits[0] = leading as u32;
        }
        loop {
            let key = self.key(&digits, &mut labels, &mut order);
            let raw = shard.classes.entry(key).or_insert(RawClass {
                least: Vec::new(),
                members: 0,
            });
            raw.members += 1;
            // Enumeration is in increasing order, so the first members are the least.
            if raw.least.len() <= SAMPLES {
                raw.least.push(digits.clone());
            }
            let mut k = self.n;
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

    /// Final classes sorted by representative.
    pub fn finish(&self, shard: ClassShard) -> Vec<TupleClass> {
        let decode = |t: &Vec<u32>| -> Vec<Permutation> {
            t.iter()
                .map(|&i| self.index.get(i as usize).clone())
                .collect()
        };
        let mut out: Vec<TupleClass> = shard
            .classes
            .into_values()
            .map(|raw| {
                let representative = decode(&raw.least[0]);
                let h = PermutationGroup::new(self.group.degree(), representative.clone())
                    .expect("same degree");
                TupleClass {
                    samples: raw.least[1..].iter().map(decode).collect(),
                    representative,
                    members: raw.members,
                    generated_subgroup_order: h.order(),
                    solvable: h.is_solvable(),
                }
            })
            .collect();
        out.sort_by(|a, b| a.representative.cmp(&b.representative));
        out
    }
}

/// All marked-isomorphism classes of `n`-tuples of `G`.
pub fn classify_tuples(
    g: &PermutationGroup,
    n: usize,
    tuple_cap: u64,
    oracle_cap: usize,
) -> Result<Vec<TupleClass>> {
    let c = TupleClassifier::new(g, n, tuple_cap, oracle_cap)?;
    let shard = (0..c.shard_count())
        .map(|i| c.classify_shard(i))
        .fold(ClassShard::default(), ClassShard::merge);
    Ok(c.finish(shard))
}
