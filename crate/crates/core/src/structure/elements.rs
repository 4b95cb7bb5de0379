use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::{Permutation, PermutationGroup};
use crate::Result;

/// The elements of a small group in ascending image-list order, with
/// binary-search lookup.
#[derive(Clone, Debug)]
pub struct ElementIndex {
    elements: Vec<Permutation>,
}

impl ElementIndex {
    pub fn new(group: &PermutationGroup, cap: usize) -> Result<Self> {
        Ok(ElementIndex {
            elements: group.elements(cap)?,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Size of `⟨tuple⟩`, stopping early once it exceeds `stop_above`.
    pub fn closure_size(&self, tuple: &[usize], stop_above: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let id = self
            .index_of(&Permutation::identity(self.degree()))
            .expect("identity");
        seen[id] = true;
        let mut count = 1;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in tuple {
                let y = self
                    .index_of(&(&self.elements[x] * &self.elements[g]))
                    .expect("closed");
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    if count > stop_above {
                        return count;
                    }
                    queue.push_back(y);
                }
            }
        }
        count
    }

    fn degree(&self) -> usize {
        self.elements.first().map(|p| p.degree()).unwrap_or(0)
    }
}

/// Canonical labelled Cayley graph of `⟨t_1, …, t_n⟩` with respect to the
/// marked generators.
///
/// Elements are labelled in breadth-first discovery order (right
/// multiplication by `t_1, …, t_n` in turn) and `table[i·n + j]` is the label
/// of `e_i · t_j`. Two tuples have equal keys exactly when some isomorphism
/// `⟨t⟩ → ⟨t'⟩` maps `t_j ↦ t'_j` for every `j` (a marked isomorphism).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedKey {
    arity: usize,
    table: Vec<u32>,
}

impl MarkedKey {
    pub(crate) fn from_table(arity: usize, table: Vec<u32>) -> MarkedKey {
        MarkedKey { arity, table }
    }

    pub fn of(tuple: &[Permutation]) -> MarkedKey {
        let (key, _) = Self::walk(tuple);
        key
    }

    /// The key together with the elements of `⟨tuple⟩` in label order.
    pub fn with_elements(tuple: &[Permutation]) -> (MarkedKey, Vec<Permutation>) {
        Self::walk(tuple)
    }

    fn walk(tuple: &[Permutation]) -> (MarkedKey, Vec<Permutation>) {
        let n = tuple.len();
        let degree = tuple.first().map(|p| p.degree()).unwrap_or(0);
        let id = Permutation::identity(degree);
        let mut labels: BTreeMap<Permutation, u32> = BTreeMap::new();
        labels.insert(id.clone(), 0);
        let mut elements = vec![id];
        let mut table = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            for t in tuple {
                let y = &elements[i] * t;
                let next = elements.len() as u32;
                let label = *labels.entry(y.clone()).or_insert(next);
                if label == next {
                    elements.push(y);
                }
                table.push(label);
            }
            i += 1;
        }
        (MarkedKey { arity: n, table }, elements)
    }

    /// True when `tuple` has this key; aborts at the first disagreement.
    pub fn matches(&self, tuple: &[Permutation]) -> bool {
        if tuple.len() != self.arity {
            return false;
        }
        let n = self.arity;
        let order = self.order();
        let degree = tuple.first().map(|p| p.degree()).unwrap_or(0);
        let id = Permutation::identity(degree);
        let mut labels: BTreeMap<Permutation, u32> = BTreeMap::new();
        labels.insert(id.clone(), 0);
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for (j, t) in tuple.iter().enumerate() {
                let y = &elements[i] * t;
                let expected = self.table[i * n + j];
                match labels.get(&y) {
                    Some(&l) => {
                        if l != expected {
                            return false;
                        }
                    }
                    None => {
                        if expected as usize != elements.len() || elements.len() >= order {
                            return false;
                        }
                        labels.insert(y.clone(), expected);
                        elements.push(y);
                    }
                }
            }
            i += 1;
        }
        elements.len() == order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Order of the generated subgroup.
    pub fn order(&self) -> usize {
        if self.arity == 0 {
            1
        } else {
            self.table.len() / self.arity
        }
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}
