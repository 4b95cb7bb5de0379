use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;

use crate::perm::{Permutation, SiftResult, StabilizerChain};
use crate::{Error, Result};

/// A permutation group given by generators, with its stabilizer chain.
///
/// The chain is built eagerly on construction; afterwards the group is
/// immutable and every query is read-only.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    name: Option<String>,
    chain: StabilizerChain,
}

impl PermutationGroup {
    /// `⟨generators⟩` on `degree` points. Identity generators are allowed; an
    /// empty or all-identity list gives the trivial group.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        let chain = StabilizerChain::build(degree, &generators);
        Ok(PermutationGroup {
            degree,
            generators,
            name: None,
            chain,
        })
    }

    /// Parses generators in cycle notation.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| Permutation::parse_cycles(degree, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    /// Order as `u128` (saturating); exact for every group this crate enumerates.
    pub fn order_u128(&self) -> u128 {
        self.chain.order_u128()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.is_trivial()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        self.chain.contains(p)
    }

    /// Membership for elements already known to have the right degree.
    pub(crate) fn has(&self, p: &Permutation) -> bool {
        self.chain.contains(p).unwrap_or(false)
    }

    /// Constructive membership over the group's generators.
    pub fn sift(&self, p: &Permutation) -> Result<SiftResult> {
        self.chain.sift(p)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| (&g[i] * &g[j]) == (&g[j] * &g[i])))
    }

    /// True when every generator of `sub` conjugated by every generator of `self` stays in `sub`.
    pub fn normalizes(&self, sub: &PermutationGroup) -> bool {
        sub.generators
            .iter()
            .all(|k| self.generators.iter().all(|g| sub.has(&k.conjugate_by(g))))
    }

    /// `⟨elts^G⟩`, the smallest normal subgroup containing `elts`.
    pub fn normal_closure(&self, elts: &[Permutation]) -> Result<PermutationGroup> {
        for e in elts {
            if !self.contains(e)? {
                return Err(Error::Precondition(alloc::format!(
                    "normal closure: {e} is not in the group"
                )));
            }
        }
        Ok(self.normal_closure_unchecked(elts))
    }

    pub(crate) fn normal_closure_unchecked(&self, elts: &[Permutation]) -> PermutationGroup {
        let mut chain = StabilizerChain::new(self.degree);
        let mut gens: Vec<Permutation> = Vec::new();
        let mut queue = VecDeque::new();
        for e in elts {
            if !e.is_identity() && !chain.contains(e).unwrap_or(false) {
                chain.add_generator(e.clone());
                gens.push(e.clone());
                queue.push_back(gens.len() - 1);
            }
        }
        while let Some(i) = queue.pop_front() {
            for g in &self.generators {
                let c = gens[i].conjugate_by(g);
                if !chain.contains(&c).unwrap_or(false) {
                    chain.add_generator(c.clone());
                    gens.push(c);
                    queue.push_back(gens.len() - 1);
                }
            }
        }
        PermutationGroup {
            degree: self.degree,
            generators: gens,
            name: None,
            chain,
        }
    }

    /// `[G, G]`: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermutationGroup {
        let g = &self.generators;
        let mut comms = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let c = Permutation::commutator(&g[i], &g[j]);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_unchecked(&comms)
    }

    /// `[G = G⁽⁰⁾, G⁽¹⁾, …]` up to the perfect core.
    ///
    /// A solvable group ends at the trivial group. Otherwise the perfect core
    /// is listed twice (`G⁽ʳ⁾, G⁽ʳ⁺¹⁾`) to witness stabilization.
    pub fn derived_series(&self) -> Vec<PermutationGroup> {
        let mut series = alloc::vec![self.clone()];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_trivial() {
                return series;
            }
            let next = last.derived_subgroup();
            let stable = next.order() == last.order();
            series.push(next);
            if stable {
                return series;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.perfect_core().is_trivial()
    }

    /// Terminal term of the derived series.
    pub fn perfect_core(&self) -> PermutationGroup {
        let mut cur = self.clone();
        loop {
            if cur.is_trivial() {
                return cur;
            }
            let next = cur.derived_subgroup();
            if next.order() == cur.order() {
                return cur;
            }
            cur = next;
        }
    }

    /// Exactly uniform random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain.random_element(rng)
    }

    /// Breadth-first closure of the generators; errors once more than `cap` elements appear.
    pub fn naive_enumerate(&self, cap: usize) -> Result<BTreeSet<Permutation>> {
        let id = self.identity();
        let mut seen = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = &x * g;
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::OracleTooLarge { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// All elements in ascending image-list order, using the chain (no closure search).
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        if self.order_u128() > cap as u128 {
            return Err(Error::OracleTooLarge { cap });
        }
        let chain = &self.chain;
        let mut out = alloc::vec![self.identity()];
        for lvl in (0..chain.depth()).rev() {
            let mut next = Vec::with_capacity(out.len() * chain.orbit(lvl).len());
            for x in &out {
                for &pt in chain.orbit(lvl) {
                    next.push(x * chain.transversal(lvl, pt).expect("rep"));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Subgroup fixing every listed point, from a chain whose base starts with them.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermutationGroup {
        let prefix: Vec<usize> = {
            let mut seen = BTreeSet::new();
            points.iter().copied().filter(|p| seen.insert(*p)).collect()
        };
        if prefix.is_empty() {
            return self.clone();
        }
        let chain = StabilizerChain::build_with_base_prefix(self.degree, &self.generators, &prefix);
        let gens = chain
            .stabilizer_generator_tags(prefix.len())
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        PermutationGroup::new(self.degree, gens).expect("same degree")
    }

    /// The subgroup generated by `gens` (checked to lie in `self`).
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermutationGroup> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(Error::Precondition(alloc::format!(
                    "{g} is not in the group"
                )));
            }
        }
        PermutationGroup::new(self.degree, gens)
    }

    /// Conjugacy-class representatives (smallest element of each class), by naive closure.
    pub fn conjugacy_class_representatives(&self, cap: usize) -> Result<Vec<(Permutation, usize)>> {
        let elements = self.elements(cap)?;
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        let mut reps = Vec::new();
        for x in elements {
            if seen.contains(&x) {
                continue;
            }
            let mut class = BTreeSet::from([x.clone()]);
            let mut queue = VecDeque::from([x.clone()]);
            while let Some(y) = queue.pop_front() {
                for g in &self.generators {
                    let z = y.conjugate_by(g);
                    if class.insert(z.clone()) {
                        queue.push_back(z);
                    }
                }
            }
            reps.push((x, class.len()));
            seen.extend(class);
        }
        Ok(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn grp(n: usize, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::from_cycle_strings(n, gens).unwrap()
    }

    fn orders(series: &[PermutationGroup]) -> Vec<u128> {
        series.iter().map(|g| g.order_u128()).collect()
    }

    #[test]
    fn orders_match_closure() {
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert_eq!(a5.naive_enumerate(1000).unwrap().len(), 60);
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(s4.order_u128(), 24);
        let s5 = grp(5, &["(0 1)", "(0 1 2 3 4)"]);
        assert_eq!(s5.order_u128(), 120);
        let t = grp(3, &["()"]);
        assert_eq!(t.order_u128(), 1);
        assert!(t.chain().base().is_empty());
        assert_eq!(PermutationGroup::trivial(4).order_u128(), 1);
    }

    #[test]
    fn membership_examples() {
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        let t = Permutation::parse_cycles(5, "(0 1)").unwrap();
        assert!(!a5.contains(&t).unwrap());
        assert!(matches!(a5.sift(&t).unwrap(), SiftResult::NonMember { .. }));
        match a5.sift(&a5.identity()).unwrap() {
            SiftResult::Member(slp) => assert!(slp.is_identity()),
            other => panic!("{other:?}"),
        }
        let c5 = grp(5, &["(0 1 2 3 4)"]);
        let sq = Permutation::parse_cycles(5, "(0 2 4 1 3)").unwrap();
        match c5.sift(&sq).unwrap() {
            SiftResult::Member(slp) => {
                assert_eq!(slp.evaluate(c5.generators()).unwrap(), sq);
                let g = &c5.generators()[0];
                assert_eq!(sq, g * g);
            }
            other => panic!("{other:?}"),
        }
        assert!(a5.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn chain_invariants_hold() {
        for g in [
            grp(5, &["(0 1 2 3 4)", "(0 1 2)"]),
            grp(7, &["(0 1 2 3 4 5 6)", "(0 1)"]),
            grp(8, &["(0 1 2 3)(4 5 6 7)", "(0 4)(1 5)"]),
        ] {
            g.chain().check_invariants().unwrap();
        }
    }

    #[test]
    fn normal_closure_examples() {
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        let v4 = s4
            .normal_closure(&[Permutation::parse_cycles(4, "(0 1)(2 3)").unwrap()])
            .unwrap();
        assert_eq!(v4.order_u128(), 4);
        assert!(s4.normalizes(&v4));
        assert_eq!(s4.normal_closure(&[s4.identity()]).unwrap().order_u128(), 1);
        let s5 = grp(5, &["(0 1)", "(0 1 2 3 4)"]);
        let a5 = s5
            .normal_closure(&[Permutation::parse_cycles(5, "(0 1 2)").unwrap()])
            .unwrap();
        assert_eq!(a5.order_u128(), 60);
        let c5 = grp(5, &["(0 1 2 3 4)"]);
        assert!(c5
            .normal_closure(&[Permutation::parse_cycles(5, "(0 1)").unwrap()])
            .is_err());
    }

    #[test]
    fn derived_series_examples() {
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(orders(&s4.derived_series()), [24, 12, 4, 1]);
        assert!(s4.is_solvable());
        let c6 = grp(5, &["(0 1)(2 3 4)"]);
        assert_eq!(orders(&c6.derived_series()), [6, 1]);
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        let series = a5.derived_series();
        assert_eq!(orders(&series), [60, 60]);
        assert_eq!(a5.derived_subgroup().order_u128(), 60);
        assert!(!a5.is_solvable());
        assert!(PermutationGroup::trivial(3).is_solvable());
    }

    #[test]
    fn pointwise_stabilizers() {
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        let st = s4.pointwise_stabilizer(&[0]);
        assert_eq!(st.order_u128(), 6);
        assert!(st.generators().iter().all(|g| g.image(0) == 0));
        assert_eq!(s4.pointwise_stabilizer(&[]).order_u128(), 24);
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        assert_eq!(a5.pointwise_stabilizer(&[0, 1, 2]).order_u128(), 1);
        assert_eq!(a5.pointwise_stabilizer(&[3, 1]).order_u128(), 3);
    }

    #[test]
    fn random_elements_are_members() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        let s5 = grp(5, &["(0 1)", "(0 1 2 3 4)"]);
        for _ in 0..10_000 {
            let x = a5.random_element(&mut rng);
            assert!(s5.contains(&x).unwrap());
            // even permutations only
            let transpositions: usize = x.cycles().iter().map(|c| c.len() - 1).sum();
            assert_eq!(transpositions % 2, 0);
        }
        let t = PermutationGroup::trivial(3);
        assert!(t.random_element(&mut rng).is_identity());
    }

    #[test]
    fn random_element_c2_frequency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c2 = grp(2, &["(0 1)"]);
        let ids = (0..10_000)
            .filter(|_| c2.random_element(&mut rng).is_identity())
            .count();
        let f = ids as f64 / 10_000.0;
        assert!((f - 0.5).abs() <= 0.02, "{f}");
    }

    #[test]
    fn naive_cap() {
        let s5 = grp(5, &["(0 1)", "(0 1 2 3 4)"]);
        assert_eq!(
            s5.naive_enumerate(100),
            Err(Error::OracleTooLarge { cap: 100 })
        );
        let t = PermutationGroup::trivial(3);
        assert_eq!(t.naive_enumerate(10).unwrap().len(), 1);
    }

    #[test]
    fn elements_agree_with_closure() {
        let g = grp(6, &["(0 1 2)(3 4)", "(0 3)(1 4)(2 5)"]);
        let closure: Vec<_> = g.naive_enumerate(10_000).unwrap().into_iter().collect();
        assert_eq!(g.elements(10_000).unwrap(), closure);
    }

    #[test]
    fn conjugacy_classes_of_a5() {
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        let classes = a5.conjugacy_class_representatives(1000).unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.1).collect();
        sizes.sort();
        assert_eq!(sizes, [1, 12, 12, 15, 20]);
    }
}
