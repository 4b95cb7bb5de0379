use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::{Permutation, PermutationGroup, SiftResult};
use crate::structure::{ElementIndex, MarkedKey};
use crate::{Error, Result};

/// An automorphism given by the images of the domain's generators.
#[derive(Clone, Debug)]
pub struct GroupAutomorphism {
    domain: PermutationGroup,
    images: Vec<Permutation>,
}

impl GroupAutomorphism {
    /// Checks that `generators[j] ↦ images[j]` extends to an automorphism.
    pub fn new(domain: &PermutationGroup, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != domain.generators().len() {
            return Err(Error::Precondition(alloc::format!(
                "expected {} generator images, got {}",
                domain.generators().len(),
                images.len()
            )));
        }
        for y in &images {
            if !domain.contains(y)? {
                return Err(Error::NotAMember { level: 0 });
            }
        }
        // A marked isomorphism ⟨gens⟩ → ⟨images⟩ whose image lies in G and has |G|
        // elements is an automorphism.
        if !MarkedKey::of(domain.generators()).matches(&images) {
            return Err(Error::Precondition(
                "generator images do not extend to an automorphism".into(),
            ));
        }
        Ok(GroupAutomorphism {
            domain: domain.clone(),
            images,
        })
    }

    pub fn identity(domain: &PermutationGroup) -> Self {
        GroupAutomorphism {
            domain: domain.clone(),
            images: domain.generators().to_vec(),
        }
    }

    pub fn domain(&self) -> &PermutationGroup {
        &self.domain
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn apply(&self, x: &Permutation) -> Result<Permutation> {
        match self.domain.sift(x)? {
            SiftResult::Member(slp) => slp.evaluate(&self.images),
            SiftResult::NonMember { level, .. } => Err(Error::NotAMember { level }),
        }
    }

    /// `x ↦ other(self(x))`.
    pub fn then(&self, other: &GroupAutomorphism) -> Result<GroupAutomorphism> {
        let images = self
            .images
            .iter()
            .map(|y| other.apply(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAutomorphism {
            domain: self.domain.clone(),
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images == self.domain.generators()
    }
}

/// Drops identities, repeats and redundant generators, keeping the order.
fn minimal_generating_tuple(g: &PermutationGroup) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    for x in g.generators() {
        if !x.is_identity() && !gens.contains(x) {
            gens.push(x.clone());
        }
    }
    let order = g.order();
    let mut i = gens.len();
    while i > 0 {
        i -= 1;
        let mut rest = gens.clone();
        rest.remove(i);
        if PermutationGroup::new(g.degree(), rest.clone())
            .expect("same degree")
            .order()
            == order
        {
            gens = rest;
        }
    }
    gens
}

/// All automorphisms of `G`, by backtracking over images of a generating
/// tuple. Candidates must match element orders and every prefix's marked key.
pub fn automorphism_group(g: &PermutationGroup, cap: usize) -> Result<Vec<GroupAutomorphism>> {
    let index = ElementIndex::new(g, cap)?;
    let gens = minimal_generating_tuple(g);
    if gens.is_empty() {
        return Ok(vec![GroupAutomorphism::identity(g)]);
    }
    let (_, labelled) = MarkedKey::with_elements(&gens);
    let label_of: BTreeMap<&Permutation, usize> =
        labelled.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let gen_labels: Vec<usize> = g.generators().iter().map(|x| label_of[x]).collect();
    let prefix_keys: Vec<MarkedKey> = (1..=gens.len())
        .map(|j| MarkedKey::of(&gens[..j]))
        .collect();
    let candidates: Vec<Vec<&Permutation>> = gens
        .iter()
        .map(|t| {
            let o = t.order();
            index.elements().iter().filter(|e| e.order() == o).collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut chosen: Vec<Permutation> = Vec::with_capacity(gens.len());
    let mut cursor = vec![0usize; gens.len()];
    let mut depth = 0;
    // Iterative depth-first search over candidate images.
    loop {
        if cursor[depth] == candidates[depth].len() {
            if depth == 0 {
                break;
            }
            cursor[depth] = 0;
            depth -= 1;
            chosen.pop();
            continue;
        }
        let y = candidates[depth][cursor[depth]].clone();
        cursor[depth] += 1;
        chosen.push(y);
        if !prefix_keys[depth].matches(&chosen) {
            chosen.pop();
            continue;
        }
        if depth + 1 == gens.len() {
            let (_, images) = MarkedKey::with_elements(&chosen);
            found.push(GroupAutomorphism {
                domain: g.clone(),
                images: gen_labels.iter().map(|&l| images[l].clone()).collect(),
            });
            chosen.pop();
        } else {
            depth += 1;
        }
    }
    Ok(found)
}

/// Automorphisms as permutations of an element index, for orbit computations.
#[derive(Clone, Debug)]
pub struct AutomorphismTable {
    index: ElementIndex,
    maps: Vec<Vec<u32>>,
}

impl AutomorphismTable {
    pub fn new(g: &PermutationGroup, auts: &[GroupAutomorphism], cap: usize) -> Result<Self> {
        let index = ElementIndex::new(g, cap)?;
        let (_, labelled) = MarkedKey::with_elements(g.generators());
        let positions: Vec<usize> = labelled
            .iter()
            .map(|e| index.index_of(e).expect("element of G"))
            .collect();
        let mut maps = Vec::with_capacity(auts.len());
        for a in auts {
            let (_, images) = MarkedKey::with_elements(&a.images);
            if images.len() != labelled.len() {
                return Err(Error::Precondition(
                    "automorphism of a different group".into(),
                ));
            }
            let mut map = vec![0u32; index.len()];
            for (p, y) in positions.iter().zip(&images) {
                map[*p] = index.index_of(y).ok_or(Error::NotAMember { level: 0 })? as u32;
            }
            maps.push(map);
        }
        Ok(AutomorphismTable { index, maps })
    }

    pub fn index(&self) -> &ElementIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Element indices of a tuple.
    pub fn encode(&self, tuple: &[Permutation]) -> Result<Vec<u32>> {
        tuple
            .iter()
            .map(|x| {
                self.index
                    .index_of(x)
                    .map(|i| i as u32)
                    .ok_or(Error::NotAMember { level: 0 })
            })
            .collect()
    }

    pub fn apply_encoded(&self, aut: usize, tuple: &[u32]) -> Vec<u32> {
        tuple.iter().map(|&i| self.maps[aut][i as usize]).collect()
    }
}

/// One Aut-orbit of an input tuple list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleOrbit {
    /// Lexicographically least tuple in the orbit.
    pub representative: Vec<Permutation>,
    /// Size of the full orbit.
    pub size: usize,
    /// How many input tuples lie in it.
    pub members: usize,
}

/// Partitions `tuples` into Aut-orbits, sorted by representative.
///
/// Orbits of generating tuples must be regular; a shorter one is reported as
/// an invariant violation.
pub fn aut_orbits_on_tuples(
    g: &PermutationGroup,
    tuples: &[Vec<Permutation>],
    auts: &[GroupAutomorphism],
    cap: usize,
) -> Result<Vec<TupleOrbit>> {
    let table = AutomorphismTable::new(g, auts, cap)?;
    let order = table.index.len();
    let encoded = tuples
        .iter()
        .map(|t| table.encode(t))
        .collect::<Result<Vec<_>>>()?;
    let input: BTreeSet<&Vec<u32>> = encoded.iter().collect();
    let mut assigned: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out = Vec::new();
    for t in &encoded {
        if assigned.contains(t) {
            continue;
        }
        let orbit: BTreeSet<Vec<u32>> = (0..table.len())
            .map(|a| table.apply_encoded(a, t))
            .collect();
        let members = orbit.iter().filter(|x| input.contains(x)).count();
        let idx: Vec<usize> = t.iter().map(|&i| i as usize).collect();
        if orbit.len() != table.len() && table.index.closure_size(&idx, order) == order {
            return Err(Error::InvariantViolation(alloc::format!(
                "orbit of a generating tuple has size {} but |Aut| = {}",
                orbit.len(),
                table.len()
            )));
        }
        // Element indices follow permutation order, so the least code is the least tuple.
        let rep = orbit.iter().next().cloned().unwrap_or_else(|| t.clone());
        out.push(TupleOrbit {
            representative: rep
                .iter()
                .map(|&i| table.index.get(i as usize).clone())
                .collect(),
            size: orbit.len().max(1),
            members,
        });
        assigned.extend(orbit);
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// True iff no listed automorphism maps `t1` to `t2` coordinatewise.
pub fn automorphism_independent(
    t1: &[Permutation],
    t2: &[Permutation],
    auts: &[GroupAutomorphism],
) -> Result<bool> {
    if t1.len() != t2.len() {
        return Err(Error::Precondition("tuples of different lengths".into()));
    }
    for a in auts {
        let mut hit = true;
        for (x, y) in t1.iter().zip(t2) {
            if &a.apply(x)? != y {
                hit = false;
                break;
            }
        }
        if hit {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::generating_tuples;

    const CAP: usize = 10_000;

    fn grp(n: usize, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn automorphism_counts() {
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        assert_eq!(automorphism_group(&a5, CAP).unwrap().len(), 120);
        let c2 = grp(2, &["(0 1)"]);
        assert_eq!(automorphism_group(&c2, CAP).unwrap().len(), 1);
        let s3 = grp(3, &["(0 1)", "(0 1 2)"]);
        assert_eq!(automorphism_group(&s3, CAP).unwrap().len(), 6);
        let c5 = grp(5, &["(0 1 2 3 4)"]);
        assert_eq!(automorphism_group(&c5, CAP).unwrap().len(), 4);
        let v4 = grp(4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        assert_eq!(automorphism_group(&v4, CAP).unwrap().len(), 6);
        assert_eq!(
            automorphism_group(&a5, 10).unwrap_err(),
            Error::OracleTooLarge { cap: 10 }
        );
    }

    #[test]
    fn automorphisms_compose_and_apply() {
        let s3 = grp(3, &["(0 1)", "(0 1 2)"]);
        let auts = automorphism_group(&s3, CAP).unwrap();
        assert_eq!(auts.iter().filter(|a| a.is_identity()).count(), 1);
        let c = auts[1].then(&auts[2]).unwrap();
        GroupAutomorphism::new(&s3, c.images().to_vec()).unwrap();
        let x = Permutation::parse_cycles(3, "(0 2 1)").unwrap();
        let y = Permutation::parse_cycles(3, "(1 2)").unwrap();
        let lhs = auts[3].apply(&(&x * &y)).unwrap();
        let rhs = &auts[3].apply(&x).unwrap() * &auts[3].apply(&y).unwrap();
        assert_eq!(lhs, rhs);
        let bogus = vec![
            Permutation::parse_cycles(3, "(0 1 2)").unwrap(),
            Permutation::parse_cycles(3, "(0 1)").unwrap(),
        ];
        assert!(GroupAutomorphism::new(&s3, bogus).is_err());
    }

    #[test]
    fn orbits_on_generating_pairs_of_a5() {
        let a5 = grp(5, &["(0 1 2 3 4)", "(0 1 2)"]);
        let auts = automorphism_group(&a5, CAP).unwrap();
        let pairs = generating_tuples(&a5, 2, 10_000_000).unwrap();
        assert_eq!(pairs.len(), 2280);
        let orbits = aut_orbits_on_tuples(&a5, &pairs, &auts, CAP).unwrap();
        assert_eq!(orbits.len(), 19);
        assert!(orbits.iter().all(|o| o.size == 120 && o.members == 120));
        assert!(automorphism_independent(
            &orbits[0].representative,
            &orbits[1].representative,
            &auts
        )
        .unwrap());
        let t = &orbits[3].representative;
        assert!(!automorphism_independent(t, t, &auts).unwrap());
        let s = Permutation::parse_cycles(5, "(0 1)").unwrap();
        let conj: Vec<Permutation> = t.iter().map(|x| x.conjugate_by(&s)).collect();
        assert!(!automorphism_independent(t, &conj, &auts).unwrap());
    }

    #[test]
    fn small_orbit_examples() {
        let c2 = grp(2, &["(0 1)"]);
        let auts = automorphism_group(&c2, CAP).unwrap();
        let tuples: Vec<Vec<Permutation>> = c2
            .elements(CAP)
            .unwrap()
            .into_iter()
            .map(|x| vec![x])
            .collect();
        assert_eq!(
            aut_orbits_on_tuples(&c2, &tuples, &auts, CAP)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            aut_orbits_on_tuples(&c2, &tuples[..1], &auts, CAP)
                .unwrap()
                .len(),
            1
        );
    }
}
