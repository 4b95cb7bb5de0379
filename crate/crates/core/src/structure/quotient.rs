use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::{Permutation, PermutationGroup};
use crate::{Error, Result};

#[derive(Clone, Debug)]
enum Realization {
    /// Trivial kernel: the quotient is the source itself.
    Identity,
    /// Regular action on right cosets `Kh`; `coset_of[i]` is the coset of the
    /// i-th element in sorted order and `reps[c]` the least element of coset `c`.
    Cosets {
        elements: Vec<Permutation>,
        coset_of: Vec<usize>,
        reps: Vec<usize>,
    },
}

/// A surjection `source → source/kernel`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: PermutationGroup,
    kernel: PermutationGroup,
    image: PermutationGroup,
    images_of_generators: Vec<Permutation>,
    realization: Realization,
}

impl QuotientMap {
    /// Quotient by a normal subgroup `kernel ⊴ source`.
    pub fn by_normal_subgroup(
        source: &PermutationGroup,
        kernel: &PermutationGroup,
        cap: usize,
    ) -> Result<QuotientMap> {
        if kernel.degree() != source.degree() {
            return Err(Error::DegreeMismatch {
                left: source.degree(),
                right: kernel.degree(),
            });
        }
        if !kernel.is_subgroup_of(source) || !source.normalizes(kernel) {
            return Err(Error::NotNormal);
        }
        if kernel.is_trivial() {
            return Ok(QuotientMap {
                source: source.clone(),
                kernel: kernel.clone(),
                image: source.clone(),
                images_of_generators: source.generators().to_vec(),
                realization: Realization::Identity,
            });
        }
        let elements = source.elements(cap)?;
        let kernel_elements = kernel.elements(cap)?;
        let mut coset_of = vec![usize::MAX; elements.len()];
        let mut reps = Vec::new();
        for i in 0..elements.len() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for k in &kernel_elements {
                let j = elements.binary_search(&(k * &elements[i])).expect("closed");
                coset_of[j] = c;
            }
        }
        let realization = Realization::Cosets {
            elements,
            coset_of,
            reps,
        };
        let images_of_generators: Vec<Permutation> = source
            .generators()
            .iter()
            .map(|g| coset_image(&realization, g))
            .collect();
        let image = PermutationGroup::new(reps_len(&realization), images_of_generators.clone())?;
        Ok(QuotientMap {
            source: source.clone(),
            kernel: kernel.clone(),
            image,
            images_of_generators,
            realization,
        })
    }

    pub fn source(&self) -> &PermutationGroup {
        &self.source
    }

    pub fn kernel(&self) -> &PermutationGroup {
        &self.kernel
    }

    pub fn image(&self) -> &PermutationGroup {
        &self.image
    }

    pub fn images_of_generators(&self) -> &[Permutation] {
        &self.images_of_generators
    }

    /// True when the map is the identity on the source.
    pub fn is_identity(&self) -> bool {
        matches!(self.realization, Realization::Identity)
    }

    pub fn apply(&self, x: &Permutation) -> Result<Permutation> {
        if !self.source.contains(x)? {
            return Err(Error::NotAMember { level: 0 });
        }
        Ok(match &self.realization {
            Realization::Identity => x.clone(),
            r => coset_image(r, x),
        })
    }

    /// Normality, homomorphism on random pairs and `|source| = |kernel|·|image|`.
    pub fn check(&self, pairs: usize) -> Result<()> {
        let bad = |m: &str| Error::InvariantViolation(alloc::format!("quotient map: {m}"));
        if !self.source.normalizes(&self.kernel) {
            return Err(bad("kernel not normal"));
        }
        if self.source.order() != self.kernel.order() * self.image.order() {
            return Err(bad("order mismatch"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..pairs {
            let a = self.source.random_element(&mut rng);
            let b = self.source.random_element(&mut rng);
            if self.apply(&(&a * &b))? != &self.apply(&a)? * &self.apply(&b)? {
                return Err(bad("not a homomorphism"));
            }
            if self.kernel.has(&a) != self.apply(&a)?.is_identity() {
                return Err(bad("kernel mismatch"));
            }
        }
        Ok(())
    }
}

fn reps_len(r: &Realization) -> usize {
    match r {
        Realization::Identity => 0,
        Realization::Cosets { reps, .. } => reps.len(),
    }
}

fn coset_image(r: &Realization, x: &Permutation) -> Permutation {
    let Realization::Cosets {
        elements,
        coset_of,
        reps,
    } = r
    else {
        unreachable!("identity realization has no coset action")
    };
    let images = reps
        .iter()
        .map(|&h| {
            let j = elements.binary_search(&(&elements[h] * x)).expect("closed");
            coset_of[j]
        })
        .collect();
    Permutation::from_images_unchecked(images)
}
