use alloc::string::String;
use alloc::vec::Vec;

use crate::perm::PermutationGroup;
use crate::structure::QuotientMap;
use crate::{Error, Result};

/// Normal closures of the conjugacy-class representatives (nontrivial ones),
/// deduplicated, in class order.
fn single_element_closures(g: &PermutationGroup, cap: usize) -> Result<Vec<PermutationGroup>> {
    let mut out: Vec<PermutationGroup> = Vec::new();
    for (x, _) in g.conjugacy_class_representatives(cap)? {
        if x.is_identity() {
            continue;
        }
        let k = g.normal_closure_unchecked(core::slice::from_ref(&x));
        if !out.iter().any(|o| o.same_group(&k)) {
            out.push(k);
        }
    }
    Ok(out)
}

/// All minimal normal subgroups, as inclusion-minimal normal closures of single elements.
pub fn minimal_normal_subgroups(g: &PermutationGroup, cap: usize) -> Result<Vec<PermutationGroup>> {
    if g.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let closures = single_element_closures(g, cap)?;
    let minimal = closures
        .iter()
        .filter(|k| {
            !closures
                .iter()
                .any(|o| o.order() < k.order() && o.is_subgroup_of(k))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Nontrivial with no proper nontrivial normal subgroup.
pub fn is_simple(g: &PermutationGroup, cap: usize) -> Result<bool> {
    if g.is_trivial() {
        return Ok(false);
    }
    let order = g.order();
    for (x, _) in g.conjugacy_class_representatives(cap)? {
        if !x.is_identity()
            && g.normal_closure_unchecked(core::slice::from_ref(&x))
                .order()
                != order
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits `N ≅ S^m` (S nonabelian simple) into its simple direct factors.
pub fn simple_factor_decomposition(
    n: &PermutationGroup,
    cap: usize,
) -> Result<Vec<PermutationGroup>> {
    let not = |m: &str| Error::NotProductOfSimples(String::from(m));
    if n.is_trivial() {
        return Err(not("trivial group"));
    }
    if n.derived_subgroup().order() != n.order() {
        return Err(not("not perfect"));
    }
    let factors = minimal_normal_subgroups(n, cap)?;
    for f in &factors {
        if f.is_abelian() || !is_simple(f, cap)? {
            return Err(not("a minimal normal subgroup is not nonabelian simple"));
        }
        if f.order() != factors[0].order() {
            return Err(not("factors have different orders"));
        }
    }
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            let commute = a
                .generators()
                .iter()
                .all(|x| b.generators().iter().all(|y| (x * y) == (y * x)));
            if !commute {
                return Err(not("factors do not centralize each other"));
            }
        }
    }
    let product = factors
        .iter()
        .fold(num_bigint::BigUint::from(1u32), |acc, f| acc * f.order());
    if product != n.order() {
        return Err(not("factor orders do not multiply to |N|"));
    }
    Ok(factors)
}

/// Non-solvable, and every quotient by a nontrivial normal subgroup is solvable.
pub fn is_just_nonsolvable(g: &PermutationGroup, cap: usize) -> Result<bool> {
    let core = g.perfect_core();
    if core.is_trivial() {
        return Ok(false);
    }
    // G/K is solvable iff K contains the perfect core.
    for k in single_element_closures(g, cap)? {
        if !core.is_subgroup_of(&k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `φ_H`: a homomorphism onto a just non-solvable quotient of `H`.
///
/// The kernel is grown greedily: elements are visited by (order, image list)
/// and `K` is replaced by the normal closure of `K ∪ {g}` whenever the
/// quotient stays non-solvable.
pub fn just_nonsolvable_quotient(h: &PermutationGroup, cap: usize) -> Result<QuotientMap> {
    let core = h.perfect_core();
    if core.is_trivial() {
        return Err(Error::Solvable);
    }
    let mut elements = h.elements(cap)?;
    elements.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    let mut kernel = PermutationGroup::trivial(h.degree());
    for g in elements {
        if g.is_identity() || kernel.has(&g) {
            continue;
        }
        let mut gens = kernel.generators().to_vec();
        gens.push(g);
        let candidate = h.normal_closure_unchecked(&gens);
        if !core.is_subgroup_of(&candidate) {
            kernel = candidate;
        }
    }
    QuotientMap::by_normal_subgroup(h, &kernel, cap)
}
