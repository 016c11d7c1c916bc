use super::{Creature, Family, Norm};
use crate::error::{Error, Result};
use crate::matching::perfect_left_matching;
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::Budget;
use std::collections::BTreeMap;

/// Distinct representatives `x_η ∈ dom(η)`, in the iteration order of `delta`.
pub fn sdr<'a, I>(delta: I) -> Result<Vec<(&'a PartialFunction, Coord)>>
where
    I: IntoIterator<Item = &'a PartialFunction>,
{
    let family: Vec<&PartialFunction> = delta.into_iter().collect();
    let mut index: BTreeMap<Coord, usize> = BTreeMap::new();
    for eta in &family {
        for c in eta.domain() {
            let next = index.len();
            index.entry(c).or_insert(next);
        }
    }
    let mut right: Vec<Coord> = vec![Coord(0); index.len()];
    for (&c, &i) in &index {
        right[i] = c;
    }
    let adjacency: Vec<Vec<usize>> = family.iter().map(|eta| eta.domain().map(|c| index[&c]).collect()).collect();
    let matched = perfect_left_matching(&adjacency, right.len()).ok_or(Error::NoSdr)?;
    Ok(family.into_iter().zip(matched).map(|(eta, r)| (eta, right[r])).collect())
}

/// `η↾set` when at least half of `dom(η)` lies in `set`.
fn majority_part(eta: &PartialFunction, set: &CoordSet) -> Option<PartialFunction> {
    let k = eta.overlap(set);
    (2 * k >= eta.len()).then(|| eta.restrict(set))
}

fn majority_family(t: &Creature, set: &CoordSet) -> Family {
    t.delta().iter().filter_map(|eta| majority_part(eta, set)).collect()
}

/// `(z*, Δ*)` with `Δ* = {η↾z* : |dom(η) ∩ z*| ≥ ½|dom(η)|}`.
pub fn restrict_half(t: &Creature, zstar: &CoordSet, budget: &Budget) -> Result<Creature> {
    if zstar.is_empty() || !zstar.is_subset(t.z()) {
        return Err(Error::Precondition("z* must be a nonempty subset of the domain".into()));
    }
    let delta = majority_family(t, zstar);
    if delta.is_empty() {
        return Err(Error::EmptyRestriction);
    }
    Creature::new(zstar.clone(), delta, budget)
}

/// Splits `t` along `z` and `dom[t] ∖ z` by the majority rule.
///
/// A side that keeps no constraint becomes unconstrained. Each side has
/// packing number at least `⌊n/2⌋`; the caller is responsible for the norm
/// precondition when the sides must be creatures in their own right.
pub fn cut(t: &Creature, z: &CoordSet, budget: &Budget) -> Result<(Creature, Creature)> {
    if z.is_empty() || !z.is_subset(t.z()) || z.len() == t.z().len() {
        return Err(Error::Precondition("cut needs a nonempty proper subset of the domain".into()));
    }
    let rest: CoordSet = t.z().difference(z).copied().collect();
    let side = |set: &CoordSet| -> Result<Creature> {
        let delta = majority_family(t, set);
        if delta.is_empty() {
            Creature::unconstrained(set.clone())
        } else {
            Creature::new(set.clone(), delta, budget)
        }
    };
    Ok((side(z)?, side(&rest)?))
}

/// `(⋃ z_k, ⋃ Δ_k)` for creatures with pairwise disjoint domains.
///
/// Constraints of different members live on disjoint coordinates, so the
/// packing number is exactly the minimum over the constrained members.
pub fn glue(ts: &[Creature]) -> Result<Creature> {
    if ts.is_empty() {
        return Err(Error::Precondition("glue needs at least one creature".into()));
    }
    let mut z = CoordSet::new();
    let mut delta = Family::new();
    let mut n = Norm::Infinite;
    for t in ts {
        for &c in t.z() {
            if !z.insert(c) {
                return Err(Error::DomainOverlap(c));
            }
        }
        delta.extend(t.delta().iter().cloned());
        n = n.min(t.packing());
    }
    Ok(Creature::with_norm(z, delta, n))
}

/// `(z, Δ₀ ∪ Δ₁)`, a common member of `Σ(t₀)` and `Σ(t₁)`.
pub fn link(t0: &Creature, t1: &Creature, budget: &Budget) -> Result<Creature> {
    if t0.z() != t1.z() {
        return Err(Error::DomainMismatch);
    }
    let delta: Family = t0.delta().union(t1.delta()).cloned().collect();
    Creature::new(t0.z().clone(), delta, budget)
}

fn disjoint_union(set: &[Creature]) -> Option<CoordSet> {
    let mut z = CoordSet::new();
    for s in set {
        for &c in s.z() {
            if !z.insert(c) {
                return None;
            }
        }
    }
    Some(z)
}

/// `t ∈ Σ(S)`: `z_t = ⋃ z_s`, `Δ_t ⊇ ⋃ Δ_s`, `t` a creature, members disjoint.
pub fn sigma_member(t: &Creature, set: &[Creature]) -> bool {
    if set.is_empty() || !t.is_member() {
        return false;
    }
    match disjoint_union(set) {
        Some(z) if &z == t.z() => set.iter().all(|s| s.delta().is_subset(t.delta())),
        _ => false,
    }
}

/// `S ∈ Σ⊥(t)`: the member domains partition `z_t` and every `η ∈ Δ_t`
/// restricts into some member's family.
pub fn sigma_bot_member(set: &[Creature], t: &Creature) -> bool {
    if set.is_empty() || !set.iter().all(Creature::is_member) {
        return false;
    }
    match disjoint_union(set) {
        Some(z) if &z == t.z() => {
            t.delta().iter().all(|eta| set.iter().any(|s| s.delta().contains(&eta.restrict(s.z()))))
        }
        _ => false,
    }
}
