//! The packing number `n(z, Δ)`.
//!
//! `n` is the largest `k` such that every subfamily `Δ' ⊆ Δ` contains a
//! subfamily with pairwise disjoint domains covering at least `k·|Δ'|`
//! coordinates. Writing `P(Δ')` for the best such coverage, this is
//! `min over nonempty Δ' of ⌊P(Δ') / |Δ'|⌋`.
//!
//! `P` is a maximum-weight set packing. It is computed for every subfamily at
//! once by a recurrence over the subset lattice: either the lowest member is
//! left out, or it is taken and everything overlapping it is discarded.

use super::Norm;
use crate::error::{Error, Result};
use crate::pf::PartialFunction;
use crate::points::Budget;

/// Hard ceiling on the family size regardless of the configured budget.
pub const MAX_FAMILY_HARD: usize = 24;

pub fn norm_n<'a, I>(delta: I, budget: &Budget) -> Result<Norm>
where
    I: IntoIterator<Item = &'a PartialFunction>,
{
    let family: Vec<&PartialFunction> = delta.into_iter().collect();
    if family.is_empty() {
        return Ok(Norm::Infinite);
    }
    // Members whose domains never meet pack independently, so `P` is additive
    // over connected components and `n` is the minimum of the component values.
    let mut n = u32::MAX;
    for comp in components(&family) {
        n = n.min(component_n(&comp, budget)?);
    }
    Ok(Norm::Finite(u64::from(n)))
}

fn components<'a>(family: &[&'a PartialFunction]) -> Vec<Vec<&'a PartialFunction>> {
    let m = family.len();
    let doms: Vec<_> = family.iter().map(|eta| eta.domain_set()).collect();
    let mut label: Vec<usize> = (0..m).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if !doms[i].is_disjoint(&doms[j]) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<&PartialFunction>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for (i, &pf) in family.iter().enumerate() {
        let r = find(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(pf);
    }
    out
}

fn component_n(family: &[&PartialFunction], budget: &Budget) -> Result<u32> {
    let m = family.len();
    if m > budget.max_family || m > MAX_FAMILY_HARD {
        return Err(Error::EnumerationTooLarge {
            requested: 1u128 << m.min(127),
            budget: 1u64 << budget.max_family.min(MAX_FAMILY_HARD),
        });
    }
    let weights: Vec<u32> = family.iter().map(|eta| eta.len() as u32).collect();
    let doms: Vec<_> = family.iter().map(|eta| eta.domain_set()).collect();
    let mut disjoint = vec![0u32; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && doms[i].is_disjoint(&doms[j]) {
                disjoint[i] |= 1 << j;
            }
        }
    }

    let full = 1usize << m;
    let mut best = vec![0u32; full];
    let mut n = u32::MAX;
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        let rest = s & !(1 << low);
        let take = weights[low] + best[rest & disjoint[low] as usize];
        best[s] = best[rest].max(take);
        n = n.min(best[s] / s.count_ones());
    }
    Ok(n)
}

/// Best disjoint coverage `P(Δ')` of one subfamily, by branch and bound.
///
/// Used where only a single packing is needed; the bound is the total
/// weight of the members still available.
pub fn best_packing(family: &[&PartialFunction]) -> (u32, Vec<usize>) {
    let doms: Vec<_> = family.iter().map(|eta| eta.domain_set()).collect();
    let weights: Vec<u32> = family.iter().map(|eta| eta.len() as u32).collect();
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));

    struct Search<'a> {
        doms: &'a [crate::pf::CoordSet],
        weights: &'a [u32],
        order: &'a [usize],
        best: u32,
        best_pick: Vec<usize>,
        pick: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize, value: u32, remaining: u32) {
            if value > self.best {
                self.best = value;
                self.best_pick = self.pick.clone();
            }
            if pos == self.order.len() || value + remaining <= self.best {
                return;
            }
            let i = self.order[pos];
            let w = self.weights[i];
            if self.pick.iter().all(|&p| self.doms[p].is_disjoint(&self.doms[i])) {
                self.pick.push(i);
                self.run(pos + 1, value + w, remaining - w);
                self.pick.pop();
            }
            self.run(pos + 1, value, remaining - w);
        }
    }

    let total = weights.iter().sum();
    let mut s = Search { doms: &doms, weights: &weights, order: &order, best: 0, best_pick: vec![], pick: vec![] };
    s.run(0, 0, total);
    let mut pick = s.best_pick;
    pick.sort_unstable();
    (s.best, pick)
}
