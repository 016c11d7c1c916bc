//! Compatibility: a common point of `POS(p₀)` and `POS(p₁)`, and the common
//! upper bound built from such a point.

use super::{ceil_div_pow2, leq_syntactic, times_pow2, Blocks, QCondition, Strictness};
use crate::error::{Error, Result};
use crate::matching::perfect_left_matching;
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::{enumerate_extensions, Assignment, Budget};
use std::collections::BTreeMap;

fn same_frame(p0: &QCondition, p1: &QCondition) -> Result<()> {
    if p0.window != p1.window || p0.alphabet != p1.alphabet {
        return Err(Error::Precondition("conditions must share window and alphabet".into()));
    }
    if p0.seq != p1.seq {
        return Err(Error::Precondition("conditions must share the norm sequence".into()));
    }
    Ok(())
}

/// The lexicographically first point of `POS(p₀) ∩ POS(p₁)`, if any.
pub fn compatible_bruteforce(p0: &QCondition, p1: &QCondition, budget: &Budget) -> Result<Option<Assignment>> {
    if p0.window != p1.window || p0.alphabet != p1.alphabet {
        return Err(Error::Precondition("conditions must share window and alphabet".into()));
    }
    let stem = match p0.w.union(&p1.w) {
        Ok(s) => s,
        Err(_) => return Ok(None),
    };
    let mut points = enumerate_extensions(&p0.alphabet, &p0.window, &stem, budget)?;
    Ok(points.find(|x| p0.pos_member(x) && p1.pos_member(x)))
}

/// Pairwise disjoint `u_i ⊆ dom_i` with `|u_i| = size_i`.
///
/// Request `i` is expanded into `size_i` copies of `dom_i`; a system of
/// distinct representatives of the copies is grouped back by request.
pub fn hall_select_u(requests: &[(CoordSet, usize)]) -> Result<Vec<CoordSet>> {
    let universe: CoordSet = requests.iter().flat_map(|(d, _)| d.iter().copied()).collect();
    let total: usize = requests.iter().map(|r| r.1).sum();
    if total > universe.len() {
        return Err(Error::NoSelection);
    }
    let right: Vec<Coord> = universe.iter().copied().collect();
    let index: BTreeMap<Coord, usize> = right.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut owner = Vec::with_capacity(total);
    let mut adjacency = Vec::with_capacity(total);
    for (i, (dom, size)) in requests.iter().enumerate() {
        let adj: Vec<usize> = dom.iter().map(|c| index[c]).collect();
        for _ in 0..*size {
            owner.push(i);
            adjacency.push(adj.clone());
        }
    }
    let matched = perfect_left_matching(&adjacency, right.len()).ok_or(Error::NoSelection)?;
    let mut out = vec![CoordSet::new(); requests.len()];
    for (copy, r) in matched.into_iter().enumerate() {
        out[owner[copy]].insert(right[r]);
    }
    Ok(out)
}

/// The least `m* ≥ m*(p₀) + m*(p₁) + 3` with `2^{m*+1} > |dom w₀ ∪ dom w₁|`.
pub fn constructive_star(p0: &QCondition, p1: &QCondition) -> usize {
    let stems = p0.w.domain_set().union(&p1.w.domain_set()).count() as u128;
    let mut m = p0.m_star + p1.m_star + 3;
    while times_pow2(1, m + 1).is_some_and(|p| p <= stems) {
        m += 1;
    }
    m
}

/// A common upper bound of `p₀` and `p₁` built from `η ∈ POS(p₀) ∩ POS(p₁)`.
///
/// Low-block σ's are killed by a coordinate where `η` disagrees with them,
/// the high-block σ's are shrunk off the decided set `a` and made disjoint
/// by [`hall_select_u`], and the stem becomes `η↾a`. `η` need not lie in
/// `POS(q)`.
pub fn compatible_constructive(p0: &QCondition, p1: &QCondition, eta: &Assignment, strictness: Strictness) -> Result<QCondition> {
    same_frame(p0, p1)?;
    p0.require_valid(strictness, "first condition")?;
    p1.require_valid(strictness, "second condition")?;
    if !p0.pos_member(eta) || !p1.pos_member(eta) {
        return Err(Error::Precondition("the witness is not in both POS sets".into()));
    }
    let seq = &p0.seq;
    let m_star = constructive_star(p0, p1);
    let n0_star = seq.n0(m_star).ok_or_else(|| {
        Error::TruncationTooShort(format!("m* = {m_star} but the sequence prefix has length {}", seq.len()))
    })?;

    let mut a: CoordSet = p0.w.domain_set().union(&p1.w.domain_set()).copied().collect();
    for p in [p0, p1] {
        for (_, j) in p.sigmas_between(0, m_star) {
            let sigma = &p.sigmas[j];
            let k = sigma.iter().find(|&(c, s)| eta.get(c) != Some(s)).map(|(c, _)| c);
            a.insert(k.expect("eta avoids every sigma"));
        }
    }
    if strictness == Strictness::Strict && times_pow2(a.len() as u128, m_star).is_none_or(|scaled| scaled >= n0_star) {
        return Err(Error::TruncationTooShort(format!("|a| = {} is not below n0[{m_star}]/2^{m_star}", a.len())));
    }

    let mut requests = Vec::new();
    let mut origin = Vec::new();
    for (l, p) in [p0, p1].into_iter().enumerate() {
        for (m, j) in p.sigmas_between(m_star, usize::MAX) {
            let rest: CoordSet = p.sigmas[j].domain().filter(|c| !a.contains(c)).collect();
            let need = ceil_div_pow2(seq.n0(m).expect("validated block"), m_star).max(1);
            let need = usize::try_from(need).map_err(|_| Error::InsufficientCapacity(format!("block {m} needs too many coordinates")))?;
            requests.push((rest, need));
            origin.push((l, m, j));
        }
    }
    let us = hall_select_u(&requests).map_err(|_| Error::InsufficientCapacity("high-block sigmas cannot be made disjoint".into()))?;

    let mut sigmas = Vec::with_capacity(us.len());
    let mut blocks = Blocks::new();
    for ((l, m, j), u) in origin.into_iter().zip(us) {
        let p = if l == 0 { p0 } else { p1 };
        blocks.entry(m).or_default().insert(sigmas.len());
        sigmas.push(p.sigmas[j].restrict(&u));
    }
    let w: PartialFunction = a.iter().map(|&c| (c, eta.get(c).expect("eta is total"))).collect();
    let q = QCondition::new(p0.alphabet.clone(), p0.window.clone(), w, sigmas, m_star, blocks, seq.clone());
    q.require_valid(strictness, "constructed bound")?;
    if !leq_syntactic(p0, &q) || !leq_syntactic(p1, &q) {
        return Err(Error::InvalidCondition("constructed bound is not above both inputs".into()));
    }
    Ok(q)
}

/// Brute-force witness followed by the constructive bound; `None` when the
/// POS sets are disjoint.
pub fn compatible(p0: &QCondition, p1: &QCondition, strictness: Strictness, budget: &Budget) -> Result<Option<QCondition>> {
    match compatible_bruteforce(p0, p1, budget)? {
        None => Ok(None),
        Some(eta) => compatible_constructive(p0, p1, &eta, strictness).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{pos_included, NormSeqPrefix};
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::pf::coords;
    use std::collections::BTreeSet;

    fn z2() -> Alphabet {
        Alphabet::binary()
    }

    fn strict_seq() -> NormSeqPrefix {
        NormSeqPrefix::minimal_strict(4).unwrap()
    }

    fn strict_cond(w: PartialFunction, sigmas: Vec<PartialFunction>) -> QCondition {
        let k = sigmas.len();
        let blocks = if k == 0 { Blocks::new() } else { Blocks::from([(0, (0..k).collect::<BTreeSet<_>>())]) };
        QCondition::new(z2(), coords(0..12), w, sigmas, 0, blocks, strict_seq())
    }

    #[test]
    fn hall_examples() {
        let single = hall_select_u(&[(coords(0..5), 3)]).unwrap();
        assert_eq!(single[0].len(), 3);
        let twins = hall_select_u(&[(coords(0..4), 2), (coords(0..4), 2)]).unwrap();
        assert!(twins[0].is_disjoint(&twins[1]));
        assert_eq!(twins[0].len() + twins[1].len(), 4);
        assert_eq!(hall_select_u(&[(coords(0..3), 2), (coords(0..3), 2)]), Err(Error::NoSelection));
        // Enough coordinates overall but not inside the second domain.
        assert_eq!(hall_select_u(&[(coords(0..4), 3), (coords(0..2), 2)]), Err(Error::NoSelection));
    }

    #[test]
    fn bruteforce_examples() {
        let b = Budget::default();
        let p = strict_cond(PartialFunction::of(&[(0, 1)]), vec![PartialFunction::constant(&coords(1..6), crate::alphabet::Symbol(0))]);
        let x = compatible_bruteforce(&p, &p, &b).unwrap().unwrap();
        assert!(p.pos_member(&x));
        let clash = strict_cond(PartialFunction::of(&[(0, 0)]), vec![]);
        assert_eq!(compatible_bruteforce(&p, &clash, &b).unwrap(), None);
    }

    #[test]
    fn strict_constructive_bound() {
        let b = Budget::default();
        let zero = |r: std::ops::Range<u32>| PartialFunction::constant(&coords(r), crate::alphabet::Symbol(0));
        let p0 = strict_cond(PartialFunction::of(&[(0, 1)]), vec![zero(1..6)]);
        let p1 = strict_cond(PartialFunction::of(&[(11, 0)]), vec![zero(6..11)]);
        assert!(p0.is_valid(Strictness::Strict) && p1.is_valid(Strictness::Strict));
        let q = compatible(&p0, &p1, Strictness::Strict, &b).unwrap().unwrap();
        assert_eq!(q.m_star, 3);
        assert!(leq_syntactic(&p0, &q) && leq_syntactic(&p1, &q));
        assert!(pos_included(&p0, &q, &b).unwrap() && pos_included(&p1, &q, &b).unwrap());

        let same = compatible(&p0, &p0, Strictness::Strict, &b).unwrap().unwrap();
        assert!(pos_included(&p0, &same, &b).unwrap());
    }

    #[test]
    fn short_prefix_is_reported() {
        let seq = NormSeqPrefix::new(vec![(5, 5), (1601, 1601)]);
        let p = QCondition::new(z2(), coords(0..4), PartialFunction::new(), vec![], 0, Blocks::new(), seq);
        let eta = compatible_bruteforce(&p, &p, &Budget::default()).unwrap().unwrap();
        assert!(matches!(compatible_constructive(&p, &p, &eta, Strictness::Strict), Err(Error::TruncationTooShort(_))));
    }

    #[test]
    fn relaxed_bound_uses_hall() {
        let b = Budget::default();
        let seq = NormSeqPrefix::new(vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
        let window = coords(0..14);
        let sig = |r: std::ops::Range<u32>| PartialFunction::constant(&coords(r), crate::alphabet::Symbol(0));
        let blocks = Blocks::from([(0, BTreeSet::from([0])), (3, BTreeSet::from([1]))]);
        let p0 = QCondition::new(z2(), window.clone(), PartialFunction::of(&[(0, 1)]), vec![sig(1..3), sig(4..8)], 0, blocks.clone(), seq.clone());
        let p1 = QCondition::new(z2(), window, PartialFunction::of(&[(13, 1)]), vec![sig(8..10), sig(4..8)], 0, blocks, seq);
        assert!(p0.is_valid(Strictness::Relaxed) && p1.is_valid(Strictness::Relaxed));
        let q = compatible(&p0, &p1, Strictness::Relaxed, &b).unwrap().unwrap();
        assert_eq!(q.m_star, 3);
        assert_eq!(q.sigmas.len(), 2);
        assert!(q.sigmas[0].domain_set().is_disjoint(&q.sigmas[1].domain_set()));
        assert!(pos_included(&p0, &q, &b).unwrap() && pos_included(&p1, &q, &b).unwrap());
    }
}
