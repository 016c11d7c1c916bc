//! Linked classes and the dense normal form.
//!
//! Conditions sharing `m*`, `w`, the blocks `V_m` for `m < m* + n + 2` and
//! the σ's in them form one class; any `n + 1` members of a class have a
//! common upper bound.

use super::compat::hall_select_u;
use super::{contradiction, floor_div_pow2, leq_syntactic, Blocks, QCondition, Strictness};
use crate::error::{Error, Result};
use crate::pf::{CoordSet, PartialFunction};
use serde::Serialize;

/// The finite data identifying a class for parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassKey {
    pub n: usize,
    pub m_star: usize,
    pub w: Vec<(u32, u32)>,
    pub blocks: Vec<(usize, Vec<usize>)>,
    pub sigmas: Vec<(usize, Vec<(u32, u32)>)>,
}

fn raw(pf: &PartialFunction) -> Vec<(u32, u32)> {
    pf.iter().map(|(c, s)| (c.0, s.0)).collect()
}

pub fn class_key(p: &QCondition, n: usize) -> ClassKey {
    let hi = p.m_star + n + 2;
    let mut blocks = Vec::new();
    let mut sigmas = Vec::new();
    for (&m, members) in p.blocks.range(p.m_star..hi) {
        if members.is_empty() {
            continue;
        }
        blocks.push((m, members.iter().copied().collect()));
        for &j in members {
            sigmas.push((j, p.sigmas.get(j).map(raw).unwrap_or_default()));
        }
    }
    sigmas.sort();
    ClassKey { n, m_star: p.m_star, w: raw(&p.w), blocks, sigmas }
}

/// A common upper bound of `n + 1` conditions sharing a class key.
///
/// Every high-block σ (block `m ≥ m* + n + 2`) of every input keeps
/// `⌊n⁰_m/2^{m*+n+1}⌋ + 1` coordinates chosen disjointly by Hall's theorem;
/// the shared low σ's are contradicted everywhere by the new stem. The
/// result has `m*(q) = m* + n + 2`.
pub fn amalgamate_class(ps: &[QCondition], strictness: Strictness) -> Result<QCondition> {
    let first = ps.first().ok_or_else(|| Error::Precondition("no conditions to amalgamate".into()))?;
    let n = ps.len() - 1;
    let key = class_key(first, n);
    for p in ps {
        if p.window != first.window || p.alphabet != first.alphabet || p.seq != first.seq {
            return Err(Error::Precondition("conditions must share window, alphabet and sequence".into()));
        }
        if class_key(p, n) != key {
            return Err(Error::Precondition("conditions do not share a class key".into()));
        }
        p.require_valid(strictness, "input")?;
    }
    let m_star = first.m_star;
    let hi = m_star + n + 2;
    let seq = &first.seq;

    let mut w = first.w.clone();
    for (_, j) in first.sigmas_between(m_star, hi) {
        w = w.union(&contradiction(&first.sigmas[j]))?;
    }

    let mut requests = Vec::new();
    let mut origin = Vec::new();
    for (l, p) in ps.iter().enumerate() {
        for (m, j) in p.sigmas_between(hi, usize::MAX) {
            let y = floor_div_pow2(seq.n0(m).expect("validated block"), m_star + n + 1) + 1;
            let y = usize::try_from(y).map_err(|_| Error::InsufficientCapacity(format!("block {m} needs too many coordinates")))?;
            requests.push((p.sigmas[j].domain_set(), y));
            origin.push((l, m, j));
        }
    }
    let us = hall_select_u(&requests)
        .map_err(|_| Error::InsufficientCapacity("high-block sigmas leave no disjoint selection".into()))?;

    let mut sigmas = Vec::with_capacity(us.len());
    let mut blocks = Blocks::new();
    for ((l, m, j), u) in origin.into_iter().zip(us) {
        blocks.entry(m).or_default().insert(sigmas.len());
        sigmas.push(ps[l].sigmas[j].restrict(&u));
    }
    let q = QCondition::new(first.alphabet.clone(), first.window.clone(), w, sigmas, hi, blocks, seq.clone());
    q.require_valid(strictness, "amalgam")?;
    if let Some(l) = ps.iter().position(|p| !leq_syntactic(p, &q)) {
        return Err(Error::InvalidCondition(format!("amalgam is not above input {l}")));
    }
    Ok(q)
}

fn dense_target(q: &QCondition, m: usize) -> u128 {
    floor_div_pow2(q.seq.n0(m).expect("validated block"), q.m_star) + 1
}

/// Every σ in block `m` has exactly `⌊n⁰_m/2^{m*}⌋ + 1` coordinates.
pub fn is_dense_normal(p: &QCondition) -> bool {
    p.blocks.iter().all(|(&m, members)| {
        p.seq.n0(m).is_some() && members.iter().all(|&j| p.sigmas.get(j).is_some_and(|s| s.len() as u128 == dense_target(p, m)))
    })
}

/// A stronger condition in the dense normal form.
///
/// Each σ keeps its lowest `⌊n⁰_m/2^{m*}⌋ + 1` coordinates. A σ that is
/// already smaller than that (possible when `|dom σ|·2^{m*} = n⁰_m`) cannot
/// be shrunk; then block `m*` is decided by contradicting its σ's in the stem
/// and `m*` moves up by one, which makes every remaining σ large enough.
pub fn normalize_dense(p: &QCondition, strictness: Strictness) -> Result<QCondition> {
    p.require_valid(strictness, "input")?;
    let mut q = p.clone();
    loop {
        let short = q.blocks.iter().any(|(&m, members)| members.iter().any(|&j| (q.sigmas[j].len() as u128) < dense_target(&q, m)));
        if !short {
            break;
        }
        let decided: Vec<usize> = q.blocks.remove(&q.m_star).map(|v| v.into_iter().collect()).unwrap_or_default();
        for &j in &decided {
            q.w = q.w.union(&contradiction(&q.sigmas[j]))?;
        }
        q = drop_sigmas(q, &decided);
        q.m_star += 1;
    }
    for (&m, members) in &q.blocks.clone() {
        let target = dense_target(&q, m) as usize;
        for &j in members {
            let keep: CoordSet = q.sigmas[j].domain().take(target).collect();
            q.sigmas[j] = q.sigmas[j].restrict(&keep);
        }
    }
    q.require_valid(strictness, "normal form")?;
    if !leq_syntactic(p, &q) {
        return Err(Error::InvalidCondition("normal form is not above the input".into()));
    }
    Ok(q)
}

/// Removes the given σ indices and renumbers the blocks.
fn drop_sigmas(mut q: QCondition, gone: &[usize]) -> QCondition {
    let mut renumber = vec![None; q.sigmas.len()];
    let mut kept = Vec::new();
    for (j, s) in q.sigmas.iter().enumerate() {
        if !gone.contains(&j) {
            renumber[j] = Some(kept.len());
            kept.push(s.clone());
        }
    }
    q.blocks = q
        .blocks
        .iter()
        .map(|(&m, v)| (m, v.iter().filter_map(|&j| renumber[j]).collect()))
        .collect();
    q.sigmas = kept;
    q
}

#[cfg(test)]
mod tests {
    use super::super::{pos_included, NormSeqPrefix};
    use super::*;
    use crate::alphabet::{Alphabet, Symbol};
    use crate::pf::coords;
    use crate::points::Budget;
    use std::collections::BTreeSet;

    fn zero(r: std::ops::Range<u32>) -> PartialFunction {
        PartialFunction::constant(&coords(r), Symbol(0))
    }

    fn seq() -> NormSeqPrefix {
        NormSeqPrefix::new(vec![(1, 1), (2, 2), (3, 3), (4, 4), (8, 8)])
    }

    fn cond(w: PartialFunction, sigmas: Vec<PartialFunction>, blocks: Blocks) -> QCondition {
        QCondition::new(Alphabet::binary(), coords(0..16), w, sigmas, 0, blocks, seq())
    }

    #[test]
    fn single_condition_class() {
        let p = cond(PartialFunction::of(&[(0, 1)]), vec![zero(1..3), zero(4..8)], Blocks::from([(0, BTreeSet::from([0])), (3, BTreeSet::from([1]))]));
        assert!(p.is_valid(Strictness::Relaxed));
        let q = amalgamate_class(std::slice::from_ref(&p), Strictness::Relaxed).unwrap();
        assert_eq!(q.m_star, 2);
        assert!(leq_syntactic(&p, &q));
        assert!(pos_included(&p, &q, &Budget::default()).unwrap());
    }

    #[test]
    fn pair_with_disjoint_high_sigmas() {
        let blocks = Blocks::from([(0, BTreeSet::from([0])), (3, BTreeSet::from([1]))]);
        let p0 = cond(PartialFunction::of(&[(0, 1)]), vec![zero(1..3), zero(4..8)], blocks.clone());
        let p1 = cond(PartialFunction::of(&[(0, 1)]), vec![zero(1..3), zero(8..12)], blocks);
        assert_eq!(class_key(&p0, 1), class_key(&p1, 1));
        let q = amalgamate_class(&[p0.clone(), p1.clone()], Strictness::Relaxed).unwrap();
        assert_eq!(q.m_star, 3);
        let b = Budget::default();
        assert!(pos_included(&p0, &q, &b).unwrap() && pos_included(&p1, &q, &b).unwrap());
        assert!(q.pos_count(&b).unwrap() > 0);

        let other = cond(PartialFunction::of(&[(0, 0)]), vec![], Blocks::new());
        assert!(matches!(amalgamate_class(&[p0, other], Strictness::Relaxed), Err(Error::Precondition(_))));
    }

    #[test]
    fn overlapping_high_sigmas_are_separated() {
        let blocks = Blocks::from([(3, BTreeSet::from([0]))]);
        let p0 = cond(PartialFunction::new(), vec![zero(4..8)], blocks.clone());
        let p1 = cond(PartialFunction::new(), vec![zero(4..8)], blocks.clone());
        let q = amalgamate_class(&[p0, p1], Strictness::Relaxed).unwrap();
        assert_eq!(q.sigmas.len(), 2);
        assert!(q.sigmas[0].domain_set().is_disjoint(&q.sigmas[1].domain_set()));

        // With m* = 2 a block-6 sigma may have two coordinates; three copies need three.
        let long = NormSeqPrefix::new((1..=7).map(|k| (k, k)).collect());
        let p = QCondition::new(Alphabet::binary(), coords(0..8), PartialFunction::new(), vec![zero(4..6)], 2, Blocks::from([(6, BTreeSet::from([0]))]), long);
        assert!(p.is_valid(Strictness::Relaxed));
        let crowded = vec![p.clone(), p.clone(), p];
        assert!(matches!(amalgamate_class(&crowded, Strictness::Relaxed), Err(Error::InsufficientCapacity(_))));
    }

    #[test]
    fn dense_normal_form() {
        let p = cond(PartialFunction::new(), vec![zero(0..3), zero(4..11)], Blocks::from([(1, BTreeSet::from([0])), (3, BTreeSet::from([1]))]));
        let q = normalize_dense(&p, Strictness::Relaxed).unwrap();
        assert!(is_dense_normal(&q));
        assert_eq!(q.sigmas[0], zero(0..3));
        assert_eq!(q.sigmas[1], zero(4..9));
        assert_eq!(normalize_dense(&q, Strictness::Relaxed).unwrap(), q);

        // n⁰₄/2⁰ = 8 needs 9 coordinates but the σ has exactly 8.
        let tight = cond(PartialFunction::new(), vec![zero(0..2), zero(4..12)], Blocks::from([(0, BTreeSet::from([0])), (4, BTreeSet::from([1]))]));
        let q = normalize_dense(&tight, Strictness::Relaxed).unwrap();
        assert_eq!(q.m_star, 1);
        assert_eq!(q.w, PartialFunction::constant(&coords(0..2), Symbol(1)));
        assert_eq!(q.sigmas, vec![zero(4..9)]);
        assert!(leq_syntactic(&tight, &q));
    }
}
