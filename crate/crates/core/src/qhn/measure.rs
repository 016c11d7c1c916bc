//! Null and nowhere dense refinements with exact avoidance measures.

use super::{contradiction, QCondition, Strictness};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::pf::{Coord, PartialFunction};
use crate::points::Assignment;
use crate::rational::{self, Rational};
use num_traits::One;

/// Exact avoidance measure of `count` disjoint cylinders of size `d`, with
/// the certified comparison against `e^{-|X|^d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMeasure {
    pub m: usize,
    pub domain_size: usize,
    pub count: u64,
    pub measure: Rational,
    /// `N = |X|^d` in the bound `e^{-N}`.
    pub exponent: u64,
    /// `count ≥ |X|^{2d}`, the hypothesis under which the bound holds.
    pub hypothesis: bool,
    /// `measure ≤ e^{-N}` certified against the lower end of the enclosure.
    pub certified: bool,
}

pub fn block_measure(m: usize, alphabet_size: u32, domain_size: usize, count: u64) -> Result<BlockMeasure> {
    let exponent = u64::from(alphabet_size)
        .checked_pow(domain_size as u32)
        .filter(|&n| n <= rational::MAX_EXP_ARGUMENT)
        .ok_or(Error::EnumerationTooLarge { requested: u128::from(alphabet_size).saturating_pow(domain_size as u32), budget: rational::MAX_EXP_ARGUMENT })?;
    let measure = rational::avoid_block(alphabet_size, domain_size, count);
    let hypothesis = u128::from(count) >= u128::from(exponent) * u128::from(exponent);
    let certified = rational::certified_below_exp_neg(&measure, exponent)?;
    Ok(BlockMeasure { m, domain_size, count, measure, exponent, hypothesis, certified })
}

#[derive(Debug, Clone)]
pub struct NullRefinement {
    pub q: QCondition,
    pub blocks: Vec<BlockMeasure>,
    /// Product of the block measures: the avoidance measure of all new σ's.
    pub measure: Rational,
    /// A point of `POS(p) ∩ POS(q)` on the window.
    pub witness: PartialFunction,
}

/// A condition compatible with `p` whose POS set is nowhere dense and of
/// small measure.
///
/// Picks the least `m* ≥ m*(p) + 6` from which `n¹_k ≥ |X|^{2n⁰_k}` holds
/// to the end of the prefix, and places `n¹_k` fresh σ's of size `n⁰_k` in
/// each block `k ≥ m*`. Fresh coordinates are the lowest window
/// coordinates outside every stem and σ of `p`.
pub fn null_refinement(p: &QCondition, strictness: Strictness) -> Result<NullRefinement> {
    p.require_valid(strictness, "input")?;
    let size = p.alphabet.size();
    let len = p.seq.len();
    let m_star = (p.m_star + 6..len)
        .find(|&m| (m..len).all(|k| p.seq.growth_at(k, size)))
        .ok_or_else(|| Error::TruncationTooShort(format!("no block from index {} on satisfies n1 >= |X|^(2 n0)", p.m_star + 6)))?;

    let used = p.support();
    let mut fresh = p.window.iter().copied().filter(|c| !used.contains(c));
    let mut sigmas = Vec::new();
    let mut blocks = super::Blocks::new();
    let mut measures = Vec::new();
    for k in m_star..len {
        let (n0, n1) = p.seq.pairs()[k];
        let too_short = || Error::TruncationTooShort(format!("the window cannot host block {k}"));
        let d = usize::try_from(n0).map_err(|_| too_short())?;
        let count = u64::try_from(n1).map_err(|_| too_short())?;
        for _ in 0..count {
            let dom: Vec<Coord> = fresh.by_ref().take(d).collect();
            if dom.len() < d {
                return Err(too_short());
            }
            blocks.entry(k).or_default().insert(sigmas.len());
            sigmas.push(PartialFunction::constant(&dom, Symbol::ZERO));
        }
        measures.push(block_measure(k, size, d, count)?);
    }
    let measure = measures.iter().fold(Rational::one(), |acc, b| acc * &b.measure);
    let q = QCondition::new(p.alphabet.clone(), p.window.clone(), p.w.clone(), sigmas, m_star, blocks, p.seq.clone());
    q.require_valid(strictness, "refinement")?;

    let mut witness = p.w.clone();
    for sigma in p.sigmas.iter().chain(&q.sigmas) {
        witness = witness.union(&contradiction(sigma))?;
    }
    for &c in &p.window {
        if !witness.contains(c) {
            witness.insert(c, Symbol::ZERO);
        }
    }
    debug_assert!(p.pos_member_pf(&witness).unwrap_or(false) && q.pos_member_pf(&witness).unwrap_or(false));
    Ok(NullRefinement { q, blocks: measures, measure, witness })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NowhereDense {
    pub holds: bool,
    pub depth: usize,
    /// A stem of at most `depth` coordinates all of whose extensions stay in `POS(p)`.
    pub counterexample: Option<PartialFunction>,
}

/// Truncated nowhere density: every stem on at most `depth` window
/// coordinates has an extension outside `POS(p)`.
///
/// With pairwise disjoint σ's disjoint from `w`, a stem traps all its
/// extensions inside `POS(p)` only if it contains `w` and contradicts every
/// σ, which takes `|dom w| + #σ` coordinates.
pub fn nowhere_dense_check(p: &QCondition, depth: usize) -> NowhereDense {
    let needed = p.w.len() + p.sigmas.len();
    if depth < needed {
        return NowhereDense { holds: true, depth, counterexample: None };
    }
    let mut stem = p.w.clone();
    for sigma in &p.sigmas {
        let (c, s) = sigma.iter().next().expect("sigmas are nonempty");
        stem.insert(c, s.other());
    }
    NowhereDense { holds: false, depth, counterexample: Some(stem) }
}

/// An extension of `stem` to the whole window lying outside `POS(p)`, if any.
pub fn nowhere_dense_witness(p: &QCondition, stem: &PartialFunction) -> Option<Assignment> {
    let complete = |mut x: PartialFunction| {
        for &c in &p.window {
            if !x.contains(c) {
                x.insert(c, Symbol::ZERO);
            }
        }
        Assignment::from_pf(&x)
    };
    if !stem.is_compatible(&p.w) {
        return Some(complete(stem.clone()));
    }
    if let Some(c) = p.w.domain().find(|&c| !stem.contains(c)) {
        let mut x = stem.clone();
        x.insert(c, p.w.get(c).expect("in domain").other());
        return Some(complete(x));
    }
    p.sigmas.iter().find(|s| s.is_compatible(stem)).map(|s| complete(stem.union(s).expect("compatible")))
}
