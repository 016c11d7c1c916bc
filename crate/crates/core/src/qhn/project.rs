//! Projection along a coordinate embedding and the strengthening that makes
//! `POS(p*)` pull back into `POS(r)`.

use super::{contradiction, leq_syntactic, Blocks, QCondition, Strictness};
use crate::error::{Error, Result};
use crate::pf::{CoordSet, Embedding, PartialFunction};
use crate::points::{enumerate_points, Budget};

fn check_aligned(p: &QCondition, pi: &Embedding) -> Result<()> {
    for (j, sigma) in p.sigmas.iter().enumerate() {
        let inside = sigma.domain().filter(|&c| pi.in_range(c)).count();
        if inside != 0 && inside != sigma.len() {
            return Err(Error::NotAligned(format!("sigma {j} straddles the range of the embedding")));
        }
    }
    Ok(())
}

fn inside(sigma: &PartialFunction, pi: &Embedding) -> bool {
    sigma.domain().all(|c| pi.in_range(c))
}

/// `(w∘π, σ_j∘π : dom σ_j ⊆ rng π)` on the window `π⁻¹[window]`, keeping
/// `m*` and the block of every surviving σ.
pub fn qproject(p: &QCondition, pi: &Embedding) -> Result<QCondition> {
    check_aligned(p, pi)?;
    let window: CoordSet = p.window.iter().filter_map(|&c| pi.preimage(c)).collect();
    let mut sigmas = Vec::new();
    let mut blocks = Blocks::new();
    for (j, sigma) in p.sigmas.iter().enumerate() {
        if inside(sigma, pi) {
            if let Some(m) = p.block_of(j) {
                blocks.entry(m).or_default().insert(sigmas.len());
            }
            sigmas.push(sigma.pull_back(pi));
        }
    }
    Ok(QCondition::new(p.alphabet.clone(), window, p.w.pull_back(pi), sigmas, p.m_star, blocks, p.seq.clone()))
}

#[derive(Debug, Clone)]
pub struct QProjection {
    /// The projected condition `q`.
    pub q: QCondition,
    pub p_star: QCondition,
    /// Whether every `x ∈ POS(p*)` has `x∘π ∈ POS(r)`; `None` when the
    /// window is beyond the enumeration budget.
    pub pullback_verified: Option<bool>,
}

/// Given `r ≥ qproject(p, π)`, builds `p* ≥ p` with `POS(p*)∘π ⊆ POS(r)`.
///
/// With `m* = m*(p) + m*(r) + 1`, the stem of `p*` keeps `w^p` off `rng π`,
/// carries `w^r∘π⁻¹`, and contradicts every low σ of `p` outside `rng π`
/// and every low σ of `r` moved by `π`; the high σ's of both survive.
pub fn project_pi_q(p: &QCondition, pi: &Embedding, r: &QCondition, strictness: Strictness, budget: &Budget) -> Result<QProjection> {
    let q = qproject(p, pi)?;
    if r.window != q.window || r.alphabet != q.alphabet || r.seq != q.seq {
        return Err(Error::Precondition("r must live on the projected window with the same sequence".into()));
    }
    if !leq_syntactic(&q, r) {
        return Err(Error::Precondition("r is not above the projection".into()));
    }
    p.require_valid(strictness, "p")?;
    r.require_valid(strictness, "r")?;
    let m_star = p.m_star + r.m_star + 1;

    let outside = |j: usize| !p.sigmas[j].domain().any(|c| pi.in_range(c));
    let range = pi.range();
    let mut w = p.w.without(&range).union(&r.w.permute(pi)?)?;
    let mut sigmas = Vec::new();
    let mut blocks = Blocks::new();
    for (m, j) in p.sigmas_between(0, usize::MAX) {
        if !outside(j) {
            continue;
        }
        if m < m_star {
            w = w.union(&contradiction(&p.sigmas[j]))?;
        } else {
            blocks.entry(m).or_default().insert(sigmas.len());
            sigmas.push(p.sigmas[j].clone());
        }
    }
    for (m, i) in r.sigmas_between(0, usize::MAX) {
        let moved = r.sigmas[i].permute(pi)?;
        if m < m_star {
            w = w.union(&contradiction(&moved))?;
        } else {
            blocks.entry(m).or_default().insert(sigmas.len());
            sigmas.push(moved);
        }
    }
    let p_star = QCondition::new(p.alphabet.clone(), p.window.clone(), w, sigmas, m_star, blocks, p.seq.clone());
    p_star.require_valid(strictness, "p*")?;
    if !leq_syntactic(p, &p_star) {
        return Err(Error::InvalidCondition("p* is not above p".into()));
    }
    let pullback_verified = match enumerate_points(&p_star.alphabet, &p_star.window, budget) {
        Ok(points) => {
            let mut ok = true;
            for x in points.filter(|x| p_star.pos_member(x)) {
                if !r.pos_member_pf(&x.to_pf().pull_back(pi))? {
                    ok = false;
                    break;
                }
            }
            Some(ok)
        }
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    Ok(QProjection { q, p_star, pullback_verified })
}

#[cfg(test)]
mod tests {
    use super::super::{pos_included, NormSeqPrefix};
    use super::*;
    use crate::alphabet::{Alphabet, Symbol};
    use crate::pf::coords;

    fn seq() -> NormSeqPrefix {
        NormSeqPrefix::new(vec![(1, 2), (2, 3), (2, 4)])
    }

    fn zero(r: std::ops::Range<u32>) -> PartialFunction {
        PartialFunction::constant(&coords(r), Symbol(0))
    }

    fn blocks(pairs: &[(usize, usize)]) -> Blocks {
        let mut b = Blocks::new();
        for &(m, j) in pairs {
            b.entry(m).or_default().insert(j);
        }
        b
    }

    #[test]
    fn identity_projection() {
        let b = Budget::default();
        let p = QCondition::new(Alphabet::binary(), coords(0..8), PartialFunction::of(&[(0, 1)]), vec![zero(1..3), zero(4..6)], 0, blocks(&[(0, 0), (1, 1)]), seq());
        assert!(p.is_valid(Strictness::Relaxed));
        let pi = Embedding::identity(&p.window);
        assert_eq!(qproject(&p, &pi).unwrap(), p);
        let mut r = p.clone();
        r.w.insert(crate::pf::Coord(6), Symbol(1));
        let out = project_pi_q(&p, &pi, &r, Strictness::Relaxed, &b).unwrap();
        assert_eq!(out.pullback_verified, Some(true));
        assert!(pos_included(&r, &out.p_star, &b).unwrap());
        assert!(pos_included(&p, &out.p_star, &b).unwrap());
    }

    #[test]
    fn shifted_projection() {
        let b = Budget::default();
        // rng π = {1..6}; the first sigma lies outside, the second inside.
        let p = QCondition::new(Alphabet::binary(), coords(0..8), PartialFunction::of(&[(7, 1)]), vec![zero(0..1), zero(2..4)], 0, blocks(&[(0, 0), (1, 1)]), seq());
        assert!(p.is_valid(Strictness::Relaxed));
        let pi = Embedding::shift(&coords(0..6), 1);
        let q = qproject(&p, &pi).unwrap();
        assert_eq!(q.sigmas, vec![zero(1..3)]);
        let mut r = q.clone();
        r.w = PartialFunction::of(&[(1, 1)]);
        r.sigmas.clear();
        r.blocks.clear();
        let out = project_pi_q(&p, &pi, &r, Strictness::Relaxed, &b).unwrap();
        assert_eq!(out.pullback_verified, Some(true));
        assert!(pos_included(&p, &out.p_star, &b).unwrap());
    }

    #[test]
    fn misaligned_sigma() {
        let p = QCondition::new(Alphabet::binary(), coords(0..8), PartialFunction::new(), vec![zero(0..2)], 0, blocks(&[(0, 0)]), seq());
        let pi = Embedding::shift(&coords(0..4), 1);
        assert!(matches!(qproject(&p, &pi), Err(Error::NotAligned(_))));
    }
}
