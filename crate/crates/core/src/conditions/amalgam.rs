//! Common upper bounds for finitely many fragments sharing a stem.
//!
//! Blocks `[m_i, m_{i+1})` are chosen greedily so that every fragment has a
//! whole creature inside each block, creatures meeting `[0, m_i)` end before
//! `m_{i+1}`, and creatures reaching past `m_i` clear the slack threshold for
//! slot `i`. Straddling creatures are cut at the boundary, each fragment is
//! glued blockwise, and the glued creatures are linked across fragments.

use super::moves::{leq_check, move_sigma, move_sigma_bot, Move, MoveCertificate};
use super::{Flavor, TruncatedCondition};
use crate::creatures::{cut, glue, link, Creature, Norm};
use crate::error::{Error, Result};
use crate::pf::{Coord, CoordSet};
use crate::points::{enumerate_points, Budget};

/// Packing-number thresholds: creatures reaching past boundary `i` need `n > slack(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slack {
    /// `slack(i) = base + step·i`.
    Linear { base: u64, step: u64 },
    /// `slack(i) = 8^(k+5+i)` for `k+1` fragments, i.e. norm above `k+5+i`.
    NorGrowth,
}

impl Slack {
    pub fn threshold(&self, k: usize, i: usize) -> u64 {
        match *self {
            Slack::Linear { base, step } => base.saturating_add(step.saturating_mul(i as u64)),
            Slack::NorGrowth => u32::try_from(k + 5 + i).ok().and_then(|e| 8u64.checked_pow(e)).unwrap_or(u64::MAX),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Cut,
    Glue,
    Link,
}

/// One line of the norm bookkeeping: the packing numbers that went in, the
/// one that came out, and the lower bound the construction guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormStep {
    pub kind: StepKind,
    pub condition: Option<usize>,
    pub block: usize,
    pub inputs: Vec<Norm>,
    pub output: Norm,
    pub bound: Norm,
}

impl NormStep {
    pub fn holds(&self) -> bool {
        self.output >= self.bound
    }
}

#[derive(Debug, Clone)]
pub struct Amalgam {
    pub q: TruncatedCondition,
    pub certificates: Vec<MoveCertificate>,
    /// `m_0 < m_1 < …`, the last one being one past the window's largest coordinate.
    pub boundaries: Vec<u32>,
    pub transcript: Vec<NormStep>,
}

fn half(n: Norm) -> Norm {
    match n {
        Norm::Finite(v) => Norm::Finite(v / 2),
        Norm::Infinite => Norm::Infinite,
    }
}

fn check_inputs(ps: &[TruncatedCondition]) -> Result<()> {
    let first = ps.first().ok_or_else(|| Error::Precondition("nothing to amalgamate".into()))?;
    for (l, p) in ps.iter().enumerate() {
        p.validate()?;
        if p.flavor() != Flavor::PlusInfinity {
            return Err(Error::Precondition(format!("condition {l} is not of the finite-norm flavor")));
        }
        if p.window() != first.window() || p.alphabet() != first.alphabet() {
            return Err(Error::Precondition(format!("condition {l} lives on a different window")));
        }
        if p.w() != first.w() {
            return Err(Error::Precondition(format!("condition {l} has a different stem")));
        }
    }
    Ok(())
}

fn max_coord(z: &CoordSet) -> u32 {
    z.iter().next_back().map_or(0, |c| c.0)
}

fn min_coord(z: &CoordSet) -> u32 {
    z.iter().next().map_or(u32::MAX, |c| c.0)
}

fn norm_exceeds(t: &Creature, bound: u64) -> bool {
    t.packing() > Norm::Finite(bound)
}

/// Greedy boundary sequence; see the module documentation.
fn boundaries(ps: &[TruncatedCondition], slack: &Slack) -> Result<Vec<u32>> {
    let k = ps.len() - 1;
    let end = max_coord(ps[0].window()) + 1;
    let stem_end = ps[0].w().domain().map(|c| c.0 + 1).max().unwrap_or(0);

    let first_ok = |m: u32| ps.iter().all(|p| p.creatures().iter().any(|t| max_coord(t.z()) < m));
    let m0 = (stem_end..=end)
        .find(|&m| first_ok(m))
        .ok_or_else(|| Error::TruncationTooShort("no first block holds a creature of every condition".into()))?;
    let mut ms = vec![m0];
    while *ms.last().expect("nonempty") < end {
        let i = ms.len() - 1;
        let lo = ms[i];
        let next_ok = |m: u32| {
            ps.iter().all(|p| {
                let inside = p.creatures().iter().any(|t| min_coord(t.z()) >= lo && max_coord(t.z()) < m);
                let tidy = p.creatures().iter().all(|t| {
                    let meets_low = min_coord(t.z()) < lo;
                    let reaches_out = max_coord(t.z()) >= m;
                    !(meets_low && reaches_out) && (!reaches_out || norm_exceeds(t, slack.threshold(k, i + 1)))
                });
                inside && tidy
            })
        };
        match (lo + 1..=end).find(|&m| next_ok(m)) {
            Some(m) => ms.push(m),
            None => {
                // The tail cannot form a block of its own; it joins the last one.
                *ms.last_mut().expect("nonempty") = end;
            }
        }
    }
    Ok(ms)
}

fn block_of(ms: &[u32], c: Coord) -> usize {
    ms.partition_point(|&m| m <= c.0)
}

fn position(p: &TruncatedCondition, t: &Creature) -> usize {
    p.creatures().iter().position(|s| s == t).expect("creature is present")
}

/// Builds a common upper bound of `ps` with a certificate from each input.
pub fn amalgamate(ps: &[TruncatedCondition], slack: &Slack, budget: &Budget) -> Result<Amalgam> {
    check_inputs(ps)?;
    let k = ps.len() - 1;
    let floor = slack.threshold(k, 0);
    for (l, p) in ps.iter().enumerate() {
        if let Some(t) = p.creatures().iter().find(|t| !norm_exceeds(t, floor)) {
            return Err(Error::InsufficientNorm(format!(
                "condition {l} has a creature with n = {} not above {floor}",
                t.packing()
            )));
        }
    }
    if ps[0].creatures().is_empty() {
        return Ok(Amalgam {
            q: ps[0].clone(),
            certificates: vec![MoveCertificate::default(); ps.len()],
            boundaries: vec![],
            transcript: vec![],
        });
    }

    let ms = boundaries(ps, slack)?;
    let blocks = ms.len();
    let mut transcript = Vec::new();
    let mut moves: Vec<Vec<Move>> = vec![Vec::new(); ps.len()];
    let mut glued: Vec<Vec<Creature>> = Vec::new();
    let mut current: Vec<TruncatedCondition> = Vec::new();

    for (l, p) in ps.iter().enumerate() {
        let mut cur = p.clone();
        for t in p.creatures() {
            let lo = block_of(&ms, *t.z().iter().next().expect("nonempty"));
            let hi = block_of(&ms, *t.z().iter().next_back().expect("nonempty"));
            if lo == hi {
                continue;
            }
            if hi != lo + 1 {
                return Err(Error::Precondition("a creature spans more than two blocks".into()));
            }
            let low: CoordSet = t.z().iter().copied().filter(|&c| block_of(&ms, c) == lo).collect();
            let (s0, s1) = cut(t, &low, budget)?;
            for (side, block) in [(&s0, lo), (&s1, hi)] {
                transcript.push(NormStep {
                    kind: StepKind::Cut,
                    condition: Some(l),
                    block,
                    inputs: vec![t.packing()],
                    output: side.packing(),
                    bound: half(t.packing()),
                });
                if !side.is_member() {
                    return Err(Error::InsufficientNorm(format!("cutting a creature of condition {l} leaves n = 0")));
                }
            }
            let parts = vec![s0, s1];
            let index = position(&cur, t);
            cur = move_sigma_bot(&cur, index, &parts)?;
            moves[l].push(Move::SigmaBot { index, parts });
        }

        let mut groups = Vec::with_capacity(blocks);
        let mut rs = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let members: Vec<usize> = cur
                .creatures()
                .iter()
                .enumerate()
                .filter(|(_, t)| block_of(&ms, t.min_coord()) == b)
                .map(|(i, _)| i)
                .collect();
            let parts: Vec<Creature> = members.iter().map(|&i| cur.creatures()[i].clone()).collect();
            let r = glue(&parts)?;
            transcript.push(NormStep {
                kind: StepKind::Glue,
                condition: Some(l),
                block: b,
                inputs: parts.iter().map(Creature::packing).collect(),
                output: r.packing(),
                bound: parts.iter().map(Creature::packing).min().expect("every block holds a creature"),
            });
            groups.push((members, r.clone()));
            rs.push(r);
        }
        cur = move_sigma(&cur, &groups)?;
        moves[l].push(Move::Sigma { groups });
        glued.push(rs);
        current.push(cur);
    }

    let mut linked = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let mut s = glued[0][b].clone();
        for rs in glued.iter().skip(1) {
            let next = link(&s, &rs[b], budget)?;
            transcript.push(NormStep {
                kind: StepKind::Link,
                condition: None,
                block: b,
                inputs: vec![s.packing(), rs[b].packing()],
                output: next.packing(),
                bound: half(s.packing()).min(half(rs[b].packing())),
            });
            s = next;
        }
        if !s.is_member() {
            return Err(Error::InsufficientNorm(format!("linking block {b} leaves n = 0")));
        }
        linked.push(s);
    }

    for (l, cur) in current.iter().enumerate() {
        let groups: Vec<(Vec<usize>, Creature)> = glued[l]
            .iter()
            .zip(&linked)
            .filter(|(r, s)| r != s)
            .map(|(r, s)| (vec![position(cur, r)], s.clone()))
            .collect();
        if !groups.is_empty() {
            moves[l].push(Move::Sigma { groups });
        }
    }

    let first = &ps[0];
    let q = TruncatedCondition::new(
        first.alphabet().clone(),
        first.window().clone(),
        first.w().clone(),
        linked,
        Flavor::PlusInfinity,
        vec![],
    )?;
    let certificates: Vec<MoveCertificate> = moves.into_iter().map(MoveCertificate::new).collect();
    for (step, (p, cert)) in ps.iter().zip(&certificates).enumerate() {
        if !leq_check(p, &q, cert)? {
            return Err(Error::InvalidCertificate { step, reason: "replay does not reach the amalgam".into() });
        }
    }
    Ok(Amalgam { q, certificates, boundaries: ms, transcript })
}

/// Independent check of an amalgam against its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmalgamCheck {
    pub certificates: bool,
    pub contained: bool,
    pub nonempty: bool,
    pub bookkeeping: bool,
}

impl AmalgamCheck {
    pub fn passed(&self) -> bool {
        self.certificates && self.contained && self.nonempty && self.bookkeeping
    }
}

/// Replays every certificate and enumerates the window for `POS(q) ⊆ ⋂ POS(pᵢ)`, `POS(q) ≠ ∅`.
pub fn verify_amalgam(ps: &[TruncatedCondition], am: &Amalgam, budget: &Budget) -> Result<AmalgamCheck> {
    let mut certificates = am.certificates.len() == ps.len();
    for (p, cert) in ps.iter().zip(&am.certificates) {
        certificates &= leq_check(p, &am.q, cert).unwrap_or(false);
    }
    let mut contained = true;
    let mut nonempty = false;
    for x in enumerate_points(am.q.alphabet(), am.q.window(), budget)? {
        if am.q.pos_member(&x) {
            nonempty = true;
            contained &= ps.iter().all(|p| p.pos_member(&x));
        }
    }
    let bookkeeping = am.transcript.iter().all(NormStep::holds);
    Ok(AmalgamCheck { certificates, contained, nonempty, bookkeeping })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::pf::{coords, PartialFunction};

    fn zero(a: u32, b: u32) -> Creature {
        Creature::constant_zero(coords(a..b), &Budget::default()).unwrap()
    }

    fn cond(cs: Vec<Creature>, end: u32) -> TruncatedCondition {
        TruncatedCondition::new(Alphabet::binary(), coords(0..end), PartialFunction::new(), cs, Flavor::PlusInfinity, vec![])
            .unwrap()
    }

    #[test]
    fn single_condition() {
        let p = cond(vec![zero(0, 4), zero(4, 8)], 8);
        let am = amalgamate(std::slice::from_ref(&p), &Slack::Linear { base: 1, step: 0 }, &Budget::default()).unwrap();
        assert!(verify_amalgam(&[p], &am, &Budget::default()).unwrap().passed());
    }

    #[test]
    fn identical_pair() {
        let p = cond(vec![zero(0, 4), zero(4, 8)], 8);
        let ps = vec![p.clone(), p];
        let am = amalgamate(&ps, &Slack::Linear { base: 1, step: 0 }, &Budget::default()).unwrap();
        assert!(verify_amalgam(&ps, &am, &Budget::default()).unwrap().passed());
    }

    #[test]
    fn shifted_pair_on_a_24_window() {
        let budget = Budget::default();
        let a = cond(vec![zero(0, 8), zero(8, 16), zero(16, 24)], 24);
        let b = cond(vec![zero(0, 4), zero(4, 12), zero(12, 20), zero(20, 24)], 24);
        let ps = vec![a, b];
        let slack = Slack::Linear { base: 1, step: 1 };
        let am = amalgamate(&ps, &slack, &budget).unwrap();
        assert_eq!(am.boundaries.first(), Some(&8));
        assert_eq!(am.boundaries.last(), Some(&24));
        let check = verify_amalgam(&ps, &am, &budget).unwrap();
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn low_norm_is_rejected() {
        let p = cond(vec![zero(0, 2), zero(2, 4)], 4);
        let r = amalgamate(&[p], &Slack::Linear { base: 2, step: 0 }, &Budget::default());
        assert!(matches!(r, Err(Error::InsufficientNorm(_))));
    }

    #[test]
    fn nor_growth_slack_saturates() {
        assert_eq!(Slack::NorGrowth.threshold(0, 0), 8u64.pow(5));
        assert_eq!(Slack::NorGrowth.threshold(1, 30), u64::MAX);
    }
}
