//! The three order-generating moves, certificates and the order checks.

use super::TruncatedCondition;
use crate::creatures::{sigma_bot_member, sigma_member, Creature, Family};
use crate::error::{Error, Result};
use crate::pf::{CoordSet, PartialFunction};
use crate::points::{enumerate_points, Budget};
use std::collections::{BTreeSet, HashSet, VecDeque};

/// One step of a derivation. Indices refer to the sorted creature list of
/// the condition the move is applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Remove the creatures at `indices` and extend the stem to `w`.
    Decide { indices: Vec<usize>, w: PartialFunction },
    /// Replace each index group by a composition of its members.
    Sigma { groups: Vec<(Vec<usize>, Creature)> },
    /// Replace one creature by a decomposition.
    SigmaBot { index: usize, parts: Vec<Creature> },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveCertificate {
    pub moves: Vec<Move>,
}

impl MoveCertificate {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveCertificate { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

fn distinct_in_range(indices: &[usize], len: usize) -> std::result::Result<BTreeSet<usize>, String> {
    let mut seen = BTreeSet::new();
    for &i in indices {
        if i >= len {
            return Err(format!("creature index {i} is out of range"));
        }
        if !seen.insert(i) {
            return Err(format!("creature index {i} is repeated"));
        }
    }
    Ok(seen)
}

pub fn move_decide(p: &TruncatedCondition, indices: &[usize], w_star: &PartialFunction) -> Result<TruncatedCondition> {
    let chosen = distinct_in_range(indices, p.creatures().len()).map_err(Error::IllegalDecision)?;
    if !p.w().is_subfunction_of(w_star) {
        return Err(Error::IllegalDecision("the new stem does not extend the old one".into()));
    }
    let mut expected: CoordSet = p.w().domain_set();
    for &i in &chosen {
        let t = &p.creatures()[i];
        expected.extend(t.z().iter().copied());
        let part = w_star.restrict(t.z());
        if !t.value_member(&part).map_err(|e| Error::IllegalDecision(e.to_string()))? {
            return Err(Error::IllegalDecision(format!("{part} is not a value of creature {i}")));
        }
    }
    if w_star.domain_set() != expected {
        return Err(Error::IllegalDecision("the new stem must cover exactly the decided creatures".into()));
    }
    let rest = p.creatures().iter().enumerate().filter(|(i, _)| !chosen.contains(i)).map(|(_, t)| t.clone()).collect();
    let q = p.with_parts(w_star.clone(), rest);
    q.validate_base().map_err(|e| Error::IllegalDecision(e.to_string()))?;
    Ok(q)
}

pub fn move_sigma(p: &TruncatedCondition, groups: &[(Vec<usize>, Creature)]) -> Result<TruncatedCondition> {
    let all: Vec<usize> = groups.iter().flat_map(|(g, _)| g.iter().copied()).collect();
    let used = distinct_in_range(&all, p.creatures().len()).map_err(Error::IllegalComposition)?;
    let mut out: Vec<Creature> =
        p.creatures().iter().enumerate().filter(|(i, _)| !used.contains(i)).map(|(_, t)| t.clone()).collect();
    for (k, (group, replacement)) in groups.iter().enumerate() {
        let members: Vec<Creature> = group.iter().map(|&i| p.creatures()[i].clone()).collect();
        if !sigma_member(replacement, &members) {
            return Err(Error::IllegalComposition(format!("replacement {k} is not a composition of its group")));
        }
        out.push(replacement.clone());
    }
    let q = p.with_parts(p.w().clone(), out);
    q.validate_base().map_err(|e| Error::IllegalComposition(e.to_string()))?;
    Ok(q)
}

pub fn move_sigma_bot(p: &TruncatedCondition, index: usize, parts: &[Creature]) -> Result<TruncatedCondition> {
    let t = p
        .creatures()
        .get(index)
        .ok_or_else(|| Error::IllegalDecomposition(format!("creature index {index} is out of range")))?;
    if !sigma_bot_member(parts, t) {
        return Err(Error::IllegalDecomposition(format!("the parts do not decompose creature {index}")));
    }
    let mut out: Vec<Creature> =
        p.creatures().iter().enumerate().filter(|&(i, _)| i != index).map(|(_, t)| t.clone()).collect();
    out.extend(parts.iter().cloned());
    let q = p.with_parts(p.w().clone(), out);
    q.validate_base().map_err(|e| Error::IllegalDecomposition(e.to_string()))?;
    Ok(q)
}

pub fn apply_move(p: &TruncatedCondition, m: &Move) -> Result<TruncatedCondition> {
    match m {
        Move::Decide { indices, w } => move_decide(p, indices, w),
        Move::Sigma { groups } => move_sigma(p, groups),
        Move::SigmaBot { index, parts } => move_sigma_bot(p, *index, parts),
    }
}

/// Applies every move in turn. Intermediate fragments only need the rules
/// shared by both flavors, since the stronger order is a restriction.
pub fn replay(p: &TruncatedCondition, cert: &MoveCertificate) -> Result<TruncatedCondition> {
    let mut cur = p.clone();
    for (step, m) in cert.moves.iter().enumerate() {
        cur = apply_move(&cur, m).map_err(|e| Error::InvalidCertificate { step, reason: e.to_string() })?;
    }
    Ok(cur)
}

fn same_frame(p: &TruncatedCondition, q: &TruncatedCondition) -> Result<()> {
    if p.window() != q.window() || p.alphabet() != q.alphabet() {
        return Err(Error::Precondition("conditions live on different windows or alphabets".into()));
    }
    if p.flavor() != q.flavor() {
        return Err(Error::Precondition("conditions have different flavors".into()));
    }
    Ok(())
}

/// `p ≤ q` witnessed by `cert`: replaying it from `p` yields `q`.
pub fn leq_check(p: &TruncatedCondition, q: &TruncatedCondition, cert: &MoveCertificate) -> Result<bool> {
    same_frame(p, q)?;
    p.validate()?;
    q.validate()?;
    Ok(replay(p, cert)?.same_content(q))
}

/// `POS(q) ⊆ POS(p)` by enumerating the window.
pub fn leq_semantic(p: &TruncatedCondition, q: &TruncatedCondition, budget: &Budget) -> Result<bool> {
    if p.window() != q.window() || p.alphabet() != q.alphabet() {
        return Err(Error::Precondition("conditions live on different windows or alphabets".into()));
    }
    let mut points = enumerate_points(p.alphabet(), p.window(), budget)?;
    Ok(points.all(|x| !q.pos_member(&x) || p.pos_member(&x)))
}

/// Largest number of states [`leq_search`] visits.
pub const SEARCH_STATE_CAP: usize = 20_000;

/// Looks for a certificate of `p ≤ q` with at most `max_moves` moves.
///
/// Only moves steered by `q` are tried: deciding creatures that lie inside
/// `dom(w^q)`, splitting a creature along the parts of `q`, and composing
/// groups into creatures of `q`. A `None` answer is therefore not a proof
/// that `p ≰ q`.
pub fn leq_search(p: &TruncatedCondition, q: &TruncatedCondition, max_moves: usize) -> Result<Option<MoveCertificate>> {
    same_frame(p, q)?;
    p.validate()?;
    q.validate()?;
    if !p.w().is_subfunction_of(q.w()) {
        return Ok(None);
    }
    let key = |c: &TruncatedCondition| (c.w().clone(), c.creatures().to_vec());
    let mut seen = HashSet::new();
    seen.insert(key(p));
    let mut queue = VecDeque::from([(p.clone(), Vec::<Move>::new())]);
    while let Some((cur, path)) = queue.pop_front() {
        if cur.same_content(q) {
            return Ok(Some(MoveCertificate::new(path)));
        }
        if path.len() == max_moves {
            continue;
        }
        for m in candidate_moves(&cur, q) {
            let Ok(next) = apply_move(&cur, &m) else { continue };
            if seen.len() >= SEARCH_STATE_CAP || !seen.insert(key(&next)) {
                continue;
            }
            let mut longer = path.clone();
            longer.push(m);
            queue.push_back((next, longer));
        }
    }
    Ok(None)
}

/// The parts of `q`: its stem domain and each creature domain.
fn target_parts(q: &TruncatedCondition) -> Vec<(CoordSet, Option<&Creature>)> {
    let mut parts = vec![(q.w().domain_set(), None)];
    parts.extend(q.creatures().iter().map(|s| (s.z().clone(), Some(s))));
    parts
}

fn candidate_moves(cur: &TruncatedCondition, q: &TruncatedCondition) -> Vec<Move> {
    let mut out = Vec::new();
    let parts = target_parts(q);
    let stem_dom = q.w().domain_set();

    let decide: Vec<usize> =
        cur.creatures().iter().enumerate().filter(|(_, t)| t.z().is_subset(&stem_dom)).map(|(i, _)| i).collect();
    if !decide.is_empty() {
        let mut w = cur.w().clone();
        for &i in &decide {
            for (c, s) in q.w().restrict(cur.creatures()[i].z()).iter() {
                w.insert(c, s);
            }
        }
        out.push(Move::Decide { indices: decide, w });
    }

    for (i, t) in cur.creatures().iter().enumerate() {
        let pieces: Vec<(CoordSet, Option<&Creature>)> = parts
            .iter()
            .filter_map(|(z, s)| {
                let piece: CoordSet = t.z().intersection(z).copied().collect();
                (!piece.is_empty()).then_some((piece, *s))
            })
            .collect();
        if pieces.len() < 2 {
            continue;
        }
        for guided in [true, false] {
            if let Some(split) = split_along(t, &pieces, q.w(), guided) {
                out.push(Move::SigmaBot { index: i, parts: split });
            }
        }
    }

    let mut groups = Vec::new();
    for s in q.creatures() {
        let members: Vec<usize> =
            cur.creatures().iter().enumerate().filter(|(_, t)| t.z().is_subset(s.z())).map(|(i, _)| i).collect();
        let covered: usize = members.iter().map(|&i| cur.creatures()[i].z().len()).sum();
        if covered != s.z().len() || (members.len() == 1 && &cur.creatures()[members[0]] == s) {
            continue;
        }
        let group: Vec<Creature> = members.iter().map(|&i| cur.creatures()[i].clone()).collect();
        if sigma_member(s, &group) {
            groups.push((members, s.clone()));
        }
    }
    if !groups.is_empty() {
        out.push(Move::Sigma { groups });
    }
    out
}

/// Splits `t` along `pieces`, sending each constraint to one piece.
///
/// Guided: prefer a piece where the restriction already occurs in the target
/// creature, or where the target stem contradicts it. Otherwise (and
/// unguided) the piece with the largest overlap, lowest first.
fn split_along(
    t: &Creature,
    pieces: &[(CoordSet, Option<&Creature>)],
    stem: &PartialFunction,
    guided: bool,
) -> Option<Vec<Creature>> {
    let mut families: Vec<Family> = vec![Family::new(); pieces.len()];
    for eta in t.delta() {
        let fits = |k: usize| {
            let r = eta.restrict(&pieces[k].0);
            !r.is_empty()
                && match pieces[k].1 {
                    Some(s) => s.delta().contains(&r),
                    None => !r.is_subfunction_of(stem),
                }
        };
        let choice = if guided { (0..pieces.len()).find(|&k| fits(k)) } else { None };
        let k = choice.unwrap_or_else(|| {
            (0..pieces.len()).max_by_key(|&k| (eta.overlap(&pieces[k].0), std::cmp::Reverse(k))).expect("pieces are nonempty")
        });
        families[k].insert(eta.restrict(&pieces[k].0));
    }
    let budget = Budget::default();
    pieces
        .iter()
        .zip(families)
        .map(|((z, _), delta)| {
            if delta.is_empty() {
                Creature::unconstrained(z.clone()).ok()
            } else {
                Creature::new(z.clone(), delta, &budget).ok().filter(Creature::is_member)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::Flavor;
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::creatures::{cut, glue};
    use crate::pf::coords;

    fn b() -> Budget {
        Budget::default()
    }

    fn base() -> TruncatedCondition {
        let z2 = Alphabet::binary();
        let cs = vec![
            Creature::new(coords([0]), [PartialFunction::of(&[(0, 0)])].into_iter().collect(), &b()).unwrap(),
            Creature::constant_zero(coords(1..5), &b()).unwrap(),
            Creature::unconstrained(coords(5..7)).unwrap(),
        ];
        TruncatedCondition::new(z2, coords(0..7), PartialFunction::new(), cs, Flavor::Empty, vec![]).unwrap()
    }

    #[test]
    fn decide_cases() {
        let p = base();
        assert_eq!(move_decide(&p, &[], p.w()).unwrap(), p);
        let free = move_decide(&p, &[2], &PartialFunction::of(&[(5, 1), (6, 0)])).unwrap();
        assert_eq!(free.creatures().len(), 2);
        let bad = move_decide(&p, &[0], &PartialFunction::of(&[(0, 0)]));
        assert!(matches!(bad, Err(Error::IllegalDecision(_))));
        let short = move_decide(&p, &[2], &PartialFunction::of(&[(5, 1)]));
        assert!(matches!(short, Err(Error::IllegalDecision(_))));
    }

    #[test]
    fn sigma_cases() {
        let p = base();
        let same: Vec<_> = p.creatures().iter().cloned().enumerate().map(|(i, t)| (vec![i], t)).collect();
        assert_eq!(move_sigma(&p, &same).unwrap(), p);
        let g = glue(&p.creatures()[0..2]).unwrap();
        let q = move_sigma(&p, &[(vec![0, 1], g)]).unwrap();
        assert_eq!(q.creatures().len(), 2);
        let weak = Creature::unconstrained(coords(0..5)).unwrap();
        assert!(matches!(move_sigma(&p, &[(vec![0, 1], weak)]), Err(Error::IllegalComposition(_))));
    }

    #[test]
    fn sigma_bot_cases() {
        let p = base();
        assert_eq!(move_sigma_bot(&p, 1, &[p.creatures()[1].clone()]).unwrap(), p);
        let (s0, s1) = cut(&p.creatures()[1], &coords(1..3), &b()).unwrap();
        let q = move_sigma_bot(&p, 1, &[s0.clone(), s1]).unwrap();
        assert_eq!(q.creatures().len(), 4);
        assert!(matches!(move_sigma_bot(&p, 1, &[s0]), Err(Error::IllegalDecomposition(_))));
    }

    #[test]
    fn certificates_replay_and_imply_inclusion() {
        let p = base();
        assert!(leq_check(&p, &p, &MoveCertificate::default()).unwrap());
        let (s0, s1) = cut(&p.creatures()[1], &coords(1..3), &b()).unwrap();
        let cert = MoveCertificate::new(vec![
            Move::SigmaBot { index: 1, parts: vec![s0, s1] },
            Move::Decide { indices: vec![0], w: PartialFunction::of(&[(0, 1)]) },
        ]);
        let q = replay(&p, &cert).unwrap();
        assert!(leq_check(&p, &q, &cert).unwrap());
        assert!(leq_semantic(&p, &q, &b()).unwrap());
        assert!(!leq_semantic(&q, &p, &b()).unwrap());

        let broken = MoveCertificate::new(vec![Move::Decide { indices: vec![9], w: PartialFunction::new() }]);
        assert!(matches!(leq_check(&p, &q, &broken), Err(Error::InvalidCertificate { step: 0, .. })));
    }

    #[test]
    fn search_finds_targeted_certificates() {
        let p = base();
        let (s0, s1) = cut(&p.creatures()[1], &coords(1..3), &b()).unwrap();
        let cert = MoveCertificate::new(vec![
            Move::SigmaBot { index: 1, parts: vec![s0, s1] },
            Move::Decide { indices: vec![0, 1], w: PartialFunction::of(&[(0, 1), (1, 1), (2, 0)]) },
        ]);
        let q = replay(&p, &cert).unwrap();
        let found = leq_search(&p, &q, 4).unwrap().expect("a certificate exists");
        assert!(leq_check(&p, &q, &found).unwrap());
        // The reverse direction is unsound semantically, so no search can succeed.
        assert_eq!(leq_search(&q, &p, 4).unwrap(), None);
    }
}
