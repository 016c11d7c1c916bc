//! Projection along a coordinate embedding `π` and its lifting property.
//!
//! A fragment is aligned with `π` when every creature domain lies inside
//! `rng(π)` or misses it. The projection keeps `w ∘ π` and pulls back the
//! creatures inside the range.

use super::moves::{apply_move, leq_check, Move, MoveCertificate};
use super::TruncatedCondition;
use crate::creatures::Creature;
use crate::error::{Error, Result};
use crate::pf::{Embedding, PartialFunction};

fn check_aligned(p: &TruncatedCondition, pi: &Embedding) -> Result<()> {
    for (i, t) in p.creatures().iter().enumerate() {
        let inside = t.z().iter().filter(|&&c| pi.in_range(c)).count();
        if inside != 0 && inside != t.z().len() {
            return Err(Error::NotAligned(format!("creature {i} straddles the range of the embedding")));
        }
    }
    Ok(())
}

/// `f_π(p)`: the stem `w ∘ π` and the pulled-back creatures inside `rng(π)`.
pub fn project_pi(p: &TruncatedCondition, pi: &Embedding) -> Result<TruncatedCondition> {
    check_aligned(p, pi)?;
    let back = pi.inverse();
    let window = p.window().iter().filter_map(|&c| pi.preimage(c)).collect();
    let creatures = p
        .creatures()
        .iter()
        .filter(|t| t.z().iter().all(|&c| pi.in_range(c)))
        .map(|t| t.permute(&back))
        .collect::<Result<Vec<_>>>()?;
    TruncatedCondition::new(
        p.alphabet().clone(),
        window,
        p.w().pull_back(pi),
        creatures,
        p.flavor(),
        p.profile().to_vec(),
    )
}

fn image(t: &Creature, pi: &Embedding) -> Result<Creature> {
    t.permute(pi)
}

fn locate(cur: &TruncatedCondition, t: &Creature) -> Result<usize> {
    cur.creatures()
        .iter()
        .position(|s| s == t)
        .ok_or_else(|| Error::Precondition("a moved creature has no image".into()))
}

/// Given `r ≥ f_π(p)` via `cert`, builds `q ≥ p` with `f_π(q) = r` by
/// transporting every move through `π`. Returns `q` and its certificate.
pub fn lift(
    p: &TruncatedCondition,
    pi: &Embedding,
    r: &TruncatedCondition,
    cert: &MoveCertificate,
) -> Result<(TruncatedCondition, MoveCertificate)> {
    let fp = project_pi(p, pi)?;
    if !leq_check(&fp, r, cert)? {
        return Err(Error::Precondition("the certificate does not lead from the projection to r".into()));
    }
    let mut low = fp;
    let mut high = p.clone();
    let mut moves = Vec::with_capacity(cert.len());
    for m in &cert.moves {
        let idx = |i: usize| locate(&high, &image(&low.creatures()[i], pi)?);
        let lifted = match m {
            Move::Decide { indices, w } => {
                let mapped = indices.iter().map(|&i| idx(i)).collect::<Result<Vec<_>>>()?;
                let w_high: PartialFunction = high.w().union(&w.permute(pi)?)?;
                Move::Decide { indices: mapped, w: w_high }
            }
            Move::Sigma { groups } => Move::Sigma {
                groups: groups
                    .iter()
                    .map(|(g, t)| Ok((g.iter().map(|&i| idx(i)).collect::<Result<Vec<_>>>()?, image(t, pi)?)))
                    .collect::<Result<Vec<_>>>()?,
            },
            Move::SigmaBot { index, parts } => Move::SigmaBot {
                index: idx(*index)?,
                parts: parts.iter().map(|t| image(t, pi)).collect::<Result<Vec<_>>>()?,
            },
        };
        low = apply_move(&low, m)?;
        high = apply_move(&high, &lifted)?;
        moves.push(lifted);
    }
    high.validate()?;
    Ok((high, MoveCertificate::new(moves)))
}
