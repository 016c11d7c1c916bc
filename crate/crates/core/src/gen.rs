//! Seeded random instances for the property suites and the `gen` command.
//!
//! Every generator draws from a caller-owned [`ChaCha8Rng`] and retries
//! rejected samples at most [`RETRY_CAP`] times.

use crate::alphabet::{Alphabet, Symbol};
use crate::conditions::{apply_move, Flavor, Move, TruncatedCondition};
use crate::creatures::{cut, glue, Creature, Family, Norm};
use crate::error::{Error, Result};
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::Budget;
use crate::qhn::{Blocks, NormSeqPrefix, QCondition, Strictness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;

pub const RETRY_CAP: usize = 1000;

/// Stream `stream` of the generator seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn symbol(rng: &mut ChaCha8Rng, a: &Alphabet) -> Symbol {
    Symbol(rng.gen_range(0..a.size()))
}

pub fn pf_on(rng: &mut ChaCha8Rng, a: &Alphabet, dom: &[Coord]) -> PartialFunction {
    dom.iter().map(|&c| (c, symbol(rng, a))).collect()
}

/// A uniformly chosen `size`-subset of `set`, sorted.
pub fn subset(rng: &mut ChaCha8Rng, set: &[Coord], size: usize) -> Vec<Coord> {
    let mut out: Vec<Coord> = set.choose_multiple(rng, size.min(set.len())).copied().collect();
    out.sort();
    out
}

fn pick(rng: &mut ChaCha8Rng, r: &RangeInclusive<usize>) -> usize {
    if r.is_empty() {
        *r.start()
    } else {
        rng.gen_range(r.clone())
    }
}

fn attempts<T>(mut f: impl FnMut(usize) -> Result<Option<T>>) -> Result<T> {
    for i in 0..RETRY_CAP {
        if let Some(t) = f(i)? {
            return Ok(t);
        }
    }
    Err(Error::GenerationFailed(RETRY_CAP))
}

/// A creature on `z` with `|Δ|` in `delta` and packing number at least `min_n`.
/// `|Δ| = 0` gives the unconstrained creature.
///
/// Constraint domains have at least `min(min_n, |z|)` coordinates, since a
/// smaller one caps the packing number below `min_n`.
pub fn creature_on(
    rng: &mut ChaCha8Rng,
    a: &Alphabet,
    z: &CoordSet,
    delta: RangeInclusive<usize>,
    min_n: u64,
    budget: &Budget,
) -> Result<Creature> {
    let zs: Vec<Coord> = z.iter().copied().collect();
    let smallest = (min_n as usize).clamp(1, zs.len().max(1));
    attempts(|_| {
        let k = pick(rng, &delta);
        if k == 0 {
            return Creature::unconstrained(z.clone()).map(Some);
        }
        let mut family = Family::new();
        for _ in 0..4 * k {
            if family.len() == k {
                break;
            }
            let size = rng.gen_range(smallest..=zs.len());
            let dom = subset(rng, &zs, size);
            family.insert(pf_on(rng, a, &dom));
        }
        if family.len() != k {
            return Ok(None);
        }
        let t = Creature::new(z.clone(), family, budget)?;
        Ok((t.packing() >= Norm::Finite(min_n.max(1))).then_some(t))
    })
}

/// Size ranges for creature generation.
#[derive(Debug, Clone)]
pub struct CreatureShape {
    pub z: RangeInclusive<usize>,
    pub delta: RangeInclusive<usize>,
    pub min_n: u64,
}

/// A creature on `offset..offset+|z|`.
pub fn creature(rng: &mut ChaCha8Rng, a: &Alphabet, offset: u32, shape: &CreatureShape, budget: &Budget) -> Result<Creature> {
    let len = pick(rng, &shape.z).max(1) as u32;
    let z: CoordSet = (offset..offset + len).map(Coord).collect();
    creature_on(rng, a, &z, shape.delta.clone(), shape.min_n, budget)
}

/// Random consecutive pieces of `lo..hi` with lengths in `len`; a short
/// tail joins the last piece.
pub fn intervals(rng: &mut ChaCha8Rng, lo: u32, hi: u32, len: &RangeInclusive<usize>) -> Vec<CoordSet> {
    let mut out: Vec<CoordSet> = Vec::new();
    let mut at = lo;
    while at < hi {
        let l = (pick(rng, len).max(1) as u32).min(hi - at);
        if l < (*len.start() as u32) && !out.is_empty() {
            out.last_mut().expect("nonempty").extend((at..hi).map(Coord));
            break;
        }
        out.push((at..at + l).map(Coord).collect());
        at += l;
    }
    out
}

/// Shape of a generated truncated condition on `0..window`.
#[derive(Debug, Clone)]
pub struct CondShape {
    pub window: u32,
    /// Number of leading coordinates decided by the stem.
    pub stem: RangeInclusive<usize>,
    pub creature_len: RangeInclusive<usize>,
    pub delta: RangeInclusive<usize>,
    pub min_n: u64,
    pub flavor: Flavor,
}

/// A valid truncated condition whose creatures tile the window past the stem.
pub fn truncated_condition_with_stem(
    rng: &mut ChaCha8Rng,
    a: &Alphabet,
    shape: &CondShape,
    w: &PartialFunction,
    budget: &Budget,
) -> Result<TruncatedCondition> {
    let start = w.domain().map(|c| c.0 + 1).max().unwrap_or(0);
    attempts(|_| {
        let mut creatures = Vec::new();
        for z in intervals(rng, start, shape.window, &shape.creature_len) {
            match creature_on(rng, a, &z, shape.delta.clone(), shape.min_n, budget) {
                Ok(t) => creatures.push(t),
                Err(Error::GenerationFailed(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        let window = (0..shape.window).map(Coord).collect();
        Ok(TruncatedCondition::new(a.clone(), window, w.clone(), creatures, shape.flavor, vec![]).ok())
    })
}

pub fn stem(rng: &mut ChaCha8Rng, a: &Alphabet, shape: &CondShape) -> PartialFunction {
    let s = pick(rng, &shape.stem).min(shape.window as usize) as u32;
    let dom: Vec<Coord> = (0..s).map(Coord).collect();
    pf_on(rng, a, &dom)
}

pub fn truncated_condition(rng: &mut ChaCha8Rng, a: &Alphabet, shape: &CondShape, budget: &Budget) -> Result<TruncatedCondition> {
    let w = stem(rng, a, shape);
    truncated_condition_with_stem(rng, a, shape, &w, budget)
}

/// `count` conditions sharing one stem, each tiling the window independently.
pub fn amalgam_inputs(
    rng: &mut ChaCha8Rng,
    a: &Alphabet,
    shape: &CondShape,
    count: usize,
    budget: &Budget,
) -> Result<Vec<TruncatedCondition>> {
    let w = stem(rng, a, shape);
    (0..count).map(|_| truncated_condition_with_stem(rng, a, shape, &w, budget)).collect()
}

fn random_decide(rng: &mut ChaCha8Rng, p: &TruncatedCondition, budget: &Budget) -> Result<Option<Move>> {
    let n = p.creatures().len();
    if n == 0 {
        return Ok(None);
    }
    let k = rng.gen_range(1..=n.min(2));
    let mut indices: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
    indices.sort();
    let mut w = p.w().clone();
    for &i in &indices {
        let values = p.creatures()[i].value_set(p.alphabet(), budget)?;
        let Some(v) = values.choose(rng) else { return Ok(None) };
        w = w.union(v)?;
    }
    Ok(Some(Move::Decide { indices, w }))
}

fn random_sigma(rng: &mut ChaCha8Rng, p: &TruncatedCondition, budget: &Budget) -> Result<Option<Move>> {
    let ts = p.creatures();
    if ts.is_empty() {
        return Ok(None);
    }
    let start = rng.gen_range(0..ts.len());
    let len = rng.gen_range(1..=(ts.len() - start).min(3));
    let members: Vec<usize> = (start..start + len).collect();
    let parts: Vec<Creature> = members.iter().map(|&i| ts[i].clone()).collect();
    let mut t = glue(&parts)?;
    if rng.gen_bool(0.5) {
        // Add one more constraint when the result stays a creature.
        let zs: Vec<Coord> = t.z().iter().copied().collect();
        let size = rng.gen_range(1..=zs.len());
        let dom = subset(rng, &zs, size);
        let eta = pf_on(rng, p.alphabet(), &dom);
        let mut delta = t.delta().clone();
        delta.insert(eta);
        match Creature::new(t.z().clone(), delta, budget) {
            Ok(s) if s.is_member() => t = s,
            Ok(_) => {}
            Err(e) if e.is_budget() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Some(Move::Sigma { groups: vec![(members, t)] }))
}

fn random_sigma_bot(rng: &mut ChaCha8Rng, p: &TruncatedCondition, budget: &Budget) -> Result<Option<Move>> {
    let ts = p.creatures();
    let splittable: Vec<usize> = (0..ts.len()).filter(|&i| ts[i].z().len() >= 2).collect();
    let Some(&index) = splittable.choose(rng) else { return Ok(None) };
    let zs: Vec<Coord> = ts[index].z().iter().copied().collect();
    let size = rng.gen_range(1..zs.len());
    let low: CoordSet = subset(rng, &zs, size).into_iter().collect();
    let (s0, s1) = cut(&ts[index], &low, budget)?;
    if !s0.is_member() || !s1.is_member() {
        return Ok(None);
    }
    Ok(Some(Move::SigmaBot { index, parts: vec![s0, s1] }))
}

/// A random legal move and its result, which passes the full validation of
/// its flavor.
pub fn random_move(rng: &mut ChaCha8Rng, p: &TruncatedCondition, budget: &Budget) -> Result<(Move, TruncatedCondition)> {
    attempts(|_| {
        let m = match rng.gen_range(0..3) {
            0 => random_decide(rng, p, budget)?,
            1 => random_sigma(rng, p, budget)?,
            _ => random_sigma_bot(rng, p, budget)?,
        };
        let Some(m) = m else { return Ok(None) };
        Ok(apply_move(p, &m).ok().filter(TruncatedCondition::is_valid).map(|q| (m, q)))
    })
}

/// Shape of a generated block-partition condition on `0..window`.
#[derive(Debug, Clone)]
pub struct QShape {
    pub window: u32,
    pub seq: NormSeqPrefix,
    pub m_star: RangeInclusive<usize>,
    pub stem: RangeInclusive<usize>,
    pub sigmas: RangeInclusive<usize>,
    /// Extra coordinates beyond the least size the block allows.
    pub slack: usize,
    /// Lower bound on σ sizes regardless of the block.
    pub min_sigma: usize,
    pub strictness: Strictness,
}

/// Least σ size admitted in block `m` for the given `m*`: `⌈n⁰_m / 2^{m*}⌉`.
pub fn least_sigma(seq: &NormSeqPrefix, m: usize, m_star: usize) -> Option<usize> {
    let n0 = seq.n0(m)?;
    let d = 1u128.checked_shl(m_star as u32).unwrap_or(u128::MAX);
    usize::try_from(n0.div_ceil(d)).ok()
}

/// A condition passing validation under `shape.strictness`.
///
/// Stem and σ coordinates are drawn from a shuffled window; each σ goes to
/// a random block `m ≥ m*` whose least admissible size fits.
pub fn qcondition(rng: &mut ChaCha8Rng, a: &Alphabet, shape: &QShape) -> Result<QCondition> {
    let window: CoordSet = (0..shape.window).map(Coord).collect();
    attempts(|_| {
        let mut pool: Vec<Coord> = window.iter().copied().collect();
        pool.shuffle(rng);
        let s = pick(rng, &shape.stem).min(pool.len());
        let mut stem_dom: Vec<Coord> = pool.drain(..s).collect();
        stem_dom.sort();
        let w = pf_on(rng, a, &stem_dom);
        let m_star = pick(rng, &shape.m_star);
        let blocks_ok: Vec<(usize, usize)> = (m_star..shape.seq.len())
            .filter_map(|m| least_sigma(&shape.seq, m, m_star).map(|d| (m, d.max(shape.min_sigma).max(1))))
            .filter(|&(_, d)| d <= pool.len())
            .collect();
        let count = pick(rng, &shape.sigmas);
        let mut sigmas = Vec::new();
        let mut blocks = Blocks::new();
        for _ in 0..count {
            let Some(&(m, least)) = blocks_ok.choose(rng) else { break };
            let size = least + rng.gen_range(0..=shape.slack);
            if size > pool.len() {
                return Ok(None);
            }
            let mut dom: Vec<Coord> = pool.drain(..size).collect();
            dom.sort();
            blocks.entry(m).or_default().insert(sigmas.len());
            sigmas.push(pf_on(rng, a, &dom));
        }
        if sigmas.len() < *shape.sigmas.start() {
            return Ok(None);
        }
        let p = QCondition::new(a.clone(), window.clone(), w, sigmas, m_star, blocks, shape.seq.clone());
        Ok(p.is_valid(shape.strictness).then_some(p))
    })
}

/// Strict shape at desk scale: the minimal strict prefix of length 4, `m* = 0`
/// and every σ in block 0, which admits σ's of at least five coordinates.
pub fn strict_qshape(window: u32, sigmas: RangeInclusive<usize>, stem: RangeInclusive<usize>) -> QShape {
    QShape {
        window,
        seq: NormSeqPrefix::minimal_strict(4).expect("fits in 128 bits"),
        m_star: 0..=0,
        stem,
        sigmas,
        slack: 1,
        min_sigma: 1,
        strictness: Strictness::Strict,
    }
}

/// Relaxed shape over the prefix `(1,1),(2,2),…,(len,len)`.
pub fn relaxed_qshape(window: u32, len: usize, m_star: RangeInclusive<usize>, sigmas: RangeInclusive<usize>) -> QShape {
    QShape {
        window,
        seq: NormSeqPrefix::new((1..=len as u128).map(|k| (k, k)).collect()),
        m_star,
        stem: 0..=2,
        sigmas,
        slack: 1,
        min_sigma: 1,
        strictness: Strictness::Relaxed,
    }
}
