//! Suites for the block-partition conditions: order, compatibility, linked
//! classes and the measure bounds.

use super::{from_value, to_value, z2, z3, Check, Suite, SuiteConfig};
use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::gen;
use crate::json::QCondDoc;
use crate::oracle;
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::Assignment;
use crate::qhn::{
    amalgamate_class, block_measure, class_key, compatible, compatible_bruteforce, compatible_constructive, leq_syntactic,
    nowhere_dense_check, pos_included, Blocks, NormSeqPrefix, QCondition, Strictness,
};
use crate::rational::{self, Rational};
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::sync::OnceLock;

pub(super) const SUITES: &[&dyn Suite] = &[&QhnOrder, &QhnCompat, &QhnLinked, &Measure];

/// Largest window covered pair-by-pair.
const EXHAUSTIVE_WINDOW: u32 = 6;
const MAX_SIGMAS: usize = 3;

fn qdoc(p: &QCondition) -> QCondDoc {
    QCondDoc::new(p)
}

/// Every stem on `window` together with every collection of at most three
/// pairwise disjoint σ's of size at least two on the coordinates left over.
fn plain_family(a: &Alphabet, n: u32) -> Vec<QCondition> {
    fn sigma_sets(a: &Alphabet, avail: &[Coord], left: usize, acc: &mut Vec<PartialFunction>, out: &mut Vec<Vec<PartialFunction>>) {
        out.push(acc.clone());
        if left == 0 {
            return;
        }
        for i in 0..avail.len() {
            let rest = &avail[i + 1..];
            for mask in 1u32..(1 << rest.len()) {
                let mut dom = vec![avail[i]];
                dom.extend((0..rest.len()).filter(|j| mask >> j & 1 == 1).map(|j| rest[j]));
                let remaining: Vec<Coord> = (0..rest.len()).filter(|j| mask >> j & 1 == 0).map(|j| rest[j]).collect();
                for sigma in oracle::all_points(a, &dom.iter().copied().collect()) {
                    acc.push(sigma);
                    sigma_sets(a, &remaining, left - 1, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let window: CoordSet = (0..n).map(Coord).collect();
    let mut out = Vec::new();
    let options = a.size() + 1;
    for code in 0..options.pow(n) {
        let mut w = PartialFunction::new();
        let mut free = Vec::new();
        let mut rest = code;
        for c in 0..n {
            match rest % options {
                0 => free.push(Coord(c)),
                s => {
                    w.insert(Coord(c), Symbol(s - 1));
                }
            }
            rest /= options;
        }
        let mut sets = Vec::new();
        sigma_sets(a, &free, MAX_SIGMAS, &mut Vec::new(), &mut sets);
        out.extend(sets.into_iter().map(|sigmas| QCondition::plain(a.clone(), window.clone(), w.clone(), sigmas)));
    }
    out
}

/// A plain family with the oracle's POS set of each member as a bitmask.
struct Exhaustive {
    conds: Vec<QCondition>,
    masks: Vec<u64>,
}

fn oracle_mask(p: &QCondition, points: &[PartialFunction]) -> u64 {
    points.iter().enumerate().fold(0, |m, (i, x)| if oracle::qhn_pos(p, x) { m | 1 << i } else { m })
}

fn exhaustive() -> &'static [Exhaustive] {
    static CELL: OnceLock<Vec<Exhaustive>> = OnceLock::new();
    CELL.get_or_init(|| {
        let a = z2();
        (1..=EXHAUSTIVE_WINDOW)
            .map(|n| {
                let conds = plain_family(&a, n);
                let points = oracle::all_points(&a, &(0..n).map(Coord).collect());
                let masks = conds.iter().map(|p| oracle_mask(p, &points)).collect();
                Exhaustive { conds, masks }
            })
            .collect()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OrderInstance {
    /// `p` against every condition of the exhaustive family on its window.
    Exhaustive { window: u32, position: usize, p: QCondDoc },
    /// A seeded chain of derived conditions on a larger window.
    Chain { p: QCondDoc, q: QCondDoc, r: QCondDoc },
}

/// A random plain condition on `0..n` with disjoint σ's of size at least two.
fn random_plain(rng: &mut ChaCha8Rng, a: &Alphabet, n: u32) -> QCondition {
    let mut pool: Vec<Coord> = (0..n).map(Coord).collect();
    pool.shuffle(rng);
    let s = rng.gen_range(0..=3.min(pool.len()));
    let w = gen::pf_on(rng, a, &pool.drain(..s).collect::<Vec<_>>());
    let mut sigmas = Vec::new();
    for _ in 0..rng.gen_range(0..=MAX_SIGMAS) {
        let size = rng.gen_range(2..=4);
        if pool.len() < size {
            break;
        }
        let dom: Vec<Coord> = pool.drain(..size).collect();
        sigmas.push(gen::pf_on(rng, a, &dom));
    }
    QCondition::plain(a.clone(), (0..n).map(Coord).collect(), w, sigmas)
}

/// A condition near `p`, usually below it in the order and sometimes not.
fn derive(rng: &mut ChaCha8Rng, a: &Alphabet, p: &QCondition) -> QCondition {
    let mut w = p.w.clone();
    if !w.is_empty() && rng.gen_bool(0.1) {
        let c = *w.domain().collect::<Vec<_>>().choose(rng).expect("nonempty");
        w = w.without(&[c].into_iter().collect());
    }
    let undecided: Vec<Coord> = p.window.iter().copied().filter(|&c| !w.contains(c)).collect();
    for _ in 0..rng.gen_range(0..=2) {
        if let Some(&c) = undecided.choose(rng) {
            w.insert(c, gen::symbol(rng, a));
        }
    }
    if !w.is_empty() && rng.gen_bool(0.1) {
        let c = *w.domain().collect::<Vec<_>>().choose(rng).expect("nonempty");
        let s = w.get(c).expect("in domain");
        w.insert(c, a.other_than(s));
    }
    let stem = w.domain_set();
    let mut sigmas: Vec<PartialFunction> = Vec::new();
    for sigma in &p.sigmas {
        let kept = sigma.without(&stem);
        if kept.len() < 2 || rng.gen_bool(0.15) {
            continue;
        }
        let mut dom: Vec<Coord> = kept.domain().collect();
        dom.shuffle(rng);
        dom.truncate(rng.gen_range(2..=dom.len()));
        let mut s = kept.restrict(&dom.into_iter().collect());
        if rng.gen_bool(0.1) {
            let c = s.domain().next().expect("nonempty");
            let v = s.get(c).expect("in domain");
            s.insert(c, a.other_than(v));
        }
        sigmas.push(s);
    }
    let used: CoordSet = sigmas.iter().flat_map(|s| s.domain()).chain(stem.iter().copied()).collect();
    let mut free: Vec<Coord> = p.window.iter().copied().filter(|c| !used.contains(c)).collect();
    free.shuffle(rng);
    if sigmas.len() < MAX_SIGMAS && free.len() >= 2 && rng.gen_bool(0.3) {
        let size = rng.gen_range(2..=free.len().min(4));
        sigmas.push(gen::pf_on(rng, a, &free[..size]));
    }
    QCondition::plain(a.clone(), p.window.clone(), w, sigmas)
}

fn order_layout() -> Vec<usize> {
    exhaustive().iter().map(|e| e.conds.len()).collect()
}

fn agreement(p: &QCondition, q: &QCondition) -> std::result::Result<(), String> {
    let syntactic = leq_syntactic(p, q);
    let semantic = oracle::qhn_included(p, q);
    if syntactic == semantic {
        Ok(())
    } else {
        Err(format!("leq_syntactic = {syntactic} but POS inclusion = {semantic} for p = {p}, q = {q}"))
    }
}

fn verdict(property: &str, r: std::result::Result<(), String>) -> Check {
    match r {
        Ok(()) => Check::pass(property),
        Err(d) => Check::fail(property, d),
    }
}

struct QhnOrder;

impl Suite for QhnOrder {
    fn name(&self) -> &'static str {
        "qhn-order"
    }
    fn about(&self) -> &'static str {
        "leq_syntactic agrees with POS inclusion: all pairs on windows up to 6 over Z_2, seeded chains on windows 7 to 10"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        order_layout().iter().sum::<usize>() + cfg.count_or(2000)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut i = index;
        for (k, len) in order_layout().into_iter().enumerate() {
            if i < len {
                let p = &exhaustive()[k].conds[i];
                return to_value(&OrderInstance::Exhaustive { window: k as u32 + 1, position: i, p: qdoc(p) });
            }
            i -= len;
        }
        let a = z2();
        let mut rng = gen::rng(cfg.seed, index as u64);
        let hi = cfg.window_max.clamp(EXHAUSTIVE_WINDOW + 1, 10);
        let n = rng.gen_range(EXHAUSTIVE_WINDOW + 1..=hi);
        let p = random_plain(&mut rng, &a, n);
        let q = derive(&mut rng, &a, &p);
        let r = if rng.gen_bool(0.8) { derive(&mut rng, &a, &q) } else { random_plain(&mut rng, &a, n) };
        to_value(&OrderInstance::Chain { p: qdoc(&p), q: qdoc(&q), r: qdoc(&r) })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: OrderInstance = from_value(instance)?;
        let b = cfg.budget();
        match inst {
            OrderInstance::Exhaustive { window, position, p } => {
                let p = p.decode()?;
                let family = exhaustive()
                    .get(window as usize - 1)
                    .ok_or_else(|| Error::Precondition(format!("no exhaustive family on {window} coordinates")))?;
                let points = oracle::all_points(&p.alphabet, &p.window);
                let mask = oracle_mask(&p, &points);
                let library: Vec<bool> = p.pos_mask(&b)?;
                let same = library.iter().enumerate().all(|(i, &m)| m == (mask >> i & 1 == 1));
                let mut out = vec![
                    Check::expect("pos-mask", same, || format!("library POS differs from enumeration for {p}")),
                    Check::expect("family-position", family.masks.get(position) == Some(&mask), || {
                        format!("instance {position} is not the family member it claims to be")
                    }),
                    Check::expect("reflexive", leq_syntactic(&p, &p), || format!("{p} is not below itself")),
                ];
                let mut disagreement = Ok(());
                for (q, &qmask) in family.conds.iter().zip(&family.masks) {
                    let included = qmask & !mask == 0;
                    if leq_syntactic(&p, q) != included {
                        disagreement = Err(format!("leq_syntactic = {} but POS inclusion = {included} for p = {p}, q = {q}", !included));
                        break;
                    }
                }
                out.push(verdict("equivalence", disagreement));
                Ok(out)
            }
            OrderInstance::Chain { p, q, r } => {
                let (p, q, r) = (p.decode()?, q.decode()?, r.decode()?);
                let mut out = vec![
                    verdict("equivalence", agreement(&p, &q)),
                    verdict("equivalence", agreement(&q, &r)),
                    verdict("equivalence", agreement(&p, &r)),
                ];
                let library = pos_included(&p, &q, &b)?;
                out.push(Check::expect("pos-included", library == oracle::qhn_included(&p, &q), || "library enumeration differs".into()));
                if leq_syntactic(&p, &q) && leq_syntactic(&q, &r) {
                    out.push(Check::expect("transitive", leq_syntactic(&p, &r), || format!("{p} <= {q} <= {r} but not {p} <= {r}")));
                } else {
                    out.push(Check::skip("transitive", "the chain is not increasing"));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PairInstance {
    p0: QCondDoc,
    p1: QCondDoc,
}

struct QhnCompat;

impl Suite for QhnCompat {
    fn name(&self) -> &'static str {
        "qhn-compat"
    }
    fn about(&self) -> &'static str {
        "strict-mode pairs: the constructive bound exists exactly when a common POS point does, and lies above both"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(300)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut rng = gen::rng(cfg.seed, index as u64);
        let a = cfg.alphabet.clone().unwrap_or_else(z2);
        let window = rng.gen_range(10..=cfg.window_max.clamp(10, 14));
        let shape = gen::strict_qshape(window, 0..=2, 0..=2);
        let p0 = gen::qcondition(&mut rng, &a, &shape)?;
        let p1 = match rng.gen_range(0..4) {
            // A copy with one stem value flipped, so the stems clash.
            0 if !p0.w.is_empty() => {
                let mut p1 = p0.clone();
                let c = *p0.w.domain().collect::<Vec<_>>().choose(&mut rng).expect("nonempty");
                p1.w.insert(c, a.other_than(p0.w.get(c).expect("in domain")));
                p1
            }
            // Same stem, fresh σ's.
            1 => {
                let mut p1 = gen::qcondition(&mut rng, &a, &shape)?;
                if p1.support().iter().all(|&c| !p0.w.contains(c)) || p0.w.is_empty() {
                    p1.w = p0.w.clone();
                }
                if p1.is_valid(Strictness::Strict) { p1 } else { gen::qcondition(&mut rng, &a, &shape)? }
            }
            _ => gen::qcondition(&mut rng, &a, &shape)?,
        };
        to_value(&PairInstance { p0: qdoc(&p0), p1: qdoc(&p1) })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let b = cfg.budget();
        let inst: PairInstance = from_value(instance)?;
        let (p0, p1) = (inst.p0.decode()?, inst.p1.decode()?);
        let mut out = vec![Check::expect("inputs-strict", p0.is_valid(Strictness::Strict) && p1.is_valid(Strictness::Strict), || {
            "an input fails strict validation".into()
        })];
        let points = oracle::all_points(&p0.alphabet, &p0.window);
        let common = points.iter().any(|x| oracle::qhn_pos(&p0, x) && oracle::qhn_pos(&p1, x));
        let witness = compatible_bruteforce(&p0, &p1, &b)?;
        out.push(Check::expect("bruteforce-matches-oracle", witness.is_some() == common, || {
            format!("bruteforce found {:?}, enumeration says {common}", witness.as_ref().map(Assignment::to_pf))
        }));
        match witness {
            Some(eta) => {
                let q = match compatible_constructive(&p0, &p1, &eta, Strictness::Strict) {
                    Ok(q) => q,
                    Err(e) => {
                        out.push(Check::fail("constructive-agrees", format!("witness exists but construction failed: {e}")));
                        return Ok(out);
                    }
                };
                out.push(Check::pass("constructive-agrees"));
                out.push(Check::expect("bound-valid", q.is_valid(Strictness::Strict), || format!("{q} fails strict validation")));
                out.push(Check::expect("above-both", leq_syntactic(&p0, &q) && leq_syntactic(&p1, &q), || format!("{q} is not above both")));
                out.push(Check::expect("above-both-by-enumeration", oracle::qhn_included(&p0, &q) && oracle::qhn_included(&p1, &q), || {
                    format!("POS({q}) is not inside both POS sets")
                }));
                out.push(Check::expect("bound-nonempty", points.iter().any(|x| oracle::qhn_pos(&q, x)), || format!("POS({q}) is empty")));
            }
            None => {
                let probe = points.iter().find(|x| oracle::qhn_pos(&p0, x));
                out.push(match probe {
                    Some(x) => {
                        let r = compatible_constructive(&p0, &p1, &Assignment::from_pf(x), Strictness::Strict);
                        Check::expect("constructive-agrees", r.is_err(), || "construction succeeded without a common point".into())
                    }
                    None => Check::pass("constructive-agrees"),
                });
            }
        }
        let api = compatible(&p0, &p1, Strictness::Strict, &b);
        out.push(Check::expect("compatible-api", matches!(&api, Ok(r) if r.is_some() == common), || format!("compatible returned {api:?}")));
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct ClassInstance {
    n: usize,
    members: Vec<QCondDoc>,
}

/// Prefix `(1,1),(2,2),…,(6,6)`.
fn linked_seq() -> NormSeqPrefix {
    NormSeqPrefix::new((1..=6u128).map(|k| (k, k)).collect())
}

const LINKED_WINDOW: u32 = 16;

struct QhnLinked;

impl Suite for QhnLinked {
    fn name(&self) -> &'static str {
        "qhn-linked"
    }
    fn about(&self) -> &'static str {
        "n+1 conditions sharing a class key for n in {1, 2} have a verified common upper bound"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(100)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut rng = gen::rng(cfg.seed, index as u64);
        let a = cfg.alphabet.clone().unwrap_or_else(z2);
        let n = 1 + index % 2;
        let seq = linked_seq();
        let hi = n + 2;
        let window: CoordSet = (0..LINKED_WINDOW).map(Coord).collect();
        let mut pool: Vec<Coord> = window.iter().copied().collect();
        pool.shuffle(&mut rng);

        let s = rng.gen_range(0..=1);
        let w = gen::pf_on(&mut rng, &a, &pool.drain(..s).collect::<Vec<_>>());
        let mut low = Vec::new();
        let mut low_blocks = Blocks::new();
        for _ in 0..rng.gen_range(1..=2) {
            let m = rng.gen_range(0..hi);
            if low_blocks.get(&m).is_some_and(|v| v.len() as u128 >= seq.n1(m).expect("in prefix")) {
                continue;
            }
            let size = seq.n0(m).expect("in prefix") as usize + rng.gen_range(0..=1);
            let dom: Vec<Coord> = pool.drain(..size).collect();
            low_blocks.entry(m).or_default().insert(low.len());
            low.push(gen::pf_on(&mut rng, &a, &dom));
        }

        // High σ's are at least max(n⁰_m, (n+1)·y_m) long, so the disjoint
        // selection of y_m coordinates from each always exists.
        let members = (0..=n)
            .map(|_| {
                let mut free = pool.clone();
                free.shuffle(&mut rng);
                let mut sigmas = low.clone();
                let mut blocks = low_blocks.clone();
                for _ in 0..rng.gen_range(1..=2) {
                    let m = rng.gen_range(hi..seq.len());
                    let n0 = seq.n0(m).expect("in prefix");
                    let y = (n0 >> (n + 1)) + 1;
                    let size = n0.max((n as u128 + 1) * y) as usize + rng.gen_range(0..=1);
                    if free.len() < size || blocks.get(&m).is_some_and(|v| v.len() as u128 >= seq.n1(m).expect("in prefix")) {
                        continue;
                    }
                    let dom: Vec<Coord> = free.drain(..size).collect();
                    blocks.entry(m).or_default().insert(sigmas.len());
                    sigmas.push(gen::pf_on(&mut rng, &a, &dom));
                }
                QCondition::new(a.clone(), window.clone(), w.clone(), sigmas, 0, blocks, seq.clone())
            })
            .collect::<Vec<_>>();
        to_value(&ClassInstance { n, members: members.iter().map(qdoc).collect() })
    }
    fn check(&self, _cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: ClassInstance = from_value(instance)?;
        let ps: Vec<QCondition> = inst.members.iter().map(QCondDoc::decode).collect::<Result<_>>()?;
        let key = class_key(&ps[0], inst.n);
        let mut out = vec![
            Check::expect("inputs-valid", ps.iter().all(|p| p.is_valid(Strictness::Relaxed)), || "an input fails validation".into()),
            Check::expect("shared-key", ps.iter().all(|p| class_key(p, inst.n) == key), || "class keys differ".into()),
        ];
        let q = match amalgamate_class(&ps, Strictness::Relaxed) {
            Ok(q) => q,
            Err(e) => {
                out.push(Check::fail("built", e.to_string()));
                return Ok(out);
            }
        };
        out.push(Check::pass("built"));
        out.push(Check::expect("valid", q.is_valid(Strictness::Relaxed), || format!("{q} fails validation")));
        out.push(Check::expect("above-all", ps.iter().all(|p| leq_syntactic(p, &q)), || format!("{q} is not above every input")));
        out.push(Check::expect("contained", ps.iter().all(|p| oracle::qhn_included(p, &q)), || "POS(q) leaves some POS(p_i)".into()));
        let points = oracle::all_points(&q.alphabet, &q.window);
        out.push(Check::expect("nonempty", points.iter().any(|x| oracle::qhn_pos(&q, x)), || "POS(q) is empty".into()));
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MeasureInstance {
    /// `(7/8)^64 ≤ e^{-8}` and the enclosure of `e^{-8}`.
    Anchor,
    Block { alphabet_size: u32, d: usize, count: u64 },
    PosMeasure { p: QCondDoc },
    NowhereDense { p: QCondDoc },
}

/// `(1 - 1/s^d)^count` by repeated multiplication.
fn naive_avoid(s: u32, d: usize, count: u64) -> Rational {
    let cyl = Rational::new(1.into(), num_bigint::BigInt::from(s).pow(d as u32));
    let base = Rational::one() - cyl;
    (0..count).fold(Rational::one(), |acc, _| acc * &base)
}

fn decimal(text: &str) -> Rational {
    let (int, frac) = text.split_once('.').expect("decimal point");
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().expect("digits");
    Rational::new(digits, num_bigint::BigInt::from(10).pow(frac.len() as u32))
}

/// Whether every extension of `stem` to the window lies in POS(p).
fn traps(p: &QCondition, stem: &PartialFunction, points: &[PartialFunction]) -> bool {
    points.iter().filter(|x| stem.is_subfunction_of(x)).all(|x| oracle::qhn_pos(p, x))
}

struct Measure;

impl Suite for Measure {
    fn name(&self) -> &'static str {
        "measure"
    }
    fn about(&self) -> &'static str {
        "exact block measures certified below e^-N, POS measures against enumeration, truncated nowhere density"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        1 + cfg.count_or(300)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        if index == 0 {
            return to_value(&MeasureInstance::Anchor);
        }
        let mut rng = gen::rng(cfg.seed, index as u64);
        match index % 3 {
            0 => {
                let s: u32 = rng.gen_range(2..=3);
                let d = rng.gen_range(1..=if s == 2 { 4 } else { 2 });
                let sq = u64::from(s).pow(2 * d as u32);
                let count = rng.gen_range(sq + 1..=3 * sq);
                to_value(&MeasureInstance::Block { alphabet_size: s, d, count })
            }
            1 => {
                let a = super::pick_alphabet(cfg, &[z2(), z3()], rng.gen_range(0..2));
                let n = rng.gen_range(1..=if a.size() == 2 { 10 } else { 6 });
                let window: Vec<Coord> = (0..n).map(Coord).collect();
                let s = rng.gen_range(0..=2.min(window.len()));
                let stem = gen::subset(&mut rng, &window, s);
                let w = gen::pf_on(&mut rng, &a, &stem);
                // σ's may overlap each other and the stem here.
                let sigmas = (0..rng.gen_range(0..=5))
                    .map(|_| {
                        let k = rng.gen_range(1..=window.len().min(4));
                        let dom = gen::subset(&mut rng, &window, k);
                        gen::pf_on(&mut rng, &a, &dom)
                    })
                    .collect();
                to_value(&MeasureInstance::PosMeasure { p: qdoc(&QCondition::plain(a, window.into_iter().collect(), w, sigmas)) })
            }
            _ => {
                let n = rng.gen_range(1..=6);
                to_value(&MeasureInstance::NowhereDense { p: qdoc(&random_small_plain(&mut rng, n)) })
            }
        }
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: MeasureInstance = from_value(instance)?;
        let b = cfg.budget();
        match inst {
            MeasureInstance::Anchor => {
                let bm = block_measure(0, 2, 3, 64)?;
                let exact = naive_avoid(2, 3, 64);
                let seven_eighths = Rational::new(7.into(), 8.into());
                let enclosure = rational::exp_neg_bounds(8)?;
                let (lo, hi) = (decimal("0.000335462"), decimal("0.000335464"));
                Ok(vec![
                    Check::expect("exact-power", bm.measure == exact && exact == rational::pow(&seven_eighths, 64), || {
                        format!("(7/8)^64 computed as {}", bm.measure)
                    }),
                    Check::expect("enclosure", lo < enclosure.lo && enclosure.hi < hi, || {
                        format!("e^-8 enclosed in [{}, {}]", rational::to_decimal(&enclosure.lo, 12), rational::to_decimal(&enclosure.hi, 12))
                    }),
                    Check::expect("certified", bm.certified && exact <= enclosure.lo, || "(7/8)^64 <= e^-8 is not certified".into()),
                    Check::expect("exponent", bm.exponent == 8, || format!("exponent {}", bm.exponent)),
                ])
            }
            MeasureInstance::Block { alphabet_size, d, count } => {
                let bm = block_measure(0, alphabet_size, d, count)?;
                let exact = naive_avoid(alphabet_size, d, count);
                let big_n = u64::from(alphabet_size).pow(d as u32);
                let holds = exact <= rational::exp_neg_bounds(big_n)?.lo;
                Ok(vec![
                    Check::expect("exact-power", bm.measure == exact, || format!("measure {} differs from the product", bm.measure)),
                    Check::expect("hypothesis", bm.hypothesis && count > big_n * big_n, || format!("count {count} vs |X|^(2d) = {}", big_n * big_n)),
                    Check::expect("certified", bm.certified && holds, || format!("(1 - {alphabet_size}^-{d})^{count} <= e^-{big_n} not certified")),
                ])
            }
            MeasureInstance::PosMeasure { p } => {
                let p = p.decode()?;
                let points = oracle::all_points(&p.alphabet, &p.window);
                let hits = points.iter().filter(|x| oracle::qhn_pos(&p, x)).count() as u64;
                let expected = Rational::new(hits.into(), (points.len() as u64).into());
                let got = p.pos_measure(&b)?;
                Ok(vec![Check::expect("pos-measure", got == expected, || format!("measure {got} but enumeration gives {expected}"))])
            }
            MeasureInstance::NowhereDense { p } => {
                let p = p.decode()?;
                let points = oracle::all_points(&p.alphabet, &p.window);
                // Smallest stem that keeps every extension inside POS(p).
                let mut least = None;
                let cs: Vec<Coord> = p.window.iter().copied().collect();
                for mask in 0u32..(1 << cs.len()) {
                    let dom: CoordSet = (0..cs.len()).filter(|i| mask >> i & 1 == 1).map(|i| cs[i]).collect();
                    if least.is_some_and(|l| l <= dom.len()) {
                        continue;
                    }
                    if oracle::all_points(&p.alphabet, &dom).iter().any(|stem| traps(&p, stem, &points)) {
                        least = Some(dom.len());
                    }
                }
                let mut out = Vec::new();
                for depth in 0..=cs.len() {
                    let nd = nowhere_dense_check(&p, depth);
                    let expected = least.is_none_or(|l| depth < l);
                    out.push(Check::expect("nowhere-dense", nd.holds == expected, || format!("depth {depth}: holds = {}, enumeration says {expected}", nd.holds)));
                    if let Some(stem) = &nd.counterexample {
                        out.push(Check::expect("trapping-stem", stem.len() <= depth && traps(&p, stem, &points), || format!("{stem} does not trap")));
                    }
                }
                Ok(out)
            }
        }
    }
}

/// A plain Z_2 condition on `0..n` with disjoint σ's of any positive size.
fn random_small_plain(rng: &mut ChaCha8Rng, n: u32) -> QCondition {
    let a = z2();
    let mut pool: Vec<Coord> = (0..n).map(Coord).collect();
    pool.shuffle(rng);
    let s = rng.gen_range(0..=pool.len().min(2));
    let w = gen::pf_on(rng, &a, &pool.drain(..s).collect::<Vec<_>>());
    let mut sigmas = Vec::new();
    while !pool.is_empty() && sigmas.len() < MAX_SIGMAS && rng.gen_bool(0.7) {
        let size = rng.gen_range(1..=pool.len().min(3));
        sigmas.push(gen::pf_on(rng, &a, &pool.drain(..size).collect::<Vec<_>>()));
    }
    QCondition::plain(a, (0..n).map(Coord).collect(), w, sigmas)
}
