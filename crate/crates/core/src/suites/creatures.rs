//! Suites for the packing norm, the creature operations and the group layer.

use super::{from_value, pick_alphabet, to_value, z2, z3, Check, Suite, SuiteConfig};
use crate::alphabet::Alphabet;
use crate::creatures::{cut, glue, link, restrict_half, sigma_bot_member, sigma_member, Creature, Norm};
use crate::error::{Error, Result};
use crate::gen::{self, CreatureShape};
use crate::json::{decode_creature, decode_pf, encode_creature, encode_pf, CreatureDoc, PfDoc};
use crate::oracle;
use crate::pf::{coords, Coord, CoordSet, Embedding, PartialFunction};
use crate::points::{enumerate_points, Budget};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeSet;

pub(super) const SUITES: &[&dyn Suite] = &[&NormBaseline, &Witness, &NormBounds, &Antitone, &Axioms, &Invariance, &GroupLaws];

fn oracle_n(t: &Creature) -> Result<Norm> {
    let delta: Vec<PartialFunction> = t.delta().iter().cloned().collect();
    oracle::packing_number(&delta).ok_or(Error::EnumerationTooLarge {
        requested: 1u128 << delta.len().min(127),
        budget: 1 << oracle::MAX_ORACLE_FAMILY,
    })
}

fn oracle_values(a: &Alphabet, t: &Creature) -> BTreeSet<PartialFunction> {
    let delta: Vec<PartialFunction> = t.delta().iter().cloned().collect();
    oracle::value_set(a, t.z(), &delta).into_iter().collect()
}

fn half(n: Norm) -> Norm {
    match n {
        Norm::Finite(v) => Norm::Finite(v / 2),
        Norm::Infinite => Norm::Infinite,
    }
}

/// `v(z, Δ) ⊆ ...` membership of a whole family of restrictions.
fn restricts_into(a: &Alphabet, t: &Creature, parts: &[Creature]) -> bool {
    let values: Vec<BTreeSet<PartialFunction>> = parts.iter().map(|s| oracle_values(a, s)).collect();
    oracle_values(a, t).iter().all(|v| parts.iter().zip(&values).all(|(s, vs)| vs.contains(&v.restrict(s.z()))))
}

/// `{v : v↾z_s ∈ v(s) for all s} ⊆ v(t)`.
fn decomposition_sound(a: &Alphabet, t: &Creature, parts: &[Creature]) -> bool {
    let values: Vec<BTreeSet<PartialFunction>> = parts.iter().map(|s| oracle_values(a, s)).collect();
    let tv = oracle_values(a, t);
    oracle::all_points(a, t.z())
        .iter()
        .filter(|v| parts.iter().zip(&values).all(|(s, vs)| vs.contains(&v.restrict(s.z()))))
        .all(|v| tv.contains(v))
}

fn domains_partition(t: &Creature, parts: &[Creature]) -> bool {
    let mut seen = CoordSet::new();
    parts.iter().all(|s| s.z().iter().all(|&c| seen.insert(c))) && &seen == t.z()
}

#[derive(Serialize, Deserialize)]
struct Baseline {
    alphabet: Alphabet,
    size: usize,
}

struct NormBaseline;

impl Suite for NormBaseline {
    fn name(&self) -> &'static str {
        "norm-baseline"
    }
    fn about(&self) -> &'static str {
        "n(z, {0_z}) = |z| for |z| <= 6 over Z_2 and Z_3"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        let alphabets = if cfg.alphabet.is_some() { 1 } else { 2 };
        alphabets * cfg.z_max
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let alphabets = if cfg.alphabet.is_some() { 1 } else { 2 };
        let alphabet = pick_alphabet(cfg, &[z2(), z3()], index / cfg.z_max % alphabets);
        to_value(&Baseline { alphabet, size: index % cfg.z_max + 1 })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: Baseline = from_value(instance)?;
        let z = coords(0..inst.size as u32);
        let t = Creature::constant_zero(z, &cfg.budget())?;
        let want = Norm::Finite(inst.size as u64);
        let got = oracle_n(&t)?;
        Ok(vec![
            Check::expect("baseline", t.packing() == want, || format!("n = {}, expected {want}", t.packing())),
            Check::expect("oracle-baseline", got == want, || format!("oracle n = {got}, expected {want}")),
            Check::expect("nonempty-values", !oracle_values(&inst.alphabet, &t).is_empty(), || "v(z, {0_z}) is empty".into()),
        ])
    }
}

#[derive(Serialize, Deserialize)]
struct CreatureInstance {
    alphabet: Alphabet,
    creature: CreatureDoc,
}

fn creature_shape(cfg: &SuiteConfig, min_n: u64) -> CreatureShape {
    CreatureShape { z: 1..=cfg.z_max, delta: 1..=cfg.delta_max, min_n }
}

struct Witness;

impl Suite for Witness {
    fn name(&self) -> &'static str {
        "witness"
    }
    fn about(&self) -> &'static str {
        "witness_value lies in the exhaustively computed value set"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(1000)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut rng = gen::rng(cfg.seed, index as u64);
        let alphabet = pick_alphabet(cfg, &[z2(), z3()], rng.gen_range(0..2));
        let t = gen::creature(&mut rng, &alphabet, 0, &creature_shape(cfg, 1), &cfg.budget())?;
        to_value(&CreatureInstance { creature: encode_creature(&alphabet, &t), alphabet })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: CreatureInstance = from_value(instance)?;
        let a = &inst.alphabet;
        let t = decode_creature(a, &inst.creature, &cfg.budget())?;
        let n = oracle_n(&t)?;
        let values = oracle_values(a, &t);
        let mut out = vec![Check::expect("norm-matches-oracle", t.packing() == n, || format!("library n = {}, oracle n = {n}", t.packing()))];
        if n == Norm::Finite(0) {
            out.push(Check::skip("witness-in-values", "packing number 0"));
            return Ok(out);
        }
        out.push(Check::expect("nonempty-values", !values.is_empty(), || "n >= 1 but v(z, Delta) is empty".into()));
        out.push(match t.witness_value() {
            Ok(w) => Check::expect("witness-in-values", values.contains(&w), || format!("{w} is not in v(z, Delta)")),
            Err(e) => Check::fail("witness-in-values", format!("witness_value failed: {e}")),
        });
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct BoundsInstance {
    alphabet: Alphabet,
    t: CreatureDoc,
    zstar: Vec<u32>,
    glue: Vec<CreatureDoc>,
    link: Vec<CreatureDoc>,
}

struct NormBounds;

impl Suite for NormBounds {
    fn name(&self) -> &'static str {
        "norm-bounds"
    }
    fn about(&self) -> &'static str {
        "restrict_half, glue and link norm inequalities against the brute-force norm"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(1000)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let b = cfg.budget();
        let mut rng = gen::rng(cfg.seed, index as u64);
        let alphabet = pick_alphabet(cfg, &[z2(), z3()], rng.gen_range(0..2));
        let shape = creature_shape(cfg, 1);
        let wide = CreatureShape { z: 2..=cfg.z_max.max(2), ..shape.clone() };
        let t = gen::creature(&mut rng, &alphabet, 0, &wide, &b)?;
        // A proper subset holding half the domain of some constraint, so the
        // restriction keeps at least that constraint.
        let zs: Vec<Coord> = t.z().iter().copied().collect();
        let eta = t.delta().iter().collect::<Vec<_>>().choose(&mut rng).copied().expect("n is finite").clone();
        let dom: Vec<Coord> = eta.domain().collect();
        let mut zstar = gen::subset(&mut rng, &dom, dom.len().div_ceil(2));
        let others: Vec<Coord> = zs.iter().copied().filter(|c| !zstar.contains(c)).collect();
        let extra = rng.gen_range(0..others.len());
        zstar.extend(gen::subset(&mut rng, &others, extra));
        let zstar: Vec<u32> = zstar.into_iter().map(|c| c.0).collect();
        let mut glued = Vec::new();
        let mut offset = 0;
        for _ in 0..rng.gen_range(2..=3) {
            let s = gen::creature(&mut rng, &alphabet, offset, &shape, &b)?;
            offset += s.z().len() as u32 + rng.gen_range(0..2);
            glued.push(encode_creature(&alphabet, &s));
        }
        let z: CoordSet = (0..rng.gen_range(1..=cfg.z_max as u32)).map(Coord).collect();
        let l0 = gen::creature_on(&mut rng, &alphabet, &z, shape.delta.clone(), 1, &b)?;
        let l1 = gen::creature_on(&mut rng, &alphabet, &z, shape.delta.clone(), 1, &b)?;
        to_value(&BoundsInstance {
            t: encode_creature(&alphabet, &t),
            zstar,
            glue: glued,
            link: vec![encode_creature(&alphabet, &l0), encode_creature(&alphabet, &l1)],
            alphabet,
        })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let b = Budget { max_family: crate::oracle::MAX_ORACLE_FAMILY, ..cfg.budget() };
        let inst: BoundsInstance = from_value(instance)?;
        let a = &inst.alphabet;
        let t = decode_creature(a, &inst.t, &b)?;
        let zstar: CoordSet = inst.zstar.iter().map(|&c| Coord(c)).collect();
        let mut out = vec![Check::expect("proper-subset", !zstar.is_empty() && zstar.len() < t.z().len(), || "z* is not a nonempty proper subset".into())];

        let n = oracle_n(&t)?;
        out.push(match restrict_half(&t, &zstar, &b) {
            Ok(r) => {
                let nr = oracle_n(&r)?;
                Check::expect("restrict-half", nr >= half(n), || format!("n* = {nr} < floor({n}/2)"))
            }
            Err(e) => Check::fail("restrict-half", format!("restriction failed: {e}")),
        });

        let parts: Vec<Creature> = inst.glue.iter().map(|d| decode_creature(a, d, &b)).collect::<Result<_>>()?;
        let g = glue(&parts)?;
        let min = parts.iter().map(oracle_n).collect::<Result<Vec<_>>>()?.into_iter().min().expect("two or more parts");
        let ng = oracle_n(&g)?;
        out.push(Check::expect("glue", ng >= min, || format!("n(glue) = {ng} < min = {min}")));
        out.push(Check::expect("glue-cached-norm", g.packing() == ng, || format!("cached {} but oracle {ng}", g.packing())));

        let l0 = decode_creature(a, &inst.link[0], &b)?;
        let l1 = decode_creature(a, &inst.link[1], &b)?;
        let l = link(&l0, &l1, &b)?;
        let bound = half(oracle_n(&l0)?).min(half(oracle_n(&l1)?));
        let nl = oracle_n(&l)?;
        out.push(Check::expect("link", nl >= bound, || format!("n(link) = {nl} < {bound}")));
        out.push(Check::expect("link-norm-matches-oracle", l.packing() == nl, || format!("library {} but oracle {nl}", l.packing())));
        Ok(out)
    }
}

struct Antitone;

impl Suite for Antitone {
    fn name(&self) -> &'static str {
        "antitone"
    }
    fn about(&self) -> &'static str {
        "n is antitone in Delta over every subfamily, and n <= min |dom eta|"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(500)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut rng = gen::rng(cfg.seed, index as u64);
        let alphabet = cfg.alphabet.clone().unwrap_or_else(z2);
        let shape = CreatureShape { z: 1..=cfg.z_max.min(5), delta: 1..=cfg.delta_max.min(5), min_n: 0 };
        let len = rng.gen_range(shape.z.clone()) as u32;
        let z: CoordSet = (0..len).map(Coord).collect();
        let t = gen::creature_on(&mut rng, &alphabet, &z, shape.delta.clone(), 0, &cfg.budget())?;
        to_value(&CreatureInstance { creature: encode_creature(&alphabet, &t), alphabet })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: CreatureInstance = from_value(instance)?;
        let t = decode_creature(&inst.alphabet, &inst.creature, &cfg.budget())?;
        let delta: Vec<PartialFunction> = t.delta().iter().cloned().collect();
        let n1 = oracle_n(&t)?;
        let mut antitone = Ok(());
        for mask in 0u32..(1 << delta.len()) {
            let sub: Vec<PartialFunction> = (0..delta.len()).filter(|i| mask >> i & 1 == 1).map(|i| delta[i].clone()).collect();
            let n0 = oracle::packing_number(&sub).expect("subfamily of an admitted family");
            if n1 > n0 {
                antitone = Err(format!("subfamily {mask:#b} has n = {n0} < {n1}"));
                break;
            }
        }
        let cap = delta.iter().map(|e| e.len() as u64).min().map_or(Norm::Infinite, Norm::Finite);
        Ok(vec![
            match antitone {
                Ok(()) => Check::pass("antitone"),
                Err(d) => Check::fail("antitone", d),
            },
            Check::expect("upper-bound", n1 <= cap, || format!("n = {n1} above min |dom eta| = {cap}")),
            Check::expect("norm-matches-oracle", t.packing() == n1, || format!("library {} but oracle {n1}", t.packing())),
        ])
    }
}

#[derive(Serialize, Deserialize)]
struct AxiomInstance {
    alphabet: Alphabet,
    leaves: Vec<CreatureDoc>,
    groups: Vec<Vec<usize>>,
    source: CreatureDoc,
    cut_at: Vec<u32>,
    recut: Vec<Option<Vec<u32>>>,
}

struct Axioms;

impl Suite for Axioms {
    fn name(&self) -> &'static str {
        "axioms"
    }
    fn about(&self) -> &'static str {
        "composition and decomposition axioms on glue and cut outputs"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(500)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let b = cfg.budget();
        let mut rng = gen::rng(cfg.seed, index as u64);
        let alphabet = pick_alphabet(cfg, &[z2(), z3()], rng.gen_range(0..2));
        // At most eight coordinates in all, so v(t) stays enumerable.
        let small = CreatureShape { z: 1..=2, delta: 0..=2, min_n: 1 };
        let count = rng.gen_range(2..=4);
        let mut leaves = Vec::new();
        let mut offset = 0;
        for _ in 0..count {
            let s = gen::creature(&mut rng, &alphabet, offset, &small, &b)?;
            offset += s.z().len() as u32;
            leaves.push(s);
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.shuffle(&mut rng);
        let cuts = rng.gen_range(1..=count.min(3));
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); cuts];
        for (k, i) in order.into_iter().enumerate() {
            groups[if k < cuts { k } else { rng.gen_range(0..cuts) }].push(i);
        }
        for g in &mut groups {
            g.sort();
        }

        let shape = CreatureShape { z: 2..=cfg.z_max.max(2), delta: 1..=cfg.delta_max.min(3), min_n: 2 };
        let source = gen::creature(&mut rng, &alphabet, 0, &shape, &b)?;
        let zs: Vec<Coord> = source.z().iter().copied().collect();
        let k = rng.gen_range(1..zs.len());
        let low = gen::subset(&mut rng, &zs, k);
        let high: Vec<Coord> = zs.iter().copied().filter(|c| !low.contains(c)).collect();
        let recut = [low.clone(), high]
            .iter()
            .map(|side| {
                (side.len() >= 2 && rng.gen_bool(0.7)).then(|| {
                    let k = rng.gen_range(1..side.len());
                    gen::subset(&mut rng, side, k).into_iter().map(|c| c.0).collect()
                })
            })
            .collect();
        to_value(&AxiomInstance {
            leaves: leaves.iter().map(|s| encode_creature(&alphabet, s)).collect(),
            groups,
            source: encode_creature(&alphabet, &source),
            cut_at: low.into_iter().map(|c| c.0).collect(),
            recut,
            alphabet,
        })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let b = cfg.budget();
        let inst: AxiomInstance = from_value(instance)?;
        let a = &inst.alphabet;
        let leaves: Vec<Creature> = inst.leaves.iter().map(|d| decode_creature(a, d, &b)).collect::<Result<_>>()?;
        let mut out = Vec::new();

        // Composition: t = glue(s_i), s_i = glue(S_i).
        let mids: Vec<Creature> = inst
            .groups
            .iter()
            .map(|g| glue(&g.iter().map(|&i| leaves[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        let t = glue(&mids)?;
        out.push(Check::expect("sigma-member", sigma_member(&t, &mids), || "glue output is not a composition of its parts".into()));
        out.push(Check::expect("sigma-reflexive", sigma_member(&t, std::slice::from_ref(&t)) || !t.is_member(), || "t is not in Sigma(t)".into()));
        out.push(Check::expect("sigma-associative", !t.is_member() || sigma_member(&t, &leaves), || "t is not a composition of the leaves".into()));
        out.push(Check::expect("sigma-domain", domains_partition(&t, &mids), || "dom t is not the disjoint union of the parts".into()));
        out.push(Check::expect("sigma-values", restricts_into(a, &t, &mids), || "a value of t restricts outside a part".into()));
        out.push(Check::expect("sigma-disjoint", domains_partition(&t, &leaves), || "leaf domains overlap".into()));

        // Decomposition: {s0, s1} = cut(source), then each side cut again or kept.
        let source = decode_creature(a, &inst.source, &b)?;
        let low: CoordSet = inst.cut_at.iter().map(|&c| Coord(c)).collect();
        let (s0, s1) = cut(&source, &low, &b)?;
        let sides = vec![s0, s1];
        out.push(Check::expect("sigma-bot-member", sigma_bot_member(&sides, &source), || "cut output is not a decomposition".into()));
        out.push(Check::expect("sigma-bot-reflexive", sigma_bot_member(std::slice::from_ref(&source), &source), || "{t} is not a decomposition of t".into()));
        out.push(Check::expect("sigma-bot-domain", domains_partition(&source, &sides), || "side domains do not partition dom t".into()));
        out.push(Check::expect("sigma-bot-values", decomposition_sound(a, &source, &sides), || "a point allowed by both sides is not in v(t)".into()));
        let mut finer = Vec::new();
        for (side, again) in sides.iter().zip(&inst.recut) {
            match again {
                Some(at) if side.packing() >= Norm::Finite(2) => {
                    let set: CoordSet = at.iter().map(|&c| Coord(c)).collect();
                    let (u0, u1) = cut(side, &set, &b)?;
                    out.push(Check::expect("sigma-bot-member", sigma_bot_member(&[u0.clone(), u1.clone()], side), || "second cut is not a decomposition".into()));
                    finer.extend([u0, u1]);
                }
                _ => finer.push(side.clone()),
            }
        }
        out.push(Check::expect("sigma-bot-associative", sigma_bot_member(&finer, &source), || "concatenated decompositions do not decompose t".into()));
        out.push(Check::expect("sigma-bot-associative-values", decomposition_sound(a, &source, &finer), || "concatenated decomposition admits a point outside v(t)".into()));

        // Full value set exactly for the unconstrained creature.
        for s in leaves.iter().chain([&source]) {
            let full = oracle_values(a, s).len() == oracle::all_points(a, s.z()).len();
            out.push(Check::expect("full-values-iff-infinite", full == s.packing().is_infinite(), || format!("{s}: full value set {full}, norm {}", s.packing())));
        }
        Ok(out)
    }
}

struct Invariance;

const INVARIANCE_SAMPLES: usize = 16;

fn invariance_alphabets(cfg: &SuiteConfig) -> Vec<Alphabet> {
    match &cfg.alphabet {
        Some(a) => vec![a.clone()],
        None => vec![z2(), z3()],
    }
}

/// Every nonempty partial function on `z`.
fn all_pfs(a: &Alphabet, z: &CoordSet) -> Vec<PartialFunction> {
    let cs: Vec<Coord> = z.iter().copied().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << cs.len()) {
        let dom: CoordSet = (0..cs.len()).filter(|i| mask >> i & 1 == 1).map(|i| cs[i]).collect();
        out.extend(oracle::all_points(a, &dom));
    }
    out
}

/// Instances per alphabet and domain size: all single-constraint families,
/// then seeded families of two or three constraints.
fn invariance_layout(cfg: &SuiteConfig) -> Vec<(Alphabet, u32, usize)> {
    let mut out = Vec::new();
    for a in invariance_alphabets(cfg) {
        for k in 1..=4u32 {
            let singles = (a.size() as usize + 1).pow(k) - 1;
            out.push((a.clone(), k, singles + INVARIANCE_SAMPLES));
        }
    }
    out
}

/// Every bijection of `z` onto `target`.
fn bijections(z: &[Coord], target: &[Coord]) -> Vec<Embedding> {
    fn go(z: &[Coord], free: &mut Vec<Coord>, acc: &mut Vec<(Coord, Coord)>, out: &mut Vec<Embedding>) {
        if acc.len() == z.len() {
            out.push(Embedding::new(acc.clone()).expect("injective"));
            return;
        }
        for i in 0..free.len() {
            let c = free.remove(i);
            acc.push((z[acc.len()], c));
            go(z, free, acc, out);
            acc.pop();
            free.insert(i, c);
        }
    }
    let mut out = Vec::new();
    go(z, &mut target.to_vec(), &mut Vec::new(), &mut out);
    out
}

impl Suite for Invariance {
    fn name(&self) -> &'static str {
        "invariance"
    }
    fn about(&self) -> &'static str {
        "translation and permutation preserve the norm and map value sets, all shifts and all relabelings"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        invariance_layout(cfg).iter().map(|l| l.2).sum()
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let mut i = index;
        for (a, k, n) in invariance_layout(cfg) {
            if i >= n {
                i -= n;
                continue;
            }
            let z = coords(0..k);
            let singles = all_pfs(&a, &z);
            let t = if i < singles.len() {
                Creature::new(z, [singles[i].clone()].into_iter().collect(), &cfg.budget())?
            } else {
                let mut rng = gen::rng(cfg.seed, index as u64);
                let mut family = crate::creatures::Family::new();
                let want = rng.gen_range(2..=3).min(singles.len());
                while family.len() < want {
                    family.insert(singles.choose(&mut rng).expect("nonempty").clone());
                }
                Creature::new(z, family, &cfg.budget())?
            };
            return to_value(&CreatureInstance { creature: encode_creature(&a, &t), alphabet: a });
        }
        Err(Error::Precondition(format!("instance {index} is out of range")))
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: CreatureInstance = from_value(instance)?;
        let a = &inst.alphabet;
        let t = decode_creature(a, &inst.creature, &cfg.budget())?;
        let n = oracle_n(&t)?;
        let values = oracle_values(a, &t);
        let mut out = Vec::new();

        let mut translate = Ok(());
        for v in oracle::all_points(a, t.z()) {
            let s = t.translate(a, &v)?;
            let ns = oracle_n(&s)?;
            let shifted: BTreeSet<PartialFunction> = values.iter().map(|x| x.translate(a, &v)).collect::<Result<_>>()?;
            if ns != n || s.packing() != n {
                translate = Err(format!("shift by {v}: oracle n {ns}, cached {}, original {n}", s.packing()));
                break;
            }
            if oracle_values(a, &s) != shifted {
                translate = Err(format!("shift by {v}: value set is not v(t) + v"));
                break;
            }
        }
        out.push(match translate {
            Ok(()) => Check::pass("translate"),
            Err(d) => Check::fail("translate", d),
        });

        let zs: Vec<Coord> = t.z().iter().copied().collect();
        let target: Vec<Coord> = zs.iter().map(|c| Coord(c.0 + 10)).collect();
        let mut permute = Ok(());
        for pi in bijections(&zs, &target) {
            let s = t.permute(&pi)?;
            let ns = oracle_n(&s)?;
            let moved: BTreeSet<PartialFunction> = values.iter().map(|x| x.permute(&pi)).collect::<Result<_>>()?;
            if ns != n || s.packing() != n {
                permute = Err(format!("relabeling {:?}: oracle n {ns}, original {n}", pi.pairs().collect::<Vec<_>>()));
                break;
            }
            if oracle_values(a, &s) != moved {
                permute = Err(format!("relabeling {:?}: value set is not v(t) o pi^-1", pi.pairs().collect::<Vec<_>>()));
                break;
            }
        }
        out.push(match permute {
            Ok(()) => Check::pass("permute"),
            Err(d) => Check::fail("permute", d),
        });
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupInstance {
    alphabet: Alphabet,
    eta0: PfDoc,
    eta1: PfDoc,
    v: PfDoc,
    window: u32,
}

/// Order lists of factors at least 2 with product at most 12.
fn small_alphabets() -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, product: u32, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for o in 2..=12 {
            if product * o <= 12 {
                prefix.push(o);
                go(prefix, product * o, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, &mut out);
    out
}

struct GroupLaws;

impl Suite for GroupLaws {
    fn name(&self) -> &'static str {
        "group-laws"
    }
    fn about(&self) -> &'static str {
        "abelian group laws for every alphabet with |X| <= 12, union compatibility of translation and permutation, point counts"
    }
    fn count(&self, _cfg: &SuiteConfig) -> usize {
        small_alphabets().len() * 8
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let all = small_alphabets();
        let alphabet = Alphabet::new(all[index % all.len()].clone())?;
        let mut rng = gen::rng(cfg.seed, index as u64);
        let window = rng.gen_range(0..=4u32);
        let z: Vec<Coord> = (0..6).map(Coord).collect();
        let (k0, k1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let d0 = gen::subset(&mut rng, &z, k0);
        let d1 = gen::subset(&mut rng, &z, k1);
        let mut eta0 = gen::pf_on(&mut rng, &alphabet, &d0);
        let eta1 = gen::pf_on(&mut rng, &alphabet, &d1);
        if rng.gen_bool(0.7) {
            // Make the pair compatible most of the time.
            for (c, s) in eta1.iter() {
                if eta0.contains(c) {
                    eta0.insert(c, s);
                }
            }
        }
        let v = gen::pf_on(&mut rng, &alphabet, &z);
        to_value(&GroupInstance { eta0: encode_pf(&alphabet, &eta0), eta1: encode_pf(&alphabet, &eta1), v: encode_pf(&alphabet, &v), window, alphabet })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let inst: GroupInstance = from_value(instance)?;
        let a = &inst.alphabet;
        let eta0 = decode_pf(a, &inst.eta0)?;
        let eta1 = decode_pf(a, &inst.eta1)?;
        let v = decode_pf(a, &inst.v)?;
        let mut out = vec![match oracle::group_laws(a) {
            Ok(()) => Check::pass("group-laws"),
            Err(d) => Check::fail("group-laws", d),
        }];

        match eta0.union(&eta1) {
            Ok(u) => {
                let tu = u.translate(a, &v)?;
                let split = eta0.translate(a, &v)?.union(&eta1.translate(a, &v)?);
                out.push(Check::expect("translate-union", split.as_ref() == Ok(&tu), || format!("({eta0} u {eta1}) + v differs")));
                let pi = Embedding::new((0..6).map(|c| (Coord(c), Coord(5 - c + 20))))?;
                let pu = u.permute(&pi)?;
                let split = eta0.permute(&pi)?.union(&eta1.permute(&pi)?);
                out.push(Check::expect("permute-union", split.as_ref() == Ok(&pu), || format!("pi({eta0} u {eta1}) differs")));
                let back = pu.permute(&pi.inverse())?;
                out.push(Check::expect("permute-round-trip", back == u, || format!("{u} does not survive pi then pi^-1")));
                let neg = v.negate(a)?;
                out.push(Check::expect("translate-round-trip", tu.translate(a, &neg)? == u, || format!("{u} does not survive +v then -v")));
            }
            Err(Error::IncompatibleFunctions(_)) => {
                let conflict = eta0.iter().any(|(c, s)| eta1.get(c).is_some_and(|t| t != s));
                out.push(Check::expect("union-conflict", conflict, || "union refused compatible functions".into()));
            }
            Err(e) => return Err(e),
        }

        let window: CoordSet = (0..inst.window).map(Coord).collect();
        let points: Vec<_> = enumerate_points(a, &window, &cfg.budget())?.map(|x| x.to_pf()).collect();
        let distinct: BTreeSet<_> = points.iter().cloned().collect();
        let expected = (a.size() as usize).pow(inst.window);
        out.push(Check::expect("point-count", points.len() == expected && distinct.len() == expected, || {
            format!("{} points, {} distinct, expected {expected}", points.len(), distinct.len())
        }));
        out.push(Check::expect("point-order", points == oracle::all_points(a, &window), || "enumeration order differs from the odometer".into()));
        Ok(out)
    }
}
