//! Suites for truncated conditions: the move order and amalgamation.

use super::{from_value, to_value, z2, Check, Suite, SuiteConfig};
use crate::conditions::{amalgamate, apply_move, leq_check, leq_semantic, verify_amalgam, Flavor, MoveCertificate, Slack, TruncatedCondition};
use crate::error::Result;
use crate::gen::{self, CondShape};
use crate::json::{CertificateDoc, ConditionDoc};
use crate::oracle;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub(super) const SUITES: &[&dyn Suite] = &[&OrderSoundness, &Amalgamation];

#[derive(Serialize, Deserialize)]
struct ChainInstance {
    p: ConditionDoc,
    /// One single-move certificate per step.
    steps: Vec<CertificateDoc>,
}

struct OrderSoundness;

impl Suite for OrderSoundness {
    fn name(&self) -> &'static str {
        "order-soundness"
    }
    fn about(&self) -> &'static str {
        "certified move chains on finite-norm truncations give POS inclusion by enumeration"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(300)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let b = cfg.budget();
        let mut rng = gen::rng(cfg.seed, index as u64);
        let a = cfg.alphabet.clone().unwrap_or_else(z2);
        let hi = cfg.window_max.max(6);
        let shape = CondShape {
            window: rng.gen_range(6..=hi),
            stem: 0..=2,
            creature_len: 2..=4,
            delta: 1..=3,
            min_n: 1,
            flavor: Flavor::PlusInfinity,
        };
        let p = gen::truncated_condition(&mut rng, &a, &shape, &b)?;
        let mut cur = p.clone();
        let mut steps = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            if cur.creatures().is_empty() {
                break;
            }
            let (m, q) = gen::random_move(&mut rng, &cur, &b)?;
            steps.push(CertificateDoc::new(&a, &MoveCertificate::new(vec![m])));
            cur = q;
        }
        to_value(&ChainInstance { p: ConditionDoc::new(&p), steps })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let b = cfg.budget();
        let inst: ChainInstance = from_value(instance)?;
        let p = inst.p.decode(&b)?;
        let a = p.alphabet().clone();
        let mut out = Vec::new();
        let mut moves = Vec::new();
        let mut cur = p.clone();
        for (i, doc) in inst.steps.iter().enumerate() {
            let cert = doc.decode(&a, &b)?;
            let m = cert.moves.into_iter().next().expect("one move per step");
            let next = match apply_move(&cur, &m) {
                Ok(q) => q,
                Err(e) => {
                    out.push(Check::fail("step-applies", format!("step {i}: {e}")));
                    return Ok(out);
                }
            };
            out.push(Check::expect("step-valid", next.is_valid(), || format!("step {i} leaves the finite-norm flavor")));
            out.push(Check::expect("step-inclusion", oracle::truncated_included(&cur, &next), || format!("step {i}: POS grows")));
            moves.push(m);
            cur = next;
        }
        let cert = MoveCertificate::new(moves);
        let certified = leq_check(&p, &cur, &cert)?;
        out.push(Check::expect("certificate", certified, || "the chained certificate does not replay".into()));
        out.push(Check::expect("inclusion", oracle::truncated_included(&p, &cur), || "POS(q) is not inside POS(p)".into()));
        let semantic = leq_semantic(&p, &cur, &b)?;
        out.push(Check::expect("semantic-agrees", semantic, || "library enumeration disagrees with the certificate".into()));
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct AmalgamInstance {
    inputs: Vec<ConditionDoc>,
    base: u64,
    step: u64,
}

struct Amalgamation;

impl Suite for Amalgamation {
    fn name(&self) -> &'static str {
        "amalgamation"
    }
    fn about(&self) -> &'static str {
        "pairs and triples sharing a stem have a certified common upper bound with nonempty POS inside every input"
    }
    fn count(&self, cfg: &SuiteConfig) -> usize {
        cfg.count_or(100)
    }
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value> {
        let b = cfg.budget();
        let mut rng = gen::rng(cfg.seed, index as u64);
        let a = cfg.alphabet.clone().unwrap_or_else(z2);
        let k = 1 + index % 2;
        let strong = 1u64 << k;
        let hi = cfg.window_max.max(10);
        let shape = CondShape {
            window: rng.gen_range(10..=hi),
            stem: 0..=2,
            creature_len: 4..=6,
            delta: 1..=2,
            min_n: strong,
            flavor: Flavor::PlusInfinity,
        };
        let ps = gen::amalgam_inputs(&mut rng, &a, &shape, k + 1, &b)?;
        to_value(&AmalgamInstance { inputs: ps.iter().map(ConditionDoc::new).collect(), base: strong - 1, step: strong })
    }
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>> {
        let b = cfg.budget();
        let inst: AmalgamInstance = from_value(instance)?;
        let ps: Vec<TruncatedCondition> = inst.inputs.iter().map(|d| d.decode(&b)).collect::<Result<_>>()?;
        let slack = Slack::Linear { base: inst.base, step: inst.step };
        let am = match amalgamate(&ps, &slack, &b) {
            Ok(am) => am,
            Err(e) => return Ok(vec![Check::fail("built", e.to_string())]),
        };
        let mut out = vec![Check::pass("built")];
        out.push(Check::expect("valid", am.q.is_valid(), || format!("amalgam is invalid: {:?}", am.q.validate())));
        let certified = am.certificates.len() == ps.len()
            && ps.iter().zip(&am.certificates).all(|(p, c)| leq_check(p, &am.q, c).unwrap_or(false));
        out.push(Check::expect("certificates", certified, || "some certificate does not replay to q".into()));
        let contained = ps.iter().all(|p| oracle::truncated_included(p, &am.q));
        out.push(Check::expect("contained", contained, || "POS(q) is not inside every POS(p_i)".into()));
        let nonempty = oracle::all_points(am.q.alphabet(), am.q.window()).iter().any(|x| oracle::truncated_pos(&am.q, x));
        out.push(Check::expect("nonempty", nonempty, || "POS(q) is empty".into()));
        let check = verify_amalgam(&ps, &am, &b)?;
        out.push(Check::expect("bookkeeping", check.bookkeeping, || {
            let bad = am.transcript.iter().find(|s| !s.holds()).expect("a failing step");
            format!("{:?} step in block {} gives {} below {}", bad.kind, bad.block, bad.output, bad.bound)
        }));
        out.push(Check::expect("verify-agrees", check.passed(), || format!("verify_amalgam reports {check:?}")));
        Ok(out)
    }
}
