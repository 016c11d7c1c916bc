use crate::args::{CondVerb, Global};
use crate::io::{self, read_doc, read_docs, shift_into, CliError, Outcome};
use cwb_core::conditions::{
    amalgamate as amalgamate_all, leq_check, leq_search, leq_semantic, lift, project_pi, replay, verify_amalgam, Amalgam,
    MoveCertificate, Slack, TruncatedCondition,
};
use cwb_core::json::{AmalgamDoc, CertificateDoc, ConditionDoc};
use cwb_core::{Budget, Error};
use serde_json::json;
use std::path::{Path, PathBuf};

fn load(path: &Path, budget: &Budget) -> Result<TruncatedCondition, CliError> {
    let doc: ConditionDoc = read_doc(path)?;
    Ok(doc.decode(budget)?)
}

fn load_cert(path: &Path, p: &TruncatedCondition, budget: &Budget) -> Result<MoveCertificate, CliError> {
    let doc: CertificateDoc = read_doc(path)?;
    Ok(doc.decode(p.alphabet(), budget)?)
}

fn doc(p: &TruncatedCondition) -> serde_json::Value {
    io::value(&ConditionDoc::new(p))
}

pub fn run(g: &Global, verb: &CondVerb) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    match verb {
        CondVerb::Validate { file } => {
            let doc: ConditionDoc = read_doc(file)?;
            Ok(match doc.decode(&budget) {
                Ok(p) => Outcome::pass(json!({ "valid": true, "flavor": p.flavor().name(), "creatures": p.creatures().len() })),
                Err(e @ (Error::Malformed(_) | Error::EnumerationTooLarge { .. })) => return Err(e.into()),
                Err(e) => Outcome::new(json!({ "valid": false, "error": { "code": e.code(), "message": e.to_string() } }), false),
            })
        }
        CondVerb::Pos { file } => {
            let p = load(file, &budget)?;
            let count = p.pos_count(&budget)?;
            let product = p.pos_count_product(&budget)?;
            let agree = u128::from(count) == product;
            Ok(Outcome::new(json!({ "count": count, "product": product.to_string(), "agree": agree }), agree))
        }
        CondVerb::Leq { p, q, cert, depth } => {
            let (p, q) = (load(p, &budget)?, load(q, &budget)?);
            let semantic = leq_semantic(&p, &q, &budget)?;
            match cert {
                Some(path) => {
                    let cert = load_cert(path, &p, &budget)?;
                    let certified = leq_check(&p, &q, &cert)?;
                    Ok(Outcome::new(json!({ "certified": certified, "semantic": semantic }), certified))
                }
                None => {
                    let found = leq_search(&p, &q, *depth)?;
                    let certificate = found.as_ref().map(|c| io::value(&CertificateDoc::new(p.alphabet(), c)));
                    Ok(Outcome::new(json!({ "semantic": semantic, "certificate": certificate }), semantic))
                }
            }
        }
        CondVerb::Move { p, cert } => {
            let p = load(p, &budget)?;
            let cert = load_cert(cert, &p, &budget)?;
            let q = replay(&p, &cert)?;
            Ok(Outcome::pass(json!({ "q": doc(&q), "moves": cert.len() })))
        }
        CondVerb::Project { file, shift } => {
            let p = load(file, &budget)?;
            let q = project_pi(&p, &shift_into(p.window(), *shift))?;
            Ok(Outcome::pass(json!({ "projection": doc(&q) })))
        }
        CondVerb::Lift { p, r, cert, shift } => {
            let p = load(p, &budget)?;
            let r = load(r, &budget)?;
            let cert = load_cert(cert, &p, &budget)?;
            let pi = shift_into(p.window(), *shift);
            let (q, qcert) = lift(&p, &pi, &r, &cert)?;
            let round_trip = project_pi(&q, &pi)?.same_content(&r);
            let certified = leq_check(&p, &q, &qcert)?;
            Ok(Outcome::new(
                json!({
                    "q": doc(&q),
                    "certificate": io::value(&CertificateDoc::new(q.alphabet(), &qcert)),
                    "round_trip": round_trip,
                    "certified": certified,
                }),
                round_trip && certified,
            ))
        }
        CondVerb::Amalgamate { files, slack } => amalgamate(g, files, slack),
    }
}

/// `auto` is `base = 2^k − 1`, `step = 2^k` for `k + 1` inputs.
fn parse_slack(s: &str, inputs: usize) -> Result<Slack, CliError> {
    match s {
        "auto" => {
            let k = u32::try_from(inputs.saturating_sub(1)).ok().filter(|&k| k < 63).ok_or_else(|| CliError::Usage("too many inputs".into()))?;
            Ok(Slack::Linear { base: (1u64 << k) - 1, step: 1 << k })
        }
        "nor-growth" => Ok(Slack::NorGrowth),
        _ => {
            let bad = || CliError::Usage(format!("cannot parse slack {s:?}; use auto, nor-growth or BASE,STEP"));
            let (b, st) = s.split_once(',').ok_or_else(bad)?;
            Ok(Slack::Linear { base: b.trim().parse().map_err(|_| bad())?, step: st.trim().parse().map_err(|_| bad())? })
        }
    }
}

pub fn amalgamate(g: &Global, files: &[PathBuf], slack: &str) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    let docs: Vec<ConditionDoc> = read_docs(files)?;
    let ps = docs.iter().map(|d| d.decode(&budget)).collect::<Result<Vec<_>, _>>()?;
    if ps.is_empty() {
        return Err(CliError::Usage("no input conditions".into()));
    }
    let slack = parse_slack(slack, ps.len())?;
    let am = if ps.len() == 1 {
        Amalgam { q: ps[0].clone(), certificates: vec![MoveCertificate::default()], boundaries: vec![], transcript: vec![] }
    } else {
        amalgamate_all(&ps, &slack, &budget)?
    };
    let check = verify_amalgam(&ps, &am, &budget)?;
    Ok(Outcome::new(
        json!({
            "mode": "q-infty",
            "inputs": ps.len(),
            "result": io::value(&AmalgamDoc::new(&am)),
            "verification": {
                "certificates": check.certificates,
                "contained": check.contained,
                "nonempty": check.nonempty,
                "bookkeeping": check.bookkeeping,
                "passed": check.passed(),
            },
        }),
        check.passed(),
    ))
}
