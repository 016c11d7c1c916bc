use crate::args::{Global, QhnVerb};
use crate::io::{self, read_doc, read_docs, shift_into, CliError, Outcome};
use cwb_core::json::{encode_pf, QCondDoc, SeqDoc};
use cwb_core::qhn::{
    amalgamate_class, block_measure, class_key, compatible_bruteforce, compatible_constructive, is_dense_normal, leq_syntactic,
    normalize_dense, nowhere_dense_check, nowhere_dense_witness, null_refinement, pos_included, project_pi_q, BlockMeasure,
    QCondition, Strictness,
};
use cwb_core::{Alphabet, Budget, CoordSet, Error};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn load(path: &Path) -> Result<QCondition, CliError> {
    let doc: QCondDoc = read_doc(path)?;
    Ok(doc.decode()?)
}

fn doc(p: &QCondition) -> Value {
    io::value(&QCondDoc::new(p))
}

fn block_json(b: &BlockMeasure) -> Value {
    json!({
        "block": b.m,
        "domain_size": b.domain_size,
        "count": b.count,
        "measure": io::rational_json(&b.measure),
        "exponent": b.exponent,
        "hypothesis": b.hypothesis,
        "certified": b.certified,
    })
}

/// Each input below `q` syntactically and by POS inclusion, and `POS(q) ≠ ∅`.
fn verification(ps: &[QCondition], q: &QCondition, budget: &Budget) -> Result<(Value, bool), CliError> {
    let mut above = Vec::new();
    let mut ok = true;
    for p in ps {
        let syntactic = leq_syntactic(p, q);
        let included = pos_included(p, q, budget)?;
        ok &= syntactic && included;
        above.push(json!({ "syntactic": syntactic, "pos_included": included }));
    }
    let nonempty = q.pos_count(budget)? > 0;
    ok &= nonempty;
    Ok((json!({ "inputs": above, "nonempty": nonempty, "passed": ok }), ok))
}

pub fn run(g: &Global, verb: &QhnVerb) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    let strictness = io::strictness(g, Strictness::Strict);
    match verb {
        QhnVerb::Validate { file } => {
            let p = load(file)?;
            let report = p.validate(strictness);
            let ok = report.ok();
            Ok(Outcome::new(
                json!({
                    "valid": ok,
                    "strictness": strictness.name(),
                    "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "waived": report.waived.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                ok,
            ))
        }
        QhnVerb::SeqCheck { file } => {
            let seq: SeqDoc = read_doc(file)?;
            let seq = seq.decode()?;
            let report = seq.validate(strictness);
            let size = g.alphabet.as_ref().map_or(2, Alphabet::size);
            let ok = report.ok();
            Ok(Outcome::new(
                json!({
                    "valid": ok,
                    "strictness": strictness.name(),
                    "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "waived": report.waived.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "growth_from": seq.growth_from(size),
                }),
                ok,
            ))
        }
        QhnVerb::Pos { file } => {
            let p = load(file)?;
            let count = p.pos_count(&budget)?;
            let measure = p.pos_measure(&budget)?;
            let total = cwb_core::rational::int(u64::from(p.alphabet.size())).pow(p.window.len() as i32);
            let scaled = &measure * &total;
            let agree = scaled == cwb_core::rational::int(count);
            Ok(Outcome::new(json!({ "count": count, "measure": io::rational_json(&measure), "agree": agree }), agree))
        }
        QhnVerb::Leq { p, q } => {
            let (p, q) = (load(p)?, load(q)?);
            let syntactic = leq_syntactic(&p, &q);
            let included = pos_included(&p, &q, &budget)?;
            Ok(Outcome::new(
                json!({ "syntactic": syntactic, "pos_included": included, "agree": syntactic == included }),
                syntactic && included,
            ))
        }
        QhnVerb::Compat { p0, p1 } => {
            let (p0, p1) = (load(p0)?, load(p1)?);
            let Some(eta) = compatible_bruteforce(&p0, &p1, &budget)? else {
                return Ok(Outcome::new(json!({ "compatible": false, "witness": null, "bound": null }), false));
            };
            let a = &p0.alphabet;
            let witness = encode_pf(a, &eta.to_pf());
            let q = compatible_constructive(&p0, &p1, &eta, strictness)?;
            let (check, ok) = verification(&[p0, p1], &q, &budget)?;
            Ok(Outcome::new(json!({ "compatible": true, "witness": witness, "bound": doc(&q), "verification": check }), ok))
        }
        QhnVerb::Amalgamate { files } => amalgamate(g, files),
        QhnVerb::Normalize { file } => {
            let p = load(file)?;
            let q = normalize_dense(&p, strictness)?;
            let dense = is_dense_normal(&q);
            let above = leq_syntactic(&p, &q);
            Ok(Outcome::new(json!({ "q": doc(&q), "dense_normal": dense, "above": above }), dense && above))
        }
        QhnVerb::Measure { file } => measure(g, file),
        QhnVerb::Null { file } => {
            let p = load(file)?;
            let r = null_refinement(&p, strictness)?;
            let a = &p.alphabet;
            let in_both = p.pos_member_pf(&r.witness)? && r.q.pos_member_pf(&r.witness)?;
            Ok(Outcome::new(
                json!({
                    "q": doc(&r.q),
                    "blocks": r.blocks.iter().map(block_json).collect::<Vec<_>>(),
                    "measure": io::rational_json(&r.measure),
                    "witness": encode_pf(a, &r.witness),
                    "witness_in_both": in_both,
                }),
                in_both,
            ))
        }
        QhnVerb::NowhereDense { file, depth } => {
            let p = load(file)?;
            let nd = nowhere_dense_check(&p, *depth);
            let a = &p.alphabet;
            // A trapping stem must have no extension leaving POS.
            let confirmed = nd.counterexample.as_ref().map(|s| nowhere_dense_witness(&p, s).is_none());
            Ok(Outcome::new(
                json!({
                    "holds": nd.holds,
                    "depth": nd.depth,
                    "counterexample": nd.counterexample.as_ref().map(|s| encode_pf(a, s)),
                    "counterexample_confirmed": confirmed,
                }),
                nd.holds,
            ))
        }
        QhnVerb::Project { p, r, shift } => {
            let (p, r) = (load(p)?, load(r)?);
            let pi = shift_into(&p.window, *shift);
            let proj = project_pi_q(&p, &pi, &r, strictness, &budget)?;
            let above = leq_syntactic(&p, &proj.p_star);
            Ok(Outcome::new(
                json!({
                    "projection": doc(&proj.q),
                    "p_star": doc(&proj.p_star),
                    "above": above,
                    "pullback_verified": proj.pullback_verified,
                }),
                above && proj.pullback_verified != Some(false),
            ))
        }
    }
}

fn none(reason: &str, inputs: usize) -> Outcome {
    Outcome::new(json!({ "mode": "qhn", "inputs": inputs, "result": null, "reason": reason }), false)
}

/// Shared class key for `n = #inputs − 1` gives the class amalgam; two
/// inputs otherwise go through the compatibility bound.
pub fn amalgamate(g: &Global, files: &[PathBuf]) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    let strictness = io::strictness(g, Strictness::Strict);
    let docs: Vec<QCondDoc> = read_docs(files)?;
    let ps = docs.iter().map(QCondDoc::decode).collect::<Result<Vec<_>, _>>()?;
    let k = ps.len();
    if k == 0 {
        return Err(CliError::Usage("no input conditions".into()));
    }
    for (i, p) in ps.iter().enumerate() {
        if ps[..i].iter().any(|o| !o.w.is_compatible(&p.w)) {
            return Ok(none("contradictory-stems", k));
        }
    }
    let (q, method) = if k == 1 {
        (ps[0].clone(), "echo")
    } else if ps.iter().all(|p| class_key(p, k - 1) == class_key(&ps[0], k - 1)) {
        (amalgamate_class(&ps, strictness)?, "class")
    } else if k == 2 {
        match compatible_bruteforce(&ps[0], &ps[1], &budget)? {
            None => return Ok(none("disjoint-pos", k)),
            Some(eta) => (compatible_constructive(&ps[0], &ps[1], &eta, strictness)?, "compatible"),
        }
    } else {
        return Ok(none("different-classes", k));
    };
    let (check, ok) = verification(&ps, &q, &budget)?;
    Ok(Outcome::new(json!({ "mode": "qhn", "inputs": k, "method": method, "result": doc(&q), "verification": check }), ok))
}

/// Exact POS measure, and for disjoint σ's off the stem the certified
/// `e^{-|X|^d}` comparison of each group of equal-size σ's in one block.
pub fn measure(g: &Global, file: &Path) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    let p = load(file)?;
    let value = p.pos_measure(&budget)?;
    let size = p.alphabet.size();

    let mut seen = p.w.domain_set();
    let disjoint = p.sigmas.iter().all(|s| s.domain().all(|c| seen.insert(c)));
    let mut groups: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    if disjoint {
        for (j, s) in p.sigmas.iter().enumerate() {
            let m = p.block_of(j).ok_or_else(|| Error::InvalidCondition(format!("sigma {j} is in no block")))?;
            *groups.entry((m, s.len())).or_default() += 1;
        }
    }
    let mut blocks = Vec::new();
    let mut flagged = !groups.is_empty();
    for (&(m, d), &count) in &groups {
        match block_measure(m, size, d, count) {
            Ok(b) => {
                flagged &= b.certified;
                blocks.push(block_json(&b));
            }
            // |X|^d beyond the enclosure's range: no bound for this group.
            Err(e) if e.is_budget() => {
                flagged = false;
                blocks.push(json!({ "block": m, "domain_size": d, "count": count, "certified": null }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let support: CoordSet = p.support();
    Ok(Outcome::pass(json!({
        "alphabet": p.alphabet.to_string(),
        "window": p.window.len(),
        "support": support.len(),
        "sigmas": p.sigmas.len(),
        "disjoint": disjoint,
        "measure": io::rational_json(&value),
        "bounds": blocks,
        "flagged": flagged,
    })))
}
