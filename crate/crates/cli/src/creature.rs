use crate::args::{CreatureVerb, Global};
use crate::io::{self, coord_list, coords_json, read_doc, CliError, Outcome};
use cwb_core::creatures::{cut, glue, link, restrict_half, sigma_bot_member, sigma_member};
use cwb_core::json::{encode_pf, CreatureFile, NormDoc};
use cwb_core::{Alphabet, Budget, Creature, Norm};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

fn load(path: &Path, budget: &Budget) -> Result<(Alphabet, Creature), CliError> {
    let doc: CreatureFile = read_doc(path)?;
    Ok(doc.decode(budget)?)
}

fn load_all(paths: &[PathBuf], budget: &Budget) -> Result<(Alphabet, Vec<Creature>), CliError> {
    let mut alphabet = None;
    let mut out = Vec::new();
    for path in paths {
        let (a, t) = load(path, budget)?;
        match &alphabet {
            Some(b) if *b != a => return Err(CliError::Usage(format!("{} uses alphabet {a}, expected {b}", path.display()))),
            _ => alphabet = Some(a),
        }
        out.push(t);
    }
    Ok((alphabet.expect("at least one file"), out))
}

fn norm(n: Norm) -> Value {
    io::value(&NormDoc::from(n))
}

fn half(n: Norm) -> Norm {
    match n {
        Norm::Finite(v) => Norm::Finite(v / 2),
        Norm::Infinite => Norm::Infinite,
    }
}

fn summary(a: &Alphabet, t: &Creature) -> Value {
    json!({
        "creature": io::value(&CreatureFile::new(a, t)),
        "packing": norm(t.packing()),
        "member": t.is_member(),
    })
}

pub fn run(g: &Global, verb: &CreatureVerb) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    match verb {
        CreatureVerb::Norm { file } => {
            let (a, t) = load(file, &budget)?;
            let nor = match t.packing() {
                Norm::Infinite => json!("inf"),
                Norm::Finite(0) => json!("-inf"),
                n => json!(format!("{:.6}", n.nor())),
            };
            Ok(Outcome::pass(json!({
                "alphabet": a.to_string(),
                "z": coords_json(t.z()),
                "constraints": t.delta().len(),
                "packing": norm(t.packing()),
                "nor": nor,
                "member": t.is_member(),
            })))
        }
        CreatureVerb::Values { file } => {
            let (a, t) = load(file, &budget)?;
            let mut values = t.value_set(&a, &budget)?;
            values.sort();
            Ok(Outcome::pass(json!({
                "count": values.len(),
                "values": values.iter().map(|v| encode_pf(&a, v)).collect::<Vec<_>>(),
            })))
        }
        CreatureVerb::Witness { file } => {
            let (a, t) = load(file, &budget)?;
            let w = t.witness_value()?;
            let ok = t.value_member(&w)?;
            Ok(Outcome::new(json!({ "witness": encode_pf(&a, &w), "in_values": ok }), ok))
        }
        CreatureVerb::Restrict { file, zstar } => {
            let (a, t) = load(file, &budget)?;
            let s = restrict_half(&t, &coord_list(zstar)?, &budget)?;
            let bound = half(t.packing());
            let ok = s.packing() >= bound;
            let mut doc = summary(&a, &s);
            doc["input_packing"] = norm(t.packing());
            doc["bound"] = norm(bound);
            doc["holds"] = json!(ok);
            Ok(Outcome::new(doc, ok))
        }
        CreatureVerb::Cut { file, low } => {
            let (a, t) = load(file, &budget)?;
            let (s0, s1) = cut(&t, &coord_list(low)?, &budget)?;
            let bound = half(t.packing());
            let holds = s0.packing() >= bound && s1.packing() >= bound;
            let parts = [s0, s1];
            let member = sigma_bot_member(&parts, &t);
            Ok(Outcome::new(
                json!({
                    "parts": parts.iter().map(|s| summary(&a, s)).collect::<Vec<_>>(),
                    "input_packing": norm(t.packing()),
                    "bound": norm(bound),
                    "holds": holds,
                    "sigma_bot_member": member,
                }),
                holds && member,
            ))
        }
        CreatureVerb::Glue { files } => {
            let (a, ts) = load_all(files, &budget)?;
            let t = glue(&ts)?;
            let bound = ts.iter().map(Creature::packing).min().expect("at least one part");
            let holds = t.packing() >= bound;
            let member = sigma_member(&t, &ts);
            let mut doc = summary(&a, &t);
            doc["bound"] = norm(bound);
            doc["holds"] = json!(holds);
            doc["sigma_member"] = json!(member);
            Ok(Outcome::new(doc, holds && member))
        }
        CreatureVerb::Link { first, second } => {
            let (a, ts) = load_all(&[first.clone(), second.clone()], &budget)?;
            let t = link(&ts[0], &ts[1], &budget)?;
            let bound = half(ts[0].packing()).min(half(ts[1].packing()));
            let holds = t.packing() >= bound;
            let mut doc = summary(&a, &t);
            doc["bound"] = norm(bound);
            doc["holds"] = json!(holds);
            Ok(Outcome::new(doc, holds))
        }
    }
}
