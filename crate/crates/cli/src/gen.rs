use crate::args::{GenArgs, Global, Kind};
use crate::io::{self, CliError, Outcome};
use cwb_core::conditions::Flavor;
use cwb_core::gen::{self, CondShape, CreatureShape, QShape};
use cwb_core::json::{ConditionDoc, CreatureFile, QCondDoc};
use cwb_core::qhn::{NormSeqPrefix, Strictness};
use cwb_core::Alphabet;
use serde_json::{json, Value};

/// `5,5;1601,1601` → `[(5,5),(1601,1601)]`.
fn parse_seq(s: &str) -> Result<NormSeqPrefix, CliError> {
    let bad = || CliError::Usage(format!("cannot parse sequence {s:?}; expected n0,n1;n0,n1;…"));
    let pairs = s
        .split(';')
        .map(|pair| {
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<(u128, u128)>, CliError>>()?;
    Ok(NormSeqPrefix::new(pairs))
}

fn default_seq(strictness: Strictness) -> NormSeqPrefix {
    match strictness {
        Strictness::Strict => NormSeqPrefix::minimal_strict(4).expect("fits in 128 bits"),
        Strictness::Relaxed => NormSeqPrefix::new((1..=6).map(|k| (k, k)).collect()),
    }
}

/// Instance `i` is drawn from stream `i` of the seed, so each instance
/// depends only on the seed, its index and the shape.
pub fn run(g: &Global, a: &GenArgs) -> Result<Outcome, CliError> {
    let budget = io::budget(g)?;
    let alphabet = g.alphabet.clone().unwrap_or_else(Alphabet::binary);
    let strictness = io::strictness(g, Strictness::Strict);
    if a.z_min > a.z_max || a.delta_min > a.delta_max || a.stem_min > a.stem_max || a.sigmas_min > a.sigmas_max {
        return Err(CliError::Usage("every minimum must be at most its maximum".into()));
    }
    let mut instances: Vec<Value> = Vec::with_capacity(a.count);
    for i in 0..a.count {
        let mut rng = gen::rng(g.seed, i as u64);
        let doc = match a.kind {
            Kind::Creature => {
                let shape = CreatureShape { z: a.z_min..=a.z_max, delta: a.delta_min..=a.delta_max, min_n: a.min_n };
                let t = gen::creature(&mut rng, &alphabet, 0, &shape, &budget)?;
                io::value(&CreatureFile::new(&alphabet, &t))
            }
            Kind::Cond => {
                let shape = CondShape {
                    window: a.window,
                    stem: a.stem_min..=a.stem_max,
                    creature_len: a.z_min..=a.z_max,
                    delta: a.delta_min..=a.delta_max,
                    min_n: a.min_n,
                    flavor: Flavor::parse(&a.flavor)?,
                };
                let p = gen::truncated_condition(&mut rng, &alphabet, &shape, &budget)?;
                p.validate()?;
                io::value(&ConditionDoc::new(&p))
            }
            Kind::Qcond => {
                let seq = match &a.seq {
                    Some(s) => parse_seq(s)?,
                    None => default_seq(strictness),
                };
                let shape = QShape {
                    window: a.window,
                    seq,
                    m_star: a.m_star..=a.m_star,
                    stem: a.stem_min..=a.stem_max,
                    sigmas: a.sigmas_min..=a.sigmas_max,
                    slack: 1,
                    min_sigma: 1,
                    strictness,
                };
                let p = gen::qcondition(&mut rng, &alphabet, &shape)?;
                io::value(&QCondDoc::new(&p))
            }
        };
        instances.push(doc);
    }
    let kind = match a.kind {
        Kind::Creature => "creature",
        Kind::Cond => "cond",
        Kind::Qcond => "qcond",
    };
    Ok(Outcome::pass(json!({
        "kind": kind,
        "seed": g.seed,
        "strictness": strictness.name(),
        "instances": instances,
    })))
}
