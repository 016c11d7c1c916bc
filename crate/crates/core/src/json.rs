//! Versioned JSON documents for every exchanged object.
//!
//! Symbols are written as residue tuples, partial functions as sorted
//! `[coord, [residues…]]` pairs, and every top-level document carries
//! `"schema": 1`. Field order is fixed, so `serde_json::to_string` of a
//! document is canonical.

use crate::alphabet::{Alphabet, Symbol};
use crate::conditions::{Amalgam, Flavor, Move, MoveCertificate, NormStep, StepKind, TruncatedCondition};
use crate::creatures::{Creature, Norm};
use crate::error::{Error, Result};
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::Budget;
use crate::qhn::{Blocks, NormSeqPrefix, QCondition};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

pub type PfDoc = Vec<(u32, Vec<u32>)>;

fn check_schema(schema: u32) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Malformed(format!("unsupported schema version {schema}")));
    }
    Ok(())
}

fn schema_one() -> u32 {
    SCHEMA
}

pub fn encode_symbol(a: &Alphabet, s: Symbol) -> Vec<u32> {
    a.components(s).expect("symbols are validated on entry")
}

pub fn encode_pf(a: &Alphabet, pf: &PartialFunction) -> PfDoc {
    pf.iter().map(|(c, s)| (c.0, encode_symbol(a, s))).collect()
}

pub fn decode_pf(a: &Alphabet, doc: &PfDoc) -> Result<PartialFunction> {
    PartialFunction::from_pairs(doc.iter().map(|(c, r)| Ok((Coord(*c), a.from_components(r)?))).collect::<Result<Vec<_>>>()?)
}

fn encode_set(z: &CoordSet) -> Vec<u32> {
    z.iter().map(|c| c.0).collect()
}

fn decode_set(v: &[u32]) -> CoordSet {
    v.iter().map(|&c| Coord(c)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreatureDoc {
    pub z: Vec<u32>,
    pub delta: Vec<PfDoc>,
}

pub fn encode_creature(a: &Alphabet, t: &Creature) -> CreatureDoc {
    CreatureDoc { z: encode_set(t.z()), delta: t.delta().iter().map(|eta| encode_pf(a, eta)).collect() }
}

pub fn decode_creature(a: &Alphabet, doc: &CreatureDoc, budget: &Budget) -> Result<Creature> {
    let delta = doc.delta.iter().map(|d| decode_pf(a, d)).collect::<Result<_>>()?;
    Creature::new(decode_set(&doc.z), delta, budget)
}

/// A creature together with its alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreatureFile {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub alphabet: Alphabet,
    #[serde(flatten)]
    pub creature: CreatureDoc,
}

impl CreatureFile {
    pub fn new(a: &Alphabet, t: &Creature) -> Self {
        CreatureFile { schema: SCHEMA, alphabet: a.clone(), creature: encode_creature(a, t) }
    }

    pub fn decode(&self, budget: &Budget) -> Result<(Alphabet, Creature)> {
        check_schema(self.schema)?;
        Ok((self.alphabet.clone(), decode_creature(&self.alphabet, &self.creature, budget)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionDoc {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub alphabet: Alphabet,
    pub window: Vec<u32>,
    pub w: PfDoc,
    pub creatures: Vec<CreatureDoc>,
    pub flavor: String,
    #[serde(default)]
    pub profile: Vec<u64>,
}

impl ConditionDoc {
    pub fn new(p: &TruncatedCondition) -> Self {
        let a = p.alphabet();
        ConditionDoc {
            schema: SCHEMA,
            alphabet: a.clone(),
            window: encode_set(p.window()),
            w: encode_pf(a, p.w()),
            creatures: p.creatures().iter().map(|t| encode_creature(a, t)).collect(),
            flavor: p.flavor().name().into(),
            profile: p.profile().to_vec(),
        }
    }

    pub fn decode(&self, budget: &Budget) -> Result<TruncatedCondition> {
        check_schema(self.schema)?;
        let a = &self.alphabet;
        let creatures = self.creatures.iter().map(|d| decode_creature(a, d, budget)).collect::<Result<_>>()?;
        TruncatedCondition::new(
            a.clone(),
            decode_set(&self.window),
            decode_pf(a, &self.w)?,
            creatures,
            Flavor::parse(&self.flavor)?,
            self.profile.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub indices: Vec<usize>,
    pub creature: CreatureDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MoveDoc {
    Decide { indices: Vec<usize>, w: PfDoc },
    Sigma { groups: Vec<GroupDoc> },
    SigmaBot { index: usize, parts: Vec<CreatureDoc> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub moves: Vec<MoveDoc>,
}

impl CertificateDoc {
    pub fn new(a: &Alphabet, cert: &MoveCertificate) -> Self {
        let moves = cert
            .moves
            .iter()
            .map(|m| match m {
                Move::Decide { indices, w } => MoveDoc::Decide { indices: indices.clone(), w: encode_pf(a, w) },
                Move::Sigma { groups } => MoveDoc::Sigma {
                    groups: groups.iter().map(|(g, t)| GroupDoc { indices: g.clone(), creature: encode_creature(a, t) }).collect(),
                },
                Move::SigmaBot { index, parts } => {
                    MoveDoc::SigmaBot { index: *index, parts: parts.iter().map(|t| encode_creature(a, t)).collect() }
                }
            })
            .collect();
        CertificateDoc { schema: SCHEMA, moves }
    }

    pub fn decode(&self, a: &Alphabet, budget: &Budget) -> Result<MoveCertificate> {
        check_schema(self.schema)?;
        let creature = |d: &CreatureDoc| decode_creature(a, d, budget);
        let moves = self
            .moves
            .iter()
            .map(|m| {
                Ok(match m {
                    MoveDoc::Decide { indices, w } => Move::Decide { indices: indices.clone(), w: decode_pf(a, w)? },
                    MoveDoc::Sigma { groups } => Move::Sigma {
                        groups: groups.iter().map(|g| Ok((g.indices.clone(), creature(&g.creature)?))).collect::<Result<_>>()?,
                    },
                    MoveDoc::SigmaBot { index, parts } => {
                        Move::SigmaBot { index: *index, parts: parts.iter().map(creature).collect::<Result<_>>()? }
                    }
                })
            })
            .collect::<Result<_>>()?;
        Ok(MoveCertificate::new(moves))
    }
}

/// A packing number: an integer, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormDoc {
    Finite(u64),
    Infinite(InfTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

impl From<Norm> for NormDoc {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Finite(v) => NormDoc::Finite(v),
            Norm::Infinite => NormDoc::Infinite(InfTag::Inf),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormStepDoc {
    pub kind: String,
    pub condition: Option<usize>,
    pub block: usize,
    pub inputs: Vec<NormDoc>,
    pub output: NormDoc,
    pub bound: NormDoc,
    pub holds: bool,
}

impl From<&NormStep> for NormStepDoc {
    fn from(s: &NormStep) -> Self {
        let kind = match s.kind {
            StepKind::Cut => "cut",
            StepKind::Glue => "glue",
            StepKind::Link => "link",
        };
        NormStepDoc {
            kind: kind.into(),
            condition: s.condition,
            block: s.block,
            inputs: s.inputs.iter().map(|&n| n.into()).collect(),
            output: s.output.into(),
            bound: s.bound.into(),
            holds: s.holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamDoc {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub q: ConditionDoc,
    pub certificates: Vec<CertificateDoc>,
    pub boundaries: Vec<u32>,
    pub transcript: Vec<NormStepDoc>,
}

impl AmalgamDoc {
    pub fn new(am: &Amalgam) -> Self {
        let a = am.q.alphabet();
        AmalgamDoc {
            schema: SCHEMA,
            q: ConditionDoc::new(&am.q),
            certificates: am.certificates.iter().map(|c| CertificateDoc::new(a, c)).collect(),
            boundaries: am.boundaries.clone(),
            transcript: am.transcript.iter().map(NormStepDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqDoc {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub pairs: Vec<(u128, u128)>,
}

impl SeqDoc {
    pub fn new(s: &NormSeqPrefix) -> Self {
        SeqDoc { schema: SCHEMA, pairs: s.pairs().to_vec() }
    }

    pub fn decode(&self) -> Result<NormSeqPrefix> {
        check_schema(self.schema)?;
        Ok(NormSeqPrefix::new(self.pairs.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub m: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCondDoc {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub alphabet: Alphabet,
    pub window: Vec<u32>,
    pub w: PfDoc,
    pub sigmas: Vec<PfDoc>,
    pub m_star: usize,
    pub blocks: Vec<BlockDoc>,
    pub seq: Vec<(u128, u128)>,
}

impl QCondDoc {
    pub fn new(p: &QCondition) -> Self {
        let a = &p.alphabet;
        QCondDoc {
            schema: SCHEMA,
            alphabet: a.clone(),
            window: encode_set(&p.window),
            w: encode_pf(a, &p.w),
            sigmas: p.sigmas.iter().map(|s| encode_pf(a, s)).collect(),
            m_star: p.m_star,
            blocks: p.blocks.iter().map(|(&m, v)| BlockDoc { m, members: v.iter().copied().collect() }).collect(),
            seq: p.seq.pairs().to_vec(),
        }
    }

    pub fn decode(&self) -> Result<QCondition> {
        check_schema(self.schema)?;
        let a = &self.alphabet;
        let mut blocks = Blocks::new();
        for b in &self.blocks {
            if blocks.insert(b.m, b.members.iter().copied().collect()).is_some() {
                return Err(Error::Malformed(format!("block {} listed twice", b.m)));
            }
        }
        Ok(QCondition::new(
            a.clone(),
            decode_set(&self.window),
            decode_pf(a, &self.w)?,
            self.sigmas.iter().map(|s| decode_pf(a, s)).collect::<Result<_>>()?,
            self.m_star,
            blocks,
            NormSeqPrefix::new(self.seq.clone()),
        ))
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn to_json_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pf::coords;

    #[test]
    fn partial_function_wire_form() {
        let a = Alphabet::new(vec![3, 2]).unwrap();
        let pf = PartialFunction::from_pairs([(Coord(4), a.from_components(&[2, 1]).unwrap()), (Coord(1), Symbol(0))]).unwrap();
        let doc = encode_pf(&a, &pf);
        assert_eq!(to_json(&doc), "[[1,[0,0]],[4,[2,1]]]");
        assert_eq!(decode_pf(&a, &doc).unwrap(), pf);
        assert!(decode_pf(&a, &vec![(0, vec![3, 0])]).is_err());
    }

    #[test]
    fn creature_file_round_trip() {
        let a = Alphabet::binary();
        let t = Creature::constant_zero(coords(0..3), &Budget::default()).unwrap();
        let text = to_json(&CreatureFile::new(&a, &t));
        assert_eq!(text, r#"{"schema":1,"alphabet":{"orders":[2]},"z":[0,1,2],"delta":[[[0,[0]],[1,[0]],[2,[0]]]]}"#);
        let back: CreatureFile = from_json(&text).unwrap();
        assert_eq!(back.decode(&Budget::default()).unwrap().1, t);
    }

    #[test]
    fn qcondition_round_trip() {
        let p = QCondition::plain(Alphabet::binary(), coords(0..4), PartialFunction::of(&[(0, 1)]), vec![PartialFunction::of(&[(1, 0), (2, 0)])]);
        let text = to_json(&QCondDoc::new(&p));
        let back: QCondDoc = from_json(&text).unwrap();
        assert_eq!(back.decode().unwrap(), p);
        let wrong = text.replace("\"schema\":1", "\"schema\":2");
        assert!(from_json::<QCondDoc>(&wrong).unwrap().decode().is_err());
    }

    #[test]
    fn norm_wire_form() {
        assert_eq!(to_json(&NormDoc::from(Norm::Infinite)), "\"inf\"");
        assert_eq!(to_json(&NormDoc::from(Norm::Finite(3))), "3");
    }
}
