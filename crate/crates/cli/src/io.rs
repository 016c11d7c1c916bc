use crate::args::{Format, Global};
use cwb_core::json::{self, SCHEMA};
use cwb_core::qhn::Strictness;
use cwb_core::rational::{self, Rational};
use cwb_core::{Budget, Coord, CoordSet, Embedding, Error};
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(..) => "io",
            CliError::Core(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(Error::Malformed(_) | Error::Precondition(_) | Error::InvalidAlphabet(_)) => 2,
            CliError::Core(_) => 1,
        }
    }

    pub fn to_json(&self) -> String {
        json::to_json(&json!({ "schema": SCHEMA, "error": { "code": self.code(), "message": self.to_string() } }))
    }
}

/// A command result: the document to print and the exit status.
pub struct Outcome {
    pub doc: Value,
    pub csv: Option<String>,
    pub status: u8,
}

impl Outcome {
    pub fn new(doc: Value, ok: bool) -> Self {
        Outcome { doc, csv: None, status: if ok { 0 } else { 1 } }
    }

    pub fn pass(doc: Value) -> Self {
        Outcome::new(doc, true)
    }
}

pub fn emit(g: &Global, out: &Outcome) -> Result<(), CliError> {
    let text = match g.format {
        Format::Json => {
            let mut doc = out.doc.clone();
            if let Value::Object(m) = &mut doc {
                m.insert("schema".into(), json!(SCHEMA));
            }
            json::to_json_pretty(&doc) + "\n"
        }
        Format::Csv => out.csv.clone().ok_or_else(|| CliError::Usage("this command has no CSV form".into()))?,
    };
    match &g.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(path.into(), e));
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
}

pub fn read_doc<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    json::from_json(&text).map_err(|e| CliError::Core(Error::Malformed(format!("{}: {e}", path.display()))))
}

/// Documents from each file: a single document, an array of them, or a
/// `gen` output with an `instances` array.
pub fn read_docs<T: serde::de::DeserializeOwned>(paths: &[PathBuf]) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        let value: Value = read_doc(path)?;
        let items = match value {
            Value::Array(v) => v,
            Value::Object(mut m) if m.contains_key("instances") => match m.remove("instances") {
                Some(Value::Array(v)) => v,
                _ => return Err(Error::Malformed(format!("{}: instances is not an array", path.display())).into()),
            },
            v => vec![v],
        };
        for item in items {
            out.push(T::deserialize(item).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?);
        }
    }
    Ok(out)
}

pub fn budget(g: &Global) -> Result<Budget, CliError> {
    let cap = Budget::default();
    match g.budget {
        None => Ok(cap),
        Some(n) if n <= cap.max_points => Ok(Budget { max_points: n, ..cap }),
        Some(n) => Err(CliError::Usage(format!("--budget {n} exceeds the global cap of {}", cap.max_points))),
    }
}

pub fn strictness(g: &Global, default: Strictness) -> Strictness {
    if g.strict {
        Strictness::Strict
    } else if g.relaxed {
        Strictness::Relaxed
    } else {
        default
    }
}

/// Parses `0,1,5` and `0..4` (half-open), mixed freely.
pub fn coord_list(s: &str) -> Result<CoordSet, CliError> {
    let bad = || CliError::Usage(format!("cannot parse coordinate list {s:?}"));
    let mut out = CoordSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u32, u32) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            out.extend((a..b).map(Coord));
        } else {
            out.insert(Coord(part.parse().map_err(|_| bad())?));
        }
    }
    Ok(out)
}

pub fn coords_json(z: &CoordSet) -> Value {
    json!(z.iter().map(|c| c.0).collect::<Vec<_>>())
}

/// Exact value, a 12-digit decimal and a scientific rendering.
pub fn rational_json(r: &Rational) -> Value {
    json!({
        "exact": r.to_string(),
        "decimal": rational::to_decimal(r, 12),
        "scientific": rational::to_scientific(r, 6),
    })
}

pub fn value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("documents serialize")
}

/// `i ↦ i + shift` on the coordinates whose image stays in the window.
pub fn shift_into(window: &CoordSet, shift: u32) -> Embedding {
    let dom: CoordSet = window.iter().filter_map(|c| c.0.checked_sub(shift)).map(Coord).filter(|c| window.contains(c)).collect();
    Embedding::shift(&dom, shift)
}
