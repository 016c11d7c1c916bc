use crate::args::{Global, SuiteVerb, VerifyArgs};
use crate::io::{self, read_doc, CliError, Outcome};
use cwb_core::Error;
use cwb_core::suites::{self, ReplayInput, SuiteConfig, SuiteReport, Verdict};
use serde_json::{json, Value};

pub fn run(g: &Global, verb: &SuiteVerb) -> Result<Outcome, CliError> {
    match verb {
        SuiteVerb::List => {
            let list: Vec<_> = suites::all().iter().map(|s| json!({ "name": s.name(), "about": s.about() })).collect();
            let mut out = Outcome::pass(json!({ "suites": list }));
            out.csv = Some(suites::all().iter().fold(String::from("name,about\n"), |acc, s| acc + &format!("{},\"{}\"\n", s.name(), s.about())));
            Ok(out)
        }
        SuiteVerb::Verify(a) => match &a.replay {
            Some(path) => replay(path),
            None => verify(g, a),
        },
    }
}

fn config(g: &Global, a: &VerifyArgs) -> Result<SuiteConfig, CliError> {
    let d = SuiteConfig::default();
    let cfg = SuiteConfig {
        seed: g.seed,
        count: a.count,
        alphabet: g.alphabet.clone(),
        z_max: a.z_max.unwrap_or(d.z_max),
        delta_max: a.delta_max.unwrap_or(d.delta_max),
        window_max: a.window_max.unwrap_or(d.window_max),
        oracle_family_max: a.oracle_family.unwrap_or(d.oracle_family_max),
        strictness: io::strictness(g, d.strictness),
        max_points: io::budget(g)?.max_points,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn verify(g: &Global, a: &VerifyArgs) -> Result<Outcome, CliError> {
    let known = suites::names();
    let mut names: Vec<&str> = Vec::new();
    for n in &a.names {
        if n == "all" {
            names.extend(&known);
        } else if known.contains(&n.as_str()) {
            names.push(n);
        } else {
            return Err(CliError::Usage(format!("unknown suite {n:?}; known suites: {}", known.join(", "))));
        }
    }
    let cfg = config(g, a)?;
    let reports: Vec<SuiteReport> = names.iter().map(|n| suites::run_named(n, &cfg)).collect::<Result<_, _>>()?;
    let passed = reports.iter().all(SuiteReport::passed);
    let failed = reports.iter().any(|r| r.properties.iter().any(|t| t.failed > 0) || r.errors.iter().any(|e| e.code != "enumeration-too-large"));
    let mut csv = String::from("suite,property,passed,failed,skipped\n");
    for r in &reports {
        csv.extend(r.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
    }
    let mut out = Outcome::new(json!({ "passed": passed, "reports": io::value(&reports) }), passed);
    if !failed && reports.iter().any(SuiteReport::budget_exceeded) {
        out.status = 3;
    }
    out.csv = Some(csv);
    Ok(out)
}

/// Accepts the output of `suite verify`, a single report, or a single counterexample.
fn replay_inputs(path: &std::path::Path) -> Result<Vec<ReplayInput>, CliError> {
    let mut value: Value = read_doc(path)?;
    let malformed = |e: serde_json::Error| CliError::Core(Error::Malformed(format!("{}: {e}", path.display())));
    match value.get_mut("reports").map(Value::take) {
        Some(reports) => {
            let reports: Vec<SuiteReport> = serde_json::from_value(reports).map_err(malformed)?;
            Ok(reports.into_iter().map(ReplayInput::Report).collect())
        }
        None => Ok(vec![serde_json::from_value(value).map_err(malformed)?]),
    }
}

fn replay(path: &std::path::Path) -> Result<Outcome, CliError> {
    let inputs = replay_inputs(path)?;
    let mut rows = Vec::new();
    let mut reproduced_any = false;
    let mut csv = String::from("suite,property,index,reproduced\n");
    for cx in inputs.iter().flat_map(ReplayInput::counterexamples) {
        let checks = suites::replay(cx)?;
        let reproduced = checks.iter().any(|c| matches!(c.verdict, Verdict::Fail(_)));
        reproduced_any |= reproduced;
        csv.push_str(&format!("{},{},{},{}\n", cx.suite, cx.property, cx.index, reproduced));
        rows.push(json!({
            "suite": cx.suite,
            "property": cx.property,
            "index": cx.index,
            "recorded": cx.detail,
            "checks": io::value(&checks),
            "reproduced": reproduced,
        }));
    }
    let mut out = Outcome::new(json!({ "replays": rows, "reproduced": reproduced_any }), !reproduced_any);
    out.csv = Some(csv);
    Ok(out)
}
