//! Acceptance run: each criterion at its stated instance count and time
//! limit, one pass/fail line per criterion.

use cwb_core::suites::{self, SuiteConfig, SuiteReport};
use std::time::Duration;

struct Criterion {
    number: u32,
    title: &'static str,
    suite: &'static str,
    count: Option<usize>,
    limit: Option<Duration>,
    /// Properties that must have passed on every instance, with no skips.
    required: &'static [&'static str],
    /// Least number of instances that must be checked.
    instances: usize,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "norm baseline n(z, {0_z}) = |z|",
        suite: "norm-baseline",
        count: None,
        limit: Some(Duration::from_secs(1)),
        required: &["baseline", "oracle-baseline"],
        instances: 12,
    },
    Criterion {
        number: 2,
        title: "witness value lies in v(z, Delta)",
        suite: "witness",
        count: Some(1000),
        limit: Some(Duration::from_secs(30)),
        required: &["witness-in-values", "norm-matches-oracle"],
        instances: 1000,
    },
    Criterion {
        number: 3,
        title: "restrict_half, glue and link norm inequalities",
        suite: "norm-bounds",
        count: Some(1000),
        limit: Some(Duration::from_secs(120)),
        required: &["restrict-half", "glue", "link"],
        instances: 1000,
    },
    Criterion {
        number: 4,
        title: "composition and decomposition axioms",
        suite: "axioms",
        count: Some(500),
        limit: None,
        required: &[
            "sigma-member",
            "sigma-reflexive",
            "sigma-associative",
            "sigma-domain",
            "sigma-values",
            "sigma-bot-member",
            "sigma-bot-reflexive",
            "sigma-bot-domain",
            "sigma-bot-values",
            "sigma-bot-associative",
            "sigma-bot-associative-values",
        ],
        instances: 500,
    },
    Criterion {
        number: 5,
        title: "certified pairs satisfy POS inclusion",
        suite: "order-soundness",
        count: None,
        limit: None,
        required: &["certificate", "inclusion"],
        instances: 300,
    },
    Criterion {
        number: 6,
        title: "amalgamation of pairs and triples",
        suite: "amalgamation",
        count: Some(100),
        limit: Some(Duration::from_secs(120)),
        required: &["built", "certificates", "contained", "nonempty"],
        instances: 100,
    },
    Criterion {
        number: 7,
        title: "syntactic order equals POS inclusion",
        suite: "qhn-order",
        count: None,
        limit: Some(Duration::from_secs(300)),
        required: &["equivalence"],
        instances: 31408,
    },
    Criterion {
        number: 8,
        title: "strict compatibility: constructive iff brute force",
        suite: "qhn-compat",
        count: None,
        limit: None,
        required: &["constructive-agrees", "bruteforce-matches-oracle", "compatible-api"],
        instances: 300,
    },
    Criterion {
        number: 9,
        title: "linked-class amalgamation for n in {1, 2}",
        suite: "qhn-linked",
        count: None,
        limit: None,
        required: &["built", "valid", "above-all", "contained", "nonempty"],
        instances: 100,
    },
    Criterion {
        number: 10,
        title: "exact block measures certified below e^-N",
        suite: "measure",
        count: None,
        limit: None,
        required: &["exact-power", "certified", "enclosure", "hypothesis"],
        instances: 100,
    },
    Criterion {
        number: 11,
        title: "translation and permutation invariance",
        suite: "invariance",
        count: None,
        limit: None,
        required: &["translate", "permute"],
        instances: 100,
    },
];

fn judge(c: &Criterion, report: &SuiteReport) -> Result<String, String> {
    if report.instances < c.instances {
        return Err(format!("only {} instances", report.instances));
    }
    if let Some(e) = report.errors.first() {
        return Err(format!("{} instances errored, first #{}: {}", report.errors.len(), e.index, e.message));
    }
    if let Some(cx) = report.counterexamples.first() {
        return Err(format!("{} failures, first {} on #{}: {}", report.counterexamples.len(), cx.property, cx.index, cx.detail));
    }
    for p in c.required {
        match report.tally(p) {
            None => return Err(format!("property {p} was never checked")),
            Some(t) if t.skipped > 0 => return Err(format!("property {p} skipped on {} instances", t.skipped)),
            Some(_) => {}
        }
    }
    let elapsed = Duration::from_millis(report.elapsed_ms);
    if let Some(limit) = c.limit {
        if elapsed >= limit {
            return Err(format!("took {:.2} s, limit {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()));
        }
    }
    let checks: usize = report.properties.iter().map(|t| t.passed).sum();
    let skipped: usize = report.properties.iter().map(|t| t.skipped).sum();
    Ok(format!("{} instances, {checks} checks passed, {skipped} skipped, {:.2} s", report.instances, elapsed.as_secs_f64()))
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let cfg = SuiteConfig { count: c.count, ..SuiteConfig::default() };
        let outcome = suites::run_named(c.suite, &cfg).map_err(|e| e.to_string()).and_then(|r| judge(c, &r));
        match outcome {
            Ok(summary) => println!("criterion {:>2} PASS  {} [{}]: {summary}", c.number, c.title, c.suite),
            Err(why) => {
                println!("criterion {:>2} FAIL  {} [{}]: {why}", c.number, c.title, c.suite);
                failed.push(c.number);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
