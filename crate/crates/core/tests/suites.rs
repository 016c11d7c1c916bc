use cwb_core::suites::{self, Counterexample, ReplayInput, SuiteConfig, Verdict};

#[test]
fn group_laws_suite_passes() {
    let report = suites::run_named("group-laws", &SuiteConfig::default()).unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples.first());
    assert!(report.tally("group-laws").unwrap().passed > 0);
    assert!(report.tally("translate-union").unwrap().passed > 0);
    assert!(report.tally("union-conflict").is_some_and(|t| t.passed > 0));
}

#[test]
fn antitone_suite_passes() {
    let report = suites::run_named("antitone", &SuiteConfig::default()).unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples.first());
    assert_eq!(report.tally("antitone").unwrap().passed, 500);
}

#[test]
fn seeds_change_instances_but_not_verdicts() {
    let a = suites::run_named("norm-bounds", &SuiteConfig { seed: 7, count: Some(50), ..SuiteConfig::default() }).unwrap();
    let b = suites::run_named("norm-bounds", &SuiteConfig { seed: 8, count: Some(50), ..SuiteConfig::default() }).unwrap();
    assert!(a.passed() && b.passed());
    let suite = suites::find("norm-bounds").unwrap();
    assert_ne!(suite.generate(&a.config, 0).unwrap(), suite.generate(&b.config, 0).unwrap());
}

#[test]
fn replay_rechecks_a_recorded_instance() {
    let cfg = SuiteConfig { count: Some(5), ..SuiteConfig::default() };
    let suite = suites::find("axioms").unwrap();
    let cx = Counterexample {
        suite: "axioms".into(),
        property: "sigma-bot-values".into(),
        index: 3,
        detail: String::new(),
        config: cfg.clone(),
        instance: suite.generate(&cfg, 3).unwrap(),
    };
    let text = serde_json::to_string(&cx).unwrap();
    let input: ReplayInput = serde_json::from_str(&text).unwrap();
    let cxs = input.counterexamples();
    assert_eq!(cxs.len(), 1);
    let checks = suites::replay(cxs[0]).unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c.property == "sigma-bot-values" && c.verdict == Verdict::Pass));
}

#[test]
fn csv_lists_every_property() {
    let report = suites::run_named("witness", &SuiteConfig { count: Some(20), ..SuiteConfig::default() }).unwrap();
    let csv = report.to_csv();
    assert!(csv.starts_with("suite,property,passed,failed,skipped\n"));
    assert_eq!(csv.lines().count(), 1 + report.properties.len());
    assert!(csv.contains("witness,witness-in-values,20,0,0"));
}

#[test]
fn oversized_budgets_are_rejected() {
    let cfg = SuiteConfig { oracle_family_max: 40, ..SuiteConfig::default() };
    assert!(suites::run_named("witness", &cfg).is_err());
}
