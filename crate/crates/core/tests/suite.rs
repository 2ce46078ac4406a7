use polelab_core::suite::{all_pass, check_ids, report_json, report_text, run_all, SuiteConfig};
use polelab_core::Error;

#[test]
fn default_suite_passes() {
    let verdicts = run_all(&SuiteConfig::default()).unwrap();
    print!("{}", report_text(&verdicts));
    assert!(verdicts.len() >= 12);
    assert!(all_pass(&verdicts));
}

#[test]
fn exact_selection_has_zero_tolerance() {
    let config = SuiteConfig { exact_only: true, ids: vec!["binomial_lemma".into(), "up_down_identity".into(), "cross_engine".into()], ..Default::default() };
    let verdicts = run_all(&config).unwrap();
    let ids: Vec<_> = verdicts.iter().map(|v| v.id.as_str()).collect();
    assert_eq!(ids, vec!["binomial_lemma", "cross_engine"]);
    assert!(verdicts.iter().all(|v| v.tolerance == "0"));
}

#[test]
fn unknown_id_lists_valid_ones() {
    let config = SuiteConfig { ids: vec!["nosuch".into()], ..Default::default() };
    match run_all(&config) {
        Err(Error::UnknownCheck { id, valid }) => {
            assert_eq!(id, "nosuch");
            for v in check_ids() {
                assert!(valid.contains(v));
            }
        }
        other => panic!("expected an unknown-check error, got {other:?}"),
    }
}

#[test]
fn reports_are_reproducible() {
    let config = SuiteConfig { ids: vec!["residue_trace".into(), "up_down_identity".into()], ..Default::default() };
    let a = report_json(&run_all(&config).unwrap()).unwrap();
    let b = report_json(&run_all(&config).unwrap()).unwrap();
    assert_eq!(a, b);
}
