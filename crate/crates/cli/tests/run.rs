use pertinency::series::Growth;
use pertinency::smash::Pertinency;
use pertinency_cli::emit::{classification_line, emit, from_json, to_json, Format, CSV_HEADER};
use pertinency_cli::run::Outcome;
use pertinency_cli::{parse_config, run_experiment, Report, RunOptions};

fn skew_cyclic(n: usize, tasks: &str, extra: &str) -> String {
    format!(
        r#"{{
          "ring": {{ "n": {n}, "q": "minus_one" }},
          "field": {{ "kind": "rational" }},
          "group": {{ "kind": "cyclic_permutation" }}{extra},
          "tasks": [{tasks}]
        }}"#
    )
}

fn run(text: &str) -> Report {
    run_experiment(&parse_config(text).unwrap(), &RunOptions::default()).unwrap()
}

fn ok<T>(o: &Option<Outcome<T>>) -> &T {
    o.as_ref().and_then(Outcome::ok).expect("task succeeded")
}

const ALL: &str = r#""pertinency", "reflection", "molien", "trace", "hdet", "membership", "verify_lemma53""#;

#[test]
fn all_tasks_for_two_variables() {
    let report = run(&skew_cyclic(2, ALL, r#", "max_degree": 8"#));
    assert!(report.succeeded(), "{:?}", report.results.errors());
    let r = &report.results;

    let p = ok(&r.pertinency);
    assert_eq!(p.pertinency, Pertinency::Exact { value: 2 });
    assert_eq!(&p.hilbert_quotient[..4], &[1, 1, 0, 0]);

    let refl = ok(&r.reflection);
    assert_eq!(refl.group, Some(2));
    assert_eq!(refl.odd_cycle_check, Some(true));

    let h = ok(&r.hdet);
    assert!(h.trivial);
    assert!(h.elements.iter().all(|e| e.value == "1"));

    let m = ok(&r.molien);
    assert!(m.consistent);
    assert_eq!(m.checked_through, 8);

    assert_eq!(ok(&r.trace).elements.len(), 2);
    assert!(ok(&r.membership).passed);
    assert!(ok(&r.verify_lemma53).passed);
}

#[test]
fn reflection_number_for_six_variables() {
    let report = run(&skew_cyclic(6, r#""reflection""#, ""));
    assert_eq!(ok(&report.results.reflection).group, Some(4));
    assert!(report.results.pertinency.is_none());
}

#[test]
fn three_variables_carry_the_totient_floor() {
    let report = run(&skew_cyclic(3, r#""pertinency""#, r#", "field_policy": "modular_then_exact""#));
    let p = ok(&report.results.pertinency);
    assert!(p.annotations.iter().any(|a| a.contains("floor φ(3)=2")), "{:?}", p.annotations);
}

#[test]
fn commutative_contrast_has_pertinency_one() {
    let text = skew_cyclic(2, r#""pertinency""#, r#", "max_degree": 12"#).replace("minus_one", "commutative");
    let p = ok(&run(&text).results.pertinency).clone();
    assert_eq!(p.classification, Growth::Polynomial { m: 1 });
    assert!(matches!(p.pertinency, Pertinency::Estimate { value: 1, .. }));
    assert!(p.hilbert_quotient[4..].iter().all(|&h| h == p.hilbert_quotient[12] && h > 0));
}

#[test]
fn dual_smash_on_the_klein_group() {
    // x1 has degree (1,0), x2 degree (0,1); labels index the group's elements.
    let text = r#"{
      "ring": { "n": 2, "q": "minus_one" },
      "field": { "kind": "rational" },
      "group": { "kind": "explicit", "generators": [
        { "perm": [0, 1], "scalars": [-1, 1] },
        { "perm": [0, 1], "scalars": [1, -1] }
      ] },
      "smash": { "kind": "dual" },
      "grading": [1, 2],
      "max_degree": 8,
      "tasks": ["pertinency", "membership", "molien"]
    }"#;
    let report = run(text);
    assert!(report.succeeded(), "{:?}", report.results.errors());
    assert!(ok(&report.results.membership).passed);
    assert!(ok(&report.results.molien).corner_dims.is_none());
}

#[test]
fn membership_of_user_monomials() {
    let text = skew_cyclic(2, r#""membership""#, r#", "max_degree": 6, "membership": [[2, 0], [0, 0]]"#);
    let m = ok(&run(&text).results.membership).clone();
    let user: Vec<_> = m.checks.iter().filter(|c| c.expected.is_none()).collect();
    assert_eq!(user.len(), 2);
    // h(0) = 1, so the unit is not in I; everything of degree 2 is.
    assert!(user[0].in_ideal);
    assert!(!user[1].in_ideal);
}

#[test]
fn json_round_trips() {
    let report = run(&skew_cyclic(2, ALL, r#", "max_degree": 6"#));
    let json = to_json(&report);
    assert_eq!(from_json(&json).unwrap(), report);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let keys: Vec<_> = value.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["config", "results", "timings_ms", "version"]);
}

#[test]
fn reports_are_byte_identical() {
    let text = skew_cyclic(4, r#""pertinency", "trace""#, r#", "field_policy": "modular_then_exact""#);
    assert_eq!(to_json(&run(&text)), to_json(&run(&text)));
}

#[test]
fn timings_only_on_request() {
    let cfg = parse_config(&skew_cyclic(2, r#""hdet""#, "")).unwrap();
    let quiet = run_experiment(&cfg, &RunOptions::default()).unwrap();
    assert!(quiet.timings_ms.is_empty());
    let timed = run_experiment(&cfg, &RunOptions { timings: true, ..Default::default() }).unwrap();
    assert!(timed.timings_ms.contains_key("hdet"));
}

#[test]
fn csv_carries_the_quotient_table() {
    let report = run(&skew_cyclic(2, r#""pertinency""#, r#", "max_degree": 5"#));
    let csv = emit(&report, Format::Csv);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "degree,dim_B,dim_I,h");
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines[1..], ["0,2,1,1", "1,4,3,1", "2,6,6,0", "3,8,8,0", "4,10,10,0", "5,12,12,0"]);
}

#[test]
fn table_states_the_classification() {
    let report = run(&skew_cyclic(2, r#""pertinency""#, ""));
    let p = ok(&report.results.pertinency);
    let Growth::CertifiedZero { degree } = p.classification else { panic!("{:?}", p.classification) };
    let table = emit(&report, Format::Table);
    assert!(table.contains(&format!("classification: certified_finite at degree {degree}")), "{table}");
    assert_eq!(classification_line(&Growth::Polynomial { m: 3 }), "estimated(3)");
    assert_eq!(classification_line(&Growth::Inconclusive), "inconclusive");
}

#[test]
fn formats_parse() {
    assert_eq!("json".parse(), Ok(Format::Json));
    assert_eq!("table".parse(), Ok(Format::Table));
    assert_eq!("csv".parse(), Ok(Format::Csv));
    assert!("xml".parse::<Format>().is_err());
}

#[test]
fn failed_tasks_give_exit_code_one() {
    let report = run(&skew_cyclic(2, r#""pertinency", "hdet""#, r#", "max_degree": 4"#));
    assert_eq!(report.exit_code(), 0);

    let mut json: serde_json::Value = serde_json::from_str(&to_json(&report)).unwrap();
    json["results"]["pertinency"] = serde_json::json!({ "status": "error", "message": "ladder exhausted" });
    let partial = from_json(&json.to_string()).unwrap();
    assert!(ok(&partial.results.hdet).trivial);
    assert_eq!(partial.failures(), vec![("pertinency", "ladder exhausted".to_string())]);
    assert_eq!(partial.exit_code(), 1);
    assert!(emit(&partial, Format::Table).contains("error: ladder exhausted"));
}

#[test]
fn failed_self_checks_count_as_failures() {
    let report = run(&skew_cyclic(2, r#""membership""#, r#", "max_degree": 4"#));
    let mut json: serde_json::Value = serde_json::from_str(&to_json(&report)).unwrap();
    json["results"]["membership"]["result"]["checks"][0]["in_ideal"] = false.into();
    let broken = from_json(&json.to_string()).unwrap();
    assert_eq!(broken.failures().len(), 1);
    assert_eq!(broken.exit_code(), 1);
}
