use std::sync::Arc;

use ainf_core::ainfcat::{check_ainf_relations, check_strict_unital, classify_cp_object, classify_spherical};
use ainf_core::cli::format::{parse_category, parse_complex};
use ainf_core::cli::*;
use ainf_core::twcx::tw_to_module;
use ainf_core::twist::phi_module;
use serde_json::json;

fn inputs(names: &[&str]) -> Vec<Input> {
    names.iter().map(|n| Input::fixture(n).unwrap()).collect()
}

fn check<'a>(r: &'a VerifyReport, input: &str, name: &str) -> &'a Check {
    r.checks
        .iter()
        .find(|c| c.input == input && c.name == name)
        .unwrap_or_else(|| panic!("no check {name} on {input}"))
}

#[test]
fn all_suites_pass_on_p1() {
    let r = run_suite(Suite::All, &inputs(&["P(1)"]));
    assert!(r.passed, "{:?}", r.first_failure());
    assert_eq!(r.count(Status::Skip), 0);
    let f = check(&r, "P(1)", "functor/phi");
    assert!(f.detail["nonzero_homs"].as_u64().unwrap() >= 100);
    assert!(check(&r, "P(1)", "alpha/naturality").detail["checked"].as_u64().unwrap() >= 20);
}

#[test]
fn corrupted_fixture_fails_at_arity_three() {
    let r = run_suite(Suite::Relations, &inputs(&["CORRUPT_P(2)"]));
    assert!(!r.passed);
    let c = r.first_failure().unwrap();
    assert_eq!(c.name, "relations/ainf");
    let hit = c.detail["failures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["arity"] == json!(3) && f["inputs"] == json!(["h2", "h", "h"]))
        .expect("failure on (h², h, h)");
    assert_eq!(hit["residual"], json!([["1", "h2"]]));
}

#[test]
fn shift_on_two_objects_includes_dims() {
    let r = run_suite(Suite::Shift, &inputs(&["2OBJ(1)"]));
    assert!(r.passed, "{:?}", r.first_failure());
    let c = check(&r, "2OBJ(1)", "shift/certificate");
    assert_eq!(c.detail["dims_phi"], json!([{"2": 1, "4": 1}, {}]));
    assert_eq!(c.detail["survivor"], json!("h[-2]𝒱"));
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite(Suite::All, &inputs(&["P(1)", "2OBJ(1)"])).to_json();
    let b = run_suite(Suite::All, &inputs(&["P(1)", "2OBJ(1)"])).to_json();
    assert_eq!(a, b);
}

#[test]
fn alpha_is_skipped_beyond_n_one() {
    let r = run_suite(Suite::Alpha, &inputs(&["P(2)"]));
    assert!(r.passed);
    assert_eq!(r.count(Status::Skip), 1);
}

#[test]
fn fixture_names() {
    assert_eq!(FixtureName::parse("CONE_H(3)").unwrap().stem(), "cone_h3");
    for bad in ["P(0)", "P()", "Q(1)", "CORRUPT_P(1)", "P(1"] {
        assert!(FixtureName::parse(bad).is_none(), "{bad}");
    }
    assert!(make_fixture("CORRUPT_P(2)").is_err());
}

#[test]
fn generated_fixtures_are_valid() {
    for (name, n) in [("P(1)", 1), ("P(2)", 2), ("P(3)", 3), ("2OBJ(1)", 1), ("CONE_H(1)", 1)] {
        let files = make_fixture(name).unwrap();
        let cat = Arc::new(parse_category(&files[0].1).unwrap());
        assert!(check_ainf_relations(&cat).passed());
        assert!(check_strict_unital(&cat).unwrap().passed());
        let d = detect_datum(&cat, None).unwrap();
        assert_eq!(d.n, n);
        assert!(classify_cp_object(&cat, 0, &d.h, n, &d.integral).holds);
        if n == 1 {
            assert!(classify_spherical(&cat, 0, 2, &d.integral).holds);
        }
    }
    let files = make_fixture("CONE_H(1)").unwrap();
    assert_eq!(files.len(), 3);
    let cat = Arc::new(parse_category(&files[0].1).unwrap());
    let w = parse_complex(&files[2].1, &cat).unwrap();
    assert!(w.validate().passed());
    let d = detect_datum(&cat, None).unwrap();
    let phi = phi_module(&d, &Arc::new(tw_to_module(&w))).unwrap();
    let dims: Vec<_> = (0..1).map(|x| ainf_core::amod::module_cohomology(&phi.object, x).nonzero_dims()).collect();
    assert_eq!(dims, vec![[(2, 1), (5, 1)].into_iter().collect()]);
}
