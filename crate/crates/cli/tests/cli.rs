use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ainf-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn ainf(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainf"))
        .args(args)
        .current_dir(dir)
        .env("AINF_THREADS", "2")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn fixture_files_check_and_round_trip() {
    let d = scratch("fixture");
    let o = ainf(&d, &["fixture", "2OBJ(1)", "--out", "fx"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "fx/2obj1.cat\nfx/2obj1.integral\n");
    assert_eq!(code(&ainf(&d, &["-c", "fx/2obj1.cat", "check"])), 0);
    let o = ainf(&d, &["-c", "fx/2obj1.cat", "cohomology", "--source", "V", "--target", "W"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"dims\": {}"));
}

#[test]
fn exit_codes() {
    let d = scratch("codes");
    assert_eq!(code(&ainf(&d, &["verify", "relations", "P(2)", "--report", "ok.json"])), 0);
    let o = ainf(&d, &["verify", "relations", "CORRUPT_P(2)", "--report", "bad.json"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("relations/ainf") && err.contains("h2"), "{err}");
    assert_eq!(code(&ainf(&d, &["verify", "nope", "P(1)"])), 2);
    assert_eq!(code(&ainf(&d, &["-c", "missing.cat", "check"])), 2);
    assert_eq!(code(&ainf(&d, &["fixture", "CORRUPT_P(2)", "--out", "x"])), 2);
    assert_eq!(code(&ainf(&d, &["-c", "P(1)", "classify", "--object", "V", "--cp", "1"])), 0);
    assert_eq!(code(&ainf(&d, &["-c", "P(1)", "classify", "--object", "V", "--spherical", "2"])), 0);
    assert_eq!(code(&ainf(&d, &["-c", "P(1)", "classify", "--object", "V", "--cp", "2"])), 1);

    std::fs::write(d.join("bad.cat"), "field Q\narity_bound 2\nobject V\nbasis V V e 0\nbasis V V h 2\nmu V V V : h h -> e 1\n").unwrap();
    let o = ainf(&d, &["-c", "bad.cat", "check"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
}

#[test]
fn verify_reports_are_stable() {
    let d = scratch("stable");
    assert_eq!(code(&ainf(&d, &["verify", "shift", "2OBJ(1)", "P(1)", "--report", "r/a.json"])), 0);
    assert_eq!(code(&ainf(&d, &["verify", "shift", "2OBJ(1)", "P(1)", "--report", "r/b.json"])), 0);
    let a = std::fs::read(d.join("r/a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("r/b.json")).unwrap());
    assert!(String::from_utf8_lossy(&a).contains("dims_phi"));
}

#[test]
fn twist_and_quasi_iso() {
    let d = scratch("twist");
    assert_eq!(code(&ainf(&d, &["fixture", "CONE_H(1)", "--out", "."])), 0);
    let o = ainf(&d, &["-c", "cone_h1.cat", "twist", "--kind", "cp", "--object", "V", "--apply", "cone_h1.W_h.tw", "--out", "phi.tw"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(d.join("phi.tw")).unwrap().starts_with("complex Φ(W_h)\n"));
    let o = ainf(&d, &["-c", "cone_h1.cat", "twist", "--kind", "sphere", "--object", "V", "--apply", "yoneda:V", "--out", "t.mod", "--integral", "cone_h1.integral"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let id = "morphism\nsource yoneda:V\ntarget yoneda:V\ndegree 0\nt V : e -> e 1\nt V : h -> h 1\n";
    std::fs::write(d.join("id.mor"), id).unwrap();
    assert_eq!(code(&ainf(&d, &["-c", "cone_h1.cat", "quasi-iso", "--morphism", "id.mor"])), 0);
    let half = "morphism\nsource yoneda:V\ntarget yoneda:V\ndegree 0\nt V : e -> e 1\n";
    std::fs::write(d.join("half.mor"), half).unwrap();
    assert_eq!(code(&ainf(&d, &["-c", "cone_h1.cat", "quasi-iso", "--morphism", "half.mor"])), 1);
}

#[test]
fn closed_non_quasi_iso_is_a_failure() {
    let d = scratch("zero");
    let zero = "morphism\nsource yoneda:V\ntarget yoneda:V\ndegree 0\n";
    std::fs::write(d.join("zero.mor"), zero).unwrap();
    let o = ainf(&d, &["-c", "P(1)", "quasi-iso", "--morphism", "zero.mor"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"closed\": true"));
}
