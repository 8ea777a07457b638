use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tatetorsor::simptors::{Cochain, SimplicialSet};
use tatetorsor::tate::Lattice;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatetorsor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    (serde_json::from_str(&stdout(&o)).expect("valid JSON"), o.status.code().unwrap())
}

#[test]
fn cohomology_of_the_torus() {
    let o = run(&["cohomology", &data("torus.sset"), "--degree", "2", "--group", "Z"]);
    assert_eq!(stdout(&o), "Z\n");
    assert!(o.status.success());
    let o = run(&["cohomology", &data("rp2.sset"), "--degree", "1", "--group", "Z"]);
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["cohomology", "sphere3", "--degree", "3", "--group", "Z/3"]);
    assert_eq!(stdout(&o), "Z/3\n");
}

#[test]
fn relative_index() {
    let o = run(&["index", &data("shifted.lat"), &data("o2.lat")]);
    assert_eq!(stdout(&o), "-1\n");
    let (v, code) = json(&["index", &data("o2.lat"), &data("shifted.lat")]);
    assert_eq!((v["status"].as_str(), v["result"].as_i64(), code), (Some("pass"), Some(1), 0));
}

#[test]
fn lattice_outputs_round_trip() {
    let a = Lattice::from_lat(&std::fs::read_to_string(data("shifted.lat")).unwrap()).unwrap();
    let b = Lattice::from_lat(&std::fs::read_to_string(data("o2.lat")).unwrap()).unwrap();
    for (verb, want) in [("meet", a.meet(&b).unwrap()), ("join", a.join(&b).unwrap())] {
        let (v, _) = json(&[verb, &data("shifted.lat"), &data("o2.lat")]);
        assert_eq!(Lattice::from_lat(v["result"]["lat"].as_str().unwrap()).unwrap(), want);
        let text = stdout(&run(&[verb, &data("shifted.lat"), &data("o2.lat")]));
        assert_eq!(Lattice::from_lat(&text).unwrap(), want);
    }
}

#[test]
fn lift_project_and_mu() {
    let (i, j, u) = (data("i.lmx"), data("j.lmx"), data("shifted.lat"));
    let go = |verb: &str| stdout(&run(&[verb, &i, &j, &u]));
    let (lift, proj, mu) = (go("lift"), go("project"), go("mu-eval"));
    let o = Lattice::standard(Lattice::from_lat(&lift).unwrap().space(), 0);
    let i1 = Lattice::from_lat(&lift).unwrap().relative_index(&o).unwrap();
    let i2 = Lattice::from_lat(&proj).unwrap().relative_index(&o).unwrap();
    assert_eq!(mu.trim(), (i1 + i2).to_string());
    assert_eq!(mu.trim(), "-1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["ses-check", &data("i.lmx"), &data("j.lmx")]).status.code(), Some(0));
    assert_eq!(run(&["ses-check", &data("i.lmx"), &data("j_bad.lmx")]).status.code(), Some(1));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["index", "missing.lat", "missing.lat"]).status.code(), Some(2));
}

#[test]
fn malformed_input_reports_its_location() {
    let dir = std::env::temp_dir().join(format!("tatetorsor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.lmx");
    std::fs::write(&bad, "lmx rows=1 cols=1 field=F2\n1*t^x\n").unwrap();
    let o = run(&["ses-check", bad.to_str().unwrap(), &data("j.lmx")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t^x"));
    let bad = dir.join("bad.lat");
    std::fs::write(&bad, "tate rank=1 field=F2\nbounds lo=0 hi=1\nq\n").unwrap();
    let o = run(&["index", bad.to_str().unwrap(), &data("o2.lat")]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_deterministic() {
    for args in [
        vec!["verify", "mu", "--trials", "50", "--seed", "3"],
        vec!["det-symmetry", "--field", "F5", "--trials", "10"],
        vec!["s-enumerate", "--levels", "3"],
    ] {
        let a = stdout(&run(&[args.clone(), vec!["--json"]].concat()));
        let b = stdout(&run(&[args, vec!["--json"]].concat()));
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "mu", "--trials", "1000", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("mu: pass"));
    let (v, code) = json(&["verify", "cohomology"]);
    assert_eq!((v["result"]["failures"].as_u64(), code), (Some(0), 0));
}

#[test]
fn det_symmetry_verdicts() {
    let (v, code) = json(&["det-symmetry", "--field", "F5", "--theory", "ungraded"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["first_failure"]["instance"].as_str(), Some("(1,1)"));
    assert_eq!(v["result"]["first_failure"]["got"].as_str(), Some("4"));
    assert_eq!(v["result"]["criteria_agree"].as_bool(), Some(true));
    let (v, code) = json(&["det-symmetry", "--field", "F5", "--trials", "20"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("pass")));
}

#[test]
fn classification_and_witnesses() {
    let rp2 = SimplicialSet::from_sset(&std::fs::read_to_string(data("rp2.sset")).unwrap()).unwrap();
    let (v, code) = json(&["classify", &data("rp2.sset"), &data("rp2_twisted.coch")]);
    assert_eq!((code, v["result"]["cohomology"].as_str()), (0, Some("Z/2")));
    assert_eq!(v["result"]["class"], serde_json::json!([1]));
    let alpha = Cochain::from_coch(&rp2, v["result"]["alpha"]["coch"].as_str().unwrap()).unwrap();
    let original = Cochain::from_coch(&rp2, &std::fs::read_to_string(data("rp2_twisted.coch")).unwrap()).unwrap();
    assert_eq!(alpha, original);
    let (v, _) = json(&["classify", &data("rp2.sset"), &data("rp2_twisted.coch"), &data("rp2_trivial.coch")]);
    assert_eq!(v["result"]["isomorphic"].as_bool(), Some(false));
    let (v, _) = json(&["classify", &data("rp2.sset"), &data("rp2_trivial.coch"), &data("rp2_trivial.coch")]);
    assert_eq!(v["result"]["isomorphic"].as_bool(), Some(true));
    assert!(Cochain::from_coch(&rp2, v["result"]["transporter"]["coch"].as_str().unwrap()).is_ok());
}

#[test]
fn gerbes() {
    let (v, code) = json(&["gerbe-torsor", "sphere3", &data("sphere3_generator.coch")]);
    assert_eq!(
        (code, v["result"]["degree"].as_u64(), v["result"]["class"].clone()),
        (0, Some(2), serde_json::json!([1]))
    );
    let (v, code) = json(&["gerbe-torsor", "simplex4", &data("sphere3_generator.coch")]);
    assert_eq!(code, 1);
    let d4 = SimplicialSet::standard(4);
    let witness = Cochain::from_coch(&d4, v["result"]["coboundary"]["coch"].as_str().unwrap()).unwrap();
    assert!(!witness.is_zero());
}
