use std::fs;
use std::process::{Command, Output};

use uqsu3::uqsl3rep::{norm_h, BasisIndex, RepJson, RepSpace, Weight};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uqsu3"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn dim_values() {
    for (l, want) in [
        (["1", "0"], "dim 3"),
        (["0", "0"], "dim 1"),
        (["2", "5"], "dim 81"),
    ] {
        let o = run(&["dim", "--lambda", l[0], l[1]]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with(want), "{}", stdout(&o));
    }
    let o = run(&["dim", "--lambda", "2", "5"]);
    assert!(stdout(&o).contains("U_0 18") && stdout(&o).contains("U_2 6"));
}

#[test]
fn branch_fundamental_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let o = run(&[
        "branch",
        "--lambda",
        "1",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["lambda"], serde_json::json!([1, 0]));
    assert_eq!(v["c1"], "q^2");
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["dim"], 1);
    assert_eq!(comps[1]["dim"], 2);
    assert_eq!(comps[1]["hw_ambient"].as_array().unwrap().len(), 3);
    assert_eq!(v["global_checks"]["dim_sum"]["passed"], true);
}

#[test]
fn branch_csv() {
    let o = run(&["branch", "--lambda", "1", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("i,x,kappa_exp,dim,all_pass"));
    assert_eq!(text.matches(",true").count(), 4);
}

#[test]
fn branch_refuses_excluded_parameters() {
    let o = run(&["branch", "--lambda", "1", "0", "--c1", "1", "--c2=-q"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("s = 1 <= 3"), "{}", stderr(&o));
}

#[test]
fn verify_passes_by_default() {
    let o = run(&["verify", "--max-sum", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "--lambda", "3", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_reports_injected_faults() {
    let o = run(&["verify", "--lambda", "1", "1", "--inject-fault", "F1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failure"));
    assert!(stdout(&o).contains("FAIL relations:"));
    let o = run(&["verify", "--lambda", "1", "1", "--inject-fault", "C1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("C1 B1 = q B1 C1"));
}

#[test]
fn export_rep_round_trip_and_overwrite_protection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["export-rep", "--lambda", "1", "0", "--out", p])
            .status
            .code(),
        Some(0)
    );
    let j: RepJson = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let h = norm_h(Weight::new(1, 0), BasisIndex::new(1, 0, 1))
        .unwrap()
        .to_string();
    assert_eq!(j.norms, vec!["1".to_string(), "q".to_string(), h]);
    assert!(RepSpace::from_json(&j)
        .unwrap()
        .same_as(&RepSpace::new(Weight::new(1, 0))));

    let o = run(&["export-rep", "--lambda", "0", "0", "--out", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--force"));
    assert_eq!(
        run(&["export-rep", "--lambda", "0", "0", "--out", p, "--force"])
            .status
            .code(),
        Some(0)
    );
    let j: RepJson = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j.basis.len(), 1);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["dim"]).status.code(), Some(2));
    assert_eq!(
        run(&["branch", "--lambda", "1", "0", "--c1", "q^"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["branch", "--lambda", "1", "0", "--c1", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["branch", "--lambda", "1", "0", "--q0", "3/2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--lambda", "1", "0", "--inject-fault", "X9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
