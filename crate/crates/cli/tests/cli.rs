use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hypergroups::enumerate::canonical_form;
use hypergroups::fixtures::{c2, k2, w3};
use hypergroups::hgt;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hg")).args(args).output().expect("hg runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_fixtures_and_failures() {
    let ok = hg(&["validate", path(&data("k2.hgt"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("order 2"));

    let dir = tempfile::tempdir().unwrap();
    let w3_text = std::fs::read_to_string(data("w3.hgt")).unwrap();

    let missing = dir.path().join("missing.hgt");
    std::fs::write(&missing, w3_text.replace("1 1 : 0\n", "")).unwrap();
    let out = hg(&["validate", path(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cell (1, 1) is missing"), "{}", stderr(&out));
    assert!(stderr(&out).contains("line"));

    // 2*2 = {0} breaks associativity: (1*2)*2 = {0} but 1*(2*2) = {1}.
    let broken = dir.path().join("broken.hgt");
    std::fs::write(&broken, w3_text.replace("2 2 : 0 1", "2 2 : 0")).unwrap();
    let out = hg(&["validate", path(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("AssociativityViolation(1, 2, 2)"), "{}", stderr(&out));
}

#[test]
fn analyze_reports() {
    let out = hg(&["analyze", "--json", path(&data("w3.hgt"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["center"], serde_json::json!([0, 1]));
    assert_eq!(v["nilpotency_class"], 2);
    assert_eq!(v["valency"], 4);
    assert_eq!(v["thin_residue"], serde_json::json!([0, 1]));
    assert_eq!(v["solvable_chain"]["quotient_orders"], serde_json::json!([2, 2]));
    assert_eq!(v["primes"][0]["sylow"], serde_json::json!([[0, 1, 2]]));

    let k2 = hg(&["analyze", "--json", path(&data("k2.hgt"))]);
    let v: serde_json::Value = serde_json::from_slice(&k2.stdout).unwrap();
    assert_eq!(v["commutative"], true);
    assert_eq!(v["residually_thin"], false);
    assert_eq!(v["weakly_nilpotent"], false);
    assert_eq!(v["primes"], serde_json::json!([]));

    let t1 = hg(&["analyze", path(&data("t1.hgt"))]);
    assert_eq!(t1.status.code(), Some(0));
    assert!(stdout(&t1).contains("weakly nilpotent: yes (class 0)"));

    let non_rt = hg(&["analyze", "--primes", "2", path(&data("k2.hgt"))]);
    assert_eq!(non_rt.status.code(), Some(3));
}

#[test]
fn quotients() {
    let out = hg(&["quotient", path(&data("w3.hgt")), "--by", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# class 1: {2}"));
    assert_eq!(hgt::parse(&text).unwrap(), c2());

    let same = hg(&["quotient", path(&data("k2.hgt")), "--by", "0"]);
    assert_eq!(canonical_form(&hgt::parse(&stdout(&same)).unwrap()), canonical_form(&k2()));

    let not_closed = hg(&["quotient", path(&data("w3.hgt")), "--by", "0,2"]);
    assert_eq!(not_closed.status.code(), Some(3));
    assert!(stderr(&not_closed).contains("not closed"));
}

#[test]
fn enumerate_verify_search() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("catalog");
    for order in ["1", "2", "3"] {
        let out = hg(&["enumerate", "--order", order, "--out", path(&catalog)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let forms: Vec<_> = ["h2_001.hgt", "h2_002.hgt"]
        .iter()
        .map(|f| canonical_form(&hgt::parse(&std::fs::read_to_string(catalog.join(f)).unwrap()).unwrap()))
        .collect();
    assert!(forms.contains(&canonical_form(&c2())) && forms.contains(&canonical_form(&k2())));
    let index = std::fs::read_to_string(catalog.join("index.txt")).unwrap();
    assert_eq!(index.lines().count(), 13);
    assert!(catalog.join(format!("h3_{:03}.hgt", 10)).exists());

    let listed = hg(&["enumerate", "--order", "3", "--filter", "weakly-nilpotent"]);
    assert!(stdout(&listed).contains("# order 3: 2 classes"));

    let verify = hg(&["verify", "--catalog", path(&catalog), "--theorem", "all"]);
    assert_eq!(verify.status.code(), Some(0), "{}", stdout(&verify));
    assert!(!stdout(&verify).contains("FAIL"));

    let one = hg(&["verify", "--catalog", path(&catalog), "--theorem", "sylow-strongly-normal", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["members"], 13);
    assert_eq!(v["coverage"][0]["check"], "sylow-strongly-normal");
    assert_eq!(v["coverage"][0]["fails"], 0);

    let unknown = hg(&["verify", "--catalog", path(&catalog), "--theorem", "nope"]);
    assert_eq!(unknown.status.code(), Some(1));

    let found = dir.path().join("found");
    let q57 = hg(&["search", "--question", "q57", "--max-order", "1", "--out", path(&found)]);
    assert!(stdout(&q57).contains("exhausted(1)"));
    let outcome: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(found.join("q57.json")).unwrap()).unwrap();
    assert_eq!(outcome["status"], "exhausted");

    let q56 = hg(&["search", "--question", "q56", "--max-order", "2", "--out", path(&found)]);
    assert_eq!(q56.status.code(), Some(0));
    assert!(found.join("q56.json").exists());

    let bad = hg(&["search", "--question", "q99", "--max-order", "2", "--out", path(&found)]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn budgets() {
    let out = Command::new(env!("CARGO_BIN_EXE_hg"))
        .args(["enumerate", "--order", "5"])
        .env("HG_BUDGET_SECS", "0.000001")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let unbudgeted = Command::new(env!("CARGO_BIN_EXE_hg"))
        .args(["enumerate", "--order", "5"])
        .env_remove("HG_BUDGET_SECS")
        .output()
        .unwrap();
    assert_eq!(unbudgeted.status.code(), Some(1));
}

#[test]
fn w3_fixture_file_matches_library() {
    let text = std::fs::read_to_string(data("w3.hgt")).unwrap();
    assert_eq!(hgt::parse(&text).unwrap(), w3());
}
