use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::{json, Value};
use tempfile::TempDir;

fn qlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlift")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, v: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, v).unwrap();
    p
}

fn json_out(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Self { dir: TempDir::new().unwrap() };
        f.put("half.json", &json!({"dim": 2, "re": [[0.5, 0], [0, 0.5]]}));
        f.put("zero.json", &json!({"dim": 2, "re": [[1, 0], [0, 0]]}));
        f.put("one.json", &json!({"dim": 2, "re": [[0, 0], [0, 1]]}));
        f.put("eq.json", &json!({"span": [[1, 0, 0, 0], [0, 0, 0, 1]]}));
        f.put("e00.json", &json!({"span": [[1, 0, 0, 0]]}));
        f.put("flip.json", &json!({"weights": [0.5, 0.5]}));
        f.put("flip_exact.json", &json!({"num": [1, 1], "den": [2, 2]}));
        f.put("r00.json", &json!({"m": 2, "n": 2, "pairs": [[0, 0]]}));
        f.put("req.json", &json!({"m": 2, "n": 2, "pairs": [[0, 0], [1, 1]]}));
        f
    }

    fn put(&self, name: &str, v: &Value) -> PathBuf {
        write(self.dir.path(), name, &v.to_string())
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }
}

#[test]
fn check_lifting_and_verify_round_trip() {
    let f = Fixture::new();
    let out = f.path("verdict.json");
    let status = qlift(&[
        "check-lifting", "--rho1", &f.path("half.json"), "--rho2", &f.path("half.json"),
        "--subspace", &f.path("eq.json"), "--tol", "1e-7", "--out", &out,
    ]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "exists");
    assert_eq!(v["verified"], true);
    assert!(v["gap"].as_f64().unwrap() <= 1e-8);

    let w = json_out(&qlift(&[
        "verify-witness", "--witness", &out, "--rho1", &f.path("half.json"), "--rho2", &f.path("half.json"),
        "--subspace", &f.path("eq.json"),
    ]));
    assert_eq!(w["valid"], true);
    // the same witness does not fit a smaller subspace
    let w = json_out(&qlift(&[
        "verify-witness", "--witness", &out, "--rho1", &f.path("half.json"), "--rho2", &f.path("half.json"),
        "--subspace", &f.path("e00.json"),
    ]));
    assert_eq!(w["valid"], false);
}

#[test]
fn no_lifting_certificate_verifies() {
    let f = Fixture::new();
    let args = ["--rho1", &f.path("zero.json"), "--rho2", &f.path("one.json"), "--subspace", &f.path("e00.json")];
    let v = json_out(&qlift(&[&["check-lifting"], &args[..]].concat()));
    assert_eq!(v["verdict"], "not_exists");
    let cert = f.put("cert.json", &v);
    let c = json_out(&qlift(&[&["verify-certificate", "--certificate", cert.to_str().unwrap()], &args[..]].concat()));
    assert_eq!(c["valid"], true);
    // the hand certificate diag(1,0), diag(1,0)
    let hand = f.put("hand.json", &json!({
        "y1": {"dim": 2, "re": [[1, 0], [0, 0]]},
        "y2": {"dim": 2, "re": [[1, 0], [0, 0]]},
    }));
    let c = json_out(&qlift(&[&["verify-certificate", "--certificate", hand.to_str().unwrap()], &args[..]].concat()));
    assert_eq!(c["valid"], true);
    assert_eq!(c["slack_min_eigenvalue"].as_f64().unwrap(), 0.0);
}

#[test]
fn classical_and_cross_check() {
    let f = Fixture::new();
    let v = json_out(&qlift(&[
        "classical-check", "--mu1", &f.path("flip.json"), "--mu2", &f.path("flip.json"), "--relation", &f.path("r00.json"),
    ]));
    assert_eq!(v["verdict"], "not_exists");
    assert_eq!(v["mu1_mass"], 0.5);
    let v = json_out(&qlift(&[
        "classical-check", "--exact", "--mu1", &f.path("flip_exact.json"), "--mu2", &f.path("flip_exact.json"),
        "--relation", &f.path("req.json"),
    ]));
    assert_eq!(v["verdict"], "exists");
    assert_eq!(v["witness"]["num"], json!([[1, 0], [0, 1]]));
    assert_eq!(v["witness"]["den"], json!([[2, 1], [1, 2]]));

    for (rel, tag) in [("req.json", "exists"), ("r00.json", "not_exists")] {
        let r = json_out(&qlift(&[
            "cross-check", "--mu1", &f.path("flip.json"), "--mu2", &f.path("flip.json"), "--relation", &f.path(rel),
        ]));
        assert_eq!(r["agreement"], true);
        assert_eq!(r["classical_verdict"], tag);
        assert_eq!(r["quantum_verdict"], tag);
    }
    // exact mode without fractions is an input error
    let o = qlift(&["classical-check", "--exact", "--mu1", &f.path("flip.json"), "--mu2", &f.path("flip.json"), "--relation", &f.path("r00.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn demos() {
    let b = json_out(&qlift(&["demo", "bell", "--dim", "2"]));
    assert_eq!(b["verification"]["valid"], true);
    let r = b["verification"]["marginal_residuals"].as_array().unwrap();
    assert!(r.iter().all(|x| x.as_f64().unwrap() <= 1e-12));
    assert_eq!(b["solver"]["verdict"], "exists");
    assert!((b["witness"]["re"][0][3].as_f64().unwrap() - 0.5).abs() <= 1e-12);

    let n = json_out(&qlift(&["demo", "negation"]));
    assert_eq!(n["classical"]["witness"]["weights"], json!([[0.0, 0.5], [0.5, 0.0]]));
    assert_eq!(n["verification"]["valid"], true);

    let f = Fixture::new();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let u = f.put("u.json", &json!({"dim": 2, "re": [[h, h], [h, -h]]}));
    let d = json_out(&qlift(&["demo", "unitary", "--file", u.to_str().unwrap()]));
    assert_eq!(d["is_coupling"], true);
    assert_eq!(d["verification"]["valid"], true);
    let nu = f.put("nu.json", &json!({"dim": 2, "re": [[1, 1], [0, 1]]}));
    assert_eq!(qlift(&["demo", "unitary", "--file", nu.to_str().unwrap()]).status.code(), Some(1));

    let nl = json_out(&qlift(&["demo", "no-lifting"]));
    assert_eq!(nl["result"]["verdict"], "not_exists");
    assert_eq!(nl["verification"]["valid"], true);
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    // usage errors
    assert_eq!(qlift(&["check-lifting"]).status.code(), Some(1));
    assert_eq!(qlift(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qlift(&["--help"]).status.code(), Some(0));
    assert_eq!(qlift(&["demo", "bell", "--tol", "-1"]).status.code(), Some(1));
    // missing file
    let o = qlift(&["check-lifting", "--rho1", "/nonexistent", "--rho2", &f.path("half.json"), "--subspace", &f.path("eq.json")]);
    assert_eq!(o.status.code(), Some(1));
    // unequal traces
    f.put("quarter.json", &json!({"dim": 2, "re": [[0.25, 0], [0, 0.25]]}));
    let o = qlift(&["check-lifting", "--rho1", &f.path("quarter.json"), "--rho2", &f.path("half.json"), "--subspace", &f.path("eq.json")]);
    assert_eq!(o.status.code(), Some(1));
    // an unreachable accuracy target is a numerical failure
    let o = qlift(&[
        "check-lifting", "--rho1", &f.path("half.json"), "--rho2", &f.path("half.json"), "--subspace", &f.path("eq.json"),
        "--eps-solve", "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

fn mangle(text: &str, how: u8, at: usize) -> String {
    let cut = 1 + at % (text.len() - 1);
    match how {
        0 => text[..cut].to_string(),
        1 => {
            // replace the first number at or after `cut` with NaN
            let bytes = text.as_bytes();
            let start = (cut..text.len()).chain(0..cut).find(|&i| bytes[i].is_ascii_digit()).unwrap();
            let end = (start..text.len()).find(|&i| !matches!(bytes[i], b'0'..=b'9' | b'.' | b'e' | b'-')).unwrap();
            format!("{}NaN{}", &text[..start], &text[end..])
        }
        _ => text.replacen("\"dim\":2", "\"dim\":3", 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Malformed inputs never exit 0, and a nonzero exit prints no result.
    #[test]
    fn malformed_inputs_fail_cleanly(which in 0usize..3, how in 0u8..3, at in any::<usize>()) {
        let f = Fixture::new();
        let name = ["half.json", "eq.json", "half.json"][which];
        let original = fs::read_to_string(f.path(name)).unwrap();
        let broken = mangle(&original, how, at);
        prop_assume!(broken != original);
        let bad = write(f.dir.path(), "bad.json", &broken);
        let bad = bad.to_str().unwrap();
        let (r1, r2, x) = match which {
            0 => (bad.to_string(), f.path("half.json"), f.path("eq.json")),
            1 => (f.path("half.json"), f.path("half.json"), bad.to_string()),
            _ => (f.path("half.json"), bad.to_string(), f.path("eq.json")),
        };
        let o = qlift(&["check-lifting", "--rho1", &r1, "--rho2", &r2, "--subspace", &x]);
        match o.status.code() {
            Some(0) => {
                // a mangling can still be valid input; then a verdict must be present
                let v: Value = serde_json::from_slice(&o.stdout).unwrap();
                prop_assert!(v["verdict"] == "exists" || v["verdict"] == "not_exists");
            }
            Some(1) => prop_assert!(o.stdout.is_empty() && !o.stderr.is_empty()),
            other => prop_assert!(false, "unexpected exit {other:?} for {broken}"),
        }
    }
}
