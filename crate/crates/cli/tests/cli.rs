use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = cayley(&full);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json report")
}

struct Fixtures {
    dir: TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let f = Fixtures { dir: TempDir::new().unwrap() };
        f.write("rot_pi.txt", "2\n-1 0\n0 -1\n");
        f.write("minus_id2.txt", "2\n-1 0\n0 -1\n");
        f.write("id3.txt", "3\n1 0 0\n0 1 0\n0 0 1\n");
        f.write("reflect.txt", "2\n1 0\n0 -1\n");
        f.write("zeros3.txt", "3\n0 0 0\n0 0 0\n0 0 0\n");
        f.write("singular.txt", "3\n1 2 3\n2 4 6\n1 1 1\n");
        f.write("rot_q.txt", "2\n3/5 4/5\n-4/5 3/5\n");
        f.write("not_orth.txt", "2\n1 1\n0 1\n");
        f.write("garbage.txt", "2\n1 x\n0 1\n");
        let mut big = String::from("13\n");
        for _ in 0..13 {
            big.push_str(&vec!["0"; 13].join(" "));
            big.push('\n');
        }
        f.write("big13.txt", &big);
        f
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| match x {
                    Value::String(s) => s.parse().unwrap(),
                    other => other.as_f64().unwrap(),
                })
                .collect()
        })
        .collect()
}

#[test]
fn represent_rotation_by_pi_uses_squared_cayley() {
    let f = Fixtures::new();
    let r = json(&["represent", &f.path("rot_pi.txt")]);
    assert_eq!(r["command"], "represent");
    assert_eq!(r["backend"], "float");
    assert_eq!(r["result"]["representation"], "SquaredCayley");
    // S = inverse_cayley of the quarter turn; its square reproduces -I.
    assert_eq!(matrix(&r["result"]["skew"]), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
    assert!(r["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn represent_identity_plain_is_zero() {
    let f = Fixtures::new();
    let r = json(&["represent", &f.path("id3.txt"), "--mode", "plain"]);
    assert_eq!(r["result"]["representation"], "PlainCayley");
    assert_eq!(matrix(&r["result"]["skew"]), vec![vec![0.0; 3]; 3]);
}

#[test]
fn represent_reflection_is_signed() {
    let f = Fixtures::new();
    let r = json(&["represent", &f.path("reflect.txt")]);
    assert_eq!(r["result"]["representation"], "SignedCayley");
    assert_eq!(r["result"]["signs"], serde_json::json!([1, -1]));
    assert_eq!(matrix(&r["result"]["skew"]), vec![vec![0.0; 2]; 2]);
}

#[test]
fn represent_every_mode_on_a_haar_rotation() {
    let f = Fixtures::new();
    let out = cayley(&["gen", "haar", "--n", "6", "--seed", "11"]);
    assert!(out.status.success());
    let p = f.write("haar6.txt", &stdout(&out));
    for mode in ["plain", "squared", "two-factor", "signed"] {
        let r = json(&["represent", p.to_str().unwrap(), "--mode", mode]);
        assert!(r["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-9, "{mode}: {r}");
        assert!(r["residuals"]["skew"].as_f64().unwrap() <= 1e-12, "{mode}");
    }
}

#[test]
fn represent_exact_rational_rotation() {
    let f = Fixtures::new();
    let r = json(&["represent", &f.path("rot_q.txt")]);
    assert_eq!(r["backend"], "rational");
    assert_eq!(r["result"]["representation"], "PlainCayley");
    assert_eq!(r["result"]["skew"]["rows"], serde_json::json!([["0", "-1/2"], ["1/2", "0"]]));
    assert_eq!(r["residuals"]["reconstruction"], 0.0);
}

#[test]
fn represent_exact_obstructed_rotation_falls_back_to_signs() {
    let f = Fixtures::new();
    let r = json(&["--exact", "represent", &f.path("rot_pi.txt")]);
    assert_eq!(r["backend"], "rational");
    assert_eq!(r["result"]["representation"], "SignedCayley");
    assert_eq!(r["residuals"]["reconstruction"], 0.0);
}

#[test]
fn represent_mode_errors() {
    let f = Fixtures::new();
    assert_eq!(cayley(&["represent", &f.path("rot_pi.txt"), "--mode", "plain"]).status.code(), Some(3));
    assert_eq!(cayley(&["represent", &f.path("reflect.txt"), "--mode", "squared"]).status.code(), Some(3));
    assert_eq!(cayley(&["--exact", "represent", &f.path("rot_q.txt"), "--mode", "two-factor"]).status.code(), Some(3));
    assert_eq!(cayley(&["represent", &f.path("not_orth.txt")]).status.code(), Some(3));
}

#[test]
fn force_skips_the_orthogonality_gate() {
    let f = Fixtures::new();
    let out = cayley(&["--json", "represent", &f.path("not_orth.txt"), "--force", "--mode", "plain"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["residuals"]["orthogonality"].as_f64().unwrap() > 0.5);
}

#[test]
fn tol_loosens_the_orthogonality_gate() {
    let f = Fixtures::new();
    let p = f.write("near.txt", "2\n1.000001 0\n0 1\n");
    let p = p.to_str().unwrap();
    assert_eq!(cayley(&["represent", p]).status.code(), Some(3));
    assert_eq!(cayley(&["--tol", "1e-4", "represent", p]).status.code(), Some(0));
}

#[test]
fn parse_and_io_errors_exit_2() {
    let f = Fixtures::new();
    assert_eq!(cayley(&["represent", &f.path("garbage.txt")]).status.code(), Some(2));
    assert_eq!(cayley(&["represent", &f.path("missing.txt")]).status.code(), Some(2));
    assert_eq!(cayley(&["perturb", &f.path("zeros3.txt"), "--c", "1,1"]).status.code(), Some(2));
    assert_eq!(cayley(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn perturb_minus_identity() {
    let f = Fixtures::new();
    let r = json(&["perturb", &f.path("minus_id2.txt"), "--c", "1,1", "--oracle"]);
    assert_eq!(r["result"]["signs"], serde_json::json!([-1, -1]));
    assert_eq!(r["result"]["determinant"].as_f64(), Some(4.0));
    assert_eq!(r["result"]["oracle"]["survivors"], 1);
    assert_eq!(r["result"]["oracle"]["total"], 4);
    assert_eq!(r["result"]["oracle"]["contains_greedy"], true);
    assert!(r["result"]["warning"].is_string());
}

#[test]
fn perturb_zero_matrix_keeps_plus_signs() {
    let f = Fixtures::new();
    let r = json(&["perturb", &f.path("zeros3.txt"), "--c", "1,1,1"]);
    assert_eq!(r["result"]["signs"], serde_json::json!([1, 1, 1]));
    assert_eq!(r["result"]["determinant"].as_f64(), Some(1.0));
}

#[test]
fn perturb_tiny_exact_scale_gives_a_nonzero_fraction() {
    let f = Fixtures::new();
    let r = json(&["perturb", &f.path("singular.txt"), "--c-scale", "1e-8", "--exact"]);
    assert_eq!(r["backend"], "rational");
    let det = r["result"]["determinant"].as_str().unwrap();
    assert!(det.contains('/'), "{det}");
    assert_ne!(det, "0");
    assert_eq!(r["result"]["certified"], true);
    assert!(r["result"].get("warning").is_none());
    assert_eq!(r["residuals"]["determinant"], 0.0);
}

#[test]
fn perturb_error_codes() {
    let f = Fixtures::new();
    assert_eq!(cayley(&["perturb", &f.path("zeros3.txt"), "--c", "1,0,1"]).status.code(), Some(3));
    assert_eq!(cayley(&["perturb", &f.path("big13.txt"), "--oracle"]).status.code(), Some(4));
    assert_eq!(cayley(&["perturb", &f.path("big13.txt")]).status.code(), Some(0));
}

#[test]
fn perturb_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(["--json", "perturb", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"2\n-1 0\n0 -1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["signs"], serde_json::json!([-1, -1]));
}

#[test]
fn checks_examples() {
    let f = Fixtures::new();
    let out = cayley(&["checks", "--sum-zero", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS sum-zero n=3"));

    let out = cayley(&["checks", "--det-identity", "--trials", "50", "--n", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("50/50"));

    let r = json(&["checks", "--enumerate", &f.path("minus_id2.txt")]);
    let detail = r["result"]["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.starts_with("1 surviving sign vector(s) of 4"), "{detail}");

    let r = json(&["checks"]);
    let checks = r["result"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 3);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn checks_enforce_the_enumeration_bound() {
    assert_eq!(cayley(&["checks", "--sum-zero", "13"]).status.code(), Some(4));
    assert_eq!(cayley(&["checks", "--chain", "13"]).status.code(), Some(4));
}

#[test]
fn gen_is_deterministic_and_well_formed() {
    let a = stdout(&cayley(&["gen", "haar", "--n", "5", "--seed", "3"]));
    let b = stdout(&cayley(&["gen", "haar", "--n", "5", "--seed", "3"]));
    let c = stdout(&cayley(&["gen", "haar", "--n", "5", "--seed", "4"]));
    assert_eq!(a, b);
    assert_ne!(a, c);

    let r = json(&["gen", "haar", "--n", "5", "--seed", "3"]);
    assert!(r["residuals"]["orthogonality"].as_f64().unwrap() <= 1e-12);
    assert!(r["residuals"]["determinant"].as_f64().unwrap() <= 1e-12);
    let r = json(&["gen", "haar", "--n", "4", "--improper"]);
    assert!(r["residuals"]["determinant"].as_f64().unwrap() <= 1e-12);

    assert_eq!(stdout(&cayley(&["gen", "haar", "--n", "1"])), "1\n1\n");

    let r = json(&["gen", "singular", "--n", "4", "--rank", "3", "--seed", "9"]);
    assert_eq!(r["result"]["rank"], 3);
    assert_eq!(cayley(&["gen", "singular", "--n", "3", "--rank", "3"]).status.code(), Some(3));

    let out = cayley(&["gen", "skew", "--n", "3"]);
    assert!(out.status.success());
    let out = cayley(&["gen", "int", "--n", "3"]);
    assert!(out.status.success());
}

fn reparse_input(dir: &Path, r: &Value) -> PathBuf {
    let p = dir.join("embedded.json");
    std::fs::write(&p, serde_json::to_string(&r["result"]["input"]).unwrap()).unwrap();
    p
}

#[test]
fn json_reports_round_trip() {
    let f = Fixtures::new();
    let first = json(&["--exact", "perturb", &f.path("singular.txt"), "--c-scale", "1/3"]);
    let again = json(&["perturb", reparse_input(f.dir.path(), &first).to_str().unwrap(), "--c-scale", "1/3"]);
    assert_eq!(first["result"], again["result"]);
    assert_eq!(first["input_digest"], again["input_digest"]);

    let out = cayley(&["gen", "haar", "--n", "5", "--seed", "21"]);
    let p = f.write("haar5.txt", &stdout(&out));
    let first = json(&["represent", p.to_str().unwrap()]);
    let again = json(&["represent", reparse_input(f.dir.path(), &first).to_str().unwrap()]);
    assert_eq!(first["result"]["representation"], again["result"]["representation"]);
    let a = matrix(&first["result"]["skew"]);
    let b = matrix(&again["result"]["skew"]);
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
    for key in ["reconstruction", "orthogonality", "skew"] {
        let d = first["residuals"][key].as_f64().unwrap() - again["residuals"][key].as_f64().unwrap();
        assert!(d.abs() <= 1e-12, "{key}");
    }
}

#[test]
fn text_reports_show_seed_and_backend() {
    let f = Fixtures::new();
    let text = stdout(&cayley(&["--seed", "42", "perturb", &f.path("minus_id2.txt")]));
    assert!(text.contains("seed: 42"));
    assert!(text.contains("backend: float"));
    assert!(text.contains("signs: (-1, -1)"));
}
