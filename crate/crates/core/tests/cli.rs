use std::path::PathBuf;
use std::process::Command;

use cofrob::cli::{run, Outcome, EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_UNKNOWN};

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cofrob-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Dir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn cofrob(args: &[&str]) -> Outcome {
    run(args.iter().map(|s| s.to_string()))
}

fn preset(dir: &Dir, name: &str, expr: &str) -> String {
    let out = cofrob(&["zoo", expr]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    dir.file(name, &out.stdout)
}

fn json(out: &Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn yes_certificate_is_accepted_by_verify() {
    let dir = Dir::new("yes");
    let ext = preset(&dir, "ext.json", "trivial_extension(dual_numbers)");
    let cert = dir.path("cert.json");
    let out = cofrob(&["check-frobenius", &ext, "--certificate", &cert]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["verdict"], "yes");
    let v = cofrob(&["verify", &ext, &cert]);
    assert_eq!(v.code, EXIT_OK, "{}", v.stderr);
    assert_eq!(json(&v)["valid"], true);
}

#[test]
fn no_verdict_carries_the_determinant_transcript() {
    let dir = Dir::new("no");
    let ext = preset(&dir, "ext.json", "trivial_extension(dual_of_square_zero_local(2))");
    let out = cofrob(&["check-frobenius", &ext]);
    assert_eq!(out.code, EXIT_NO);
    let doc = json(&out);
    assert_eq!(doc["verdict"], "no");
    assert_eq!(doc["evidence"]["reason"], "determinant-family-vanishes");
    assert!(doc["evidence"]["route"]["route"].is_string());
}

#[test]
fn missing_counit_is_an_input_error_with_location() {
    let dir = Dir::new("schema");
    let file = dir.file("c.json", r#"{"field": {"kind": "rationals"}, "dim": 1, "delta": [[0, 0, 0, "1"]]}"#);
    let out = cofrob(&["validate", &file]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("epsilon") && out.stderr.contains("line 1"), "{}", out.stderr);
}

#[test]
fn validate_reports_violations() {
    let dir = Dir::new("validate");
    let bad = dir.file(
        "c.json",
        r#"{"field": {"kind": "prime", "p": 5}, "dim": 2, "delta": [[0, 0, 0, "1"], [1, 1, 1, "1"], [1, 0, 1, "1"]], "epsilon": [[0, "1"], [1, "1"]]}"#,
    );
    let out = cofrob(&["validate", &bad]);
    assert_eq!(out.code, EXIT_NO);
    let doc = json(&out);
    assert_eq!(doc["valid"], false);
    assert!(doc["violations"].as_array().unwrap().iter().all(|v| v["basis_index"] == 1));
    let good = preset(&dir, "g.json", "grouplike(3)");
    assert_eq!(cofrob(&["validate", &good]).code, EXIT_OK);
}

#[test]
fn bad_scalar_names_its_path() {
    let dir = Dir::new("scalar");
    let file = dir.file(
        "c.json",
        r#"{"field": {"kind": "rationals"}, "dim": 1, "delta": [[0, 0, 0, "1/0"]], "epsilon": [[0, "1"]]}"#,
    );
    let out = cofrob(&["validate", &file]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("delta[0]"), "{}", out.stderr);
}

#[test]
fn verify_rejects_foreign_and_tampered_certificates() {
    let dir = Dir::new("verify");
    let ext = preset(&dir, "ext.json", "trivial_extension(dual_numbers)");
    let other = preset(&dir, "other.json", "identity_extension(dual_numbers)");
    let cert = dir.path("cert.json");
    assert_eq!(cofrob(&["check-frobenius", &ext, "--certificate", &cert]).code, EXIT_OK);
    let foreign = cofrob(&["verify", &other, &cert]);
    assert_eq!(foreign.code, EXIT_INPUT);
    assert!(foreign.stderr.contains("extension_sha256"), "{}", foreign.stderr);

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["beta"][0][1] = "5".into();
    let tampered = dir.file("tampered.json", &doc.to_string());
    let out = cofrob(&["verify", &ext, &tampered]);
    assert_eq!(out.code, EXIT_NO);
    assert_eq!(json(&out)["valid"], false);

    doc["beta"][0].as_array_mut().unwrap().pop();
    let short = dir.file("short.json", &doc.to_string());
    assert_eq!(cofrob(&["verify", &ext, &short]).code, EXIT_INPUT);
}

#[test]
fn primal_route_reports_unknown_when_sampling_is_exhausted() {
    let dir = Dir::new("unknown");
    let ext = preset(&dir, "ext.json", "trivial_extension(dual_of_square_zero_local(2))");
    let out = cofrob(&["check-frobenius", &ext, "--route", "primal", "--budget", "0", "--trials", "4"]);
    assert_eq!(out.code, EXIT_UNKNOWN);
    assert_eq!(json(&out)["verdict"], "unknown");
    assert_eq!(json(&out)["trials"], 4);
}

#[test]
fn budget_defaults_to_the_environment() {
    let dir = Dir::new("env");
    let ext = preset(&dir, "ext.json", "trivial_extension(dual_of_square_zero_local(2))");
    let exe = env!("CARGO_BIN_EXE_cofrob");
    let with = |budget: &str| {
        Command::new(exe)
            .args(["check-frobenius", &ext, "--route", "primal", "--trials", "2"])
            .env("COFROB_BUDGET", budget)
            .output()
            .unwrap()
    };
    assert_eq!(with("0").status.code(), Some(EXIT_UNKNOWN));
    assert_eq!(with("100000").status.code(), Some(EXIT_NO));
    let bad = with("lots");
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("COFROB_BUDGET"));
}

#[test]
fn structural_commands_emit_documents() {
    let dir = Dir::new("docs");
    let ext = preset(&dir, "ext.json", "set_map_extension([0,0,1],2)");
    let c = preset(&dir, "c.json", "dual_numbers");

    let sq = cofrob(&["cotensor", &ext]);
    assert_eq!(sq.code, EXIT_OK);
    assert_eq!(json(&sq)["ambient_dim"], 9);
    assert_eq!(json(&sq)["dim"], 5);

    let dual = cofrob(&["dualize", &c]);
    assert_eq!(dual.code, EXIT_OK);
    assert_eq!(json(&dual)["unit"], serde_json::json!(["1", "0"]));
    assert_eq!(cofrob(&["dualize", &ext]).code, EXIT_OK);

    let sys = cofrob(&["frobenius-system", &c]);
    assert_eq!(sys.code, EXIT_OK);
    assert_eq!(json(&sys)["exists"], true);
    let local = preset(&dir, "l.json", "dual_of_square_zero_local(2)");
    assert_eq!(json(&cofrob(&["frobenius-system", &local]))["exists"], false);

    let listing = cofrob(&["zoo"]);
    assert_eq!(listing.code, EXIT_OK);
    assert!(json(&listing)["presets"].as_array().unwrap().len() >= 9);
    assert_eq!(cofrob(&["zoo", "nonsense(3)"]).code, EXIT_INPUT);
    assert_eq!(cofrob(&["zoo", "grouplike(2)", "--field", "4"]).code, EXIT_INPUT);
    assert_eq!(cofrob(&["no-such-command"]).code, EXIT_INPUT);
}

#[test]
fn comodule_commands() {
    let dir = Dir::new("comod");
    let right = dir.file(
        "r.json",
        r#"{"side": "right", "over": {"field": {"kind": "rationals"}, "dim": 2, "delta": [[0, 0, 0, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]], "epsilon": [[0, "1"]]}, "dim": 1, "coaction": [[0, 0, 0, "1"]]}"#,
    );
    let left = dir.file(
        "l.json",
        r#"{"side": "left", "over": {"field": {"kind": "rationals"}, "dim": 2, "delta": [[0, 0, 0, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]], "epsilon": [[0, "1"]]}, "dim": 1, "coaction": [[0, 0, 0, "1"]]}"#,
    );
    assert_eq!(cofrob(&["validate", &right]).code, EXIT_OK);
    let inj = cofrob(&["injective", &right]);
    assert_eq!(inj.code, EXIT_OK);
    assert_eq!(json(&inj)["injective"], false);
    let hom = cofrob(&["hom", &right, &right]);
    assert_eq!(json(&hom)["dim"], 1);
    let ct = cofrob(&["cotensor", &right, &left]);
    assert_eq!(json(&ct)["dim"], 1);
    assert_eq!(cofrob(&["cotensor", &left, &right]).code, EXIT_INPUT);
}
