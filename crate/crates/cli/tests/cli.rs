//! End-to-end tests of the `modalc` binary: exit codes, the JSON output
//! schema, and the translate → hilbert-check pipeline.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn modalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn modalc_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modalc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn check_exit_codes() {
    let ok = modalc(&["check", "--system", "t", "; x:[]p |- let box u = x in u : p"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).starts_with("ok:"));

    let fail = modalc(&["check", "--system", "k", "; x:[]p |- let box u = x in u : p"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("modal variable"));

    let err = modalc(&["check", "--system", "k4", "this is (not (valid"]);
    assert_eq!(err.status.code(), Some(2));
    assert!(stdout(&err).starts_with("error:"));

    let usage = modalc(&["check", "--system", "zz", "; |- \\x:p. x"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn check_ascription_mismatch_fails() {
    let out = modalc(&["check", "--system", "k", "; x:p |- x : q"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ascribes"));
}

#[test]
fn check_multiple_judgments_and_stdin() {
    let src = "# two judgments\n; x:p |- x : p\n\nu:p ; |- box u : []p\n";
    let out = modalc_stdin(&["check", "--system", "k", "-"], src);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("ok:")).count(), 2);
    // same verdicts in the other order
    let flipped = "u:p ; |- box u : []p\n\n; x:p |- x : p\n";
    let out2 = modalc_stdin(&["check", "--system", "k", "-"], flipped);
    assert_eq!(out2.status.code(), Some(0));
}

#[test]
fn check_verbose_prints_derivation() {
    let out = modalc(&["check", "--system", "t", "--verbose", "; x:[]p |- let box u = x in u"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[[]E]"), "{}", text);
    assert!(text.contains("[[]var]"), "{}", text);
}

#[test]
fn json_schema_is_stable() {
    let out = modalc(&["check", "--system", "t", "--json", "; x:[]p |- let box u = x in u"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["command"], "check");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["data"]["system"], "t");
    assert_eq!(v["data"]["results"][0]["status"], "ok");
    assert_eq!(v["data"]["results"][0]["type"], "p");
    assert!(v["diagnostics"].as_array().unwrap().is_empty());

    // the golden shape: exactly these four top-level keys
    let obj = v.as_object().unwrap();
    let mut keys: Vec<_> = obj.keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["command", "data", "diagnostics", "status"]);
}

#[test]
fn json_diagnostics_on_failure() {
    let out = modalc(&["check", "--system", "k", "--json", "u:p ; |- u"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "fail");
    let diags = v["diagnostics"].as_array().unwrap();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0]["severity"], "error");
    assert!(diags[0]["message"].as_str().unwrap().contains("modal variable"));
}

#[test]
fn normalize_gl_example() {
    let out = modalc(&["normalize", "--system", "gl", "let box u = fix z:[]p. y in <u, u>"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "<y, y>");
}

#[test]
fn normalize_cc_and_trace() {
    let out = modalc(&[
        "normalize", "--system", "k", "--cc", "--trace",
        "fst (let box u = x in <u, u>)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cc-proj"), "{}", text);
    assert!(text.trim_end().ends_with("let box u = x in u"), "{}", text);
}

#[test]
fn normalize_fuel_flag_and_env() {
    let fail = modalc(&["normalize", "--system", "k", "--fuel", "1", "(\\x:p. x) ((\\y:p. y) z)"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("fuel"));

    let out = Command::new(env!("CARGO_BIN_EXE_modalc"))
        .args(["normalize", "--system", "k", "(\\x:p. x) ((\\y:p. y) z)"])
        .env("MODALC_FUEL", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "MODALC_FUEL not honored");
}

#[test]
fn eq_verdicts() {
    let equal = modalc(&["eq", "--system", "k", "; x:[]p |- let box u = x in box u = x : []p"]);
    assert_eq!(equal.status.code(), Some(0));
    assert!(stdout(&equal).starts_with("equal"));

    let not = modalc(&["eq", "--system", "k", "; y:p |- \\x:p. x = \\x:p. y : p -> p"]);
    assert_eq!(not.status.code(), Some(1));
    assert!(stdout(&not).starts_with("not proved equal"));

    let gl = modalc(&["eq", "--system", "gl", "; x:[]p |- x = x : []p"]);
    assert_eq!(gl.status.code(), Some(2));
}

#[test]
fn hilbert_check_script() {
    let script = "assume []p\ngoal p\nproof (mp (ax T (p)) (assn 0))\n";
    let out = modalc_stdin(&["hilbert-check", "--logic", "ct", "-"], script);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // T is not an axiom of CK
    let out = modalc_stdin(&["hilbert-check", "--logic", "ck", "-"], script);
    assert_eq!(out.status.code(), Some(1));

    // NEC under assumptions is rejected
    let bad = "assume p\ngoal []p\nproof (nec (assn 0))\n";
    let out = modalc_stdin(&["hilbert-check", "--logic", "ck", "-"], bad);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn translate_pipes_into_hilbert_check() {
    for (sys, logic, judgment) in [
        ("k", "ck", "; |- \\f:[](p -> q). \\x:[]p. let box g = f in let box a = x in box (g a)"),
        ("k4", "ck4", "; |- \\x:[]p. let box u = x in box box u"),
        ("t", "ct", "; x:[]p |- let box u = x in u"),
        ("s4", "cs4", "; |- \\x:[]p. let box u = x in box box u"),
        ("gl", "cgl", "; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z"),
    ] {
        let t = modalc(&["translate", "--system", sys, judgment]);
        assert_eq!(t.status.code(), Some(0), "translate failed for {}", sys);
        let script = stdout(&t);
        let check = modalc_stdin(&["hilbert-check", "--logic", logic, "-"], &script);
        assert_eq!(
            check.status.code(),
            Some(0),
            "round trip failed for {}: {}",
            sys,
            stdout(&check)
        );
    }
}

#[test]
fn translate_rejects_ill_typed() {
    let out = modalc(&["translate", "--system", "k", "; |- \\x:[]p. let box u = x in u"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn interp_prints_table() {
    let out = modalc(&["interp", "--system", "k", "--model", "identity", "; x:[]p |- let box u = x in box u"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0 |-> 0"), "{}", text);
    assert!(text.contains("1 |-> 1"), "{}", text);

    let sized = modalc(&[
        "interp", "--system", "k", "--model", "identity", "--size", "p=3",
        "; x:[]p |- let box u = x in box u",
    ]);
    assert!(stdout(&sized).contains("2 |-> 2"));
}

#[test]
fn interp_refuses_unverified_model() {
    let out = modalc(&["interp", "--system", "t", "--model", "unit", "; x:[]p |- let box u = x in u"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("epsilon-natural"), "{}", stdout(&out));
}

#[test]
fn verify_model_reports() {
    let ok = modalc(&["verify-model", "--system", "s4", "--model", "identity"]);
    assert_eq!(ok.status.code(), Some(0));

    let fail = modalc(&["verify-model", "--system", "t", "--model", "unit"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("epsilon-natural"));

    let diag = modalc(&["verify-model", "--system", "s4", "--model", "diag"]);
    assert_eq!(diag.status.code(), Some(1));
    assert!(stdout(&diag).contains("counit-right"));

    let json = modalc(&["verify-model", "--system", "k4", "--model", "diag", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["status"], "ok");
    assert!(v["data"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn file_input_works() {
    let dir = std::env::temp_dir().join(format!("modalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("judgments.dk");
    std::fs::write(&path, "; x:p |- x : p\n\n; y:q |- y : q\n").unwrap();
    let out = modalc(&["check", "--system", "k", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    std::fs::remove_dir_all(&dir).ok();
}
