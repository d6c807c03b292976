//! End-to-end runs of the `twc` binary: exit codes, reports and the field override.

use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_twc");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn twc(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("TWC_FIELD").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

#[test]
fn check_algebra_passes_on_examples_and_fails_on_mutant() {
    for e in ["E1", "E2", "E3"] {
        let o = twc(&["check-algebra", e]);
        assert_eq!(o.status.code(), Some(0), "{e}: {}", stdout(&o));
    }
    let o = twc(&["check-algebra", &data("e3_unit_flip.twc")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("check=algebra-stasheff status=fail"), "{out}");
    assert!(out.contains("S_3 on [e,"), "{out}");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(twc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(twc(&["check-algebra", &data("missing.twc")]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("twc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.twc");
    std::fs::write(&bad, "[idempotents]\n1\n[basis]\ne 1 1 0 unit\n").unwrap();
    let o = twc(&["check-algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4:"), "{}", String::from_utf8_lossy(&o.stderr));
    let o = twc(&["confl", "make", &data("e2_maps.twc"), "--x", "C", "--y", "A", "--gamma", "u"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(twc(&["fuzz", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn field_override_from_environment() {
    let o = Command::new(BIN).args(["check-algebra", "E3"]).env("TWC_FIELD", "Fp:7").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field=Fp:7"));
    let o = Command::new(BIN).args(["check-algebra", "E3"]).env("TWC_FIELD", "Fp:8").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conflation_commands() {
    let f = data("e2_maps.twc");
    let ext = ["--x", "C", "--y", "A", "--gamma", "g"];
    let run = |cmd: &[&str]| {
        let mut args = vec!["confl"];
        args.extend_from_slice(cmd);
        let o = twc(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", stdout(&o));
        stdout(&o)
    };
    let out = run(&[&["make", &f][..], &ext].concat());
    assert!(out.contains("E.delta=[ (nu^0 * x * nu^-0, [[1]]) ]"), "{out}");
    assert!(run(&[&["check", &f][..], &ext].concat()).contains("special=pass"));
    assert!(run(&[&["push", &f][..], &ext, &["--along", "k"]].concat()).contains("ladder=pass"));
    assert!(run(&[&["pull", &f][..], &ext, &["--along", "m"]].concat()).contains("ladder=pass"));
    assert!(run(&["psi", &f, "--x", "C", "--class", "h"]).contains("round_trip=pass"));
    assert!(run(&["cone", &f, "--mor", "u"]).contains("certificate=pass"));
    assert!(run(&[&["rotate", &f][..], &ext].concat()).contains("certificate=pass"));
}

#[test]
fn triangle_commands() {
    let f = data("e2_maps.twc");
    for (cmd, key) in [("cone", "triangle=pass"), ("rotate", "triangle=pass"), ("tr3", "morphism_of_triangles=pass"), ("octa", "octahedron=pass")] {
        let o = twc(&["tri", cmd, &f, "--u", "u", "--v", "v"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
        assert!(stdout(&o).contains(key));
        let o = twc(&["tri", cmd, "E3", "--seed", "5"]);
        assert_eq!(o.status.code(), Some(0), "{cmd} fuzzed: {}", stdout(&o));
    }
    let o = twc(&["tri", "rotate", &f, "--u", "u", "--left"]);
    assert!(stdout(&o).contains("direction=left"));
    let o = twc(&["tri", "axioms", "--cases", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("status=pass checked=3").count(), 16);
}

#[test]
fn tw_validate_reports_witnesses() {
    let o = twc(&["tw-validate", "E2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("object=X dim=2 nil_index=2 mc_residue=0"), "{}", stdout(&o));
    let o = twc(&["tw-validate", &data("e2_maps.twc")]);
    assert!(stdout(&o).contains("morphism=u degree=-1 cocycle=true coboundary=false"));
}

#[test]
fn hat_check_on_a_file() {
    let o = twc(&["hat-check", "E3", "--window", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = twc(&["hat-check", &data("e3_unit_flip.twc"), "--window", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
