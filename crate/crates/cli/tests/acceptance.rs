//! Acceptance criteria: one pass/fail line per criterion. All checks are exact over Q, so the
//! only tolerances are the case-count floors and the time budget below.

use std::process::Command;
use std::time::Instant;

use twc_core::check::{self, Config, Suite};

/// Fuzz cases per identity (summed over the fuzzed algebras).
const MIN_CASES: usize = 100;
/// Triangulated-axiom instances per algebra.
const MIN_TRI_INSTANCES: usize = 25;
/// Window bound for exhaustive hat checks.
const WINDOW: i64 = 3;
/// Wall-clock budget per suite, in seconds.
const MAX_SECONDS: f64 = 60.0;

struct Outcome {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn timed(name: &str, cfg: &Config) -> (Suite, f64) {
    let t = Instant::now();
    let s = check::run_suite(name, cfg).expect("known suite");
    (s, t.elapsed().as_secs_f64())
}

/// Passes, fits the budget, and every named check has enough cases (and nontrivial cases).
fn judge(id: usize, name: &'static str, suite: &str, cfg: &Config, floors: &[(&str, usize)]) -> Outcome {
    let (s, secs) = timed(suite, cfg);
    let mut problems: Vec<String> = s
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {}", c.name, c.failures[0]))
        .collect();
    for (check, floor) in floors {
        match s.check(check) {
            None => problems.push(format!("missing check {check}")),
            Some(c) => {
                let n = c.nontrivial.unwrap_or(c.cases);
                if n < *floor {
                    problems.push(format!("{check}: {n} cases < {floor}"));
                }
            }
        }
    }
    if secs > MAX_SECONDS {
        problems.push(format!("took {secs:.1}s"));
    }
    let cases: usize = s.checks.iter().map(|c| c.cases).sum();
    let detail = if problems.is_empty() { format!("cases={cases}") } else { problems.join("; ") };
    Outcome { id, name, ok: problems.is_empty(), detail }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_twc");
    let run = |args: &[&str]| Command::new(bin).args(args).env_remove("TWC_FIELD").output().unwrap();
    let mut problems = Vec::new();
    for args in [&["selftest"][..], &["fuzz", "--seed", "42"][..]] {
        let (a, b) = (run(args), run(args));
        if a.status.code() != Some(0) {
            problems.push(format!("{args:?} exited {:?}", a.status.code()));
        }
        if a.stdout != b.stdout || a.stdout.is_empty() {
            problems.push(format!("{args:?} reports differ"));
        }
    }
    let detail = if problems.is_empty() { "byte-identical".to_string() } else { problems.join("; ") };
    Outcome { id: 10, name: "determinism", ok: problems.is_empty(), detail }
}

fn main() {
    let cfg = Config { cases: MIN_CASES, window: WINDOW, ..Config::default() };
    assert!(check::tri_instances(&cfg) >= MIN_TRI_INSTANCES);
    let n = MIN_CASES;
    let t = MIN_TRI_INSTANCES;
    let outcomes = vec![
        judge(1, "stasheff", "stasheff", &cfg, &[("mutants-rejected", 1), ("e3-unit-flip-fails-s3-on-unit-chain", 1)]),
        judge(2, "hat", "hat", &cfg, &[("hat-stasheff", 1), ("nu-equivariance", 1), ("pull-out-laws", 1), ("triple-products", 1)]),
        judge(3, "tw", "tw", &cfg, &[("b1-b1-zero", n), ("cocycle-closure", n), ("coboundary-ideal", n), ("h-associativity", n)]),
        judge(4, "sigma-tau", "sigma-tau", &cfg, &[("tau-sigma-inverse", n), ("three-factor", n), ("sandwich", n)]),
        judge(5, "j", "j", &cfg, &[("b1-s-identity", n), ("identity-coboundary-witness", n), ("functoriality", 1), ("factor-into-j", n), ("factor-out-of-j", 1)]),
        judge(6, "psi", "psi", &cfg, &[("psi-round-trip", n), ("equivalence-iff-coboundary", n), ("both-outcomes-exercised", 2)]),
        judge(7, "conflation-calculus", "confl", &cfg, &[("pushout-ladder", n), ("pullback-ladder", n), ("canonicalize-both-ways", n), ("kernel-factorization", n), ("cokernel-factorization", n)]),
        judge(8, "triangulated-axioms", "tri", &cfg, &[("E2-TR4", t), ("E3-TR4", t), ("E2-TR3", t), ("E3-TR3", t), ("rotate-right-sign-mutation-detected", 2)]),
        judge(9, "shift-functor", "shift", &cfg, &[("preserves-star", n), ("preserves-identities", n), ("preserves-coboundaries", n), ("inverse", n), ("shifted-triangles", 1)]),
        determinism(),
    ];
    for o in &outcomes {
        println!("criterion={} name={} status={} {}", o.id, o.name, if o.ok { "pass" } else { "fail" }, o.detail);
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
