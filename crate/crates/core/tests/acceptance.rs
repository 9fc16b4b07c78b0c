//! Acceptance gate: one line per criterion, then a hard assertion.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use linegroupoid::verify::commands::{quotient_command, QuotientOutcome};
use linegroupoid::verify::fixtures;
use linegroupoid::verify::{run_suites, CheckRecord, Suite, SuiteConfig, ToleranceTable};

const SAMPLES: usize = 10_000;
const SEED: u64 = 42;

/// Thresholds the gate is held to, independent of the library defaults.
const PINNED: [(&str, f64); 17] = [
    ("orth", 1e-10),
    ("recon", 1e-10),
    ("matching", 1e-8),
    ("factorization", 1e-12),
    ("gb-axioms", 1e-10),
    ("z-axioms", 1e-9),
    ("fd-relative", 1e-4),
    ("closed-jacobi", 1e-9),
    ("frame-identity", 1e-10),
    ("p0-vanishing", 1e-10),
    ("poisson-jacobi", 1e-4),
    ("rank-threshold", 1e-8),
    ("bracket-identities", 1e-9),
    ("semiclassical", 1e-12),
    ("beta-numeric", 1e-6),
    ("derivative", 1e-6),
    ("adjoint", 1e-10),
];

const RELATION_ALGEBRA: &[&str] = &[
    "relations-transpose-laws",
    "relations-equivalence-tests-agree",
    "relations-compatible-relation-descends",
    "relations-equivariant-relation-commutes",
    "relations-projection-identities",
];

const QUOTIENT: &[&str] = &[
    "relations-quotient-of-free-actions",
    "relations-trivial-action-quotient-is-copy",
    "relations-s3-conjugation-quotient-rejected",
    "relations-unit-fixing-variants-agree",
    "relations-identity-is-monomorphism",
];

const DOUBLE_GROUP: &[&str] = &[
    "relations-delta-coassociative",
    "relations-double-group-delta-multiplicative",
    "relations-double-group-delta-units-inverse",
    "relations-non-double-group-delta-inclusion-strict",
    "relations-normalizer-translations",
    "relations-z-delta-coassociative",
    "relations-z-delta-graph",
    "relations-z-delta-morphism-identities",
];

fn pinned() -> ToleranceTable {
    let mut t = ToleranceTable::default();
    for (name, value) in PINNED {
        t.set(name, value).unwrap();
    }
    t
}

fn run(suite: Suite, n: usize) -> Vec<CheckRecord> {
    let config = SuiteConfig { n, samples: SAMPLES, seed: SEED, tolerances: pinned(), ..Default::default() }.only(&[suite]);
    run_suites(&config).unwrap().records
}

struct Verdict {
    pass: bool,
    detail: String,
}

/// Passes when every record passes; reports the record closest to its threshold.
fn judge(records: &[CheckRecord]) -> Verdict {
    let failures: Vec<&str> = records.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if records.is_empty() {
        return Verdict { pass: false, detail: "no checks ran".into() };
    }
    if !failures.is_empty() {
        return Verdict { pass: false, detail: format!("failing: {}", failures.join(", ")) };
    }
    let tightest = records
        .iter()
        .filter(|r| r.tolerance > 0.0)
        .max_by(|a, b| (a.max_residual / a.tolerance).total_cmp(&(b.max_residual / b.tolerance)));
    let detail = match tightest {
        Some(r) => format!("{} checks, tightest {} {:.2e} <= {:.0e}", records.len(), r.name, r.max_residual, r.tolerance),
        None => format!("{} exact checks, zero failures", records.len()),
    };
    Verdict { pass: true, detail }
}

fn select(records: &[CheckRecord], names: &[&str]) -> Vec<CheckRecord> {
    let picked: Vec<CheckRecord> = records.iter().filter(|r| names.contains(&r.name.as_str())).cloned().collect();
    assert_eq!(picked.len(), names.len(), "missing checks among {names:?}");
    picked
}

fn across(suite: Suite, dims: &[usize]) -> Vec<CheckRecord> {
    dims.iter()
        .flat_map(|&n| {
            run(suite, n).into_iter().map(move |mut r| {
                r.name = format!("{}[n={n}]", r.name);
                r
            })
        })
        .collect()
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_linegroupoid"))
}

fn strip_timestamp(report: &str) -> String {
    report
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("timestamp");
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cli() -> Verdict {
    let full = Command::new(bin()).arg("run").output().unwrap();
    if !full.status.success() {
        return Verdict { pass: false, detail: format!("default run exited with {}", full.status) };
    }

    let dir = tempfile::tempdir().unwrap();
    let groupoid = dir.path().join("s3.json");
    let action = dir.path().join("s3_inner.json");
    std::fs::write(&groupoid, fixtures::S3_GROUPOID).unwrap();
    std::fs::write(&action, fixtures::S3_INNER_ACTION).unwrap();
    let q = Command::new(bin()).arg("quotient").arg("--groupoid").arg(&groupoid).arg("--action").arg(&action).output().unwrap();
    let out: serde_json::Value = serde_json::from_slice(&q.stdout).unwrap();
    let triple = out["witness"]["triple"].as_array().map(|t| t.len());
    if !q.status.success() || out["status"] != "violation" || triple != Some(3) {
        return Verdict { pass: false, detail: format!("unexpected quotient output {out}") };
    }

    let report = |seed: &str| {
        let o = Command::new(bin()).args(["run", "--samples", "50", "--seed", seed]).output().unwrap();
        strip_timestamp(&String::from_utf8(o.stdout).unwrap())
    };
    let (a, b, c) = (report("7"), report("7"), report("8"));
    if a != b {
        return Verdict { pass: false, detail: "reports differ for a fixed seed".into() };
    }
    if a == c {
        return Verdict { pass: false, detail: "reports ignore the seed".into() };
    }
    Verdict { pass: true, detail: "default run exits 0, S3 witness triple emitted, reports seed-deterministic".into() }
}

#[test]
fn acceptance_criteria() {
    assert_eq!(ToleranceTable::default(), pinned(), "library defaults drifted from the pinned thresholds");

    let relations = run(Suite::Relations, 3);
    let quotient_witness = match quotient_command(fixtures::S3_GROUPOID, fixtures::S3_INNER_ACTION).unwrap() {
        QuotientOutcome::Violation { witness, .. } => witness.triple.len() == 3,
        QuotientOutcome::Quotient { .. } => false,
    };
    let mut quotient = judge(&select(&relations, QUOTIENT));
    if !quotient_witness {
        quotient = Verdict { pass: false, detail: "S3 conjugation fixture produced no witness".into() };
    }
    let covered = RELATION_ALGEBRA.len() + QUOTIENT.len() + DOUBLE_GROUP.len();
    assert_eq!(covered, relations.len(), "every relations check belongs to a criterion");

    let verdicts = [
        ("relation algebra", judge(&select(&relations, RELATION_ALGEBRA))),
        ("quotient construction", quotient),
        ("finite double-group identities", judge(&select(&relations, DOUBLE_GROUP))),
        ("Iwasawa factorization and rotation groupoid, n=2..5", judge(&across(Suite::Iwasawa, &[2, 3, 4, 5]))),
        ("line groupoid Z, n=2..4", judge(&across(Suite::Groupoid, &[2, 3, 4]))),
        ("algebroid brackets and anchors, n=2..4", judge(&across(Suite::Algebroid, &[2, 3, 4]))),
        ("dual Poisson structures, n=2..4", judge(&across(Suite::Poisson, &[2, 3, 4]))),
        ("semi-classical limit, n=2..4", judge(&across(Suite::Semiclassical, &[2, 3, 4]))),
        ("command-line interface", cli()),
    ];

    // written past the test harness capture so the lines land in plain logs
    let mut out = std::io::stdout().lock();
    for (i, (label, v)) in verdicts.iter().enumerate() {
        let status = if v.pass { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {} {status}: {label} ({})", i + 1, v.detail).unwrap();
    }
    drop(out);
    let failed: Vec<usize> = verdicts.iter().enumerate().filter(|(_, (_, v))| !v.pass).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
