#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

/// One invocation per command, with the golden file it must reproduce.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("jacobian", &["jacobian", "--fx", "x", "--fy", "y+x^2"]),
    ("apply", &["apply", "--fx", "y", "--fy", "x", "-p", "x^2 + y"]),
    ("compose", &["compose", "--fx", "x+y", "--fy", "y", "--gx", "x^2", "--gy", "y"]),
    ("iterate", &["iterate", "--fx", "x", "--fy", "y+x^2", "-k", "3"]),
    ("reduce-pair", &["reduce-pair", "-p", "x + y^3", "-q", "y"]),
    ("is-automorphism", &["is-automorphism", "--fx", "y", "--fy", "x + y^2"]),
    ("is-coordinate", &["is-coordinate", "-p", "x + y^2"]),
    ("in-subalgebra", &["in-subalgebra", "-p", "x^2*y", "--fx", "x^2", "--fy", "y"]),
    ("decompose", &["decompose", "-p", "(x+y^2)^2 + (x+y^2)", "-d", "2"]),
    ("is-retract-generator", &["is-retract-generator", "-p", "x + y*x"]),
    ("retract-membership", &["retract-membership", "-p", "(x + y*x)^2 + (x + y*x)"]),
    ("is-test", &["is-test", "-p", "x + y*x"]),
    ("fixed-check", &["fixed-check", "--fx", "x+y*x", "--fy", "0", "-p", "x+y*x"]),
    ("corollary-check", &["corollary-check", "--fx", "x+y", "--fy", "y", "--gx", "x-y", "--gy", "y", "-p", "x"]),
    ("su-bound", &["su-bound", "-w", "y^3", "-p", "x^2 + y", "-q", "x^3 + 3/2*x*y"]),
    ("lemma-check", &["lemma-check", "-w", "x*y", "-p", "x^2+y", "-q", "x+y^3"]),
    ("phi-infinity", &["phi-infinity", "--fx", "x", "--fy", "y^2", "--deg", "4", "--iters", "3"]),
];

/// Commands whose results can carry a certificate.
pub const CERTIFYING: &[&str] = &[
    "reduce-pair",
    "is-automorphism",
    "is-coordinate",
    "in-subalgebra",
    "decompose",
    "is-retract-generator",
    "retract-membership",
    "is-test",
    "corollary-check",
    "lemma-check",
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// String leaves that are free text rather than polynomials.
const TEXT_KEYS: &[&str] = &["reason", "outcome", "step", "note", "notes", "branch", "check", "command", "kind", "message"];

/// Every polynomial-valued string leaf of `value`, paired with its key.
pub fn polynomial_leaves(value: &Value) -> Vec<(String, String)> {
    fn walk(key: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::String(s) if !TEXT_KEYS.contains(&key) => out.push((key.to_string(), s.clone())),
            Value::Array(items) => items.iter().for_each(|i| walk(key, i, out)),
            Value::Object(map) => map.iter().for_each(|(k, i)| walk(k, i, out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}
