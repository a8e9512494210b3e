#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn run_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abext"))
        .args(args)
        .output()
        .expect("failed to start the abext binary")
}

/// Runs in process and returns (exit code, stdout, stderr).
pub fn run_lib(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("abext").chain(args.iter().copied());
    let code = abext::run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Structural comparison: identical keys and layout, numbers equal to a
/// relative `tol`, so that the last bits may differ between platforms.
pub fn json_close(expected: &Value, actual: &Value, tol: f64, path: &str) -> Result<(), String> {
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => {
            if a.is_f64() != b.is_f64() {
                return Err(format!("{path}: number kind differs ({a} vs {b})"));
            }
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (x - y).abs() <= tol * x.abs().max(1.0) {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<&String> = a.keys().collect();
            let kb: Vec<&String> = b.keys().collect();
            if ka != kb {
                return Err(format!("{path}: keys {ka:?} vs {kb:?}"));
            }
            for (k, v) in a {
                json_close(v, &b[k], tol, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} vs {}", a.len(), b.len()));
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                json_close(x, y, tol, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (a, b) if a == b => Ok(()),
        (a, b) => Err(format!("{path}: {a} vs {b}")),
    }
}

/// The three documented invocations and their golden files.
pub const GOLDEN_CASES: [(&str, &[&str]); 3] = [
    ("decompose.json", &["decompose", "--phi", "2.3"]),
    (
        "overlap_verify.json",
        &[
            "overlap", "--delta", "0.5", "--p", "2", "--pprime", "1", "--verify",
        ],
    ),
    (
        "gfactor_alpha0.json",
        &[
            "gfactor",
            "--channel",
            "n",
            "--alpha",
            "0",
            "--enn",
            "0",
            "--delta",
            "0.4",
            "--rho0",
            "0.01",
        ],
    ),
];

pub fn check_golden(file: &str, args: &[&str]) -> Result<(), String> {
    let text =
        std::fs::read_to_string(golden_dir().join(file)).map_err(|e| format!("{file}: {e}"))?;
    let expected: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let out = run_bin(args);
    if out.status.code() != Some(0) {
        return Err(format!("{file}: exit {:?}", out.status.code()));
    }
    let actual: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    json_close(&expected, &actual, 1e-12, file)
}

pub fn exit_code(args: &[&str]) -> Option<i32> {
    run_bin(args).status.code()
}

/// Error object printed on standard error, if any.
pub fn stderr_json(out: &Output) -> Option<Value> {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().next()?;
    serde_json::from_str(line).ok()
}
