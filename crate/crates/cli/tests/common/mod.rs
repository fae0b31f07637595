#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command in-process.
pub fn invoke(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("k3sys").chain(args.iter().copied());
    let code = k3sys_cli::run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// A uniquely named file under the system temp directory.
pub fn temp_file(tag: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("k3sys-{tag}-{}.txt", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

/// A random literal in a deliberately non-canonical spelling, together with
/// the multiplicities it denotes.
pub fn random_literal<R: Rng>(rng: &mut R) -> (String, i64, i64, Vec<i64>) {
    let n = 2 * rng.random_range(1..=30i64);
    let d = rng.random_range(0..=40i64);
    let runs = rng.random_range(0..=5usize);
    let ws = |rng: &mut R| if rng.random_bool(0.3) { " " } else { "" };
    let mut expanded = Vec::new();
    let mut parts = Vec::new();
    for _ in 0..runs {
        let m = rng.random_range(0..=12i64);
        let r = rng.random_range(1..=5i64);
        expanded.extend(std::iter::repeat_n(m, r as usize));
        if rng.random_bool(0.5) {
            parts.push(format!("{m}{}^{}{r}", ws(rng), ws(rng)));
        } else {
            parts.push(vec![m.to_string(); r as usize].join(","));
        }
    }
    let mut text = format!("{}L{n}{}({}{d}", ws(rng), ws(rng), ws(rng));
    if !parts.is_empty() {
        text.push_str(&format!("{};{}", ws(rng), ws(rng)));
        text.push_str(&parts.join(&format!("{},{}", ws(rng), ws(rng))));
    }
    text.push_str(&format!("{}){}", ws(rng), ws(rng)));
    (text, n, d, expanded)
}

/// `(input, byte offset of the first error, phrase naming the rule)`.
pub const MALFORMED: &[(&str, usize, &str)] = &[
    ("L3(1;1)", 1, "n must be even"),
    ("L0(2)", 1, "n must be at least 2"),
    ("L2(-1)", 3, "negative"),
    ("L2(1;2,-1)", 7, "negative"),
    ("L2(1;)", 5, "expected multiplicity"),
    ("M2(1)", 0, "expected 'L'"),
    ("L2(1", 4, "expected ')'"),
    ("L2(1) x", 6, "expected end of input"),
    ("L2 1)", 3, "expected '('"),
    ("L2(1;2^)", 7, "expected repetition count"),
    ("L(1)", 1, "expected n"),
    ("", 0, "expected 'L'"),
    ("L2(99999999999999999999)", 3, "integer too large"),
    ("L2(1;1^20000)", 12, "too many points"),
];

/// Fifty systems covering every member kind.
pub fn fifty_systems() -> Vec<String> {
    let mut out: Vec<String> = [
        "L2(4;4,3)",
        "L4(3;6)",
        "L2(3;3,3)",
        "L2(2;2)",
        "L4(2;2,2,2)",
        "L6(2;4,2)",
        "L10(2;6)",
        "L2(1;1,1)",
        "L4(1;2)",
        "L2(1;3)",
        "L2(1;2)",
        "L2(0)",
        "L2(0;1)",
        "L6(1;2,1)",
        "L10(1;3)",
        "L4(1;1^3)",
        "L2(3;2^4,1)",
        "L8(5;3,3,2)",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut k = 0i64;
    while out.len() < 50 {
        let n = 2 + 2 * (k % 5);
        let d = 1 + k % 7;
        let m = (k * 3) % 6;
        out.push(format!("L{n}({d};{m},{},1^{})", (k % 3), 1 + k % 4));
        k += 1;
    }
    out
}
