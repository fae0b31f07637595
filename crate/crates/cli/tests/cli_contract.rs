mod common;

use common::{fifty_systems, invoke, random_literal, temp_file, MALFORMED};
use k3sys_cli::{parse_literal, CsvRecord, OutputRecord, CSV_HEADER};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sorted_positive(mut m: Vec<i64>) -> Vec<i64> {
    m.retain(|&x| x > 0);
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

proptest! {
    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let (text, n, d, expanded) = random_literal(&mut ChaCha8Rng::seed_from_u64(seed));
        let lit = parse_literal(&text).unwrap();
        prop_assert_eq!((lit.n, lit.d), (n, d));
        prop_assert_eq!(lit.raw_mults(), expanded.clone());
        prop_assert_eq!(&lit.spec().mults, &sorted_positive(expanded));

        let printed = lit.to_string();
        let again = parse_literal(&printed).unwrap();
        prop_assert_eq!(again.spec(), lit.spec());
        prop_assert_eq!(again.to_string(), printed);
    }
}

#[test]
fn malformed_inputs_exit_2_with_positions() {
    for &(input, offset, rule) in MALFORMED {
        let e = parse_literal(input).unwrap_err();
        assert_eq!(e.offset, offset, "{input:?}: {e}");
        assert!(e.to_string().contains(rule), "{input:?}: {e}");

        let out = invoke(&["dim", input]);
        assert_eq!(out.code, 2, "{input:?}");
        assert!(out.stdout.is_empty());
        assert!(
            out.stderr.contains(&format!("at byte {offset}:")),
            "{}",
            out.stderr
        );
    }
}

#[test]
fn documented_examples() {
    let out = invoke(&["dim", "L4(3;6)"]);
    assert_eq!(
        (out.code, out.stdout.as_str()),
        (0, "0 (special; v = -2, h1 = 2)\n")
    );

    let out = invoke(&["classify", "L2(4;4,3)", "--format", "json"]);
    assert_eq!(out.code, 0);
    let rec: OutputRecord = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(rec.dim, 1);
    assert_eq!(rec.fixed_part, vec!["3\u{d7}L2(1;1,1)"]);
    assert_eq!(rec.free_part.as_deref(), Some("L2(1;1)"));

    let out = invoke(&["verify", "lemma-table"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches("[table_entry]").count(), 5);
}

#[test]
fn intersect_uses_positional_alignment() {
    assert_eq!(
        invoke(&["intersect", "L2(1;1,1)", "L2(1;0,1)"]).stdout,
        "1\n"
    );
    assert_eq!(
        invoke(&["intersect", "L2(1;1,0)", "L2(1;0,1)"]).stdout,
        "2\n"
    );
    assert_eq!(invoke(&["intersect", "L2(1;1)", "L4(1;1)"]).code, 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(invoke(&[]).code, 2);
    assert_eq!(invoke(&["frobnicate"]).code, 2);
    assert_eq!(invoke(&["dim", "L2(1)", "--format", "xml"]).code, 2);
    assert_eq!(invoke(&["enumerate", "v0", "--self-int", "3"]).code, 2);
    assert_eq!(invoke(&["hunt", "--bounds", "q=1"]).code, 2);
    assert_eq!(invoke(&["batch", "/nonexistent/k3sys"]).code, 2);
    let help = invoke(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("classify"));
}

#[test]
fn quiet_keeps_the_exit_status() {
    let out = invoke(&["--quiet", "verify", "identity", "--samples", "50"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let out = invoke(&["--quiet", "dim", "L3(1)"]);
    assert_eq!(out.code, 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn enumerate_window_accepts_negative_bounds() {
    let out = invoke(&["enumerate", "v0", "--self-int", "-2..1", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 6);
    let out = invoke(&["enumerate", "v0", "--self-int=-2..=-1"]);
    assert_eq!(out.stdout.trim(), "0 classes");
}

#[test]
fn json_and_csv_agree_on_a_batch() {
    let systems = fifty_systems();
    let path = temp_file("equiv", &systems.join("\n"));
    let json = invoke(&["batch", path.to_str().unwrap(), "--format", "json"]);
    let csv = invoke(&["--format", "csv", "batch", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!((json.code, csv.code), (0, 0));

    let from_json: Vec<OutputRecord> = json
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let mut reader = csv::Reader::from_reader(csv.stdout.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        CSV_HEADER
    );
    let from_csv: Vec<CsvRecord> = reader.deserialize().map(Result::unwrap).collect();

    assert_eq!(from_json.len(), 50);
    assert_eq!(from_csv.len(), 50);
    for (j, c) in from_json.iter().zip(&from_csv) {
        assert_eq!(&CsvRecord::from(j), c);
        assert_eq!(c.expanded_mults(), j.mults);
        assert_eq!(c.fixed_components(), j.fixed_part);
    }
}

#[test]
fn batch_isolates_bad_lines_and_keeps_order() {
    let content =
        "# header\nL2(4;4,3)\n\nL3(1;1)\nL2(2;2)  # trailing comment\nL2(1;-1)\nL4(3;6)\n";
    let path = temp_file("isolation", content);
    let out = invoke(&["batch", path.to_str().unwrap(), "--format", "json"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.code, 2);
    let recs: Vec<OutputRecord> = out
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let dims: Vec<(i64, i64, i64)> = recs.iter().map(|r| (r.n, r.d, r.dim)).collect();
    assert_eq!(dims, vec![(2, 4, 1), (2, 2, 2), (4, 3, 0)]);
    let errors: Vec<&str> = out.stderr.lines().collect();
    assert_eq!(errors.len(), 2);
    assert!(errors[0].starts_with("line 4: at byte 1:"));
    assert!(errors[1].starts_with("line 6: at byte 5:"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_k3sys");
    let run = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let ok = run(&["dim", "L2(2;2)"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "2 (v = 2)\n");
    let bad = run(&["dim", "L3(1;1)"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("n must be even"));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
