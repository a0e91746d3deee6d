use std::process::{Command, Output};

use padic_count::Count;
use padic_count_cli::output::{QueryResult, Table, CSV_HEADER};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_padic-count"));
    c.env_remove(padic_count_cli::MAX_BITS_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn count_examples() {
    let o = run(&["count", "iso-ef", "--qp", "3", "--e", "3", "--f", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "9\n");

    let o = run(&["count", "krasner", "--qp", "2", "--e", "2", "--f", "1"]);
    assert_eq!(stdout(&o), "6\n");

    let o = run(&["count", "iso-total", "--qp", "2", "--n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: QueryResult = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r.value, 7);
    assert!(stdout(&o).contains(r#""value":"7""#));

    for (args, want) in [
        (
            vec!["cyclic-ef", "--qp", "2", "--e", "2", "--f", "1"],
            "6\n",
        ),
        (vec!["cyclic-total", "--qp", "2", "--d", "2"], "7\n"),
        (vec!["cyclic-total", "--qp", "3", "--d", "3"], "4\n"),
        (vec!["iso-ef", "--qp", "5", "--e", "2", "--f", "1"], "2\n"),
        (vec!["tame", "--qp", "5", "--e", "2", "--f", "1"], "2\n"),
    ] {
        let mut full = vec!["count"];
        full.extend(&args);
        assert_eq!(stdout(&run(&full)), want, "{args:?}");
    }
}

#[test]
fn json_round_trips_byte_for_byte() {
    let queries: [&[&str]; 5] = [
        &[
            "count",
            "iso-ef",
            "--qp",
            "2",
            "--e",
            "4",
            "--f",
            "2",
            "--breakdown",
            "--json",
        ],
        &[
            "count",
            "iso-total",
            "--qp",
            "3",
            "--n",
            "9",
            "--breakdown",
            "--json",
        ],
        &[
            "count",
            "krasner",
            "--qp",
            "3",
            "--e",
            "9",
            "--f",
            "1",
            "--breakdown",
            "--json",
        ],
        &[
            "count",
            "tame",
            "--qp",
            "7",
            "--e",
            "6",
            "--f",
            "4",
            "--breakdown",
            "--json",
        ],
        &["count", "cyclic-total", "--qp", "2", "--d", "8", "--json"],
    ];
    for args in queries {
        let text = stdout(&run(args));
        let parsed: QueryResult = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(parsed.to_json(), text.trim(), "{args:?}");
    }
    let text = stdout(&run(&["table", "--qp", "2", "--n-max", "8"]));
    let parsed: Table = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(parsed.to_json(), text.trim());
}

#[test]
fn breakdown_resums_to_value() {
    for args in [
        ["iso-ef", "--qp", "2", "--e", "4", "--f", "3"],
        ["iso-total", "--qp", "2", "--n", "12", "", ""],
        ["krasner", "--qp", "3", "--e", "6", "--f", "2"],
        ["tame", "--qp", "5", "--e", "4", "--f", "6"],
    ] {
        let mut full = vec!["count", "--json", "--breakdown"];
        full.extend(args.iter().filter(|a| !a.is_empty()));
        let r: QueryResult = serde_json::from_str(stdout(&run(&full)).trim()).unwrap();
        let b = r.breakdown.expect("breakdown present");
        let sum: Count = b.terms.iter().map(|t| t.term.clone()).sum();
        let total = &sum * &b.multiplier;
        let divisor = b.divisor.as_biguint();
        assert_eq!(total.as_biguint() % divisor, 0u32.into(), "{args:?}");
        assert_eq!(
            Count::from(total.as_biguint() / divisor),
            r.value,
            "{args:?}"
        );
    }
}

#[test]
fn breakdown_text_lists_summands() {
    let o = run(&[
        "count",
        "iso-ef",
        "--qp",
        "2",
        "--e",
        "2",
        "--f",
        "1",
        "--breakdown",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("6\n"));
    assert!(text.contains("# i=1 e'=1 f'=1 e''=2 f''=1 term=2"));
}

#[test]
fn table_examples() {
    let o = run(&["table", "--qp", "2", "--n-max", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines.contains(&"cell,2,1,2,6,6,,"));
    assert!(lines.contains(&"cell,1,2,2,1,1,,"));
    assert!(lines.contains(&"total,,,2,,,7,7"));
    assert!(!text.contains('"'));

    let t: Table =
        serde_json::from_str(&stdout(&run(&["table", "--qp", "3", "--n-max", "3"]))).unwrap();
    let last = t.totals.last().unwrap();
    assert_eq!(
        (last.n, last.iso_total.clone(), last.iso_sum.clone()),
        (3, Count::from(10u64), Count::from(10u64))
    );

    let text = stdout(&run(&[
        "table", "--qp", "5", "--n-max", "1", "--format", "csv",
    ]));
    assert_eq!(
        text,
        format!("{CSV_HEADER}\ncell,1,1,1,1,1,,\ntotal,,,1,,,1,1\n")
    );
}

#[test]
fn table_by_e_and_f() {
    let t: Table = serde_json::from_str(&stdout(&run(&[
        "table", "--qp", "3", "--e-max", "4", "--f-max", "2",
    ])))
    .unwrap();
    assert_eq!(t.cells.len(), 8);
    assert_eq!(t.totals.len(), 2);
    let keys: Vec<(u64, u64)> = t.cells.iter().map(|c| (c.n, c.e)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for c in &t.cells {
        // each class contributes between 1 and n conjugate fields
        assert!(c.iso <= c.krasner.clone());
        assert!(c.krasner <= &c.iso * &Count::from(c.n));
    }
}

#[test]
fn table_output_is_deterministic() {
    let args = ["table", "--qp", "2", "--n-max", "12", "--format", "csv"];
    let first = stdout(&run(&args));
    for _ in 0..3 {
        assert_eq!(stdout(&run(&args)), first);
    }
}

#[test]
fn table_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q2.json");
    let o = run(&[
        "table",
        "--qp",
        "2",
        "--n-max",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let t: Table = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t.totals[3].iso_total, 59);
}

#[test]
fn exit_code_two_on_bad_input() {
    for args in [
        vec!["count", "iso-ef", "--qp", "4", "--e", "2", "--f", "1"],
        vec!["count", "tame", "--qp", "3", "--e", "3", "--f", "1"],
        vec!["count", "iso-ef", "--qp", "2", "--e", "2"],
        vec!["count", "iso-total", "--qp", "2", "--n", "0"],
        vec!["count", "iso-total", "--qp", "2", "--n", "2", "--e", "1"],
        vec!["count", "iso-ef", "--e", "2", "--f", "1"],
        vec![
            "count",
            "iso-ef",
            "--qp",
            "2",
            "--profile",
            "x.json",
            "--e",
            "2",
            "--f",
            "1",
        ],
        vec![
            "count",
            "iso-ef",
            "--profile",
            "/nonexistent/profile.json",
            "--e",
            "2",
            "--f",
            "1",
        ],
        vec!["table", "--qp", "2"],
        vec!["bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = run(&["count", "tame", "--qp", "3", "--e", "3", "--f", "1"]);
    assert!(stderr(&o).contains("p | e for tame"));
    let o = run(&["count", "iso-ef", "--qp", "4", "--e", "2", "--f", "1"]);
    assert!(stderr(&o).contains("p must be prime"));
}

#[test]
fn exit_code_three_on_magnitude_limit() {
    let o = bin()
        .args(["count", "iso-total", "--qp", "2", "--n", "16"])
        .env(padic_count_cli::MAX_BITS_ENV, "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = bin()
        .args(["count", "iso-total", "--qp", "2", "--n", "16"])
        .env(padic_count_cli::MAX_BITS_ENV, "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn write_profile(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn profile_files() {
    let dir = tempfile::tempdir().unwrap();
    let q2 = write_profile(
        &dir,
        "q2.json",
        r#"{"p":2,"e0":1,"f0":1,"cyclotomic":[{"i":1,"e":1,"f":1},{"i":2,"e":2,"f":1}]}"#,
    );
    let o = run(&["count", "iso-total", "--profile", &q2, "--n", "4"]);
    assert_eq!(stdout(&o), "59\n", "{}", stderr(&o));
    let o = run(&["count", "cyclic-total", "--profile", &q2, "--d", "2"]);
    assert_eq!(stdout(&o), "7\n");
    let o = run(&[
        "count",
        "iso-ef",
        "--profile",
        &q2,
        "--e",
        "2",
        "--f",
        "1",
        "--json",
    ]);
    let r: QueryResult = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r.query.field.source, q2);

    // too short for e = 8, which needs three levels
    let o = run(&["count", "iso-ef", "--profile", &q2, "--e", "8", "--f", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("too short"), "{}", stderr(&o));

    let bad = write_profile(
        &dir,
        "bad.json",
        r#"{"p":3,"e0":1,"f0":1,"cyclotomic":[{"i":1,"e":2,"f":1},{"i":2,"e":5,"f":1}]}"#,
    );
    let o = run(&["count", "iso-ef", "--profile", &bad, "--e", "3", "--f", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let garbled = write_profile(&dir, "garbled.json", r#"{"p":3,"e0":1}"#);
    let o = run(&[
        "count",
        "iso-ef",
        "--profile",
        &garbled,
        "--e",
        "1",
        "--f",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selfcheck_small_grid_passes() {
    let o = run(&["selfcheck", "--grid", "small"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all suites pass"));
    for name in [
        "golden values",
        "lemma (subgroups)",
        "element counts",
        "delta telescoping",
        "dual group",
        "theorem consistency",
    ] {
        assert!(
            text.lines()
                .any(|l| l.starts_with("PASS") && l.contains(name)),
            "{name}"
        );
    }
}

#[test]
fn selfcheck_reports_corrupted_delta() {
    let o = run(&["selfcheck", "--grid", "small", "--corrupt-delta"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("counterexample"), "{last}");
    assert!(last.contains("Delta row"), "{last}");
    assert!(!text.contains("all suites pass"));
}

#[test]
fn selfcheck_table_order_cap() {
    let o = run(&["selfcheck", "--grid", "small", "--max-table-order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let covers = stdout(&o)
        .lines()
        .find(|l| l.trim_start().starts_with("covers:"))
        .unwrap()
        .to_string();
    let groups: Vec<&str> = covers.split_whitespace().skip(1).collect();
    assert!(groups.contains(&"symmetric(3)"));
    assert!(groups.contains(&"cyclic(6)"));
    assert!(!groups
        .iter()
        .any(|g| g.contains("quaternion") || g.contains("dihedral(4)") || g.contains("cyclic(7)")));
}
