use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

fn bcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcv")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = bcv(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    p.to_str().unwrap().to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn records(csv_text: &str) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().clone();
    (header, r.records().map(Result::unwrap).collect())
}

fn field<'a>(header: &csv::StringRecord, row: &'a csv::StringRecord, name: &str) -> &'a str {
    &row[header.iter().position(|h| h == name).unwrap()]
}

#[test]
fn single_row_of_the_scale4_table() {
    assert_eq!(
        stdout(&["tables", "--scale", "4", "--range", "20:20"]),
        "N,lambda,p,n_critical,attainable\n20,0.05,1/4,9,true\n20,0.01,1/4,10,true\n"
    );
}

#[test]
fn verified_tables_match_golden_files() {
    assert_eq!(
        stdout(&["tables", "--scale", "3", "--verify"]),
        golden("tables_s3_verify.csv")
    );
    assert_eq!(
        stdout(&["tables", "--scale", "4", "--verify"]),
        golden("tables_s4_verify.csv")
    );
}

#[test]
fn verify_flags_only_the_known_cells() {
    let (header, rows) = records(&stdout(&["tables", "--scale", "3", "--range", "5:100", "--verify"]));
    assert_eq!(rows.len(), 192);
    let flagged: Vec<(&str, &str)> = rows
        .iter()
        .filter(|r| field(&header, r, "discrepancy") == "true")
        .map(|r| (field(&header, r, "N"), field(&header, r, "lambda")))
        .collect();
    assert_eq!(flagged, vec![("5", "0.05"), ("32", "0.01")]);
}

#[test]
fn verify_outside_the_printed_range_has_no_reference() {
    let (header, rows) = records(&stdout(&["tables", "--range", "101:101", "--verify"]));
    assert!(rows.iter().all(|r| field(&header, r, "reference_n_critical") == "-"));
    assert!(rows.iter().all(|r| field(&header, r, "discrepancy") == "false"));
}

#[test]
fn min_floor_lifts_small_panels() {
    let (header, rows) = records(&stdout(&[
        "tables",
        "--scale",
        "4",
        "--range",
        "5:6",
        "--min-floor",
        "5",
        "--verify",
    ]));
    assert!(rows.iter().all(|r| field(&header, r, "discrepancy") == "false"));
    let (_, rows) = records(&stdout(&["tables", "--range", "4:4", "--min-floor", "5"]));
    assert!(rows.iter().all(|r| &r[3] == "-" && &r[4] == "false"));
}

#[test]
fn comparison_row_and_golden_file() {
    assert_eq!(
        stdout(&["compare", "--range", "20:20"]),
        format!(
            "N,{}\n20,11,12,9,10,14,15\n",
            bcv_core::legacy::COMPARISON_COLUMNS.join(",")
        )
    );
    assert_eq!(
        stdout(&["compare", "--verify", "--format", "markdown"]),
        golden("compare_5_40.md")
    );
}

#[test]
fn unattainable_ayre_count_is_marked() {
    let csv = stdout(&["compare", "--range", "5:5", "--ayre-alpha", "0.01"]);
    assert!(csv.ends_with(",-\n"), "{csv}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "compare",
        "--range",
        "5:5",
        "--ayre-alpha",
        "0.01",
        "--format",
        "json",
    ]))
    .unwrap();
    assert!(json[0]["ayre"].is_null());
}

#[test]
fn distribution_sums_to_one() {
    let text = stdout(&["distribution", "--n", "20", "--scale", "3"]);
    let (_, rows) = records(&text);
    assert_eq!(rows.len(), 21);
    assert_eq!(&rows[11][1], "0.0246633");
    assert_eq!(&rows[11][2], "85995520/3486784401");
    let total = rows.iter().fold(Ratio::<BigUint>::zero(), |acc, r| {
        let (a, b) = r[2].split_once('/').unwrap_or((&r[2], "1"));
        acc + Ratio::new(a.parse::<BigUint>().unwrap(), b.parse::<BigUint>().unwrap())
    });
    assert!(total.is_one());
    assert_eq!(
        stdout(&["distribution", "--n", "20", "--format", "json"]),
        golden("distribution_20.json")
    );
}

#[test]
fn classify_fixture_items() {
    let (header, rows) = records(&stdout(&["classify", "--input", &fixture("panel_20.csv")]));
    let summary: Vec<(&str, &str, &str)> = rows
        .iter()
        .map(|r| {
            (
                field(&header, r, "item_id"),
                field(&header, r, "status"),
                field(&header, r, "recommendation"),
            )
        })
        .collect();
    assert_eq!(
        summary,
        vec![
            ("Q1", "A", "retain"),
            ("Q2", "C", "review"),
            ("Q3", "D", "discard"),
            ("Q4", "A", "retain"),
            ("Q5", "C", "review"),
        ]
    );
    let q1 = &rows[0];
    assert_eq!(
        [
            field(&header, q1, "n_E"),
            field(&header, q1, "n_I"),
            field(&header, q1, "n_U"),
            field(&header, q1, "N")
        ],
        ["12", "6", "2", "20"]
    );
    assert_eq!(field(&header, q1, "n_critical"), "11");
    assert_eq!(field(&header, q1, "cvr"), "0.200000");
}

#[test]
fn large_panel_strong_paradox() {
    let (header, rows) = records(&stdout(&["classify", "--input", &fixture("panel_100.csv")]));
    let p1 = &rows[0];
    assert_eq!(field(&header, p1, "N"), "100");
    assert_eq!(field(&header, p1, "status"), "B");
    assert_eq!(field(&header, p1, "essential_validated"), "true");
    assert_eq!(field(&header, p1, "unnecessary_validated"), "true");
}

#[test]
fn four_option_scale_with_all_na_item() {
    let (header, rows) = records(&stdout(&[
        "classify",
        "--input",
        &fixture("panel_s4.csv"),
        "--scale",
        "4",
    ]));
    assert_eq!(field(&header, &rows[0], "N"), "10");
    assert_eq!(field(&header, &rows[0], "n_NA"), "2");
    assert_eq!(field(&header, &rows[1], "status"), "no-data");
    assert_eq!(field(&header, &rows[1], "n_critical"), "-");
}

#[test]
fn empty_survey_gives_empty_report() {
    let out = bcv(&["classify", "--input", &fixture("empty.csv"), "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[]\n");
    let (_, rows) = records(&stdout(&["classify", "--input", &fixture("empty.csv")]));
    assert!(rows.is_empty());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bcv(args).status.code().unwrap();
    assert_eq!(code(&["tables", "--range", "0:0"]), 2);
    assert_eq!(code(&["tables", "--lambda", "2"]), 2);
    // parses as a probability, but the one-tailed quantile needs α ≤ 1/2
    assert_eq!(code(&["compare", "--wilson-alpha", "0.7"]), 4);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["--help"]), 0);

    let malformed = bcv(&["classify", "--input", &fixture("malformed.csv")]);
    assert_eq!(malformed.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 3"));
    // NA is only valid on the four-option scale
    assert_eq!(code(&["classify", "--input", &fixture("panel_s4.csv")]), 3);
    assert_eq!(code(&["classify", "--input", "/definitely/not/here.csv"]), 5);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.md");
    let args = ["tables", "--range", "5:12", "--format", "markdown"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = bcv(&with_out);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&args));
}

#[test]
fn lambda_spellings_render_identically() {
    let a = stdout(&["tables", "--range", "10:30", "--lambda", "1/20"]);
    let b = stdout(&["tables", "--range", "10:30", "--lambda", "0.05"]);
    assert_eq!(a, b);
}
