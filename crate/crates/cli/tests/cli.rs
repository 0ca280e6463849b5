use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn mdcu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdcu")).args(args).output().unwrap()
}

fn with_corpus<'a>(sub: &'a str, manifest: &'a str, corpus: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![sub, "--manifest", manifest, "--corpus", corpus];
    args.extend_from_slice(rest);
    args
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn score_first_six() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("top6.run"),
    );
    let csv = stdout(&mdcu(&with_corpus("score", &m, &c, &["--run", &r, "--b", "2"])));
    assert_eq!(
        column(&csv, "doc_score"),
        ["6.000", "2.268", "2.036", "0.975", "3.553", "0.656"]
    );
    assert_eq!(column(&csv, "cum_rel")[5], "15.487");
    assert_eq!(column(&csv, "usability")[3], "0.504");
}

#[test]
fn discounts_off_give_total_cg() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let csv = stdout(&mdcu(&with_corpus(
        "score",
        &m,
        &c,
        &["--run", &r, "--b", "2", "--no-overlap", "--no-attributes"],
    )));
    let want = ["6", "10", "13", "17", "22", "24", "24", "27", "29", "39"].map(|v| format!("{v}.000"));
    assert_eq!(column(&csv, "cum_rel"), want);
}

#[test]
fn missing_run_is_usage_error() {
    let (m, c) = (fixture("rc_prime.manifest.json"), fixture("rc_prime.csv"));
    let out = mdcu(&with_corpus("score", &m, &c, &[]));
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--run"));
}

#[test]
fn unpaired_manifest_is_usage_error() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let out = mdcu(&["score", "--manifest", &m, "--manifest", &m, "--corpus", &c, "--run", &r]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ideal_order_and_empty_corpus() {
    let (m, c) = (fixture("rc_prime.manifest.json"), fixture("rc_prime.csv"));
    let csv = stdout(&mdcu(&with_corpus("ideal", &m, &c, &["--b", "1.5"])));
    assert_eq!(
        column(&csv, "doc_id"),
        ["d10", "d1", "d5", "d3", "d2", "d4", "d6", "d9", "d8", "d7"]
    );
    let top3 = stdout(&mdcu(&with_corpus("ideal", &m, &c, &["--b", "1.5", "--k", "3"])));
    assert_eq!(column(&top3, "cum_rel"), column(&csv, "cum_rel")[..3]);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "doc_id,Theme1,Theme2,Theme3,Theme4,Attr1,Attr2,Attr3\n").unwrap();
    let out = mdcu(&with_corpus("ideal", &m, empty.to_str().unwrap(), &[]));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}

#[test]
fn normalize_s1() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let csv = stdout(&mdcu(&with_corpus("normalize", &m, &c, &["--run", &r, "--b", "1.5"])));
    let ncg: Vec<f64> = column(&csv, "ncg").iter().map(|v| v.parse().unwrap()).collect();
    let want = [0.60, 0.58, 0.59, 0.60, 0.76, 0.76, 0.74, 0.74, 0.75, 0.92];
    for (got, want) in ncg.iter().zip(want) {
        assert!((got - want).abs() <= 0.0055, "{got} vs {want}");
    }

    let json = stdout(&mdcu(&with_corpus(
        "normalize",
        &m,
        &c,
        &["--run", &r, "--b", "1.5", "--format", "json"],
    )));
    assert!(json.contains("\"zero_ideal_policy\""));
    assert!(json.contains("\"b\": 1.5"));
}

#[test]
fn normalize_ideal_order_is_all_ones() {
    let (m, c) = (fixture("rc_prime.manifest.json"), fixture("rc_prime.csv"));
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("ideal.run");
    let order = ["d10", "d1", "d5", "d3", "d2", "d4", "d6", "d9", "d8", "d7"];
    let text: String = order
        .iter()
        .enumerate()
        .map(|(i, d)| format!("T1 Q0 {d} {} 0 ideal\n", i + 1))
        .collect();
    std::fs::write(&run, text).unwrap();
    let csv = stdout(&mdcu(&with_corpus(
        "normalize",
        &m,
        &c,
        &["--run", run.to_str().unwrap(), "--b", "1.5"],
    )));
    assert!(column(&csv, "ncg").iter().all(|v| v == "1.000"));
}

#[test]
fn mismatched_topic_is_data_error() {
    let (m, c) = (fixture("rc_prime.manifest.json"), fixture("rc_prime.csv"));
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("t9.run");
    std::fs::write(&run, "T9 Q0 d1 1 1 x\n").unwrap();
    let out = mdcu(&with_corpus("normalize", &m, &c, &["--run", run.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("T9"));
}

#[test]
fn sweep_reports_both_bases() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let csv = stdout(&mdcu(&with_corpus(
        "sweep",
        &m,
        &c,
        &["--run", &r, "--b-values", "1.1,2", "--k", "6"],
    )));
    assert!(csv.starts_with("b,topic_id,series,rank,value\n"));
    assert!(csv.contains("1.1,T1,relevance,6,11.492\n"));
    assert!(csv.contains("2,T1,relevance,6,18.569\n"));

    let bad = mdcu(&with_corpus("sweep", &m, &c, &["--run", &r, "--b-values", "1,2"]));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_single_base_matches_score() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let score = stdout(&mdcu(&with_corpus("score", &m, &c, &["--run", &r, "--b", "1.5"])));
    let sweep = stdout(&mdcu(&with_corpus(
        "sweep",
        &m,
        &c,
        &["--run", &r, "--b-values", "1.5"],
    )));
    let utility: Vec<String> = sweep
        .lines()
        .filter(|l| l.contains(",utility,"))
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(utility, column(&score, "cum_rel"));
}

#[test]
fn compare_runs() {
    let (m, c) = (fixture("rc_prime.manifest.json"), fixture("rc_prime.csv"));
    let (s1, s2, s3) = (fixture("s1.run"), fixture("s2.run"), fixture("s3.run"));
    let csv = stdout(&mdcu(&with_corpus(
        "compare",
        &m,
        &c,
        &["--run", &s1, "--run", &s2, "--run", &s3, "--b", "1.5"],
    )));
    assert!(csv.contains("s1,T1,ncg,10,0.919\n"));
    for name in ["s1", "s2", "s3"] {
        assert!(csv.lines().any(|l| l.starts_with(&format!("{name},T1,ncg,"))));
    }

    let twice = stdout(&mdcu(&with_corpus(
        "compare",
        &m,
        &c,
        &["--run", &s1, "--run", &s1, "--b", "1.5"],
    )));
    let curve = |name: &str| -> Vec<String> {
        twice
            .lines()
            .filter(|l| l.starts_with(&format!("{name},")))
            .map(|l| l.split_once(',').unwrap().1.to_string())
            .collect()
    };
    assert!(!curve("s1").is_empty());
    assert_eq!(curve("s1"), curve("s1-2"));
}

#[test]
fn classic_baseline() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s1.run"),
    );
    let csv = stdout(&mdcu(&with_corpus("classic", &m, &c, &["--run", &r])));
    assert_eq!(column(&csv, "total_cg")[9], "39.000");
    assert_eq!(column(&csv, "avg_cg")[9], "9.750");
    assert_eq!(column(&csv, "p_at_rank_ge_1")[2], "0.667");
    assert_eq!(column(&csv, "p_at_rank_ge_2")[9], "0.100");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("classic.json");
    let status = mdcu(&with_corpus(
        "classic",
        &m,
        &c,
        &["--run", &r, "--format", "json", "--out", out.to_str().unwrap()],
    ));
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("mean_average_precision"));
}

#[test]
fn output_is_byte_identical_across_invocations() {
    let (m, c, r) = (
        fixture("rc_prime.manifest.json"),
        fixture("rc_prime.csv"),
        fixture("s2.run"),
    );
    let args = with_corpus("compare", &m, &c, &["--run", &r, "--b", "1.5", "--format", "json"]);
    assert_eq!(stdout(&mdcu(&args)), stdout(&mdcu(&args)));
}
