use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use codeown::fixtures;
use codeown::report::{read_divergence_csv, read_features_csv, read_ownership_csv, write_divergence_csv, write_features_csv, write_ownership_csv};
use codeown::stats::median;

fn codeown(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codeown"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Setup {
    _dir: tempfile::TempDir,
    repo: PathBuf,
    out: PathBuf,
}

fn setup() -> Setup {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("repo");
    fixtures::combined(&repo).unwrap();
    let out = dir.path().join("out");
    Setup { _dir: dir, repo, out }
}

fn run_all(st: &Setup) {
    let args = |cmd: &'static str| -> Vec<String> {
        vec![
            cmd.into(),
            "--repo".into(),
            s(&st.repo).into(),
            "--out-dir".into(),
            s(&st.out).into(),
            "--window".into(),
            "r1=r1".into(),
            "--window".into(),
            "r2=r1..r2".into(),
        ]
    };
    for cmd in ["mine", "analyze", "features"] {
        let a = args(cmd);
        let out = codeown(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn mine_analyze_features_outputs() {
    let st = setup();
    run_all(&st);
    for name in ["r1", "r2"] {
        let snap: serde_json::Value = serde_json::from_str(&read(st.out.join(format!("{name}.snapshot.json")))).unwrap();
        let keys: Vec<_> = snap.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["commits", "config", "file_authorship", "window"]);
    }

    let div = read_divergence_csv(&read(st.out.join("r1.divergence.csv"))).unwrap();
    let b = div.iter().find(|r| r.path == "B.java").unwrap();
    assert_eq!((b.common, b.commit_only, b.line_only), (0.5, 0.5, 0.0));
    let div2 = read(st.out.join("r2.divergence.csv"));
    // linda is major by commits but minor by lines
    assert!(div2.contains("C.java,1,0,1,0.500000,0.000000,0.500000,,0.000000\n"));

    let features = read(st.out.join("r1.features.csv"));
    let table = read_features_csv(&features).unwrap();
    let a = table.rows.iter().find(|r| r.path == "A.java").unwrap();
    assert_eq!(a.OWN_COMMIT, 0.75);
    assert_eq!(a.OWN_LINE, 0.933333);
    assert_eq!((a.COMMITS, a.NDEV, a.LOC), (4, 2, 90));
    assert!(!table.has_labels);
    assert!(!features.lines().next().unwrap().contains("defective"));

    // Round trips reproduce the bytes.
    let own = read(st.out.join("r1.ownership.csv"));
    assert_eq!(write_ownership_csv(&read_ownership_csv(&own).unwrap()).unwrap(), own);
    let div_text = read(st.out.join("r1.divergence.csv"));
    assert_eq!(write_divergence_csv(&read_divergence_csv(&div_text).unwrap()).unwrap(), div_text);
    assert_eq!(write_features_csv(&table).unwrap(), features);
}

#[test]
fn summary_medians_match_csv_rows() {
    let st = setup();
    run_all(&st);
    for name in ["r1", "r2"] {
        let rows = read_divergence_csv(&read(st.out.join(format!("{name}.divergence.csv")))).unwrap();
        let summary: serde_json::Value = serde_json::from_str(&read(st.out.join(format!("{name}.summary.json")))).unwrap();
        let check = |key: &str, values: Vec<f64>| {
            let expected = median(&values);
            let got = summary[key].as_f64();
            match (expected, got) {
                (Some(e), Some(g)) => assert!((e - g).abs() < 1e-6, "{name} {key}: {e} vs {g}"),
                (None, None) => {}
                other => panic!("{name} {key}: {other:?}"),
            }
        };
        check("median_common", rows.iter().map(|r| r.common).collect());
        check("median_commit_only", rows.iter().map(|r| r.commit_only).collect());
        check("median_line_only", rows.iter().map(|r| r.line_only).collect());
        check("median_rho", rows.iter().filter_map(|r| r.rho).collect());
        check("median_expertise_consistency", rows.iter().filter_map(|r| r.expertise_consistency).collect());
        assert_eq!(summary["n_files"].as_u64(), Some(rows.len() as u64));
    }
    let r1: serde_json::Value = serde_json::from_str(&read(st.out.join("r1.summary.json"))).unwrap();
    assert_eq!(r1["median_rho_magnitude"], "strong");
    assert!(r1["exclusive_comparison"].is_null());
}

#[test]
fn reruns_are_byte_identical() {
    let st = setup();
    run_all(&st);
    let snapshot = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let first = snapshot(&st.out);
    assert_eq!(first.len(), 10);
    run_all(&st);
    assert_eq!(snapshot(&st.out), first);
}

#[test]
fn bad_ref_exits_2_and_names_ref() {
    let st = setup();
    let out = codeown(&["mine", "--repo", s(&st.repo), "--out-dir", s(&st.out), "--window", "x=no-such-tag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-tag"));
    assert!(!st.out.join("x.snapshot.json").exists());
}

#[test]
fn not_a_repository_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = codeown(&["mine", "--repo", s(dir.path()), "--out-dir", s(dir.path()), "--window", "x=HEAD"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze_without_snapshot_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = codeown(&["analyze", "--out-dir", s(dir.path()), "--window", "r1=r1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_window_gives_header_only_csvs() {
    let st = setup();
    let base = ["--repo", s(&st.repo), "--out-dir", s(&st.out), "--window", "e=r2..r2", "--extensions", ".kt"];
    for cmd in ["mine", "analyze"] {
        let mut args = vec![cmd];
        args.extend(base);
        assert!(codeown(&args).status.success());
    }
    assert_eq!(read(st.out.join("e.ownership.csv")).lines().count(), 1);
    assert_eq!(read(st.out.join("e.divergence.csv")).lines().count(), 1);
}

#[test]
fn features_with_labels_and_confounders() {
    let st = setup();
    let dir = st.out.parent().unwrap().to_path_buf();
    assert!(codeown(&["mine", "--repo", s(&st.repo), "--out-dir", s(&st.out), "--window", "r1=r1"]).status.success());
    let labels = dir.join("labels.csv");
    std::fs::write(&labels, "path,defective\nA.java,1\nB.java,0\nGone.java,1\n").unwrap();
    let conf = dir.join("metrics.csv");
    std::fs::write(&conf, "path,wmc\nB.java,4\nA.java,12\n").unwrap();
    let out = codeown(&[
        "features", "--out-dir", s(&st.out), "--window", "r1=r1",
        "--labels", s(&labels), "--confounders", s(&conf),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Gone.java"));
    let text = read(st.out.join("r1.features.csv"));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "release_name,path,OWN_COMMIT,OWN_LINE,MAJOR_COMMIT,MINOR_COMMIT,MAJOR_LINE,MINOR_LINE,COMMITS,ADDED_LINES,DEL_LINES,NDEV,LOC,wmc,defective"
    );
    assert_eq!(lines.next().unwrap(), "r1,A.java,0.750000,0.933333,2,0,2,0,4,90,0,2,90,12,1");
    assert!(lines.next().unwrap().ends_with(",4,0"));
    // C.java has no label and no confounder row
    assert!(lines.next().unwrap().ends_with(",,"));

    std::fs::write(&labels, "path,defective\nA.java,1\nA.java,0\n").unwrap();
    let out = codeown(&["features", "--out-dir", s(&st.out), "--window", "r1=r1", "--labels", s(&labels)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn npsk_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("scores.csv");
    std::fs::write(&input, "group_id,value\nlow,1\nlow,2\nlow,3\nhigh,10\nhigh,11\nhigh,12\n").unwrap();
    let out = codeown(&["npsk", s(&input)]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "group_id,rank\nhigh,1\nlow,2\n");

    std::fs::write(&input, "group_id,value\nb,1\nb,2\na,2\na,1\n").unwrap();
    let target = dir.path().join("ranks.csv");
    assert!(codeown(&["npsk", s(&input), "-o", s(&target)]).status.success());
    assert_eq!(read(target), "group_id,rank\na,1\nb,1\n");

    std::fs::write(&input, "group_id,value\na,notanumber\n").unwrap();
    assert_eq!(codeown(&["npsk", s(&input)]).status.code(), Some(2));
}

#[test]
fn config_file_drives_commands() {
    let st = setup();
    let dir = st.out.parent().unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "repo = \"repo\"\nout_dir = \"cfg-out\"\nthreshold = 0.05\n\n[[window]]\nname = \"r1\"\nrelease = \"r1\"\n\n[[window]]\nname = \"r2\"\npredecessor = \"r1\"\nrelease = \"r2\"\n",
    )
    .unwrap();
    for cmd in ["mine", "analyze", "features"] {
        let out = codeown(&["--config", s(&cfg), cmd]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(dir.join("cfg-out/r2.features.csv").is_file());

    let out = codeown(&["--config", s(&cfg), "--threshold", "2", "analyze"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn version_and_usage() {
    let out = codeown(&["version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("codeown "));
    assert_eq!(codeown(&["frobnicate"]).status.code(), Some(2));
}
