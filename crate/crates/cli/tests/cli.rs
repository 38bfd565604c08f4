use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hyperlat::instances::{golden, MatrixKind};
use serde_json::Value;
use tempfile::TempDir;

fn hyperlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(args)
        .env_remove("HYPERLAT_CLUSTER_TOL")
        .env_remove("HYPERLAT_FLAT_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn generate(dir: &Path, extra: &[&str]) {
    let out_dir = dir.to_str().unwrap();
    let mut args = vec!["generate", "--out-dir", out_dir];
    args.extend_from_slice(extra);
    let out = hyperlat(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

fn parse_spectrum(text: &str) -> Vec<(f64, usize)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let (v, k) = l.split_once(',').unwrap();
            (v.parse().unwrap(), k.parse().unwrap())
        })
        .collect()
}

#[test]
fn generate_catalog_dodecahedron() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--catalog", "dodecahedron"]);
    let layout = read_json(dir.path(), "layout.json");
    assert_eq!(layout["vertices"].as_array().unwrap().len(), 20);
    assert_eq!(layout["rings"], 0);
    assert!(layout["vertices"].as_array().unwrap().iter().all(|v| v["type"] == "-"));
    let signed = read_json(dir.path(), "signed_line_graph.json");
    assert_eq!(signed["orientation"].as_array().unwrap().len(), 30);
    assert_eq!(signed["signs"].as_array().unwrap().len(), 60);
    let line = read_json(dir.path(), "line_graph.json");
    assert_eq!(line["back_map"].as_array().unwrap().len(), 30);
}

#[test]
fn generate_six_four_ring_annotations() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--p", "6", "--q", "4", "--rings", "2"]);
    let layout = read_json(dir.path(), "layout.json");
    let ring2: Vec<&Value> = layout["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["ring"] == 2)
        .collect();
    assert_eq!(ring2.iter().filter(|v| v["type"] == "b").count(), 30);
    assert_eq!(ring2.iter().filter(|v| v["type"] == "B").count(), 12);
}

#[test]
fn triangles_are_rejected() {
    let dir = TempDir::new().unwrap();
    let out = hyperlat(&[
        "generate", "--p", "3", "--q", "7", "--rings", "2", "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("p = 3"));
}

#[test]
fn dodecahedron_spectrum_matches_golden_files() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--catalog", "dodecahedron"]);
    let out = hyperlat(&[
        "spectrum", "--graph", &path(dir.path(), "layout.json"), "--mode", "full",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("spectrum_full.csv")).unwrap();
    let expected = include_str!("golden/dodecahedron_spectrum_full.csv");
    assert_eq!(csv, expected);

    let gold = golden("dodecahedron", MatrixKind::FullWave).unwrap().numeric();
    let parsed = parse_spectrum(&csv);
    assert_eq!(parsed.len(), gold.len());
    for ((v, k), (gv, gk)) in parsed.iter().zip(&gold) {
        assert!((v - gv).abs() < 1e-9);
        assert_eq!(k, gk);
    }
    let hist = fs::read_to_string(dir.path().join("histogram_full.csv")).unwrap();
    assert!(hist.starts_with("bin_left,bin_right,count\n"));
    assert!(hist.ends_with("# flat_band_count=10\n"));
}

#[test]
fn half_wave_spectrum_uses_stored_orientation() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--catalog", "dodecahedron", "--seed", "9"]);
    let out = hyperlat(&[
        "spectrum", "--graph", &path(dir.path(), "layout.json"), "--mode", "half",
        "--orientation", &path(dir.path(), "signed_line_graph.json"),
        "--omega0", "5", "--t", "0.1", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("spectrum_half.csv")).unwrap();
    let gold = golden("dodecahedron", MatrixKind::HalfWave).unwrap().numeric();
    for ((v, k), (gv, gk)) in parse_spectrum(&csv).iter().zip(&gold) {
        assert!((v - gv).abs() < 1e-9);
        assert_eq!(k, gk);
    }
    let physical = fs::read_to_string(dir.path().join("physical_spectrum_half.csv")).unwrap();
    let top = parse_spectrum(&physical);
    assert_eq!(top.last().unwrap(), &(5.2, 11));
}

#[test]
fn flat_states_for_dodecahedron_come_from_even_cycles() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--catalog", "dodecahedron"]);
    let out = hyperlat(&[
        "spectrum", "--graph", &path(dir.path(), "layout.json"), "--flat-states",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("flat_states_full.csv")).unwrap();
    assert_eq!(csv.lines().count(), 31);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 11);
    let sidecar = read_json(dir.path(), "flat_states_full.json");
    assert!(sidecar
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["source"] == "even_cycle" && s["cycle"].as_array().unwrap().len() % 2 == 0));
}

#[test]
fn five_four_histogram_reports_flat_band() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--p", "5", "--q", "4", "--rings", "4"]);
    let out = hyperlat(&[
        "spectrum", "--graph", &path(dir.path(), "layout.json"), "--bins", "60",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let hist = fs::read_to_string(dir.path().join("histogram_full.csv")).unwrap();
    assert!(hist.ends_with("# flat_band_count=200\n"));
    assert_eq!(hist.lines().count(), 62);
    let total: usize = hist
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 680);
}

#[test]
fn outputs_are_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        generate(dir.path(), &["--p", "5", "--q", "4", "--rings", "2", "--seed", "7"]);
        let out = hyperlat(&[
            "spectrum", "--graph", &path(dir.path(), "layout.json"), "--mode", "half",
            "--orientation", &path(dir.path(), "signed_line_graph.json"),
            "--out-dir", dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let out = hyperlat(&[
            "verify", "--graph", &path(dir.path(), "layout.json"), "--seed", "7",
            "--out-dir", dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    for name in [
        "layout.json",
        "signed_line_graph.json",
        "spectrum_half.csv",
        "histogram_half.csv",
        "verify_report.json",
    ] {
        assert_eq!(
            fs::read_to_string(a.path().join(name)).unwrap(),
            fs::read_to_string(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn verify_dodecahedron_passes() {
    let dir = TempDir::new().unwrap();
    let out = hyperlat(&[
        "verify", "--catalog", "dodecahedron", "--switches", "50",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = read_json(dir.path(), "verify_report.json");
    assert_eq!(report["passed"], true);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    for want in ["identity_full", "identity_half", "bounds", "flat_full", "flat_half", "switching"] {
        assert!(names.contains(&want), "{want}");
    }
}

#[test]
fn verify_six_four_gauge_equivalence() {
    let dir = TempDir::new().unwrap();
    let out = hyperlat(&[
        "verify", "--p", "6", "--q", "4", "--rings", "2", "--jobs", "2",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report = read_json(dir.path(), "verify_report.json");
    let gauge = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "gauge_equivalence")
        .unwrap();
    assert_eq!(gauge["passed"], true);
    assert!(gauge["detail"].as_str().unwrap().starts_with("bipartite"));
}

#[test]
fn verification_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(["verify", "--catalog", "dodecahedron", "--out-dir", dir.path().to_str().unwrap()])
        .env("HYPERLAT_FLAT_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL dodecahedron flat_full"));
    assert_eq!(read_json(dir.path(), "verify_report.json")["passed"], false);
}

#[test]
fn dangling_vertex_id_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"p":4,"q":4,"rings":1,"vertices":[{"id":0,"ring":1,"type":"b"},{"id":1,"ring":1,"type":"b"}],"edges":[[0,1],[1,7]]}"#,
    )
    .unwrap();
    let out = hyperlat(&["verify", "--graph", bad.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    fs::write(&bad, "{not json").unwrap();
    let out = hyperlat(&["spectrum", "--graph", bad.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_and_size_cap() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = hyperlat(&["spectrum", "--graph", &path(dir.path(), "absent.json"), "--out-dir", d]);
    assert_eq!(code(&out), 2);
    generate(dir.path(), &["--p", "6", "--q", "4", "--rings", "2"]);
    let layout = path(dir.path(), "layout.json");
    let out = hyperlat(&["spectrum", "--graph", &layout, "--max-dim", "20", "--out-dir", d]);
    assert_eq!(code(&out), 3);
    let out = hyperlat(&["spectrum", "--graph", &layout, "--bins", "5", "--out-dir", d]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_environment_overrides() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), &["--catalog", "dodecahedron"]);
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_hyperlat"))
            .args([
                "spectrum", "--graph", &path(dir.path(), "layout.json"),
                "--out-dir", dir.path().to_str().unwrap(),
            ])
            .env("HYPERLAT_CLUSTER_TOL", value)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("abc")), 2);
    assert_eq!(code(&run("-1")), 2);
    assert_eq!(code(&run("0.5")), 0);
    // A coarse tolerance merges -2, 1-sqrt5, -1 into one cluster.
    let csv = fs::read_to_string(dir.path().join("spectrum_full.csv")).unwrap();
    assert!(csv.lines().count() < 8);
}

#[test]
fn growth_tables() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = hyperlat(&["growth", "--p", "5", "--q", "4", "--lmax", "8", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("f_inf=0.2971"));
    let csv = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(csv.starts_with("ring,f_ell,f_inf,ratio\n"));
    assert_eq!(csv.lines().count(), 9);

    let out = hyperlat(&["growth", "--p", "4", "--q", "4", "--lmax", "8", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    let report = read_json(dir.path(), "growth_report.json");
    for row in report["rows"].as_array().unwrap().iter().skip(1) {
        let l = row["ring"].as_f64().unwrap();
        assert_eq!(row["c_ell"].as_f64().unwrap(), 2.0 / (l - 1.0));
    }

    let out = hyperlat(&["growth", "--p", "6", "--q", "4", "--lmax", "4", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    let report = read_json(dir.path(), "growth_report.json");
    let row4 = &report["rows"][3];
    assert_eq!(row4["ring"], 4);
    assert_eq!(row4["m_ell"], 2232);

    let out = hyperlat(&["growth", "--p", "3", "--q", "3", "--lmax", "4", "--out-dir", d]);
    assert_eq!(code(&out), 2);
}
