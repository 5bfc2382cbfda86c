use std::path::Path;
use std::process::Command;

use dbmapper::io::write_csv;
use dbmapper::synthgen::{gen_genus1, SynthSpec};
use dbmapper::{LensMap, PointCloud};
use dbmapper_cli::config::{ClustererKind, PipelineOptions};
use dbmapper_cli::pipeline::execute;
use dbmapper_cli::sweep::sweep_grid;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dbmapper"))
}

fn genus_csv(dir: &Path) -> std::path::PathBuf {
    let (cloud, lens) = gen_genus1(&SynthSpec::genus1(42)).unwrap();
    let path = dir.join("genus.csv");
    write_csv(std::fs::File::create(&path).unwrap(), &cloud, &lens).unwrap();
    path
}

fn dbscan_options() -> PipelineOptions {
    PipelineOptions {
        clusterer: Some(ClustererKind::Dbscan),
        dbscan_eps: Some(0.3),
        dbscan_min_weight: Some(3.0),
        ..Default::default()
    }
}

fn line(n: usize) -> (PointCloud, LensMap) {
    let xs: Vec<f64> = (0..n).map(|i| 10.0 * i as f64 / (n - 1) as f64).collect();
    let cloud = PointCloud::new(xs.iter().map(|&x| vec![x, 0.0]).collect()).unwrap();
    (cloud, LensMap::new(xs).unwrap())
}

#[test]
fn missing_lens_column_names_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let csv = genus_csv(dir.path());
    let out = bin()
        .args(["run", "--delta", "0.3", "--lens-column", "height", "--input"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`height`") && err.contains("header row"), "{err}");
}

#[test]
fn empty_g_range_is_rejected() {
    let (cloud, lens) = line(200);
    let cfg = PipelineOptions {
        delta: Some(1.0),
        ..Default::default()
    }
    .resolve(None)
    .unwrap();
    let err = sweep_grid(&cfg, &cloud, &lens, &[5], &[], (1, 0)).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("g value"));
}

#[test]
fn line_sweep_all_correct() {
    let (cloud, lens) = line(400);
    let cfg = PipelineOptions {
        delta: Some(0.5),
        ..Default::default()
    }
    .resolve(None)
    .unwrap();
    let sweep = sweep_grid(&cfg, &cloud, &lens, &[4, 8, 12], &[0.3, 0.5, 0.7], (1, 0)).unwrap();
    assert_eq!(sweep.report.cells.len(), 9);
    assert_eq!(sweep.report.standard_correct, 9);
    assert_eq!(sweep.report.density_correct, 9);
    assert_eq!(sweep.report.cell(1, 2).n, 8);
    assert_eq!(sweep.report.cell(1, 2).g, 0.7);
}

#[test]
fn genus1_dbscan_cell_is_correct() {
    let (cloud, lens) = gen_genus1(&SynthSpec::genus1(42)).unwrap();
    let cfg = PipelineOptions {
        n_checkpoints: Some(20),
        overlap: Some(0.5),
        ..dbscan_options()
    }
    .resolve(None)
    .unwrap();
    let (run, manifest) = execute(&cfg, &cloud, &lens).unwrap();
    assert_eq!(run.graph.betti(), (2, 1));
    assert!(manifest.mu.is_some() && manifest.sigma.is_some());
}

#[test]
fn run_is_byte_for_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = genus_csv(dir.path());
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let status = bin()
            .args(["run", "--delta", "0.3", "--n-checkpoints", "8", "--format", "json,dot,graphml,svg", "--input"])
            .arg(&csv)
            .arg("--out-dir")
            .arg(&out_dir)
            .env("DBMAPPER_WORKERS", if name == "a" { "1" } else { "4" })
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(out_dir);
    }
    for file in ["graph.json", "graph.dot", "graph.graphml", "graph.svg"] {
        let a = std::fs::read(outputs[0].join(file)).unwrap();
        let b = std::fs::read(outputs[1].join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let csv = genus_csv(dir.path());
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(&cfg_path, "delta = 0.3\nn-checkpoints = 4\nformat = [\"json\"]\n").unwrap();
    let out_dir = dir.path().join("out");
    let status = bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg_path)
        .args(["--n-checkpoints", "9", "--input"])
        .arg(&csv)
        .arg("--out-dir")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["n_checkpoints"], 9);
    assert_eq!(manifest["config"]["clusterer"]["delta"], 0.3);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = genus_csv(dir.path());
    let ok = bin()
        .args(["verify", "--delta", "0.3", "--n-checkpoints", "6", "--multinerve", "true", "--input"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    // thin overlaps are swallowed by Rips edges, so the hypotheses fail
    let bad = bin()
        .args(["verify", "--delta", "0.3", "--n-checkpoints", "40", "--overlap", "0.2", "--input"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn synth_and_diagram_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("circle.csv");
    let status = bin()
        .args(["synth", "circle", "--n", "300", "--noise", "0.005", "--seed", "3", "--out"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let jsonl = dir.path().join("dg.jsonl");
    let status = bin()
        .args(["diagram", "--delta", "0.2", "--n-checkpoints", "6", "--input"])
        .arg(&csv)
        .arg("--out")
        .arg(&jsonl)
        .status()
        .unwrap();
    assert!(status.success());
    let dg = dbmapper::PersistenceDiagram::read_jsonl(std::io::BufReader::new(std::fs::File::open(&jsonl).unwrap()))
        .unwrap();
    assert_eq!(dg.count(dbmapper::PointKind::Ext0), 1);
    assert_eq!(dg.count(dbmapper::PointKind::Ext1), 1);
}
