//! End-to-end behaviour of the `spectra` command and its library.

use std::process::Command as Process;

use spectra_cli::cache::SpectrumCache;
use spectra_cli::output::BOUNDS_COLUMNS;
use spectra_cli::{emit, run, Command, OutputFormat, Payload, ResultRecord, RunConfig};

fn config(command: Command, ks: &[u32]) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.k_list = ks.to_vec();
    c
}

fn payload_json(cfg: &RunConfig) -> String {
    serde_json::to_string(&run(cfg).unwrap().record.payload).unwrap()
}

fn spectra(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_spectra")).args(args).env_remove("SPECTRA_CACHE").output().unwrap()
}

#[test]
fn eig_reproduces_table_row() {
    let mut cfg = config(Command::Eig, &[1]);
    cfg.alpha = Some(0.35);
    let Payload::Eig(entries) = run(&cfg).unwrap().record.payload else { panic!("wrong payload") };
    for (got, want) in entries[0].spectrum.eigenvalues.iter().zip([0.57, 1.98, 4.11]) {
        assert!((got - want).abs() < 0.01, "{got} vs {want}");
    }
}

#[test]
fn runs_are_deterministic() {
    let cfg = config(Command::Minimize, &[1, 2]);
    assert_eq!(payload_json(&cfg), payload_json(&cfg));
    let mut cfg = config(Command::Limit, &[60, 200]);
    cfg.alpha = Some(0.5);
    assert_eq!(payload_json(&cfg), payload_json(&cfg));
}

#[test]
fn records_round_trip_exactly() {
    let mut cfg = config(Command::Eig, &[1, 3]);
    cfg.alpha = Some(0.16);
    let record = run(&cfg).unwrap().record;
    let text = serde_json::to_string(&record).unwrap();
    let back: ResultRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back, record);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn cache_serves_identical_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let mut cfg = config(Command::Eig, &[1, 2, 5]);
    cfg.alpha = Some(0.35);
    let fresh = payload_json(&cfg);
    cfg.cache_path = Some(path.clone());
    let filling = payload_json(&cfg);
    assert_eq!(SpectrumCache::open(&path).unwrap().len(), 3);
    let served = payload_json(&cfg);
    assert_eq!(fresh, filling);
    assert_eq!(fresh, served);
    // A different eigenvalue count is a different key.
    cfg.j_max = 2;
    payload_json(&cfg);
    assert_eq!(SpectrumCache::open(&path).unwrap().len(), 6);
}

#[test]
fn bounds_csv_layout() {
    let mut cfg = config(Command::Bounds, &(3..50).step_by(2).collect::<Vec<_>>());
    cfg.output_format = OutputFormat::Csv;
    let record = run(&cfg).unwrap().record;
    let text = emit(&record, &cfg).unwrap().unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, BOUNDS_COLUMNS);
    let mut sorted = header[5..].to_vec();
    sorted.sort();
    assert_eq!(sorted, header[5..]);
    let a1 = header.iter().position(|h| h == "a1").unwrap();
    let mut rows = 0;
    for row in reader.records() {
        let row = row.unwrap();
        assert!(row[a1].parse::<f64>().unwrap() > 1.0);
        rows += 1;
    }
    assert_eq!(rows, 24 * spectra_cli::commands::BOUNDS_SAMPLES);
}

#[test]
fn limit_reports_reduced_and_limit_values() {
    let cfg = config(Command::Limit, &[200]);
    let Payload::Limit(entries) = run(&cfg).unwrap().record.payload else { panic!("wrong payload") };
    let first = &entries[0];
    let pi2 = std::f64::consts::PI.powi(2) / 4.0;
    assert!((first.limit - pi2).abs() < 1e-12);
    let reduced = first.reduced_root.unwrap();
    assert!((reduced - pi2 / 1.05f64.powi(2)).abs() < 1e-9);
    assert!((reduced - pi2).abs() <= 5.0 * first.eps);
    assert!(entries.windows(2).all(|w| w[1].reduced_root > w[0].reduced_root));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut cfg = config(Command::Eig, &[2]);
    cfg.alpha = Some(0.0);
    cfg.output_path = Some(path.clone());
    let record = run(&cfg).unwrap().record;
    assert!(emit(&record, &cfg).unwrap().is_none());
    let back: ResultRecord = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(back.payload, record.payload);
    assert_eq!(back.schema_version, spectra_cli::SCHEMA_VERSION);
}

#[test]
fn exit_codes() {
    assert_eq!(spectra(&["eig", "--k", "1", "--alpha", "0.35", "--format", "csv"]).status.code(), Some(0));
    assert_eq!(spectra(&["eig", "--k", "1"]).status.code(), Some(2));
    assert_eq!(spectra(&["minimize", "--k", "0"]).status.code(), Some(2));
    assert_eq!(spectra(&["limit", "--eps", "2"]).status.code(), Some(2));
    assert_eq!(spectra(&["eig", "--format", "xml"]).status.code(), Some(2));
    // A tolerance nothing can meet turns Table 1 into a failed verification.
    assert_eq!(spectra(&["table1", "--k", "2", "--tol", "1e-9"]).status.code(), Some(1));
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env-cache.json");
    let out = Process::new(env!("CARGO_BIN_EXE_spectra"))
        .args(["eig", "--k", "3", "--alpha", "0.16"])
        .env("SPECTRA_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(SpectrumCache::open(&path).unwrap().len(), 1);
}
