use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use skyselect_api::{ApiQuery, AppState, Endpoint, Envelope};
use skyselect_testkit::fixtures::{calibrated_rates, fixture_path, nine_providers_merged, read_fixture};

fn catalog() -> PathBuf {
    fixture_path("catalog-9-providers.json")
}

fn rates() -> PathBuf {
    fixture_path("rates-calibrated.json")
}

fn skyselect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skyselect"))
        .args(args)
        .env_remove("SKYSELECT_CATALOG")
        .env_remove("SKYSELECT_RATES")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const STORAGE_FLAGS: [&str; 12] =
    ["--currency", "AUD", "--storage", "50", "--in", "50", "--out", "10", "--copy", "1000", "--get", "5000"];

fn select_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec!["select", "--merge-regions"];
    args.extend_from_slice(extra);
    args
}

#[test]
fn validate_accepts_fixture() {
    let o = skyselect(&["validate", "--catalog", catalog().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("9 providers"));
}

#[test]
fn validate_names_offering_with_zero_cores() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = read_fixture("catalog-9-providers.json");
    let broken = text.replacen("\"cores\": 1", "\"cores\": 0", 1);
    assert_ne!(text, broken);
    std::fs::write(&path, broken).unwrap();
    let o = skyselect(&["validate", "--catalog", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("compute/t1.micro: cores must be >= 1"), "{err}");
}

#[test]
fn validate_reports_parse_errors_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"providers\": [").unwrap();
    assert_eq!(skyselect(&["validate", "--catalog", path.to_str().unwrap()]).status.code(), Some(1));
    let o = skyselect(&["validate", "--catalog", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.json"));
}

#[test]
fn catalog_path_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_skyselect"))
        .arg("validate")
        .env("SKYSELECT_CATALOG", catalog())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn storage_selection_table() {
    let (c, r) = (catalog(), rates());
    let mut args = select_args(&["--catalog", c.to_str().unwrap(), "--rates", r.to_str().unwrap()]);
    args.extend_from_slice(&STORAGE_FLAGS);
    let o = skyselect(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    for column in ["storage_cost", "cost_data_in", "cost_data_out", "storage_dataTransfer_cost"] {
        assert!(header.contains(column), "{header}");
    }
    let first = lines.next().unwrap();
    assert!(first.starts_with("1 ") && first.contains("SoftLayer") && first.ends_with("7.000"), "{first}");
    assert!(out.contains("Fetched 12 records"));
}

#[test]
fn json_output_matches_api_body() {
    let (c, r) = (catalog(), rates());
    let mut args = select_args(&["--catalog", c.to_str().unwrap(), "--rates", r.to_str().unwrap(), "--format", "json"]);
    args.extend_from_slice(&STORAGE_FLAGS);
    let o = skyselect(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let state = AppState::new(nine_providers_merged(), calibrated_rates());
    let query = ApiQuery::parse(
        Endpoint::Storage,
        "media_type=json&currency=AUD&storage=50&data_upload_size=50&data_download_size=10&copy=1000&get=5000",
    )
    .unwrap();
    let mut api = state.run(&query).unwrap();
    let mut cli = Envelope::from_json(&stdout(&o)).unwrap();
    assert!(cli.meta.result_id.is_none());
    for e in [&mut api, &mut cli] {
        e.meta.result_id = None;
        e.meta.duration_ms = Default::default();
    }
    assert_eq!(cli.to_json(), api.to_json());
}

#[test]
fn zero_usage_costs_nothing() {
    let c = catalog();
    let o = skyselect(&select_args(&[
        "--catalog",
        c.to_str().unwrap(),
        "--storage",
        "0",
        "--in",
        "0",
        "--out",
        "0",
        "--format",
        "json",
    ]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let e = Envelope::from_json(&stdout(&o)).unwrap();
    assert!(!e.rows.is_empty());
    assert!(e.rows.iter().all(|r| r.total.is_zero()));
}

#[test]
fn combined_selection_infers_kind() {
    let (c, r) = (catalog(), rates());
    let o = skyselect(&select_args(&[
        "--catalog",
        c.to_str().unwrap(),
        "--rates",
        r.to_str().unwrap(),
        "--currency",
        "AUD",
        "--storage",
        "10",
        "--in",
        "2",
        "--out",
        "3",
        "--ram-range",
        "0,69",
        "--storage-range",
        "0,2040",
        "--hour",
        "744",
        "--n",
        "1",
    ]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains("compute_storage_dataTransfer_cost"));
    let first = out.lines().nth(1).unwrap();
    assert!(first.contains("t1.micro") && first.ends_with("21.855"), "{first}");
    assert!(out.contains("Fetched 28 records"));
}

#[test]
fn mismatched_lists_are_usage_errors() {
    let c = catalog();
    let o = skyselect(&select_args(&[
        "--catalog",
        c.to_str().unwrap(),
        "--in",
        "1",
        "--out",
        "1",
        "--ram-range",
        "0,69",
        "--n",
        "1,2",
    ]));
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("--n") && err.contains("match with each other"), "{err}");
}

#[test]
fn bad_flags_are_named() {
    let c = catalog();
    let o =
        skyselect(&select_args(&["--catalog", c.to_str().unwrap(), "--storage", "lots", "--in", "1", "--out", "1"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--storage"), "{}", stderr(&o));
    let o = skyselect(&select_args(&[
        "--catalog",
        c.to_str().unwrap(),
        "--storage",
        "1",
        "--in",
        "1",
        "--out",
        "1",
        "--currency",
        "EUR",
    ]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--currency"));
    let o = skyselect(&["select", "--catalog", c.to_str().unwrap(), "--format", "yaml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn offer_count_reports_totals() {
    let c = catalog();
    let o = skyselect(&["offer-count", "--catalog", c.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let expected = skyselect_core::offer_count(&skyselect_testkit::fixtures::nine_providers());
    assert_eq!(report["simple_count"].as_u64(), Some(expected.simple_count));
    assert_eq!(report["detailed_count"].as_u64(), Some(expected.detailed_count));
    let table = stdout(&skyselect(&["offer-count", "--catalog", c.to_str().unwrap()]));
    assert!(table.lines().any(|l| l.starts_with("total")), "{table}");
}

fn spawn_server(extra: &[&str]) -> std::process::Child {
    let c = catalog();
    let mut args = vec!["serve", "--catalog", c.to_str().unwrap(), "--bind", "127.0.0.1:0"];
    args.extend_from_slice(extra);
    Command::new(env!("CARGO_BIN_EXE_skyselect"))
        .args(&args)
        .env_remove("SKYSELECT_RATES")
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap()
}

#[test]
fn serve_answers_queries() {
    let mut child = spawn_server(&["--merge-regions"]);
    let mut err = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    err.read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();
    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(
        stream,
        "GET /api/cost/storage?storage=5&data_upload_size=1&data_download_size=1 HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("\"rows\""));
}

#[test]
fn serve_refuses_invalid_catalog_and_busy_port() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{}").unwrap();
    let o = skyselect(&["serve", "--catalog", path.to_str().unwrap(), "--bind", "127.0.0.1:0"]);
    assert_eq!(o.status.code(), Some(1));

    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().to_string();
    let o = skyselect(&["serve", "--catalog", catalog().to_str().unwrap(), "--bind", &port]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot bind"), "{}", stderr(&o));
}
