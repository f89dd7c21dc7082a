use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.toml"))
}

fn qhgeo(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhgeo"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_file(cmd: &str, config: &Path, out: &Path) -> Output {
    qhgeo(&[cmd, "--config", config.to_str().unwrap()], out)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let k = r.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    r.records().map(|row| row.unwrap()[k].to_string()).collect()
}

#[test]
fn euclidean_moduli_end_at_one() {
    let out = tempfile::tempdir().unwrap();
    let o = run_file("moduli", &scenario("moduli-euclidean"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = out.path().join("moduli-euclidean/moduli.csv");
    let est = column(&csv, "estimate");
    assert_eq!(est.len(), 4);
    let last: f64 = est[3].parse().unwrap();
    assert!((last - 1.0).abs() < 1e-6, "{last}");
    assert!(fs::read_to_string(&csv).unwrap().contains("\r\n"));
}

#[test]
fn malformed_norm_is_a_config_error_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scenario = \"bad\"\n[norm]\ndim = 2\np = 0.5\n[moduli]\nmodulus = \"convexity\"\narguments = [1.0]\n");
    let o = run_file("moduli", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("norm"), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("bad").exists());
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scenario = \"x\"\ncolour = 1\n[norm]\ndim = 2\np = 2\n");
    assert_eq!(run_file("moduli", &cfg, dir.path()).status.code(), Some(2));
}

#[test]
fn endpoint_outside_the_domain_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = \"out\"\n[norm]\ndim = 2\np = 2\n[domain]\nshape = \"half-space\"\nnormal = [0.0, 1.0]\noffset = 0.0\n[geodesic]\nx = [0.0, 1.0]\ny = [0.0, -1.0]\n",
    );
    assert_eq!(run_file("geodesic", &cfg, dir.path()).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhgeo(&["verify", "--config", scenario("verify-series").to_str().unwrap(), "--suite", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coincident_endpoints_give_zero_length() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = \"same\"\n[norm]\ndim = 2\np = 2\n[domain]\nshape = \"box\"\nlo = [0.0, 0.0]\nhi = [1.0, 1.0]\n[geodesic]\nx = [0.3, 0.4]\ny = [0.3, 0.4]\n",
    );
    let o = run_file("geodesic", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let upper = column(&dir.path().join("same/summary.csv"), "upper_bound");
    assert_eq!(upper, ["0"]);
}

#[test]
fn half_plane_geodesic_brackets_the_closed_form() {
    let out = tempfile::tempdir().unwrap();
    let o = run_file("geodesic", &scenario("geodesic-half-plane"), out.path());
    assert_eq!(o.status.code(), Some(0));
    let dir = out.path().join("geodesic-half-plane");
    let upper: f64 = column(&dir.join("summary.csv"), "upper_bound")[0].parse().unwrap();
    let lower: f64 = column(&dir.join("summary.csv"), "lower_bound")[0].parse().unwrap();
    // distance between (-1,1) and (1,1) in the upper half-plane
    let exact = 2.0 * (1.0f64).asinh();
    assert!(lower <= exact && exact <= upper * (1.0 + 1e-12), "{lower} {exact} {upper}");
    assert!((upper - exact).abs() < 1e-4 * exact);
    assert!(fs::read_to_string(dir.join("path.svg")).unwrap().contains("<polyline"));
    assert!(csv_rows(&dir.join("path.csv")).len() > 100);
}

#[test]
fn series_bound_holds_with_tiny_slack() {
    let out = tempfile::tempdir().unwrap();
    let o = run_file("verify", &scenario("verify-series"), out.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = out.path().join("verify-series/series.csv");
    for s in column(&csv, "slack") {
        let s: f64 = s.parse().unwrap();
        assert!(s >= -1e-9, "{s}");
    }
}

#[test]
fn expected_failures_exit_zero() {
    let out = tempfile::tempdir().unwrap();
    for name in ["verify-dini-log", "verify-starlike-large-radius"] {
        let o = run_file("verify", &scenario(name), out.path());
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stdout));
        let outcome = column(&out.path().join(name).join("verdict.csv"), "outcome");
        assert_eq!(outcome, ["fail"]);
    }
}

#[test]
fn mismatched_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("verify-dini-log")).unwrap().replace("expect = \"fail\"", "expect = \"pass\"");
    assert!(text.contains("expect = \"pass\""));
    let cfg = write_config(dir.path(), &text);
    assert_eq!(run_file("verify", &cfg, dir.path()).status.code(), Some(1));
}

#[test]
fn starlike_scenario_passes() {
    let out = tempfile::tempdir().unwrap();
    let o = run_file("verify", &scenario("verify-starlike-punctured"), out.path());
    assert_eq!(o.status.code(), Some(0));
    let v = column(&out.path().join("verify-starlike-punctured/starlike.csv"), "violations");
    assert_eq!(v, ["0"]);
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for out in [a.path(), b.path()] {
        assert_eq!(run_file("verify", &scenario("verify-averaging-square"), out).status.code(), Some(0));
    }
    let dir = |p: &Path| p.join("verify-averaging-square");
    let mut names: Vec<_> = fs::read_dir(dir(a.path())).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(fs::read(dir(a.path()).join(&n)).unwrap(), fs::read(dir(b.path()).join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn seed_override_changes_the_sample() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = scenario("moduli-l1");
    let c = cfg.to_str().unwrap();
    assert_eq!(qhgeo(&["moduli", "--config", c, "--seed", "1"], a.path()).status.code(), Some(0));
    assert_eq!(qhgeo(&["moduli", "--config", c, "--seed", "2"], b.path()).status.code(), Some(0));
    let read = |p: &Path| fs::read(p.join("moduli-l1/moduli.csv")).unwrap();
    assert_ne!(read(a.path()), read(b.path()));
}
