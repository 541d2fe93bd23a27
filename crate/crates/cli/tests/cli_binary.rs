//! End-to-end runs of the `entropic` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entropic_cli::output::parse_csv;

const BIN: &str = env!("CARGO_BIN_EXE_entropic");

fn presets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

// Phased amplitudes (±1±i)/2 keep every overlap exactly 1/2 in binary floating point.
const MUB_PAIR: &str = r#"
log_base = "2"
bounds = ["deutsch", "maassen_uffink", "coles_piani", "H_omega"]

[source]
kind = "explicit"

[[source.bases]]
label = "Z"
vectors = [[1, 0], [0, 1]]

[[source.bases]]
label = "X"
vectors = [[[0.5, 0.5], [0.5, 0.5]], [[0.5, 0.5], [-0.5, -0.5]]]
"#;

#[test]
fn mub_pair_maassen_uffink_is_exactly_one_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mub.toml", MUB_PAIR);
    let out = run(&["compare", "-c", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = parse_csv(&String::from_utf8(out.stdout).unwrap(), 1).unwrap();
    assert_eq!(table.column("maassen_uffink").unwrap(), vec![1.0]);
    assert_eq!(table.column("coles_piani").unwrap(), vec![1.0]);
}

#[test]
fn compare_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "random.toml",
        r#"
bounds = ["liu_b", "admixture", "cyclic_average_I"]
[source]
kind = "random"
dim = 3
n = 3
seed = 7
instances = 12
[state]
kind = "random"
rank = 2
seed = 11
"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["compare", "-c", &cfg, "-o", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    let table = parse_csv(&text, 1).unwrap();
    assert_eq!(table.rows.len(), 12);
    // A state was configured, so the left-hand side column is appended.
    assert!(table.column("entropy_sum_lhs").is_some());

    let reseeded = run(&["compare", "-c", &cfg, "--seed", "8"]);
    assert!(reseeded.status.success());
    assert_ne!(reseeded.stdout, text.as_bytes());
}

#[test]
fn csv_round_trips_through_the_file_and_svg_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let svg = dir.path().join("fig1.svg");
    let text = std::fs::read_to_string(presets().join("fig1.toml")).unwrap();
    let text = text
        .replace("csv = \"fig1.csv\"", &format!("csv = {:?}", csv.to_str().unwrap()))
        .replace("svg = \"fig1.svg\"", &format!("svg = {:?}", svg.to_str().unwrap()));
    let cfg = write(dir.path(), "fig1.toml", &text);
    let out = run(&["compare", "-c", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let written = std::fs::read_to_string(&csv).unwrap();
    let table = parse_csv(&written, 1).unwrap();
    assert_eq!(table.rows.len(), 101);
    assert_eq!(table.header(), vec!["a", "H_omega_simple", "liu_b", "D"]);
    let d = table.column("D").unwrap();
    assert!(d.iter().all(|&x| x >= -1e-9));
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("<polyline") && svg.contains("bits"));
}

#[test]
fn omega_subcommand_prints_the_mub_vector() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mub.toml", MUB_PAIR);
    let out = run(&["omega", "-c", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.728553390593"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let ok = run(&["verify", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    assert!(String::from_utf8_lossy(&ok.stdout).lines().all(|l| !l.starts_with("FAIL")));

    let skewed = write(
        dir.path(),
        "skew.toml",
        r#"bounds = ["maassen_uffink"]
[source]
kind = "explicit"
[[source.bases]]
vectors = [[1, 0], [0, 1]]
[[source.bases]]
label = "skew"
vectors = [[1, 0], [0.1, 1]]
"#,
    );
    let bad = run(&["verify", "-c", &skewed]);
    assert_eq!(bad.status.code(), Some(1));
    let report = String::from_utf8(bad.stdout).unwrap();
    assert!(report.contains("FAIL basis_orthonormality"), "{report}");
    assert!(report.contains("vectors 0 and 1"), "{report}");

    let unknown = write(dir.path(), "unknown.toml", &MUB_PAIR.replace("log_base", "logbase"));
    let out = run(&["compare", "-c", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = run(&["compare", "-c", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    let out = run(&["compare", "-c", &skewed]);
    assert_eq!(out.status.code(), Some(2));

    let family = presets().join("fig1.toml");
    let out = run(&["compare", "-c", family.to_str().unwrap(), "--budget", "1", "-o", "/dev/null"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
