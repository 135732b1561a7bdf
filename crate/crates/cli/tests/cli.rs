use std::process::{Command, Output};

use khwidth::diagrams::closure;
use khwidth::BraidWord;

fn khwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khwidth"))
        .args(args)
        .env_remove("KHWIDTH_MAX_CROSSINGS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn twist_knot_width() {
    let o = khwidth(&["twistknot", "--t", "1", "--framing", "-1", "width"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn trefoil_ascii_layout() {
    let o = khwidth(&["kh", "--braid", "2: 1 1 1", "--ascii"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("q/δ"), "{text}");
    assert!(last.contains("-1"));
    assert_eq!(text.lines().filter(|l| l.contains('|') && l.trim_end().ends_with('1')).count(), 3);
}

#[test]
fn figure_six_verifies() {
    let o = khwidth(&["verify", "--figure", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_all() {
    let o = khwidth(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(khwidth(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(khwidth(&["width"]).status.code(), Some(64));
    assert_eq!(khwidth(&["width", "--braid", "2: 1 x"]).status.code(), Some(64));
    assert_eq!(khwidth(&["verify", "--figure", "fig99"]).status.code(), Some(64));
    assert_eq!(khwidth(&["--help"]).status.code(), Some(0));
    // Over the crossing cap is a computation error, not a usage error.
    let o = khwidth(&["--max-crossings", "4", "width", "--braid", "2: 1 1 1 1 1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = khwidth(&["cone", "--braid", "2: -1 -1 -1", "--crossing", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_is_byte_stable() {
    let args = ["--json", "twistknot", "--t", "1", "--framing", "2", "kh"];
    let a = khwidth(&args);
    let b = khwidth(&["--threads", "1", "--json", "twistknot", "--t", "1", "--framing", "2", "kh"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn determinant_and_jones() {
    let o = khwidth(&["det", "--braid", "3: 1 -2 1 -2"]);
    assert_eq!(stdout(&o).trim(), "5");
    let o = khwidth(&["jones", "--check", "--braid", "3: 1 -2 1 -2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = khwidth(&["twistknot", "--t", "0", "--framing", "-3", "det"]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn planar_diagram_input() {
    let b: BraidWord = "3: 1 -2 1 -2".parse().unwrap();
    let dir = std::env::temp_dir().join(format!("khwidth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig8.json");
    std::fs::write(&path, serde_json::to_string(&closure(&b)).unwrap()).unwrap();
    let from_pd = khwidth(&["--json", "kh", "--pd", path.to_str().unwrap()]);
    let from_braid = khwidth(&["--json", "kh", "--braid", "3: 1 -2 1 -2"]);
    assert_eq!(from_pd.status.code(), Some(0));
    assert_eq!(from_pd.stdout, from_braid.stdout);
    std::fs::write(&path, "{\"crossings\": []}").unwrap();
    assert_eq!(khwidth(&["kh", "--pd", path.to_str().unwrap()]).status.code(), Some(64));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_and_precedence() {
    let dir = std::env::temp_dir().join(format!("khwidth-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.toml");
    std::fs::write(&path, "max_crossings = 4\njson = true\n").unwrap();
    let cfg = path.to_str().unwrap();
    let o = khwidth(&["--config", cfg, "width", "--braid", "2: 1 1 1 1 1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = khwidth(&["--config", cfg, "--max-crossings", "10", "width", "--braid", "2: 1 1 1 1 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{\n  \"width\": 1\n}");
    let o = Command::new(env!("CARGO_BIN_EXE_khwidth"))
        .args(["width", "--braid", "2: 1 1 1 1 1"])
        .env("KHWIDTH_MAX_CROSSINGS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&path, "speed = 3\n").unwrap();
    assert_eq!(khwidth(&["--config", cfg, "det", "--braid", "2: 1"]).status.code(), Some(64));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cone_and_pages() {
    let o = khwidth(&["--json", "e1", "--braid", "3: 1 1 1 2 1 2", "--region", "0,3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dominates"]["passed"], true);
    assert_eq!(v["summands"].as_array().unwrap().len(), 4);
    let o = khwidth(&["e1", "--braid", "3: 1 1 2", "--region", "0,3"]);
    assert_eq!(o.status.code(), Some(64));
    let o = khwidth(&["cone", "--braid", "2: 1 1 1", "--crossing", "0"]);
    assert!(stdout(&o).contains("dominates: yes"));
}

#[test]
fn turner_ranks() {
    let o = khwidth(&["--json", "turner", "--braid", "3: 1 2 1 2 1 2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 4);
    assert_eq!(v["diagonals"]["4"], 3);
    assert_eq!(v["lower_bound"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn rational_slope() {
    let o = khwidth(&["twistknot", "--t", "2", "--slope", "7/2", "det"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "7");
    assert_eq!(khwidth(&["twistknot", "--t", "2", "--slope", "4/2", "det"]).status.code(), Some(64));
}
