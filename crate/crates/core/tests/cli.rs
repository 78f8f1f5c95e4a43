use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debruijn"))
        .args(args)
        .env("DEBRUIJN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("debruijn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)))
}

fn result<'a>(v: &'a serde_json::Value, name: &str) -> &'a str {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no result {name}"))["value"]
        .as_str()
        .unwrap()
}

#[test]
fn alpha_reports_both_models() {
    let v = json(&["alpha", "--k", "3", "--q", "2"]);
    assert_eq!(result(&v, "alpha"), "3");
    assert_eq!(result(&v, "alpha_loop"), "2");
    let o = run(&["alpha", "--k", "3", "--q", "2", "--loops"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("alpha = "));
    let o = run(&["alpha", "--k", "6", "--q", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["alpha", "--k", "3", "--q", "3", "--max-vertices", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn structured_reports_are_deterministic() {
    for args in [
        &["bounds", "--k", "4", "--q", "16"][..],
        &["necklaces", "--k", "12", "--q", "3"],
        &["seven-cycle"],
        &["cert", "search", "--k", "7"],
        &["cert", "diffsets", "--k", "5"],
        &["seed", "verify"],
        &["mkq", "--k", "3", "--q", "2"],
    ] {
        let mut a = json(args);
        let mut b = json(args);
        a.as_object_mut().unwrap().remove("wall_time_ms");
        b.as_object_mut().unwrap().remove("wall_time_ms");
        assert_eq!(a, b, "{args:?}");
        assert!(
            a["checks"]
                .as_array()
                .unwrap()
                .iter()
                .all(|c| c["passed"] == true),
            "{args:?}"
        );
    }
}

#[test]
fn rationals_are_exact_fractions() {
    let v = json(&["bounds", "--k", "4", "--q", "16"]);
    assert_eq!(result(&v, "lambda3_lower"), "91/240");
    assert_eq!(result(&v, "lambda3_upper"), "11/28");
    let v = json(&["seed", "verify"]);
    assert_eq!(result(&v, "lambda"), "24849/65536");
    let v = json(&["necklaces", "--k", "40", "--q", "7"]);
    let big = result(&v, "eta_40");
    assert!(big.len() > 30 && big.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn sev_file_counts_the_same() {
    let path = scratch("sev.txt");
    let p = path.to_str().unwrap();
    let v = json(&["sev", "--k", "5", "--q", "4", "--out", p]);
    let n = result(&v, "N").to_string();
    let v = json(&["prefixset", "count", "--file", p]);
    assert_eq!(result(&v, "N"), n);
    assert_eq!(result(&v, "lambda"), "97/256");
}

#[test]
fn mkq_witness_counts_m() {
    let path = scratch("mkq.txt");
    let p = path.to_str().unwrap();
    let v = json(&["mkq", "--k", "4", "--q", "2", "--out", p]);
    assert_eq!(result(&v, "M"), "6");
    let v = json(&["prefixset", "count", "--file", p]);
    assert_eq!(result(&v, "N"), "6");
}

#[test]
fn search_then_verify() {
    let path = scratch("cert7.txt");
    let p = path.to_str().unwrap();
    let o = run(&["cert", "search", "--k", "7", "--out", p]);
    assert!(o.status.success());
    let o = run(&["cert", "verify", "--file", p]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("OK: k=7, selected=55, nontrivial_orbits=18"));
}

#[test]
fn search_budget_is_not_a_proof() {
    let o = run(&["cert", "search", "--k", "11", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("BUDGET EXHAUSTED"));
}

#[test]
fn bundled_certificates() {
    let o = run(&["cert", "verify", "--file", &data("cert11.txt")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("OK: k=11, selected=931, nontrivial_orbits=186"));
    let o = run(&["cert", "verify", "--file", &data("cert13.txt")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("OK: k=13, selected=3781, nontrivial_orbits=630"));
}

#[test]
fn rejected_certificate_exits_1() {
    let text = std::fs::read_to_string(data("cert11.txt")).unwrap();
    let path = scratch("bad11.txt");
    std::fs::write(
        &path,
        text.replacen("target_size=931", "target_size=932", 1),
    )
    .unwrap();
    let o = run(&["cert", "verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("wrong size"));

    std::fs::write(&path, "# CERTIFICATE k=11\n").unwrap();
    let o = run(&["cert", "verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_file_mismatch_exits_1() {
    let o = run(&["seed", "verify", "--file", &data("seed16.txt")]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(data("seed16.txt")).unwrap();
    // swap the first two labels of the first table row
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let row = lines.iter().position(|l| l.trim() == "TABLE").unwrap() + 1;
    let mut cells: Vec<&str> = lines[row].split_whitespace().collect();
    let j = (1..cells.len()).find(|&j| cells[j] != cells[0]).unwrap();
    cells.swap(0, j);
    lines[row] = cells.join(" ");
    let path = scratch("seed_bad.txt");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let o = run(&["seed", "verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn propagate_without_audit_warns() {
    let o = run(&["dyadic", "propagate", "--to", "5", "--no-audit"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("WARNING"));
    assert!(stdout(&o).contains("N_m5 = 397585"));
    let o = run(&["dyadic", "propagate", "--to", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["nope"]).status.code(), Some(2));
    assert_eq!(run(&["cert"]).status.code(), Some(2));
    assert_eq!(
        run(&["necklaces", "--k", "x", "--q", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["sev", "--k", "4", "--q", "2"]).status.code(), Some(2));
    let o = run(&["--help"]);
    assert!(o.status.success());
    let help = stdout(&run(&["alpha", "--help"]));
    assert!(help.contains("4096"));
    assert!(stdout(&run(&["cert", "search", "--help"])).contains("2000000"));
}
