//! End-to-end tests against the built binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gqd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

/// Pulls the exact value out of a "name = 0.500000 (5.00e-1)" line.
fn exact_value(text: &str, name: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(name))
        .unwrap_or_else(|| panic!("no '{name}' line in:\n{text}"));
    let inside = line.split('(').nth(1).unwrap().trim_end_matches(')');
    inside.parse().unwrap()
}

#[test]
fn analyze_bell_state_gives_half() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bell.qst");
    write(&state, "format qst1\nkind x\n0.5 0 0 0.5 0 0 0\n");

    for method in ["alternating", "grid"] {
        let output = gqd(&["analyze", "--input", state.to_str().unwrap(), "--method", method]);
        assert!(output.status.success(), "{}", stderr(&output));
        let text = stdout(&output);
        assert!(text.contains("classification: Both"));
        let g = exact_value(&text, "G =");
        assert!((g - 0.5).abs() < 1e-9, "G = {g}");
    }
}

#[test]
fn convert_maximally_mixed_passes_all_clauses() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("mixed.qst");
    write(&state, "format qst1\nkind cs\n0.25 0 0 0 0 0 0\n");

    let output = gqd(&["convert", "--input", state.to_str().unwrap(), "--to", "x"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("kind x"));
    assert!(!text.contains("FAIL"), "unexpected clause failure:\n{text}");
    assert!(text.contains("-> equal"));
}

#[test]
fn convert_round_trip_restores_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let original = [0.3, 0.05, 0.0, 0.05, 0.0, 0.1, 0.05];
    let state = dir.path().join("cs.qst");
    write(
        &state,
        "format qst1\nkind cs\n0.3 0.05 0 0.05 0 0.1 0.05\n",
    );

    let to_x = gqd(&["convert", "--input", state.to_str().unwrap(), "--to", "x"]);
    assert!(to_x.status.success());
    let x_block: String = stdout(&to_x)
        .lines()
        .skip_while(|l| *l != "format qst1")
        .take(3)
        .collect::<Vec<_>>()
        .join("\n");
    let x_state = dir.path().join("x.qst");
    write(&x_state, &x_block);

    let back = gqd(&["convert", "--input", x_state.to_str().unwrap(), "--to", "cs"]);
    assert!(back.status.success());
    let cs_line = stdout(&back)
        .lines()
        .skip_while(|l| *l != "kind cs")
        .nth(1)
        .unwrap()
        .to_string();
    for (value, want) in cs_line.split_whitespace().zip(original) {
        let parsed: f64 = value.parse().unwrap();
        assert!((parsed - want).abs() < 1e-12, "{parsed} vs {want}");
    }
}

#[test]
fn model_output_reparses_and_analyzes() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("nanopore.qst");
    let output = gqd(&[
        "model", "nanopore", "--beta", "1", "--n", "100", "--coupling", "0.001", "--time", "0",
        "--out", state.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = fs::read_to_string(&state).unwrap();
    assert!(text.starts_with("format qst1\nkind matrix\n"));

    let analyze = gqd(&["analyze", "--input", state.to_str().unwrap()]);
    assert!(analyze.status.success());
    assert!(stdout(&analyze).contains("classification: Cs"));

    let inline = gqd(&[
        "model", "xxz-dm", "--j", "1", "--jz", "0.2", "--dx", "1", "--temp", "0.5", "--analyze",
    ]);
    assert!(inline.status.success());
    let text = stdout(&inline);
    assert!(text.contains("kind matrix"));
    assert!(text.contains("G = "));
}

#[test]
fn closed_form_at_dx_zero_is_a_domain_error() {
    let output = gqd(&[
        "model", "xxz-dm", "--j", "1", "--jz", "1", "--dx", "0", "--temp", "1", "--closed",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("degenerate"));
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("small.spec");
    write(
        &spec,
        "model = xxz-dm\nj = 1\njz = 0\ndx = 1\n\n[axis]\nname = temp\nstart = 0.5\nstop = 3\nsteps = 6\n",
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");

    let first = gqd(&["sweep", "--spec", spec.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stdout(&first).contains("wrote 6 rows (0 invalid)"));

    let second = gqd(&[
        "sweep", "--spec", spec.to_str().unwrap(), "--out", out_b.to_str().unwrap(), "--jobs", "4",
    ]);
    assert!(second.status.success());
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());

    let csv = fs::read_to_string(&out_a).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.starts_with("temp,g,lambda_max,"));
}

#[test]
fn file_model_sweeps_a_family_parameter() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("base.qst"),
        "format qst1\nkind cs\n0.25 0 0 0 0 0 0\n",
    );
    let spec = dir.path().join("family.spec");
    write(
        &spec,
        "model = file\npath = base.qst\n\n[axis]\nname = p6\nstart = 0\nstop = 0.2\nsteps = 3\n",
    );
    let out = dir.path().join("family.csv");
    let output = gqd(&["sweep", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("wrote 3 rows"));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let first = gqd(&["verify", "--samples", "10", "--seed", "7"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let text = stdout(&first);
    assert!(!text.contains("FAIL"));

    let second = gqd(&["verify", "--samples", "10", "--seed", "7"]);
    assert_eq!(stdout(&second), text);
}

#[test]
fn error_paths_use_the_exit_code_contract() {
    // Usage error: unknown flag.
    let usage = gqd(&["analyze", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));

    // Domain error: malformed state file with position info.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qst");
    write(&bad, "format qst1\nkind cs\n0.25 0 zero 0 0 0 0\n");
    let parse = gqd(&["analyze", "--input", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(stderr(&parse).contains("line 3"));

    // Domain error: violated invariant.
    let mut numbers = vec!["0".to_string(); 32];
    numbers[0] = "0.25".into();
    numbers[10] = "0.25".into();
    numbers[20] = "0.25".into();
    numbers[30] = "0.15".into();
    let trace = dir.path().join("trace.qst");
    write(
        &trace,
        &format!("format qst1\nkind matrix\n{}\n", numbers.join(" ")),
    );
    let invalid = gqd(&["analyze", "--input", trace.to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(1));
    assert!(stderr(&invalid).contains("trace"));
}
