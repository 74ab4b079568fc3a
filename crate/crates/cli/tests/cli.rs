use std::fs;
use std::process::{Command, Output};

fn hbnspin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hbnspin"));
    c.env_remove("HBNSPIN_DATA_DIR").env("RUST_LOG", "warn");
    c
}

fn run(args: &[&str]) -> Output {
    hbnspin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fwhm(o: &Output) -> f64 {
    let line = stdout(o).lines().last().unwrap().to_string();
    line.split(',').nth(5).unwrap().parse().unwrap()
}

#[test]
fn header_is_written_first() {
    let o = run(&["odmr", "--defect", "CB0", "--method", "ezi"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let head: Vec<&str> = out.lines().take(5).collect();
    assert_eq!(head[0], "# tool: hbnspin 0.1.0");
    assert_eq!(head[1], "# command: odmr");
    assert!(head[2].starts_with("# config: {"));
    assert!(head[3].starts_with("# dataset: "));
    assert_eq!(head[4], "# seed: 0");
    assert!(out.contains("117.57"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"defect": "CN0", "method": "ezi", "B": 84.0}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = run(&["odmr", "--config", cfg, "--format", "csv"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert!(stdout(&from_file).contains("CN0,ezi,1,235.1"));

    let overridden = run(&["odmr", "--config", cfg, "--B", "42", "--format", "csv"]);
    assert!(stdout(&overridden).contains("CN0,ezi,1,117.5"));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"defect": "CB0", "feild": 42}"#).unwrap();
    let o = run(&["odmr", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn exit_codes_follow_error_kind() {
    assert_eq!(run(&["odmr"]).status.code(), Some(1));
    assert_eq!(
        run(&["odmr", "--defect", "CB0", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["odmr", "--defect", "XY0"]).status.code(), Some(3));
    assert_eq!(
        run(&["odmr", "--defect", "CB0", "--direction", "1,0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn exact_beyond_cap_suggests_hybrid() {
    let o = run(&["odmr", "--defect", "CN0", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("hybrid"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn field_direction_changes_statistics() {
    let z = run(&["odmr", "--defect", "CB0", "--format", "csv"]);
    let x = run(&[
        "odmr",
        "--defect",
        "CB0",
        "--direction",
        "1,0,0",
        "--format",
        "csv",
    ]);
    let tilted = run(&[
        "odmr",
        "--defect",
        "CB0",
        "--direction",
        "-1,0,1",
        "--format",
        "csv",
    ]);
    assert!(tilted.status.success(), "{}", stderr(&tilted));
    assert!((fwhm(&z) - fwhm(&x)).abs() > 1.0);
}

#[test]
fn fixed_pattern_gives_single_row() {
    let o = run(&[
        "isotopes",
        "--defect",
        "CB0",
        "--pattern",
        "10B=1",
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(String::from)
        .collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("5,1,100"));
}

#[test]
fn output_files_carry_header() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.csv");
    let spec = dir.path().join("spec.csv");
    let o = run(&[
        "odmr",
        "--defect",
        "CB0",
        "--out-lines",
        lines.to_str().unwrap(),
        "--out-spectrum",
        spec.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for path in [&lines, &spec] {
        let text = fs::read_to_string(path).unwrap();
        assert!(text.starts_with("# tool: hbnspin"));
        assert!(text.lines().filter(|l| !l.starts_with('#')).count() > 10);
    }
}

#[test]
fn empty_ctl_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    fs::write(&path, "label,q,E_eV,delta_eV\n").unwrap();
    let o = run(&["ctl", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no energy records"), "{}", stderr(&o));
}

#[test]
fn missing_charge_state_warns_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.csv");
    fs::write(&path, "X,0,-100.0,0\nX,1,-103.0,0.2\n").unwrap();
    let o = run(&["ctl", path.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("X"), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("X,(+1|0),true,2.80"), "{out}");
    assert!(!out.contains("X,(0|-1)"));
}

#[test]
fn ctl_accepts_json_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.json");
    fs::write(
        &path,
        r#"[{"label":"X","q":0,"E_eV":-100.0},
            {"label":"X","q":-1,"E_eV":-98.0,"delta_eV":0.1}]"#,
    )
    .unwrap();
    let o = run(&["ctl", path.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("X,(0|-1),true,2.10"));
}

#[test]
fn binding_table_lists_complexes() {
    let o = run(&["binding", "--format", "csv"]);
    assert!(o.status.success());
    let rows = stdout(&o).lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 8);
}

#[test]
fn data_dir_override_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let exported = run(&[
        "export-dataset",
        "--out",
        dir.path().join("defects.json").to_str().unwrap(),
    ]);
    assert!(exported.status.success(), "{}", stderr(&exported));

    let bundled = run(&["compare-methods", "--defect", "CB0", "--format", "csv"]);
    let overridden = hbnspin()
        .env("HBNSPIN_DATA_DIR", dir.path())
        .args(["compare-methods", "--defect", "CB0", "--format", "csv"])
        .output()
        .unwrap();
    assert!(overridden.status.success(), "{}", stderr(&overridden));
    let body = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&bundled), body(&overridden));

    fs::write(dir.path().join("defects.json"), "{ not json").unwrap();
    let broken = hbnspin()
        .env("HBNSPIN_DATA_DIR", dir.path())
        .args(["odmr", "--defect", "CB0"])
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(3));

    let empty = tempfile::tempdir().unwrap();
    let missing = run(&[
        "--data-dir",
        empty.path().to_str().unwrap(),
        "odmr",
        "--defect",
        "CB0",
    ]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn export_single_defect_is_json() {
    let o = run(&["export-dataset", "--defect", "CN0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(value.is_object());
}
