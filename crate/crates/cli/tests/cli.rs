use std::path::Path;
use std::process::{Command, Output};

fn symris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symris"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn state_file(dir: &Path, name: &str, n: usize, diag: &[f64]) -> String {
    let d = n + 1;
    let m: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| [if i == j { diag[i] } else { 0.0 }, 0.0])
                .collect()
        })
        .collect();
    let p = dir.join(name);
    std::fs::write(
        &p,
        serde_json::json!({ "n_qubits": n, "matrix": m }).to_string(),
    )
    .unwrap();
    p.to_str().unwrap().to_string()
}

fn verdict(o: &Output) -> serde_json::Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("verdict JSON on stdout")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    assert_eq!(code(&symris(&["scan", "--n-qubits", "0", "--out", out])), 2);
    assert_eq!(code(&symris(&["scan", "--trials", "0", "--out", out])), 2);
    assert_eq!(
        code(&symris(&["scan", "--ancilla", "9..3", "--out", out])),
        2
    );

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        code(&symris(&[
            "classify",
            "--state",
            bad.to_str().unwrap(),
            "--out",
            out
        ])),
        2
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&symris(&[
            "classify",
            "--state",
            missing.to_str().unwrap(),
            "--out",
            out
        ])),
        4
    );
    assert_eq!(
        code(&symris(&[
            "scan",
            "--config",
            missing.to_str().unwrap(),
            "--out",
            out
        ])),
        4
    );

    // trace 2: not a density matrix
    let s = state_file(dir.path(), "trace.json", 2, &[1.0, 0.5, 0.5]);
    assert_eq!(code(&symris(&["classify", "--state", &s, "--out", out])), 2);
}

#[test]
fn classify_reference_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();

    let mixed = state_file(dir.path(), "mixed.json", 4, &[0.2; 5]);
    let v = verdict(&symris(&["classify", "--state", &mixed, "--out", out]));
    assert_eq!(v["outcome"], "SEP");
    assert_eq!(v["certificate_verified"], true);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 2);
    assert_eq!(v["cuts"][1]["partition"], "2|2");

    let dicke = state_file(dir.path(), "dicke.json", 4, &[0.0, 0.0, 1.0, 0.0, 0.0]);
    let v = verdict(&symris(&["classify", "--state", &dicke, "--out", out]));
    assert_eq!(v["outcome"], "NPT");
    assert_eq!(v["cuts"][0]["flag"], "NPT");
    assert_eq!(v["cuts"][1]["flag"], "NPT");
    assert!(Path::new(out).join("verdict.json").exists());
}

#[test]
fn classify_generated_state_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |o: &Path| {
        vec![
            "classify".to_string(),
            "--n-qubits".into(),
            "4".into(),
            "--ancilla".into(),
            "12".into(),
            "--trial".into(),
            "7".into(),
            "--out".into(),
            o.to_str().unwrap().into(),
        ]
    };
    let run = |o: &Path| {
        let a = args(o);
        symris(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let va = verdict(&run(&a));
    let vb = verdict(&run(&b));
    assert_eq!(va, vb);
    assert_eq!(va["certificate_verified"], true);
    assert_eq!(va["source"]["trial"], 7);

    let grid = symris(&[
        "classify",
        "--ancilla",
        "4..6",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(code(&grid), 2);
}

#[test]
fn scan_outputs_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for w in ["1", "3"] {
        let o = dir.path().join(format!("w{w}"));
        let r = symris(&[
            "scan",
            "--n-qubits",
            "4",
            "--ancilla",
            "10..14:2",
            "--trials",
            "150",
            "--seed",
            "5",
            "--workers",
            w,
            "--out",
            o.to_str().unwrap(),
        ]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
        outs.push(o);
    }
    for f in [
        "probabilities.csv",
        "outcomes.csv",
        "crossings.json",
        "scan.svg",
    ] {
        assert_eq!(read(&outs[0].join(f)), read(&outs[1].join(f)), "{f}");
    }
    let version = read(&outs[0].join("VERSION"));
    assert!(version.starts_with("symris "));
    let cfg = read(&outs[0].join("config.toml"));
    assert!(cfg.contains("trials = 150"), "{cfg}");
    assert!(cfg.contains("seed = 5"), "{cfg}");
}

#[test]
fn config_file_round_trips_through_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let r = symris(&[
        "scan",
        "--n-qubits",
        "3",
        "--ancilla",
        "4,8",
        "--trials",
        "60",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    // rerunning from the written config reproduces the tables
    let second = dir.path().join("second");
    let r = symris(&[
        "scan",
        "--config",
        first.join("config.toml").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(
        read(&first.join("probabilities.csv")),
        read(&second.join("probabilities.csv"))
    );
}

#[test]
fn three_qubits_have_no_bound_entanglement() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("n3");
    let r = symris(&[
        "scan",
        "--n-qubits",
        "3",
        "--ancilla",
        "2..10:2",
        "--trials",
        "200",
        "--out",
        o.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let csv = read(&o.join("probabilities.csv"));
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "P_PPTBE").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let v: f64 = row.split(',').nth(col).unwrap().parse().unwrap();
        assert_eq!(v, 0.0, "{row}");
    }
}

#[test]
fn phase_diagram_needs_enough_register_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan");
    let r = symris(&[
        "scan",
        "--n-qubits",
        "4",
        "--ancilla",
        "6..20:2",
        "--trials",
        "150",
        "--out",
        scan.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let csv = scan.join("probabilities.csv");
    let pd = dir.path().join("pd");
    let r = symris(&[
        "phase-diagram",
        "--n-list",
        "4",
        "--scans",
        csv.to_str().unwrap(),
        "--out",
        pd.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("underdetermined"));

    // a requested size without a scan names the command that produces it
    let r = symris(&[
        "phase-diagram",
        "--n-list",
        "4,5",
        "--scans",
        csv.to_str().unwrap(),
        "--out",
        pd.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("symris scan"));
}

#[test]
fn phase_diagram_from_generated_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let pd = dir.path().join("pd");
    let r = symris(&[
        "phase-diagram",
        "--n-list",
        "4,5",
        "--ancilla",
        "4..24:2",
        "--trials",
        "120",
        "--models",
        "linear",
        "--out",
        pd.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    for f in [
        "probabilities_N4.csv",
        "probabilities_N5.csv",
        "crossings.csv",
        "boundaries.json",
        "phase_diagram.svg",
    ] {
        assert!(pd.join(f).exists(), "{f}");
    }
    let b: serde_json::Value = serde_json::from_str(&read(&pd.join("boundaries.json"))).unwrap();
    let fits = b["boundaries"].as_array().unwrap();
    assert_eq!(fits.len(), 2);
    for f in fits {
        assert_eq!(f["model"], "linear");
        assert!(
            f["rss"].as_f64().unwrap() < 1e-12,
            "two points fit a line exactly"
        );
    }
}

#[test]
fn geometry_grid_has_one_panel_per_dicke_operator() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("geo");
    let r = symris(&[
        "geometry",
        "--n-qubits",
        "3",
        "--ancilla",
        "4,8",
        "--sample",
        "40",
        "--keep",
        "all",
        "--bins",
        "20",
        "--out",
        o.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let svg = read(&o.join("dicke_grid.svg"));
    assert_eq!(svg.matches("alpha=").count(), 16);
    let csv = read(&o.join("dicke_pdfs.csv"));
    assert_eq!(csv.lines().count(), 1 + 16 * 20);
    let mmd = read(&o.join("mmd.csv"));
    assert_eq!(mmd.lines().count(), 3);

    // no bound entangled states exist for N = 3
    let r = symris(&[
        "geometry",
        "--n-qubits",
        "3",
        "--ancilla",
        "4",
        "--sample",
        "5",
        "--keep",
        "be",
        "--out",
        o.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 3);
}

#[test]
fn convergence_writes_the_checkpoint_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("conv");
    let r = symris(&[
        "convergence",
        "--n-qubits",
        "4",
        "--ancilla",
        "12",
        "--trials",
        "300",
        "--out",
        o.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let csv = read(&o.join("checkpoints.csv"));
    let ns: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, vec![1, 2, 4, 8, 16, 32, 64, 128, 256, 300]);
    assert!(o.join("convergence.svg").exists());
}
