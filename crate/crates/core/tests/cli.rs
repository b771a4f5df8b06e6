//! Drives the `sosdyn` binary end to end: subcommands, exit codes,
//! file formats and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sosdyn"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sosdyn-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn sosdyn")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout JSON")
}

#[test]
fn preset_writes_trajectory_and_report() {
    let dir = tmpdir("preset-fig1");
    let out = run(&["preset", "fig1", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let csv = std::fs::read_to_string(dir.join("fig1_trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,x,y"));
    assert_eq!(lines.count(), 3001);

    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig1_report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["first_nonpositive"], serde_json::Value::Null);
    assert_eq!(rep["escaped_at"], serde_json::Value::Null);
    assert_eq!(rep["params"]["x1"], 1.48589);
    assert_eq!(rep["assertions"]["passed"], true);
    assert_eq!(rep["spectral"]["interior"]["regime"], "ComplexUnitModulus");
}

#[test]
fn preset_fig11_regime_assertion_passes() {
    let dir = tmpdir("preset-fig11");
    let out = run(&["preset", "fig11", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig11_report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["spectral"]["interior"]["regime"], "DoubleMinusOne");
}

#[test]
fn preset_fig13_expectation_mismatch_exits_3() {
    // the caption's step-93 claim is not reproducible from its printed
    // parameters (the start lies in the invariant region), so the
    // preset's expectation check reports a mismatch
    let dir = tmpdir("preset-fig13");
    let out = run(&["preset", "fig13", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig13_report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["first_nonpositive"], serde_json::Value::Null);
    assert_eq!(rep["assertions"]["passed"], false);
}

#[test]
fn unknown_preset_exits_2() {
    let out = run(&["preset", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectral_json_to_stdout() {
    let out = run(&[
        "spectral", "--k", "2", "--tau", "3", "--h", "1", "--y0", "0.5", "--x1", "1.48589",
    ]);
    let v = stdout_json(&out);
    assert!((v["interior"]["eigenvalues"][1]["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(
        (v["interior"]["eigenvalues"][1]["im"].as_f64().unwrap() - 0.8660254037844386).abs()
            < 1e-12
    );
    assert!((v["interior"]["eigenvalues"][0]["modulus"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["origin"]["type_tag"], "Saddle");

    // strong-resonance parameters
    let out = run(&[
        "spectral", "--k", "3", "--tau", "4", "--h", "1", "--y0", "1.2", "--x1", "0.8",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["interior"]["eigenvalues"][0]["re"], -1.0);
    assert_eq!(v["interior"]["resonances"][0], "OneTwo");

    // real saddle beyond the window
    let out = run(&[
        "spectral", "--k", "2", "--tau", "6.5", "--h", "1", "--y0", "1.2", "--x1", "1.1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["interior"]["regime"], "RealSaddle");
    let m0 = v["interior"]["eigenvalues"][0]["modulus"].as_f64().unwrap();
    let m1 = v["interior"]["eigenvalues"][1]["modulus"].as_f64().unwrap();
    assert!(m0 < 1.0 && m1 > 1.0);
}

#[test]
fn spectral_rejects_inadmissible_input() {
    let out = run(&[
        "spectral", "--k", "2", "--tau", "3", "--h", "1", "--y0", "1.5", "--x1", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invariant_set_json() {
    let out = run(&[
        "invariant-set",
        "--k", "2", "--tau", "3", "--h", "1", "--y0", "0.5", "--x1", "1.48589",
        "--grid", "50",
    ]);
    let v = stdout_json(&out);
    assert!((v["a"].as_f64().unwrap() - 1.972172643993255).abs() < 1e-12);
    assert_eq!(v["condition_ok"], true);
    assert!(v["violations"].as_u64().unwrap() > 0);

    // outside the hypothesis the scalars still come back, no grid run
    let out = run(&[
        "invariant-set",
        "--k", "2", "--tau", "5.5", "--h", "1", "--y0", "1.2", "--x1", "1.1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["condition_ok"], false);
    assert_eq!(v["violations"], serde_json::Value::Null);
}

#[test]
fn sweep_is_deterministic_across_runs_and_workers() {
    let dir = tmpdir("sweep");
    let a_path = dir.join("a.csv");
    let b_path = dir.join("b.csv");
    let base = [
        "sweep", "--k", "2", "--tau", "3", "--h", "1",
        "--y0-range", "0.05:1.45:50", "--x1-range", "0.05:1.45:50",
        "--steps", "200", "--workers", "4", "--out",
    ];
    let mut args_a: Vec<&str> = base.to_vec();
    args_a.push(a_path.to_str().unwrap());
    let mut args_b: Vec<&str> = base.to_vec();
    args_b.push(b_path.to_str().unwrap());

    assert_eq!(run(&args_a).status.code(), Some(0));
    assert_eq!(run(&args_b).status.code(), Some(0));
    let a = std::fs::read(&a_path).unwrap();
    let b = std::fs::read(&b_path).unwrap();
    assert_eq!(a, b, "parallel sweep output must be byte-identical");

    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 2501);
    assert_eq!(text.lines().next(), Some("y0,x1,admissible,horizon,max_abs"));
    // inadmissible cells stay unevaluated
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let y0: f64 = cols[0].parse().unwrap();
        let x1: f64 = cols[1].parse().unwrap();
        if y0 + x1 >= 3.0 {
            assert_eq!(cols[2], "0");
            assert!(cols[3].is_empty());
        }
    }
}

#[test]
fn sweep_single_cells() {
    let dir = tmpdir("sweep-single");
    // fig12 parameters: positive throughout
    let out_path = dir.join("fig12.csv");
    let out = run(&[
        "sweep", "--k", "2", "--tau", "3", "--h", "0.5",
        "--y0-range", "1.2:1.2:1", "--x1-range", "0.6:0.6:1",
        "--steps", "200", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains(",1,>=200,"), "row: {row}");

    // fig13 parameters: also positive throughout (see ledger note)
    let out_path = dir.join("fig13.csv");
    let out = run(&[
        "sweep", "--k", "2", "--tau", "3", "--field", "table:0=1,default=1.05",
        "--y0-range", "1.2:1.2:1", "--x1-range", "0.6:0.6:1",
        "--steps", "200", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",1,>=200,"));
}

#[test]
fn boundary_law_reports() {
    let out = run(&[
        "boundary-law", "--law", "s1", "--theta", "0.5", "--k", "2",
        "--imax", "5", "--trunc", "400",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["valid_in_regime"], true);
    assert_eq!(v["conditions"][0]["name"], "left_tail_infinite");
    assert_eq!(v["conditions"][0]["satisfied"], true);
    assert_eq!(v["conditions"][1]["satisfied"], true);
    assert_eq!(v["normalisability"]["status"], "Diverges");
    let residuals = v["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 10);
    for r in residuals {
        assert!(r["residual"].as_f64().unwrap() < 0.1);
    }

    // s3 with the symmetric field: rho = 1 residual is exactly zero
    let out = run(&[
        "boundary-law", "--law", "s3", "--theta", "0.5", "--k", "2",
        "--trunc", "400",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["rho_residual"], 0.0);
    assert_eq!(v["scl_scr"]["scl_witness"], 0);
    assert_eq!(v["scl_scr"]["scr_witness"], 2);
    assert_eq!(v["valid_in_regime"], true);

    // s2 at theta > 1 with the decaying family: the right tail
    // converges, so the law is invalid in this regime
    let out = run(&[
        "boundary-law", "--law", "s2", "--theta", "1.5", "--k", "2",
        "--field", "family:c=0.602,base=1.5,alpha=-4",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["conditions"][1]["name"], "right_tail_infinite");
    assert_eq!(v["conditions"][1]["satisfied"], false);
    assert_eq!(v["valid_in_regime"], false);
}

#[test]
fn measure_subcommand() {
    // depth-1, k=2: all-zero configuration with h = 1 and l = z from
    // the left family gives exactly 0 (z0 = 1, Q(0,0) = 1)
    let out = run(&[
        "measure", "--k", "2", "--theta", "0.5", "--field", "constant:1",
        "--law", "s1", "--depth", "1", "--spins", "0,0,0,0",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["log_measure"], 0.0);
    assert_eq!(v["vertices"], 4);
    assert_eq!(v["boundary_vertices"], 3);

    // wrong spin count is invalid input
    let out = run(&[
        "measure", "--k", "2", "--theta", "0.5", "--field", "constant:1",
        "--law", "s1", "--depth", "1", "--spins", "0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_data_roundtrip() {
    let dir = tmpdir("plot");
    let out = run(&["preset", "fig1", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let traj = dir.join("fig1_trajectory.csv");

    let plot_path = dir.join("fig1_plot.csv");
    let out = run(&[
        "plot-data", "--input", traj.to_str().unwrap(), "--out", plot_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&plot_path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# viewport"));
    let bbox: Vec<f64> = lines
        .next()
        .unwrap()
        .strip_prefix("# bbox ")
        .unwrap()
        .split(' ')
        .map(|v| v.parse().unwrap())
        .collect();
    // the closed curve encircles the interior fixed point
    let xs = 0.9860863219966275;
    assert!(bbox[0] < xs && xs < bbox[1]);
    assert!(bbox[2] < xs && xs < bbox[3]);
    assert_eq!(lines.next(), Some("u,v"));
    assert_eq!(lines.count(), 3001);

    // determinism of the plot output
    let out2 = run(&["plot-data", "--input", traj.to_str().unwrap()]);
    assert!(out2.status.success());
    assert_eq!(String::from_utf8(out2.stdout).unwrap(), text);

    // nonexistent input is an I/O failure
    let out = run(&["plot-data", "--input", "/nonexistent/file.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn iterate_with_config_file_and_overrides() {
    let dir = tmpdir("config");
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "k = 2\ntau = 3.0\ny0 = 1.2\nx1 = 0.6\nn_steps = 200\n\
         [h]\nkind = \"constant\"\nvalue = 0.5\n",
    )
    .unwrap();
    let out = run(&[
        "iterate", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("iterate_report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["n_steps"], 200);
    assert_eq!(rep["first_nonpositive"], serde_json::Value::Null);

    // flag overrides the file's tau
    let out = run(&[
        "iterate", "--config", cfg.to_str().unwrap(), "--tau", "2.6",
        "--y0", "0.8", "--x1", "1.713", "--h", "1", "--steps", "50",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("iterate_report.json")).unwrap())
            .unwrap();
    assert_eq!(rep["params"]["tau"], 2.6);
    assert_eq!(rep["n_steps"], 50);
}

#[test]
fn theta_flag_is_exclusive_with_tau() {
    let out = run(&[
        "spectral", "--k", "2", "--theta", "0.3819660112501051", "--h", "1",
        "--y0", "0.5", "--x1", "1.48589",
    ]);
    let v = stdout_json(&out);
    // tau = theta + 1/theta = 3
    assert!((v["params"]["tau"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let out = bin()
        .args(["spectral", "--k", "2", "--tau", "3", "--theta", "0.5"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
