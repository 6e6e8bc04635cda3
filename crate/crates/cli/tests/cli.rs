use std::process::{Command, Output};

fn fluctem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluctem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV with `#` header lines, split on commas; the column header is dropped.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn output_is_bit_identical_across_runs() {
    let args = [
        "drag-force",
        "--sweep",
        "v0",
        "--values",
        "0.2,1",
        "--tol",
        "1e-6",
    ];
    let a = fluctem(&args);
    let b = fluctem(&[
        "--threads",
        "1",
        "drag-force",
        "--sweep",
        "v0",
        "--values",
        "0.2,1",
        "--tol",
        "1e-6",
    ]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn header_echoes_version_and_config() {
    let o = fluctem(&["kk-check", "--model", "plasma"]);
    let text = stdout(&o);
    assert!(text.starts_with("# fluctem kk-check\n"));
    assert!(text.contains(&format!("# version = {}\n", env!("CARGO_PKG_VERSION"))));
    assert!(text.contains("# git = "));
    assert!(text.contains("# config: model = \"plasma\"\n"));
    assert!(text.contains("omega_test,residual\n"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "mode = \"profile\"\nomega = 2.0\nradii = [1.0, 0.5]\n",
    )
    .unwrap();
    let out = dir.path().join("out.csv");
    let o = fluctem(&[
        "spectra",
        "--config",
        cfg.to_str().unwrap(),
        "--omega",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# config: omega = 1.0\n"));
    let r = rows(&text);
    // Sorted by separation; eps = 1 gives 2 sin(R) / R at omega = 1.
    assert_eq!(r.len(), 2);
    for (row, radius) in r.iter().zip([0.5f64, 1.0]) {
        assert_eq!(row[0].parse::<f64>().unwrap(), radius);
        let v: f64 = row[1].parse().unwrap();
        assert!((v - 2.0 * radius.sin() / radius).abs() < 1e-12);
    }
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "deltas = []\n").unwrap();
    let o = fluctem(&["spectra", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(rows(&stdout(&o)).is_empty());
    assert!(stdout(&o).contains("delta,density,lossless_limit\n"));
}

#[test]
fn lossless_trace_converges_to_vacuum_value() {
    let o = fluctem(&["spectra", "--deltas", "1e-2,1e-3,1e-4,1e-5"]);
    let limit = 2.0 * 1f64.sin();
    let errors: Vec<f64> = rows(&stdout(&o))
        .iter()
        .map(|r| (r[1].parse::<f64>().unwrap() - limit).abs())
        .collect();
    assert_eq!(errors.len(), 4);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
    assert!(errors[3] / limit < 1e-4);
}

#[test]
fn friction_slopes_shrink_with_separation() {
    let o = fluctem(&[
        "friction-dynamics",
        "--d-values",
        "1.2,0.8",
        "--t-max",
        "300",
        "--n-times",
        "7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning:"));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 14);
    let slope = |block: &[Vec<String>]| {
        let (t0, n0): (f64, f64) = (block[5][1].parse().unwrap(), block[5][2].parse().unwrap());
        let (t1, n1): (f64, f64) = (block[6][1].parse().unwrap(), block[6][2].parse().unwrap());
        (n1.ln() - n0.ln()) / (t1 - t0)
    };
    for (block, d) in [(&r[..7], 0.8f64), (&r[7..], 1.2)] {
        assert_eq!(block[0][0].parse::<f64>().unwrap(), d);
        assert!(
            block[0][2].parse::<f64>().unwrap() < 1e-20,
            "t = 0 row is vacuum"
        );
        // omega_sp = v = 1: rate at the peak channel is exp(-2 d) / 2.
        let rate = 0.5 * (-2.0 * d).exp();
        assert!((slope(block) / (2.0 * rate) - 1.0).abs() < 0.01);
    }
    assert!(slope(&r[7..]) < slope(&r[..7]));
}

#[test]
fn pendry_sweep_matches_double_integral() {
    let o = fluctem(&[
        "pendry-force",
        "--sweep",
        "d",
        "--values",
        "2,0.5,1",
        "--v",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    let d: Vec<f64> = r.iter().map(|row| row[1].parse().unwrap()).collect();
    assert_eq!(d, vec![0.5, 1.0, 2.0]);
    assert_eq!(r[1][2].parse::<f64>().unwrap(), 3.956444490089214e-4);
    assert!(r.iter().all(|row| row[5].parse::<f64>().unwrap() < 1e-6));
}

#[test]
fn drag_rest_row_is_zero_and_rows_are_ordered() {
    let o = fluctem(&["drag-force", "--sweep", "v0", "--values", "0.5,-0.5,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    let v0: Vec<f64> = r.iter().map(|row| row[0].parse().unwrap()).collect();
    assert_eq!(v0, vec![-0.5, 0.0, 0.5]);
    assert_eq!(r[1][2].parse::<f64>().unwrap(), 0.0);
    let f: Vec<f64> = r.iter().map(|row| row[2].parse().unwrap()).collect();
    assert!((f[0] + f[2]).abs() < 1e-12 && f[2] > 0.0);
    assert!(r.iter().all(|row| row[5] == "ok"));
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let o = fluctem(&["drag-force", "--z0", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`z0`"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "omega_p = \"three\"\n").unwrap();
    let o = fluctem(&["drag-force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`omega_p`"), "{}", stderr(&o));

    std::fs::write(&cfg, "speed = 1.0\n").unwrap();
    let o = fluctem(&["pendry-force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`speed`"), "{}", stderr(&o));

    let o = fluctem(&["kk-check", "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`tol`"), "{}", stderr(&o));
}

#[test]
fn non_convergence_exits_3() {
    let o = fluctem(&["pendry-force", "--values", "0.5", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("did not converge"), "{}", stderr(&o));
}
