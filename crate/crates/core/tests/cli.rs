use std::process::{Command, Output};

fn lebesgue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lebesgue"))
        .args(args)
        .env("LEBESGUE_WORKERS", "1")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn norm_of_vanishing_f() {
    let o = lebesgue(&["norm", "--kernel", "F", "--n", "2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["converged"], true);
    assert_eq!(v["conventions"]["mu_range"], "theorem");
}

#[test]
fn norm_of_one_dimensional_kernel() {
    let o = lebesgue(&["norm", "--kernel", "D", "--n", "64", "--tol", "1e-6", "--max-doublings", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let value = v["value"].as_f64().unwrap();
    // Direct midpoint rule, far finer than the kernel's frequency.
    let m = 1 << 16;
    let oracle: f64 = (0..m)
        .map(|t| {
            let x = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (t as f64 + 0.5) / m as f64;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for k in 0..=64 {
                re += (k as f64 * x).cos();
                im += (k as f64 * x).sin();
            }
            re.hypot(im)
        })
        .sum::<f64>()
        * 2.0
        * std::f64::consts::PI
        / m as f64;
    assert!((value - oracle).abs() < 1e-6 * oracle, "{value} vs {oracle}");
    assert!(v["history"].as_array().unwrap().len() >= 3);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lebesgue(&["norm", "--kernel", "D", "--n", "2,x"]).status.code(), Some(1));
    assert_eq!(lebesgue(&["verify", "--n", "2"]).status.code(), Some(1));
    assert_eq!(lebesgue(&["irrational", "--alpha", "pi", "--n", "8"]).status.code(), Some(1));
    assert_eq!(lebesgue(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lebesgue(&["--help"]).status.code(), Some(0));
}

#[test]
fn nonconvergence_exits_two() {
    let o = lebesgue(&["norm", "--kernel", "D", "--n", "9.5,9.5", "--tol", "1e-15", "--max-doublings", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["converged"], false);
}

#[test]
fn verify_passes() {
    let o = lebesgue(&["verify", "--n", "7.3,19.6", "--points", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);
}

#[test]
fn irrational_half_at_four() {
    let o = lebesgue(&["irrational", "--alpha", "rational:1/2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    let row = csv.lines().last().unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[0], "4");
    assert!((cols[1].parse::<f64>().unwrap() - 4.0).abs() < 1e-5);
    let summary: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["continued_fraction"]["terminated"], true);
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("lebesgue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("sweep.csv");
    std::fs::write(&cfg, "# sweep\nn1 = 8, 16\nn2 = 2*n1\nwith_frak = false\n").unwrap();
    let o = lebesgue(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--n1",
        "8",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("2,8.0000000000000000e0,1.6000000000000000e1,"));
    assert!(rows[1].contains(",nan,"), "frak column is nan when disabled");
    std::fs::write(&cfg, "colour = red\n").unwrap();
    let o = lebesgue(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
