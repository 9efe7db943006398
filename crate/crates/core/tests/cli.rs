use std::path::Path;
use std::process::{Command, Output};

fn dioapprox(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioapprox"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_then_omega() {
    let dir = tempfile::tempdir().unwrap();
    let o = dioapprox(
        &[
            "enumerate",
            "--variety",
            "sphere2",
            "--p",
            "5",
            "--max-k",
            "2",
            "--out",
            "c.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2\t25\t120\t150"), "{text}");
    assert!(dir.path().join("c.txt").exists());

    let o = dioapprox(
        &[
            "omega",
            "--census",
            "c.txt",
            "--target",
            "3/5,4/5,0;0,0,-1",
            "--eps",
            "2^-1..2^-3",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "target_id,eps,omega_height,censored\n0,0.5,5,0\n0,0.25,5,0\n0,0.125,5,0\n1,0.5,1,0\n1,0.25,1,0\n1,0.125,1,0\n"
    );

    let o = dioapprox(&["omega", "--census", "c.txt", "--target", "random:3,1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 3 * 12);
}

#[test]
fn depth_zero_census_gives_constant_profiles() {
    let dir = tempfile::tempdir().unwrap();
    dioapprox(
        &[
            "enumerate",
            "--variety",
            "sphere2",
            "--p",
            "5",
            "--max-k",
            "0",
            "--out",
            "c0.txt",
        ],
        dir.path(),
    );
    let o = dioapprox(
        &[
            "omega",
            "--census",
            "c0.txt",
            "--target",
            "1,0,0;0,-1,0",
            "--eps",
            "0.5,0.1,0.01",
        ],
        dir.path(),
    );
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",1,0"), "{line}");
    }
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn predict_and_spectral() {
    let dir = tempfile::tempdir().unwrap();
    let o = dioapprox(&["predict", "--example", "SL2_Q_unconditional"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ae_exponent"], "27/14");
    assert_eq!(v["uniform_exponent"], "27/7");

    let o = dioapprox(&["predict", "--all"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 7);

    let o = dioapprox(&["spectral", "--tree", "q=3", "s=0", "--nmax", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row1: Vec<f64> = text
        .lines()
        .nth(3)
        .unwrap()
        .split('\t')
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(row1[0], 1.0);
    assert!((row1[1] - 3f64.sqrt() / 2.0).abs() < 1e-12);

    let o = dioapprox(&["spectral", "--real", "--t", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0\t1"));
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["enumerate", "--variety", "sphere2", "--p", "4", "--max-k", "1"][..],
        &["predict", "--example", "torus"],
        &["omega", "--census", "missing.txt", "--target", "1,0,0"],
        &["spectral", "--tree", "q=1", "s=0"],
        &["experiment", "--config", "missing.json"],
    ] {
        let o = dioapprox(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn experiment_and_compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // shallow census: the omega verdicts fail
    let config = r#"{
        "variety": "sphere2", "p": 5, "max_k": 3, "n_targets": 10,
        "eps_grid": {"base": 0.5, "j_min": 1, "j_max": 8}, "seed": 42,
        "precision": 128, "example_id": "S2", "output_dir": "out"
    }"#;
    std::fs::write(dir.path().join("quick.json"), config).unwrap();
    let o = dioapprox(&["experiment", "--config", "quick.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("PASS counting_exponent"), "{text}");
    assert!(text.contains("FAIL omega_ae_fraction"), "{text}");
    for f in [
        "report.json",
        "profiles.csv",
        "plot_counting.dat",
        "plot_omega.dat",
        "plot_covering.dat",
    ] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }

    let o = dioapprox(&["compare", "--report", "out/report.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), text);

    // the same report with in-bracket omega statistics passes
    let path = dir.path().join("out/report.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["omega"]["median_slope"] = 2.0.into();
    v["omega"]["fraction_in_bracket"] = 0.95.into();
    std::fs::write(dir.path().join("edited.json"), v.to_string()).unwrap();
    let o = dioapprox(&["compare", "--report", "edited.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
