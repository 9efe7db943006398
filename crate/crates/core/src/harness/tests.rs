use super::*;

fn small_config(dir: &Path) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{
            "variety": "sphere2", "p": 5, "max_k": 4, "n_targets": 12,
            "eps_grid": {{"j_min": 1, "j_max": 7}}, "seed": 7,
            "example_id": "S2", "output_dir": {:?}, "covering_samples": 64
        }}"#,
        dir.display().to_string()
    ))
    .unwrap()
}

#[test]
fn config_defaults_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config(dir.path());
    assert_eq!(c.eps_grid.base, 0.5);
    assert_eq!(c.precision, DEFAULT_PRECISION);
    assert_eq!(c.fit_window, FitWindow::Trim20);
    assert_eq!(c.tolerances, Tolerances::default());
    assert_eq!(c.target_box, DEFAULT_TARGET_BOX);

    let base = serde_json::to_value(&c).unwrap();
    let with = |key: &str, v: serde_json::Value| {
        let mut b = base.clone();
        b[key] = v;
        ExperimentConfig::from_json(&b.to_string())
    };
    assert!(matches!(with("p", 4.into()), Err(Error::Json(_))));
    assert!(matches!(with("example_id", "S3".into()), Err(Error::Config(_))));
    assert!(matches!(
        with("example_id", "nope".into()),
        Err(Error::UnknownExample(_))
    ));
    assert!(matches!(
        with("eps_grid", serde_json::json!({"j_min": 5, "j_max": 5})),
        Err(Error::Config(_))
    ));
    assert!(matches!(with("n_targets", 0.into()), Err(Error::Config(_))));
    assert!(with("variety", "hyperboloid:1,1,-1,1".into()).is_err());
    let mut b = base.clone();
    b["variety"] = "hyperboloid:1,1,-1,1".into();
    b["example_id"] = "hyperboloid_Q".into();
    assert!(ExperimentConfig::from_json(&b.to_string()).is_ok());
    b["surprise"] = 1.into();
    assert!(ExperimentConfig::from_json(&b.to_string()).is_err());
}

#[test]
fn example_variety_pairs() {
    let s = |d| VarietySpec::sphere(d).unwrap();
    assert!(example_matches_variety("S2", &s(2)));
    assert!(example_matches_variety("S5", &s(5)));
    assert!(!example_matches_variety("S2", &s(3)));
    assert!(!example_matches_variety("SO5", &s(4)));
    assert!(example_matches_variety("SL2_Q_unconditional", &VarietySpec::Sl2));
    assert!(!example_matches_variety("S3", &VarietySpec::Sl2));
}

#[test]
fn run_is_deterministic_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let c = small_config(dir.path());
    let a = run_experiment(&c).unwrap();
    let b = run_experiment(&c).unwrap();
    assert_eq!(a, b);

    // bucket k of the 2-sphere at p = 5 has 24 * 5^(k-1) points
    let buckets: Vec<u64> = a.census.counts.iter().map(|c| c.bucket).collect();
    assert_eq!(buckets, vec![6, 24, 120, 600, 3000]);
    assert_eq!(a.census.total_points, 3750);
    assert_eq!(a.targets.len(), 12);
    assert_eq!(a.omega.epsilons.len(), 7);
    assert_eq!(a.covering.curve.len(), 4);
    assert!(a.covering.curve.windows(2).all(|w| w[1].radius <= w[0].radius));
    assert_eq!(a.verdicts.len(), 5);
    for t in &a.targets {
        assert!(t.omegas.windows(2).all(|w| w[0] <= w[1]));
    }

    let written = emit_report(&a, &[Format::Json, Format::Csv, Format::Plotdata]).unwrap();
    assert_eq!(written.len(), 5);
    let back = load_report(&dir.path().join("report.json")).unwrap();
    assert_eq!(back, a);
    let again = serde_json::to_string_pretty(&back).unwrap();
    let first = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(first.trim_end(), again);

    let csv = std::fs::read_to_string(dir.path().join("profiles.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("target_id,eps,omega_height,censored"));
    assert_eq!(lines.count(), 12 * 7);
    let counting = std::fs::read_to_string(dir.path().join("plot_counting.dat")).unwrap();
    let rows: Vec<(f64, f64)> = counting
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(' ').map(|t| t.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    for (k, (x, y)) in rows.iter().enumerate() {
        assert!((x - k as f64 * 5f64.ln()).abs() < 1e-12);
        assert!((y - (a.census.counts[k].cumulative as f64).ln()).abs() < 1e-12);
    }
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
}

#[test]
fn census_cache_is_reused_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.census_cache = Some(dir.path().join("census.txt"));
    let fresh = run_experiment(&c).unwrap();
    assert!(dir.path().join("census.txt").exists());
    let cached = run_experiment(&c).unwrap();
    assert_eq!(fresh, cached);
    c.max_k = 3;
    assert!(matches!(run_experiment(&c), Err(Error::Config(_))));
}

#[test]
fn bracket_uses_lower_and_ae() {
    let s2 = predicted_exponents("S2").unwrap();
    assert_eq!(omega_bracket(&s2, 0.6), (2.0 - 0.6, 2.0 + 0.6));
    let s3 = predicted_exponents("S3").unwrap();
    assert_eq!(omega_bracket(&s3, 0.6), (1.5 - 0.6, 1.5 + 0.6));
    let h = predicted_exponents("hyperboloid").unwrap();
    assert_eq!(omega_bracket(&h, 0.5), (1.5, 2.5));
}

#[test]
fn verdict_rules() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = run_experiment(&small_config(dir.path())).unwrap();
    let fit = |slope| PowerLawFit {
        slope,
        slope_stderr: 0.0,
        intercept: 0.0,
        window: (0, 3),
        residual_rms: 0.0,
        n: 3,
    };
    r.census.counting_fit = Some(fit(1.2));
    r.omega.median_slope = Some(2.5);
    r.omega.fraction_in_bracket = 0.9;
    r.covering.fit = Some(fit(-0.55));
    r.covering.implied_uniform_exponent = Some(1.0 / 0.55);
    let v = compare_with_prediction(&r);
    let names: Vec<&str> = v.iter().map(|v| v.rule.as_str()).collect();
    assert_eq!(
        names,
        [
            "counting_exponent",
            "omega_median_bracket",
            "omega_ae_fraction",
            "covering_slope",
            "covering_uniform_exponent"
        ]
    );
    assert!(v.iter().all(|v| v.pass), "{v:?}");

    r.census.counting_fit = Some(fit(1.3));
    r.omega.median_slope = Some(2.7);
    r.omega.fraction_in_bracket = 0.89;
    r.covering.fit = Some(fit(-0.65));
    r.covering.implied_uniform_exponent = Some(4.7);
    assert!(compare_with_prediction(&r).iter().all(|v| !v.pass));

    r.omega.median_slope = None;
    let v = compare_with_prediction(&r);
    assert!(!v[1].pass);
    assert_eq!(v[1].measured, None);
}

#[test]
fn hyperboloid_has_no_counting_rule() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.variety = "hyperboloid:1,1,-1,1".parse().unwrap();
    c.example_id = "hyperboloid".into();
    c.max_k = 2;
    c.n_targets = 4;
    c.covering_samples = 16;
    let r = run_experiment(&c).unwrap();
    assert_eq!(r.census.cap, Some(25));
    assert_eq!(r.verdicts.len(), 4);
    assert_eq!(r.verdicts[0].rule, "omega_median_bracket");
}

#[test]
fn quantiles() {
    assert_eq!(quantile(&[], 0.5), None);
    assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), Some(2.5));
    assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), Some(2.0));
}
