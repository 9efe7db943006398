use num_rational::BigRational;
use num_traits::FromPrimitive;
use proptest::prelude::*;

use super::*;
use crate::arith::Prime;
use crate::points::{count_by_height, enumerate_points, primitive_reduce};

fn sphere_census(d: u32, max_k: u32) -> HeightCensus {
    enumerate_points(&VarietySpec::sphere(d).unwrap(), Prime::new(5).unwrap(), max_k).unwrap()
}

fn all_points(census: &HeightCensus) -> Vec<EnumeratedPoint> {
    (0..=census.max_k()).flat_map(|k| census.bucket_points(k)).collect()
}

/// Exact linear scan.
fn scan_omega(points: &[EnumeratedPoint], x: &Target, eps: f64) -> Option<u64> {
    let eps = BigRational::from_f64(eps).unwrap();
    points
        .iter()
        .filter(|pt| x.distance_to_integers(pt.numerators(), pt.denominator()).unwrap() <= eps)
        .map(EnumeratedPoint::height)
        .min()
}

/// Linear scan in `f64` with an exact re-check of anything near the
/// boundary; fast enough for large censuses.
fn scan_omega_fast(points: &[EnumeratedPoint], x: &Target, eps: f64) -> Option<u64> {
    let xf = x.to_f64s();
    let eps_q = BigRational::from_f64(eps).unwrap();
    points
        .iter()
        .filter(|pt| {
            let d = sup_f64(&pt.to_f64s(), &xf);
            if (d - eps).abs() > 1e-12 {
                d < eps
            } else {
                x.distance_to_integers(pt.numerators(), pt.denominator()).unwrap() <= eps_q
            }
        })
        .map(EnumeratedPoint::height)
        .min()
}

fn exact(nums: &[i64], den: i64) -> Target {
    Target::Exact(RationalVector::from_integers(nums, den).unwrap())
}

#[test]
fn bucket_zero_index() {
    let census = sphere_census(2, 0);
    let index = build_default_index(&census).unwrap();
    let x = index.target_from_f64s(&[0.9, 0.05, -0.1]).unwrap();
    let near = index.points_within(&x, 0.2).unwrap();
    assert_eq!(near.len(), 1);
    assert_eq!(near[0].numerators(), &[1, 0, 0]);
    assert_eq!(index.points_within(&x, 1.0).unwrap().len(), 3);
    assert_eq!(index.points_within(&x, 2.0).unwrap().len(), 6);
    assert_eq!(index.omega_query(&x, 0.2).unwrap(), Some(1));
    assert_eq!(index.omega_query(&x, 0.05).unwrap(), None);
}

#[test]
fn empty_census_is_rejected() {
    let h = VarietySpec::hyperboloid([1, 1, 1], -1).unwrap();
    let census = enumerate_points(&h, Prime::new(5).unwrap(), 2).unwrap();
    assert!(matches!(build_default_index(&census), Err(Error::EmptyCensus)));
}

#[test]
fn single_point_census() {
    let p = Prime::new(2).unwrap();
    let id = primitive_reduce(&[1, 0, 0, 1], p, 0).unwrap();
    let census = HeightCensus::from_points(VarietySpec::Sl2, p, 0, Some(1), [id.clone()]).unwrap();
    let index = build_default_index(&census).unwrap();
    let x = index.target_from_f64s(&[1.25, 0.0, 0.5, 1.0]).unwrap();
    for (eps, hit) in [(0.25, false), (0.5, true), (0.75, true), (0.4999, false)] {
        let expect: Vec<EnumeratedPoint> = if hit { vec![id.clone()] } else { vec![] };
        assert_eq!(index.points_within(&x, eps).unwrap(), expect, "eps {eps}");
        assert_eq!(index.omega_query(&x, eps).unwrap(), hit.then_some(1));
    }
}

#[test]
fn omega_at_rational_points() {
    let index = build_default_index(&sphere_census(2, 1)).unwrap();
    assert_eq!(index.omega_query(&exact(&[3, 4, 0], 5), 0.0).unwrap(), Some(5));
    assert_eq!(index.omega_query(&exact(&[0, 0, -4], 5), 0.0).unwrap(), None);
    let e1 = exact(&[1, 0, 0], 1);
    for eps in [0.0, 1e-9, 0.1, 1.0, 3.0] {
        assert_eq!(index.omega_query(&e1, eps).unwrap(), Some(1));
    }
}

#[test]
fn omega_near_the_diagonal() {
    let census = sphere_census(2, 1);
    let index = build_default_index(&census).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = index.target_from_f64s(&[s, s, 0.0]).unwrap();
    let pts = all_points(&census);
    assert_eq!(pts.len(), 30);
    let expect = scan_omega(&pts, &x, 0.3);
    assert_eq!(expect, Some(5));
    assert_eq!(index.omega_query(&x, 0.3).unwrap(), expect);
    let within: Vec<EnumeratedPoint> = pts
        .iter()
        .filter(|pt| sup_f64(&pt.to_f64s(), &[s, s, 0.0]) <= 0.3)
        .cloned()
        .collect();
    assert_eq!(index.points_within(&x, 0.3).unwrap(), within);
}

#[test]
fn omega_matches_linear_scan_at_depth_seven() {
    let census = sphere_census(2, 7);
    let index = build_default_index(&census).unwrap();
    let pts = all_points(&census);
    assert_eq!(pts.len(), 468_750);
    let grid = eps_grid(0.5, 1, 10);
    for x in sample_targets(census.variety(), 100, 2024, DEFAULT_TARGET_BOX) {
        let t = index.target_from_f64s(&x).unwrap();
        for &eps in grid.iter().step_by(3) {
            assert_eq!(
                index.omega_query(&t, eps).unwrap(),
                scan_omega_fast(&pts, &t, eps),
                "{x:?} {eps}"
            );
        }
    }
}

#[test]
fn omega_on_a_hyperboloid_matches_scan() {
    let h = VarietySpec::hyperboloid([1, 1, -1], 1).unwrap();
    let census = enumerate_points(&h, Prime::new(5).unwrap(), 3).unwrap();
    let index = build_default_index(&census).unwrap();
    let pts = all_points(&census);
    for x in sample_targets(&h, 50, 5, DEFAULT_TARGET_BOX) {
        let t = index.target_from_f64s(&x).unwrap();
        for eps in [0.5, 0.1, 0.02, 0.004] {
            assert_eq!(index.omega_query(&t, eps).unwrap(), scan_omega(&pts, &t, eps));
        }
    }
}

#[test]
fn profiles() {
    let census = sphere_census(2, 7);
    let index = build_default_index(&census).unwrap();

    let on = exact(&[3, 4, 0], 5);
    let prof = omega_profile(&index, &on, &[0.5, 0.25, 0.125]).unwrap();
    assert_eq!(prof.omegas, vec![5, 5, 5]);
    assert!(prof.on_variety && !prof.is_censored());

    let grid = eps_grid(0.5, 1, 10);
    let pts: Vec<EnumeratedPoint> = all_points(&sphere_census(2, 4));
    let small = build_default_index(&sphere_census(2, 4)).unwrap();
    for x in sample_targets(census.variety(), 10, 77, DEFAULT_TARGET_BOX) {
        let t = index.target_from_f64s(&x).unwrap();
        let prof = omega_profile(&index, &t, &grid).unwrap();
        assert!(prof.on_variety);
        assert!(prof.omegas.windows(2).all(|w| w[0] <= w[1]));
        let coarse = omega_profile(&small, &t, &grid).unwrap();
        // a deeper census can only lower omega
        for (i, h) in coarse.omegas.iter().enumerate() {
            assert!(prof.omegas[i] <= *h);
            assert_eq!(Some(*h), scan_omega_fast(&pts, &t, grid[i]));
        }
        for &eps in &grid[coarse.omegas.len()..] {
            assert_eq!(scan_omega_fast(&pts, &t, eps), None);
        }
    }

    let off = index.target_from_f64s(&[5.0, 5.0, 5.0]).unwrap();
    let prof = omega_profile(&index, &off, &grid).unwrap();
    assert!(prof.omegas.is_empty() && prof.is_censored() && !prof.on_variety);

    assert!(omega_profile(&index, &on, &[0.25, 0.5]).is_err());
    assert!(omega_profile(&index, &on, &[0.5, 0.5]).is_err());
}

#[test]
fn covering_radius_cases() {
    let census = sphere_census(2, 2);
    let index = build_default_index(&census).unwrap();

    let own: Vec<Vec<f64>> = all_points(&census).iter().map(EnumeratedPoint::to_f64s).collect();
    assert_eq!(covering_radius(&index, 25, &own).unwrap(), 0.0);

    let sample = sample_targets(census.variety(), 1000, 11, DEFAULT_TARGET_BOX);
    let cap5: Vec<Vec<f64>> = all_points(&sphere_census(2, 1))
        .iter()
        .map(EnumeratedPoint::to_f64s)
        .collect();
    assert_eq!(cap5.len(), 30);
    let expect = sample
        .iter()
        .map(|x| cap5.iter().map(|z| sup_f64(x, z)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    assert_eq!(covering_radius(&index, 5, &sample).unwrap(), expect);
    assert!(covering_radius(&index, 25, &sample).unwrap() <= expect);
    assert!(covering_radius(&index, 1, &sample).unwrap() >= expect);

    assert!(matches!(
        covering_radius(&index, 0, &sample),
        Err(Error::NoPointsUnderCap(0))
    ));
}

#[test]
fn covering_numbers() {
    let s2 = VarietySpec::sphere(2).unwrap();
    assert_eq!(covering_number(&[vec![0.0, 0.0, 1.0]], 0.01), 1);
    let sample = sample_targets(&s2, 10_000, 5, DEFAULT_TARGET_BOX);
    assert_eq!(covering_number(&sample, 2.0), 1);
    let eps = [0.4, 0.28, 0.2, 0.14, 0.1];
    let counts: Vec<f64> = eps.iter().map(|&e| covering_number(&sample, e) as f64).collect();
    let inv: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    let fit = fit_power_law(&inv, &counts, 0..eps.len()).unwrap();
    assert!((fit.slope - 2.0).abs() < 0.3, "{fit:?}");
}

#[test]
fn exact_power_law_fit() {
    let xs: Vec<f64> = (1..=8).map(|i| i as f64 * 1.7).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let fit = fit_power_law(&xs, &ys, 0..8).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-12);
    assert!(fit.intercept.abs() < 1e-12);
    assert!(fit.residual_rms < 1e-12 && fit.slope_stderr < 1e-12);
    assert_eq!((fit.window, fit.n), ((0, 8), 8));
    assert!(matches!(fit_power_law(&xs, &ys, 2..4), Err(Error::TooFewPoints(2))));
    assert!(fit_power_law(&xs, &ys, 0..9).is_err());
    assert!(fit_power_law(&xs, &[1.0; 7], 0..7).is_err());
    let mut neg = ys.clone();
    neg[3] = -1.0;
    assert!(fit_power_law(&xs, &neg, 0..8).is_err());
    let json = serde_json::to_value(&fit).unwrap();
    for key in ["slope", "stderr", "intercept", "window", "residual_rms", "n"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn default_windows() {
    assert_eq!(default_window(10), 2..8);
    assert_eq!(default_window(4), 0..4);
    assert_eq!(default_window(5), 1..4);
}

#[test]
fn counting_slopes() {
    for (d, max_k, expect) in [(2, 6, 1.0), (3, 4, 2.0)] {
        let counts = count_by_height(&sphere_census(d, max_k));
        let xs: Vec<f64> = counts[1..].iter().map(|&(h, _)| h as f64).collect();
        let ys: Vec<f64> = counts[1..].iter().map(|&(_, a)| a as f64).collect();
        let fit = fit_power_law(&xs, &ys, 0..xs.len()).unwrap();
        assert!((fit.slope - expect).abs() < 0.25, "S^{d}: {fit:?}");
    }
}

#[test]
fn profile_csv_layout() {
    let prof = ApproximationProfile {
        target: vec![1.0, 0.0, 0.0],
        on_variety: true,
        epsilons: vec![0.5, 0.25, 0.125],
        omegas: vec![1, 5],
    };
    let mut buf = Vec::new();
    write_profiles_csv(&[prof.clone(), prof], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "target_id,eps,omega_height,censored");
    assert_eq!(lines[1], "0,0.5,1,0");
    assert_eq!(lines[3], "0,0.125,NA,1");
    assert_eq!(lines[6], "1,0.125,NA,1");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn omega_equals_exact_scan(
        coords in prop::collection::vec(-1.2f64..1.2, 3),
        j in 0u32..9,
    ) {
        use std::sync::OnceLock;
        static DATA: OnceLock<(SpatialIndex, Vec<EnumeratedPoint>)> = OnceLock::new();
        let (index, pts) = DATA.get_or_init(|| {
            let c = sphere_census(2, 3);
            (build_default_index(&c).unwrap(), all_points(&c))
        });
        let eps = 0.5f64.powi(j as i32);
        let t = index.target_from_f64s(&coords).unwrap();
        prop_assert_eq!(index.omega_query(&t, eps).unwrap(), scan_omega(pts, &t, eps));
    }

    #[test]
    fn omega_is_monotone_in_eps(coords in prop::collection::vec(-1.0f64..1.0, 4), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        use std::sync::OnceLock;
        static INDEX: OnceLock<SpatialIndex> = OnceLock::new();
        let index = INDEX.get_or_init(|| build_default_index(&sphere_census(3, 2)).unwrap());
        let t = index.target_from_f64s(&coords).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let w_lo = index.omega_query(&t, lo).unwrap().unwrap_or(u64::MAX);
        let w_hi = index.omega_query(&t, hi).unwrap().unwrap_or(u64::MAX);
        prop_assert!(w_hi <= w_lo);
    }
}
