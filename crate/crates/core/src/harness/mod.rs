//! End-to-end experiments: enumerate, index, sample targets, profile, fit,
//! and compare the fitted exponents with the prediction table.
//!
//! Target profiles are computed on worker threads but assembled in sample
//! order, and `f64`s are written with shortest round-trip formatting, so a
//! config (seed included) pins down `report.json` byte for byte.

mod emit;
pub mod parse;

use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::approx::{
    build_index, covering_radius, default_window, eps_grid, fit_power_law, omega_profile, sample_targets, PowerLawFit,
    DEFAULT_TARGET_BOX,
};
use crate::arith::{Prime, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::points::{
    count_by_height, enumerate_points_with, read_census_file, write_census_file, EnumerateOptions, HeightCensus,
    VarietySpec,
};
use crate::spectral::{predicted_exponents, ExponentPrediction};

pub use emit::{emit_report, load_report, Format};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsGrid {
    #[serde(default = "default_base")]
    pub base: f64,
    pub j_min: u32,
    pub j_max: u32,
}

fn default_base() -> f64 {
    0.5
}

impl EpsGrid {
    pub fn values(&self) -> Vec<f64> {
        eps_grid(self.base, self.j_min, self.j_max)
    }
}

/// Which part of an omega profile a per-target fit uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitWindow {
    /// Drop `floor(n/5)` points at each end of the uncensored part.
    #[default]
    Trim20,
    /// Every uncensored point.
    Uncensored,
}

impl FitWindow {
    pub fn range(self, n: usize) -> std::ops::Range<usize> {
        match self {
            FitWindow::Trim20 => default_window(n),
            FitWindow::Uncensored => 0..n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Counting exponent, absolute.
    pub counting: f64,
    /// Half-width of the omega-exponent bracket; also the slack on the
    /// implied uniform exponent.
    pub omega: f64,
    /// Slack on the covering-radius slope.
    pub covering: f64,
    /// Fraction of targets whose slope must lie in the bracket.
    pub ae_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            counting: 0.25,
            omega: 0.6,
            covering: 0.1,
            ae_fraction: 0.9,
        }
    }
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

fn default_covering_samples() -> usize {
    1000
}

fn default_target_box() -> f64 {
    DEFAULT_TARGET_BOX
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variety: VarietySpec,
    pub p: Prime,
    pub max_k: u32,
    pub n_targets: usize,
    pub eps_grid: EpsGrid,
    pub seed: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    pub example_id: String,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub fit_window: FitWindow,
    #[serde(default = "default_covering_samples")]
    pub covering_samples: usize,
    /// Half-width of the sampling box for indefinite varieties.
    #[serde(default = "default_target_box")]
    pub target_box: f64,
    /// Numerator bound for indefinite varieties (default `p^max_k`).
    #[serde(default)]
    pub cap: Option<u64>,
    /// Census file to reuse, written on first use.
    #[serde(default)]
    pub census_cache: Option<PathBuf>,
}

/// Example ids that describe the given variety.
pub fn example_matches_variety(example_id: &str, variety: &VarietySpec) -> bool {
    match variety {
        VarietySpec::Sphere { d } => example_id == format!("S{d}"),
        VarietySpec::Hyperboloid { .. } => example_id.starts_with("hyperboloid"),
        VarietySpec::Sl2 => example_id.starts_with("SL2_Q"),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.eps_grid;
        if g.j_min >= g.j_max {
            return Err(Error::Config(format!(
                "need j_min < j_max, got {} and {}",
                g.j_min, g.j_max
            )));
        }
        if !(g.base > 0.0 && g.base < 1.0) {
            return Err(Error::Config(format!("eps base {} must lie in (0, 1)", g.base)));
        }
        if self.n_targets == 0 || self.covering_samples == 0 {
            return Err(Error::Config("n_targets and covering_samples must be positive".into()));
        }
        if !(self.target_box > 0.0) {
            return Err(Error::Config("target_box must be positive".into()));
        }
        predicted_exponents(&self.example_id)?;
        if !example_matches_variety(&self.example_id, &self.variety) {
            return Err(Error::Config(format!(
                "example {} does not describe {}",
                self.example_id, self.variety
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BucketCount {
    pub k: u32,
    /// `p^k`.
    pub height: u64,
    pub bucket: u64,
    /// Points of height at most `p^k`.
    pub cumulative: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusStats {
    pub total_points: u64,
    pub stored_points: usize,
    pub cap: Option<u64>,
    pub counts: Vec<BucketCount>,
    /// Fit of `A(p^k)` against `p^k` over `k = 1..=max_k`.
    pub counting_fit: Option<PowerLawFit>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSummary {
    pub id: usize,
    pub target: Vec<f64>,
    pub on_variety: bool,
    /// `omega` on the leading, uncensored part of the eps grid.
    pub omegas: Vec<u64>,
    pub fit: Option<PowerLawFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PooledPoint {
    pub eps: f64,
    /// Median over all targets, censored ones counting as infinite;
    /// absent once half the targets are censored.
    pub median_omega: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaSummary {
    pub epsilons: Vec<f64>,
    pub n_targets: usize,
    pub n_fitted: usize,
    pub median_slope: Option<f64>,
    pub q1_slope: Option<f64>,
    pub q3_slope: Option<f64>,
    pub iqr: Option<f64>,
    pub bracket: (f64, f64),
    /// Share of all targets (unfittable ones count as outside) whose slope
    /// lies in the bracket.
    pub fraction_in_bracket: f64,
    pub pooled: Vec<PooledPoint>,
    pub pooled_fit: Option<PowerLawFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringPoint {
    pub height_cap: u64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringSummary {
    pub samples: usize,
    pub curve: Vec<CoveringPoint>,
    /// Fit of the covering radius against the height cap.
    pub fit: Option<PowerLawFit>,
    /// `-1 / slope`.
    pub implied_uniform_exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub rule: String,
    pub measured: Option<f64>,
    pub expected: String,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub census: CensusStats,
    pub targets: Vec<TargetSummary>,
    pub omega: OmegaSummary,
    pub covering: CoveringSummary,
    pub prediction: ExponentPrediction,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

fn load_or_enumerate(config: &ExperimentConfig) -> Result<HeightCensus> {
    let opts = EnumerateOptions {
        cap: config.cap,
        ..Default::default()
    };
    let fresh = || enumerate_points_with(&config.variety, config.p, config.max_k, &opts);
    let Some(path) = &config.census_cache else {
        return fresh();
    };
    if path.exists() {
        let census = read_census_file(path)?;
        let expected_cap = if config.variety.is_definite() {
            None
        } else {
            Some(config.cap.unwrap_or(config.p.get().pow(config.max_k)))
        };
        if census.variety() != &config.variety
            || census.p() != config.p
            || census.max_k() != config.max_k
            || census.cap() != expected_cap
        {
            return Err(Error::Config(format!(
                "census cache {} does not match the configuration",
                path.display()
            )));
        }
        return Ok(census);
    }
    let census = fresh()?;
    write_census_file(&census, path)?;
    Ok(census)
}

fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    // linear interpolation between order statistics
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}

fn census_stats(census: &HeightCensus) -> CensusStats {
    let counts: Vec<BucketCount> = count_by_height(census)
        .into_iter()
        .enumerate()
        .map(|(k, (height, cumulative))| BucketCount {
            k: k as u32,
            height,
            bucket: census.bucket_len(k as u32),
            cumulative,
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = counts
        .iter()
        .skip(1)
        .filter(|c| c.cumulative > 0)
        .map(|c| (c.height as f64, c.cumulative as f64))
        .unzip();
    CensusStats {
        total_points: census.total_points(),
        stored_points: census.stored_len(),
        cap: census.cap(),
        counting_fit: fit_power_law(&xs, &ys, 0..xs.len()).ok(),
        counts,
        warnings: census.warnings().to_vec(),
    }
}

/// The omega-exponent bracket `[min(lower, ae) - tol, ae + tol]`.
pub fn omega_bracket(prediction: &ExponentPrediction, tol: f64) -> (f64, f64) {
    let ae = prediction.ae_exponent.to_f64().unwrap_or(f64::NAN);
    let lower = prediction
        .lower_exponent
        .and_then(|l| l.to_f64())
        .map_or(ae, |l| l.min(ae));
    (lower - tol, ae + tol)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let prediction = predicted_exponents(&config.example_id)?;
    let census = load_or_enumerate(config)?;
    let stats = census_stats(&census);
    let index = build_index(&census, config.precision)?;

    let grid = config.eps_grid.values();
    let sampled = sample_targets(&config.variety, config.n_targets, config.seed, config.target_box);
    let summarize = |id: usize, x: &[f64]| -> Result<TargetSummary> {
        let t = index.target_from_f64s(x)?;
        let prof = omega_profile(&index, &t, &grid)?;
        let (xs, ys) = prof.uncensored_curve();
        let fit = fit_power_law(&xs, &ys, config.fit_window.range(xs.len())).ok();
        Ok(TargetSummary {
            id,
            target: prof.target,
            on_variety: prof.on_variety,
            omegas: prof.omegas,
            fit,
        })
    };
    // contiguous chunks, joined in order, so the result is thread-count independent
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(sampled.len());
    let chunk = sampled.len().div_ceil(workers);
    let targets: Vec<TargetSummary> = std::thread::scope(|scope| {
        let handles: Vec<_> = sampled
            .chunks(chunk)
            .enumerate()
            .map(|(c, xs)| {
                let summarize = &summarize;
                scope.spawn(move || {
                    xs.iter()
                        .enumerate()
                        .map(|(i, x)| summarize(c * chunk + i, x))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("profile worker panicked"))
            .collect::<Result<Vec<Vec<_>>>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let bracket = omega_bracket(&prediction, config.tolerances.omega);
    let mut slopes: Vec<f64> = targets.iter().filter_map(|t| t.fit.as_ref().map(|f| f.slope)).collect();
    slopes.sort_by(f64::total_cmp);
    let inside = slopes.iter().filter(|s| **s >= bracket.0 && **s <= bracket.1).count();
    let pooled: Vec<PooledPoint> = grid
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let mut column: Vec<u64> = targets
                .iter()
                .map(|t| t.omegas.get(i).copied().unwrap_or(u64::MAX))
                .collect();
            column.sort_unstable();
            let median = column[(column.len() - 1) / 2];
            PooledPoint {
                eps,
                median_omega: (median != u64::MAX).then_some(median),
            }
        })
        .collect();
    let (pxs, pys): (Vec<f64>, Vec<f64>) = pooled
        .iter()
        .filter_map(|p| p.median_omega.map(|h| (1.0 / p.eps, h as f64)))
        .unzip();
    let (q1, q3) = (quantile(&slopes, 0.25), quantile(&slopes, 0.75));
    let omega = OmegaSummary {
        epsilons: grid.clone(),
        n_targets: targets.len(),
        n_fitted: slopes.len(),
        median_slope: quantile(&slopes, 0.5),
        q1_slope: q1,
        q3_slope: q3,
        iqr: q1.zip(q3).map(|(a, b)| b - a),
        bracket,
        fraction_in_bracket: inside as f64 / targets.len() as f64,
        pooled_fit: fit_power_law(&pxs, &pys, config.fit_window.range(pxs.len())).ok(),
        pooled,
    };

    let sample = sample_targets(
        &config.variety,
        config.covering_samples,
        config.seed.wrapping_add(1),
        config.target_box,
    );
    let mut curve = Vec::new();
    let p = config.p.get();
    for k in 1..=config.max_k {
        let cap = p.pow(k);
        match covering_radius(&index, cap, &sample) {
            Ok(radius) => curve.push(CoveringPoint {
                height_cap: cap,
                radius,
            }),
            Err(Error::NoPointsUnderCap(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let (cxs, cys): (Vec<f64>, Vec<f64>) = curve
        .iter()
        .filter(|c| c.radius > 0.0)
        .map(|c| (c.height_cap as f64, c.radius))
        .unzip();
    let cover_fit = fit_power_law(&cxs, &cys, 0..cxs.len()).ok();
    let covering = CoveringSummary {
        samples: sample.len(),
        implied_uniform_exponent: cover_fit.as_ref().filter(|f| f.slope < 0.0).map(|f| -1.0 / f.slope),
        fit: cover_fit,
        curve,
    };

    let mut report = ExperimentReport {
        config: config.clone(),
        census: stats,
        targets,
        omega,
        covering,
        prediction,
        verdicts: Vec::new(),
    };
    report.verdicts = compare_with_prediction(&report);
    Ok(report)
}

fn verdict(
    rule: &str,
    measured: Option<f64>,
    expected: String,
    tolerance: f64,
    pass: impl FnOnce(f64) -> bool,
) -> Verdict {
    Verdict {
        rule: rule.to_string(),
        measured,
        expected,
        tolerance,
        pass: measured.is_some_and(pass),
    }
}

/// Checks the measured exponents of a report against its prediction:
///
/// * `counting_exponent`: counting slope within `tol.counting` of
///   `dim X / lower` (the counting exponent of the variety), when the
///   prediction has a lower exponent;
/// * `omega_median_bracket`: median per-target omega slope in the bracket;
/// * `omega_ae_fraction`: at least `tol.ae_fraction` of all targets have
///   their slope in the bracket;
/// * `covering_slope`: covering-radius slope at least `-1/ae - tol.covering`;
/// * `covering_uniform_exponent`: `-1/slope` at most `uniform + tol.omega`.
pub fn compare_with_prediction(report: &ExperimentReport) -> Vec<Verdict> {
    let tol = &report.config.tolerances;
    let pred = &report.prediction;
    let ae = pred.ae_exponent.to_f64().unwrap_or(f64::NAN);
    let uniform = pred.uniform_exponent.to_f64().unwrap_or(f64::NAN);
    let mut out = Vec::new();

    if let Some(lower) = pred.lower_exponent {
        let a_x = (num_rational::Rational64::from_integer(pred.dim_x as i64) / lower)
            .to_f64()
            .unwrap_or(f64::NAN);
        out.push(verdict(
            "counting_exponent",
            report.census.counting_fit.as_ref().map(|f| f.slope),
            format!("{a_x} +- {}", tol.counting),
            tol.counting,
            |m| (m - a_x).abs() <= tol.counting,
        ));
    }

    let (lo, hi) = report.omega.bracket;
    out.push(verdict(
        "omega_median_bracket",
        report.omega.median_slope,
        format!("[{lo}, {hi}]"),
        tol.omega,
        |m| m >= lo && m <= hi,
    ));
    out.push(verdict(
        "omega_ae_fraction",
        Some(report.omega.fraction_in_bracket),
        format!(">= {} of targets in [{lo}, {hi}]", tol.ae_fraction),
        tol.omega,
        |m| m >= tol.ae_fraction,
    ));

    let floor = -1.0 / ae - tol.covering;
    out.push(verdict(
        "covering_slope",
        report.covering.fit.as_ref().map(|f| f.slope),
        format!(">= {floor}"),
        tol.covering,
        |m| m >= floor,
    ));
    let ceiling = uniform + tol.omega;
    out.push(verdict(
        "covering_uniform_exponent",
        report.covering.implied_uniform_exponent,
        format!("<= {ceiling}"),
        tol.omega,
        |m| m <= ceiling,
    ));
    out
}

#[cfg(test)]
mod tests;
