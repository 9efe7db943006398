//! Approximation by points of a census: `omega`, covering radii, covering
//! numbers and log-log fits.
//!
//! `omega(x, eps)` is the least height of a census point within sup
//! distance `eps` of `x`. Candidates come from an `f64` kd-tree with a
//! small slack; anything near the boundary is re-checked exactly.

mod kdtree;
mod sampling;

use std::io::Write;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Rational, RationalVector, RealVector, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::points::{expand_orbit, EnumeratedPoint, HeightCensus, VarietySpec};

pub use kdtree::KdTree;
pub use sampling::{sample_targets, TargetSampler, DEFAULT_TARGET_BOX};

/// A query point: either an exact rational vector or a dyadic real vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Exact(RationalVector),
    Real(RealVector),
}

impl Target {
    pub fn from_f64s(coords: &[f64], precision: u32) -> Result<Self> {
        Ok(Target::Real(RealVector::from_f64s(coords, precision)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Target::Exact(v) => v.dim(),
            Target::Real(v) => v.dim(),
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        match self {
            Target::Exact(v) => v.coords().iter().map(rational_to_f64).collect(),
            Target::Real(v) => v.to_f64s(),
        }
    }

    /// Absolute values sorted in decreasing order.
    pub fn sorted_abs(&self) -> Target {
        match self {
            Target::Real(v) => Target::Real(v.sorted_abs()),
            Target::Exact(v) => {
                let mut c: Vec<Rational> = v.coords().iter().map(Signed::abs).collect();
                c.sort_by(|a, b| b.cmp(a));
                Target::Exact(RationalVector::new(c).expect("nonempty"))
            }
        }
    }

    /// Exact `max_i |x_i - a_i/den|`.
    pub fn distance_to_integers(&self, nums: &[i64], den: u64) -> Result<Rational> {
        match self {
            Target::Real(v) => v.distance_to_integers(nums, den),
            Target::Exact(v) => {
                if v.dim() != nums.len() {
                    return Err(Error::DimensionMismatch {
                        left: v.dim(),
                        right: nums.len(),
                    });
                }
                let den = BigRational::from_integer(den.into());
                Ok(v.coords()
                    .iter()
                    .zip(nums)
                    .map(|(x, &a)| (x - BigRational::from_integer(a.into()) / &den).abs())
                    .max()
                    .unwrap_or_else(Rational::zero))
            }
        }
    }

    fn within_integers(&self, nums: &[i64], den: u64, eps: &Rational) -> bool {
        match self {
            Target::Real(v) => v.within_integers(nums, den, eps),
            Target::Exact(_) => self.distance_to_integers(nums, den).is_ok_and(|d| &d <= eps),
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn sup_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |d, (x, y)| d.max((x - y).abs()))
}

fn sorted_abs_f64(x: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = x.iter().map(|c| c.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Sup-norm search structure over the stored points of a census.
///
/// Symmetry-reduced censuses are indexed by orbit representatives and
/// queries are folded the same way, which leaves all sup distances to
/// orbits unchanged.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    variety: VarietySpec,
    max_height: u64,
    symmetric: bool,
    precision: u32,
    points: Vec<EnumeratedPoint>,
    tree: KdTree,
    min_height: u64,
    max_abs: f64,
}

pub fn build_index(census: &HeightCensus, precision: u32) -> Result<SpatialIndex> {
    if census.is_empty() {
        return Err(Error::EmptyCensus);
    }
    let dim = census.variety().ambient_dim();
    let points: Vec<EnumeratedPoint> = census.iter_weighted().map(|(pt, _)| pt.clone()).collect();
    let coords: Vec<f64> = points.iter().flat_map(EnumeratedPoint::to_f64s).collect();
    let heights: Vec<u64> = points.iter().map(EnumeratedPoint::height).collect();
    let max_abs = coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    Ok(SpatialIndex {
        variety: census.variety().clone(),
        max_height: census.p().get().saturating_pow(census.max_k()),
        symmetric: census.is_symmetry_reduced(),
        precision,
        tree: KdTree::build(dim, &coords, &heights),
        min_height: heights.iter().copied().min().unwrap_or(u64::MAX),
        points,
        max_abs,
    })
}

impl SpatialIndex {
    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^max_k`: a census is complete for heights up to this value only
    /// in the definite case; indefinite censuses are box-capped.
    pub fn max_height(&self) -> u64 {
        self.max_height
    }

    pub fn min_height(&self) -> u64 {
        self.min_height
    }

    pub fn stored_len(&self) -> usize {
        self.points.len()
    }

    pub fn target_from_f64s(&self, coords: &[f64]) -> Result<Target> {
        Target::from_f64s(coords, self.precision)
    }

    fn fold(&self, x: &Target) -> Target {
        if self.symmetric {
            x.sorted_abs()
        } else {
            x.clone()
        }
    }

    fn slack(&self, xf: &[f64]) -> f64 {
        let scale = xf.iter().fold(self.max_abs.max(1.0), |m, c| m.max(c.abs()));
        16.0 * f64::EPSILON * scale
    }

    fn check_dim(&self, x: &Target) -> Result<()> {
        if x.dim() != self.variety.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: self.variety.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Every census point (orbits expanded) within sup distance `eps` of
    /// `x`, checked exactly, sorted.
    pub fn points_within(&self, x: &Target, eps: f64) -> Result<Vec<EnumeratedPoint>> {
        self.check_dim(x)?;
        let Some(eps_q) = BigRational::from_f64(eps).filter(|e| !e.is_negative()) else {
            return Ok(Vec::new());
        };
        let folded = self.fold(x);
        let xf = folded.to_f64s();
        let mut out = Vec::new();
        for i in self.tree.within(&xf, eps + self.slack(&xf)) {
            let rep = &self.points[i];
            if !folded.within_integers(rep.numerators(), rep.denominator(), &eps_q) {
                continue;
            }
            if self.symmetric {
                for nums in expand_orbit(rep.numerators()) {
                    if x.within_integers(&nums, rep.denominator(), &eps_q) {
                        out.push(EnumeratedPoint::new(
                            nums,
                            rep.denominator_exponent(),
                            rep.denominator(),
                        ));
                    }
                }
            } else {
                out.push(rep.clone());
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Minimum height of a census point within sup distance `eps` of `x`;
    /// `None` when the ball holds no census point.
    pub fn omega_query(&self, x: &Target, eps: f64) -> Result<Option<u64>> {
        self.check_dim(x)?;
        let Some(eps_q) = BigRational::from_f64(eps).filter(|e| !e.is_negative()) else {
            return Ok(None);
        };
        let folded = self.fold(x);
        let xf = folded.to_f64s();
        let slack = self.slack(&xf);
        let found = self.tree.min_height_within(&xf, eps + slack, |i, d| {
            if d <= eps - slack {
                return true;
            }
            let pt = &self.points[i];
            folded.within_integers(pt.numerators(), pt.denominator(), &eps_q)
        });
        Ok(found.map(|(h, _)| h))
    }

    /// Sup distance from `x` to the nearest census point of height at most
    /// `cap`, in `f64`.
    pub fn nearest_distance(&self, x: &[f64], cap: u64) -> Option<f64> {
        let xf = if self.symmetric { sorted_abs_f64(x) } else { x.to_vec() };
        self.tree.nearest_under_cap(&xf, cap).map(|(_, d)| d)
    }
}

/// `omega` along a decreasing grid of radii.
///
/// `omegas[i]` belongs to `epsilons[i]`. Once a ball is empty every smaller
/// ball is empty too, so the list is truncated there and
/// `omegas.len()` is the censored depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationProfile {
    pub target: Vec<f64>,
    pub on_variety: bool,
    pub epsilons: Vec<f64>,
    pub omegas: Vec<u64>,
}

impl ApproximationProfile {
    pub fn is_censored(&self) -> bool {
        self.omegas.len() < self.epsilons.len()
    }

    pub fn omega_at(&self, i: usize) -> Option<u64> {
        self.omegas.get(i).copied()
    }

    /// `(1/eps, omega)` over the uncensored part of the grid.
    pub fn uncensored_curve(&self) -> (Vec<f64>, Vec<f64>) {
        self.epsilons
            .iter()
            .zip(&self.omegas)
            .map(|(&e, &h)| (1.0 / e, h as f64))
            .unzip()
    }
}

pub fn omega_profile(index: &SpatialIndex, x: &Target, eps_grid: &[f64]) -> Result<ApproximationProfile> {
    if eps_grid.iter().any(|e| !(*e > 0.0)) || eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "eps grid must be positive and strictly decreasing".into(),
        ));
    }
    let target = x.to_f64s();
    let scale = target.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let on_variety = index.variety.residual(&target).abs() <= 1e-9 * scale * scale;
    let mut omegas = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        match index.omega_query(x, eps)? {
            Some(h) => omegas.push(h),
            None => break,
        }
    }
    Ok(ApproximationProfile {
        target,
        on_variety,
        epsilons: eps_grid.to_vec(),
        omegas,
    })
}

/// `base^j` for `j = j_min..=j_max`.
pub fn eps_grid(base: f64, j_min: u32, j_max: u32) -> Vec<f64> {
    (j_min..=j_max).map(|j| base.powi(j as i32)).collect()
}

/// Largest distance from a sample point to the census points of height at
/// most `height_cap`.
pub fn covering_radius(index: &SpatialIndex, height_cap: u64, sample: &[Vec<f64>]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidArgument("covering radius needs a nonempty sample".into()));
    }
    if index.min_height > height_cap {
        return Err(Error::NoPointsUnderCap(height_cap));
    }
    let dim = index.variety.ambient_dim();
    let mut radius = 0.0f64;
    for x in sample {
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: dim,
            });
        }
        let d = index
            .nearest_distance(x, height_cap)
            .ok_or(Error::NoPointsUnderCap(height_cap))?;
        radius = radius.max(d);
    }
    Ok(radius)
}

/// Size of a greedy `eps`-net of the sample in the sup norm.
pub fn covering_number(targets: &[Vec<f64>], eps: f64) -> usize {
    let mut centers: Vec<&[f64]> = Vec::new();
    for t in targets {
        if !centers.iter().any(|c| sup_f64(c, t) <= eps) {
            centers.push(t);
        }
    }
    centers.len()
}

/// Least-squares line through `(ln x, ln y)` on a window of the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    #[serde(rename = "stderr")]
    pub slope_stderr: f64,
    pub intercept: f64,
    pub window: (usize, usize),
    pub residual_rms: f64,
    pub n: usize,
}

/// The default window: drop `floor(n/5)` points at each end.
pub fn default_window(n: usize) -> Range<usize> {
    let drop = n / 5;
    drop..n - drop
}

pub fn fit_power_law(xs: &[f64], ys: &[f64], window: Range<usize>) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if window.start > window.end || window.end > xs.len() {
        return Err(Error::InvalidArgument(format!(
            "window {window:?} out of bounds for {} points",
            xs.len()
        )));
    }
    let n = window.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) = window
        .clone()
        .map(|i| {
            if !(xs[i] > 0.0 && ys[i] > 0.0) {
                return Err(Error::InvalidArgument(format!("non-positive value at index {i}")));
            }
            Ok((xs[i].ln(), ys[i].ln()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values in the window coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(PowerLawFit {
        slope,
        slope_stderr: (ssr / (nf - 2.0) / sxx).sqrt(),
        intercept,
        window: (window.start, window.end),
        residual_rms: (ssr / nf).sqrt(),
        n,
    })
}

/// Writes profiles as CSV: `target_id,eps,omega_height,censored`.
/// Censored radii get `NA` and `1`.
pub fn write_profiles_csv<W: Write>(profiles: &[ApproximationProfile], mut w: W) -> std::io::Result<()> {
    writeln!(w, "target_id,eps,omega_height,censored")?;
    for (id, prof) in profiles.iter().enumerate() {
        for (i, eps) in prof.epsilons.iter().enumerate() {
            match prof.omega_at(i) {
                Some(h) => writeln!(w, "{id},{eps},{h},0")?,
                None => writeln!(w, "{id},{eps},NA,1")?,
            }
        }
    }
    w.flush()
}

/// Fits `omega ~ C eps^(-slope)` on the default window of the uncensored
/// part of a profile.
pub fn fit_profile(profile: &ApproximationProfile) -> Result<PowerLawFit> {
    let (xs, ys) = profile.uncensored_curve();
    fit_power_law(&xs, &ys, default_window(xs.len()))
}

/// Index over a census at the default working precision.
pub fn build_default_index(census: &HeightCensus) -> Result<SpatialIndex> {
    build_index(census, DEFAULT_PRECISION)
}

#[cfg(test)]
mod tests;
