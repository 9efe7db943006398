//! Spherical functions on the (q+1)-regular tree.
//!
//! A radial eigenfunction of the radius-one averaging operator is a sequence
//! `eta(n)` with `eta(0) = 1`, `eta(1) = lambda` and
//!
//! ```text
//! lambda * eta(n) = eta(n-1) / (q+1) + q * eta(n+1) / (q+1),   n >= 1.
//! ```
//!
//! The parameter `s >= 0` gives `lambda(s) = sqrt(q) (q^s + q^-s) / (q+1)`,
//! increasing in `s`; `s = 0` is the Harish-Chandra function `Xi` and
//! `s = 1/2` is the constant function 1.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TreeSphericalContext {
    q: u64,
    s: f64,
}

impl TreeSphericalContext {
    pub fn new(q: u64, s: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("tree parameter q = {q} must be >= 2")));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "spectral parameter s = {s} must be finite and >= 0"
            )));
        }
        Ok(TreeSphericalContext { q, s })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn eigenvalue(&self) -> f64 {
        let q = self.q as f64;
        q.sqrt() * (q.powf(self.s) + q.powf(-self.s)) / (q + 1.0)
    }

    /// `|lambda| <= 1`, i.e. `s <= 1/2`.
    pub fn is_bounded_range(&self) -> bool {
        self.s <= 0.5
    }

    pub fn boundedness(&self) -> Boundedness {
        if self.s < 0.5 {
            Boundedness::Bounded
        } else if self.s == 0.5 {
            Boundedness::BoundedAtEdge
        } else {
            Boundedness::Unbounded
        }
    }
}

/// Whether `eta_s` is a bounded function; `s = 1/2` is the edge case where
/// `eta` is identically 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Boundedness {
    Bounded,
    BoundedAtEdge,
    Unbounded,
}

/// `eta(0..=n_max)` by the three-term recursion.
pub fn spherical_tree_recursion(ctx: &TreeSphericalContext, n_max: usize) -> Vec<f64> {
    let q = ctx.q as f64;
    let lam = ctx.eigenvalue();
    let mut eta = Vec::with_capacity(n_max + 1);
    eta.push(1.0);
    if n_max >= 1 {
        eta.push(lam);
    }
    for n in 1..n_max {
        let next = ((q + 1.0) * lam * eta[n] - eta[n - 1]) / q;
        eta.push(next);
    }
    eta
}

/// `ln |eta(n)|` for `n = 0..=n_max`, computed on a rescaled copy of the
/// recursion so that long runs neither underflow nor overflow.
pub fn log_abs_eta(ctx: &TreeSphericalContext, n_max: usize) -> Vec<f64> {
    const RESCALE: f64 = 1e100;
    let q = ctx.q as f64;
    let c = (q + 1.0) * ctx.eigenvalue() / q.sqrt();
    let half_ln_q = 0.5 * q.ln();
    // psi(n) = q^(n/2) eta(n) satisfies psi(n+1) = c psi(n) - psi(n-1)
    let (mut prev, mut cur) = (1.0f64, q.sqrt() * ctx.eigenvalue());
    let mut offset = 0.0f64;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0.0);
    for n in 1..=n_max {
        out.push(cur.abs().ln() + offset - n as f64 * half_ln_q);
        let next = c * cur - prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            offset += RESCALE.ln();
        }
    }
    out
}

/// `Xi(n) = q^(-n/2) (1 + n (q-1)/(q+1))`.
pub fn xi_closed_form(q: u64, n: usize) -> f64 {
    let q = q as f64;
    let n = n as f64;
    q.powf(-n / 2.0) * (1.0 + n * (q - 1.0) / (q + 1.0))
}

/// Number of tree vertices at distance `n >= 1` from a vertex,
/// `(q+1) q^(n-1)`, as a logarithm; 0 for `n = 0`.
pub fn log_sphere_volume(q: u64, n: usize) -> f64 {
    let q = q as f64;
    if n == 0 {
        0.0
    } else {
        (q + 1.0).ln() + (n as f64 - 1.0) * q.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesVerdict {
    Converging,
    Diverging,
}

/// Partial sums of `sum_n |eta(n)|^p * (q+1) q^(n-1)` and the verdict of
/// the dyadic block test on them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpMembership {
    pub p_exp: f64,
    pub verdict: SeriesVerdict,
    /// `ln S_N` for `N = 0..=n_max`.
    pub log_partial_sums: Vec<f64>,
    /// Ratio of the sum over `[n_max/2, n_max)` to the sum over
    /// `[n_max/4, n_max/2)`.
    pub block_ratio: f64,
    pub boundedness: Boundedness,
}

impl LpMembership {
    pub fn partial_sums(&self) -> Vec<f64> {
        self.log_partial_sums.iter().map(|l| l.exp()).collect()
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn log_sum(xs: &[f64]) -> f64 {
    xs.iter().fold(f64::NEG_INFINITY, |acc, &x| log_add(acc, x))
}

/// Dyadic block test: compares the term mass on `[N/2, N)` with that on
/// `[N/4, N/2)`. Geometric decay sends the ratio to 0, geometric growth to
/// infinity, and terms `~ n^a` give about `2^(a+1)`, so the series is
/// declared convergent exactly when the ratio is below 1.
pub(crate) fn block_test(log_terms: &[f64]) -> (SeriesVerdict, f64) {
    let n = log_terms.len();
    let (a, b) = (n / 4, n / 2);
    let upper = log_sum(&log_terms[b..n]);
    let lower = log_sum(&log_terms[a..b]);
    let log_ratio = upper - lower;
    let verdict = if log_ratio < 0.0 {
        SeriesVerdict::Converging
    } else {
        SeriesVerdict::Diverging
    };
    (verdict, log_ratio.exp())
}

pub fn lp_membership_test(ctx: &TreeSphericalContext, p_exp: f64, n_max: usize) -> Result<LpMembership> {
    if !(p_exp > 0.0 && p_exp.is_finite()) {
        return Err(Error::InvalidArgument(format!("exponent {p_exp} must be positive")));
    }
    if n_max < 8 {
        return Err(Error::InvalidArgument("the block test needs n_max >= 8".into()));
    }
    let log_terms: Vec<f64> = log_abs_eta(ctx, n_max)
        .iter()
        .enumerate()
        .map(|(n, l)| p_exp * l + log_sphere_volume(ctx.q, n))
        .collect();
    let mut log_partial_sums = Vec::with_capacity(n_max + 1);
    let mut acc = f64::NEG_INFINITY;
    for &t in &log_terms {
        acc = log_add(acc, t);
        log_partial_sums.push(acc);
    }
    let (verdict, block_ratio) = block_test(&log_terms);
    Ok(LpMembership {
        p_exp,
        verdict,
        log_partial_sums,
        block_ratio,
        boundedness: ctx.boundedness(),
    })
}

/// `eta_s` is in `L^p` exactly when `s < 1/2 - 1/p`: the terms behave like
/// `q^(n (1 + p (s - 1/2)))`, times `n^p` when `s = 0`.
pub fn lp_threshold(p_exp: f64) -> f64 {
    0.5 - 1.0 / p_exp
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationReport {
    /// `max_n |eta_s(n)| / (q^(s n) Xi(n))`.
    pub max_ratio: f64,
    pub argmax: usize,
}

/// Pointwise comparison of `eta_s` with `q^(s n) Xi(n)` for `n <= n_max`.
pub fn sph_bound_check(q: u64, s: f64, n_max: usize) -> Result<DominationReport> {
    let eta_s = log_abs_eta(&TreeSphericalContext::new(q, s)?, n_max);
    let xi = log_abs_eta(&TreeSphericalContext::new(q, 0.0)?, n_max);
    let ln_q = (q as f64).ln();
    let mut best = (f64::NEG_INFINITY, 0);
    for n in 0..=n_max {
        let r = (eta_s[n] - s * n as f64 * ln_q - xi[n]).exp();
        if r > best.0 {
            best = (r, n);
        }
    }
    Ok(DominationReport {
        max_ratio: best.0,
        argmax: best.1,
    })
}

/// `max_n Xi(n) q^(n (1/2 - eps))` over `n <= n_max`, with its argmax.
pub fn xi_decay_sup(q: u64, eps: f64, n_max: usize) -> (f64, usize) {
    let qf = q as f64;
    (0..=n_max)
        .map(|n| (xi_closed_form(q, n) * qf.powf(n as f64 * (0.5 - eps)), n))
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a })
}
