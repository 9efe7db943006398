//! The Harish-Chandra function of `SL_2(R)`.
//!
//! With `K = SO(2)` and `a_t = diag(e^t, e^-t)`,
//!
//! ```text
//! Xi(t) = (1/2pi) * integral over [0, 2pi) of (e^(2t) cos^2 u + e^(-2t) sin^2 u)^(-1/2) du.
//! ```
//!
//! The integrand is smooth and periodic, so the trapezoid rule converges
//! geometrically; it is refined by doubling until two successive values
//! agree to `1e-8`. For large `t` the integrand concentrates in a window
//! of width about `e^(-2t)` and many nodes are needed.

use serde::Serialize;

use crate::error::{Error, Result};

pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
pub const MAX_NODES: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealSphericalContext {
    pub t: f64,
    /// Starting number of nodes; doubled until stable.
    pub quadrature_nodes: usize,
}

impl RealSphericalContext {
    pub fn new(t: f64) -> Self {
        RealSphericalContext {
            t,
            quadrature_nodes: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiValue {
    pub value: f64,
    pub nodes: usize,
    /// Change from the previous refinement.
    pub delta: f64,
}

fn integrand(t: f64, u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    ((2.0 * t).exp() * c * c + (-2.0 * t).exp() * s * s).powf(-0.5)
}

/// Trapezoid sum over `nodes` equispaced points, without the `1/nodes`.
fn trapezoid_sum(t: f64, nodes: usize, offset: f64) -> f64 {
    let h = std::f64::consts::TAU / nodes as f64;
    (0..nodes).map(|j| integrand(t, (j as f64 + offset) * h)).sum()
}

pub fn xi_real(ctx: &RealSphericalContext) -> Result<XiValue> {
    xi_real_with(ctx, QUADRATURE_TOLERANCE, MAX_NODES)
}

/// [`xi_real`] with an explicit absolute tolerance and node budget.
pub fn xi_real_with(ctx: &RealSphericalContext, tolerance: f64, max_nodes: usize) -> Result<XiValue> {
    let t = ctx.t;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Cartan radius t = {t} must be finite and >= 0"
        )));
    }
    if ctx.quadrature_nodes < 16 {
        return Err(Error::InvalidArgument("quadrature needs at least 16 nodes".into()));
    }
    let mut nodes = ctx.quadrature_nodes;
    let mut sum = trapezoid_sum(t, nodes, 0.0);
    let mut value = sum / nodes as f64;
    loop {
        // reuse the old nodes; add the midpoints
        sum += trapezoid_sum(t, nodes, 0.5);
        nodes *= 2;
        let refined = sum / nodes as f64;
        let delta = (refined - value).abs();
        value = refined;
        if delta <= tolerance {
            return Ok(XiValue { value, nodes, delta });
        }
        if nodes >= max_nodes {
            return Err(Error::QuadratureNonConvergence { t, delta, nodes });
        }
    }
}

/// `(1 + 2t) e^(-t)`, an upper envelope for `Xi`.
pub fn xi_envelope(t: f64) -> f64 {
    (1.0 + 2.0 * t) * (-t).exp()
}
