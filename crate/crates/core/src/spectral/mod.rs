//! Rank-one spherical functions, density exponents of place sets and the
//! table of predicted approximation exponents.

mod predict;
mod real;
mod sigma;
mod tree;

pub use predict::{
    builtin_example_ids, parse_ratio, predicted_exponents, prediction_table_json, qv_lower_bound, ratio_string,
    ExponentPrediction,
};
pub use real::{xi_envelope, xi_real, xi_real_with, RealSphericalContext, XiValue, MAX_NODES, QUADRATURE_TOLERANCE};
pub use sigma::{
    euler_tail_check, q_s_combine, q_s_combine_f64, sigma_exponent, EulerTail, PlaceList, SigmaEstimate, Trend,
    TREND_FACTOR,
};
pub use tree::{
    log_abs_eta, log_sphere_volume, lp_membership_test, lp_threshold, sph_bound_check, spherical_tree_recursion,
    xi_closed_form, xi_decay_sup, Boundedness, DominationReport, LpMembership, SeriesVerdict, TreeSphericalContext,
};
