//! Covering radius of the points of height <= 5^k on the 2-sphere, estimated
//! on random sample points, and its decay rate in the height.
//!
//! ```bash
//! cargo run --release --example covering
//! ```

use dioapprox::approx::{build_default_index, covering_radius, fit_power_law, sample_targets, DEFAULT_TARGET_BOX};
use dioapprox::arith::Prime;
use dioapprox::points::{enumerate_points, VarietySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let variety = VarietySpec::sphere(2)?;
    let census = enumerate_points(&variety, Prime::new(5)?, 6)?;
    let index = build_default_index(&census)?;
    let sample = sample_targets(&variety, 500, 1, DEFAULT_TARGET_BOX);

    let (mut hs, mut rs) = (Vec::new(), Vec::new());
    println!("{:>8} {:>12}", "cap", "radius");
    for k in 1..=6 {
        let cap = 5u64.pow(k);
        let r = covering_radius(&index, cap, &sample)?;
        println!("{cap:>8} {r:>12.5}");
        hs.push(cap as f64);
        rs.push(r);
    }
    let fit = fit_power_law(&hs, &rs, 0..hs.len())?;
    println!(
        "radius ~ H^{:.3}, so every point is 1/H^{:.2}-close to a point of height H",
        fit.slope,
        -1.0 / fit.slope
    );
    Ok(())
}
