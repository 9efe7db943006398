//! Approximation profile of one target on the 2-sphere: for each eps, the
//! smallest height of a point of Z[1/5]^3 on the sphere within eps.
//!
//! ```bash
//! cargo run --release --example omega_profile -- 0.3 0.5
//! ```

use dioapprox::approx::{build_default_index, eps_grid, fit_profile, omega_profile};
use dioapprox::arith::Prime;
use dioapprox::points::{enumerate_points, VarietySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    // spherical coordinates (theta, phi) of the target
    let (theta, phi) = (
        args.first().copied().unwrap_or(0.7),
        args.get(1).copied().unwrap_or(0.4),
    );
    let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];

    let census = enumerate_points(&VarietySpec::sphere(2)?, Prime::new(5)?, 6)?;
    let index = build_default_index(&census)?;
    let target = index.target_from_f64s(&x)?;
    let profile = omega_profile(&index, &target, &eps_grid(0.5, 1, 12))?;

    println!("target {x:?}");
    println!("{:>12} {:>10}", "eps", "omega");
    for (i, eps) in profile.epsilons.iter().enumerate() {
        match profile.omega_at(i) {
            Some(h) => println!("{eps:>12.3e} {h:>10}"),
            None => println!("{eps:>12.3e} {:>10}", "> 5^6"),
        }
    }
    match fit_profile(&profile) {
        Ok(fit) => println!(
            "omega ~ eps^-{:.3} (+- {:.3}) over {} points",
            fit.slope, fit.slope_stderr, fit.n
        ),
        Err(e) => println!("no fit: {e}"),
    }
    Ok(())
}
