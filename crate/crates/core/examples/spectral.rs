//! Spherical functions of the (q+1)-regular tree and of SL2(R).
//!
//! ```bash
//! cargo run --example spectral -- 3
//! ```

use dioapprox::spectral::{
    lp_membership_test, lp_threshold, sph_bound_check, spherical_tree_recursion, xi_closed_form, xi_envelope, xi_real,
    RealSphericalContext, TreeSphericalContext,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);

    let xi = TreeSphericalContext::new(q, 0.0)?;
    let eta = spherical_tree_recursion(&xi, 10);
    println!("q = {q}: Xi by recursion and in closed form");
    for (n, v) in eta.iter().enumerate() {
        println!("  n={n:<3} {v:.15} {:.15}", xi_closed_form(q, n));
    }

    println!("L^p membership of eta_s, predicted iff s < 1/2 - 1/p");
    for p in [2.0, 2.5, 4.0] {
        for s in [0.0, 0.1, 0.2, 0.3] {
            let m = lp_membership_test(&TreeSphericalContext::new(q, s)?, p, 2048)?;
            println!(
                "  p={p:<4} s={s:<4} threshold {:.3}  {:?} (block ratio {:.3e})",
                lp_threshold(p),
                m.verdict,
                m.block_ratio
            );
        }
    }

    for s in [0.1, 0.3, 0.45] {
        let d = sph_bound_check(q, s, 50)?;
        println!(
            "max eta_s(n) / (q^(sn) Xi(n)) for s={s}: {:.12} at n={}",
            d.max_ratio, d.argmax
        );
    }

    println!("Xi on SL2(R) against (1 + 2t) e^-t");
    for t in [0.0, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0] {
        // the integrand peaks in a window of width ~e^(-2t)
        match xi_real(&RealSphericalContext::new(t)) {
            Ok(v) => println!(
                "  t={t:<4} {:.10} <= {:.10}  ({} nodes)",
                v.value,
                xi_envelope(t),
                v.nodes
            ),
            Err(e) => println!("  t={t:<4} {e}"),
        }
    }
    Ok(())
}
