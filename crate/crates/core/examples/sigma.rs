//! Density exponent of a set of places, and convergence of its Euler product.
//!
//! ```bash
//! cargo run --release --example sigma
//! ```

use dioapprox::spectral::{euler_tail_check, sigma_exponent, PlaceList};

fn sieve(n: usize) -> Vec<u64> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            (i * i..=n).step_by(i).for_each(|j| composite[j] = true);
        }
    }
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geometric: Vec<u64> = (1..=40).map(|n| 1u64 << n).collect();
    let primes = sieve(1 << 20);
    let grid: Vec<f64> = (4..=20).map(|e| 2f64.powi(e) * 1.5).collect();

    for (name, qs) in [("2^n, n <= 40", &geometric), ("primes < 2^20", &primes)] {
        let est = sigma_exponent(qs, &grid)?;
        println!("{name}: sigma ~ {:.4} ({:?})", est.estimate, est.trend);
        for s in [0.25, 0.5, 1.0, 1.5, 2.0] {
            let tail = euler_tail_check(qs, s, PlaceList::Truncated)?;
            println!(
                "  s={s:<5} {:?}  block ratio {:.3e}",
                tail.verdict,
                tail.block_ratio.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
