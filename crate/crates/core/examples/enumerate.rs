//! Enumerate S-integral points on a sphere and print the height census.
//!
//! ```bash
//! cargo run --release --example enumerate -- sphere2 5 6
//! ```

use std::time::Instant;

use dioapprox::arith::Prime;
use dioapprox::points::{count_by_height, enumerate_points, VarietySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let variety: VarietySpec = args.first().map(String::as_str).unwrap_or("sphere2").parse()?;
    let p = Prime::new(args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(5))?;
    let max_k: u32 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(5);

    let start = Instant::now();
    let census = enumerate_points(&variety, p, max_k)?;
    println!(
        "{variety} over Z[1/{p}], k <= {max_k}: {} points ({} stored) in {:.2?}",
        census.total_points(),
        census.stored_len(),
        start.elapsed()
    );
    for w in census.warnings() {
        println!("warning: {w}");
    }
    println!("{:>12} {:>14} {:>14}", "h = p^k", "bucket k", "A(h)");
    for (k, (h, a)) in count_by_height(&census).into_iter().enumerate() {
        println!("{h:>12} {:>14} {a:>14}", census.bucket_len(k as u32));
    }
    Ok(())
}
