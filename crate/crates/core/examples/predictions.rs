//! The table of predicted exponents, as JSON, plus the lower bound helper.
//!
//! ```bash
//! cargo run --example predictions
//! ```

use dioapprox::spectral::{builtin_example_ids, predicted_exponents, prediction_table_json, qv_lower_bound};
use num_rational::Rational64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<22} {:>6} {:>8} {:>8} {:>8}",
        "example", "dim", "ae", "uniform", "lower"
    );
    for id in builtin_example_ids() {
        let p = predicted_exponents(&id)?;
        let lower = p.lower_exponent.map_or("-".to_string(), |l| l.to_string());
        println!(
            "{id:<22} {:>6} {:>8} {:>8} {lower:>8}",
            p.dim_x,
            p.ae_exponent.to_string(),
            p.uniform_exponent.to_string()
        );
    }

    // SL_n acting on a space with counting exponent n
    for n in 2..=5i64 {
        let lb = qv_lower_bound(Rational64::from_integer(n * n - n), Rational64::from_integer(n))?;
        println!("q_v(SL_{n}) >= {lb}");
    }
    for d in [4i64, 6, 8] {
        let lb = qv_lower_bound(Rational64::new(d * d, 4), Rational64::from_integer(d - 1))?;
        println!("q_v(SO_{}) >= {lb}", d + 1);
    }

    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&prediction_table_json())?);
    }
    Ok(())
}
