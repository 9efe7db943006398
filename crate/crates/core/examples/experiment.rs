//! Run an experiment config end to end and print its verdicts.
//!
//! ```bash
//! cargo run --release --example experiment -- crates/core/configs/s2_quick.json
//! ```

use std::path::PathBuf;

use dioapprox::harness::{emit_report, run_experiment, ExperimentConfig, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/s2_quick.json"));
    let config = ExperimentConfig::from_file(&path)?;
    let report = run_experiment(&config)?;

    let c = &report.census;
    println!(
        "{} points, counting slope {:?}",
        c.total_points,
        c.counting_fit.as_ref().map(|f| f.slope)
    );
    let o = &report.omega;
    println!(
        "omega slopes: median {:?}, IQR {:?}, {:.0}% in [{}, {}]",
        o.median_slope,
        o.iqr,
        100.0 * o.fraction_in_bracket,
        o.bracket.0,
        o.bracket.1
    );
    for v in &report.verdicts {
        println!(
            "{:<28} {:<5} measured {:?}, expected {}",
            v.rule,
            if v.pass { "pass" } else { "FAIL" },
            v.measured,
            v.expected
        );
    }
    for f in emit_report(&report, &[Format::Json, Format::Csv, Format::Plotdata])? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
