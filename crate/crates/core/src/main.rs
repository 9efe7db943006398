use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dioapprox::approx::{build_default_index, omega_profile, write_profiles_csv};
use dioapprox::arith::Prime;
use dioapprox::harness::parse::{parse_eps_spec, parse_keyed, parse_target_spec};
use dioapprox::harness::{
    compare_with_prediction, emit_report, load_report, run_experiment, ExperimentConfig, Format, Verdict,
};
use dioapprox::points::{
    count_by_height, enumerate_points_with, read_census_file, write_census_file, EnumerateOptions, VarietySpec,
};
use dioapprox::spectral::{
    lp_membership_test, predicted_exponents, prediction_table_json, spherical_tree_recursion, xi_closed_form, xi_real,
    RealSphericalContext, TreeSphericalContext,
};
use dioapprox::{Error, Result};

#[derive(Parser)]
#[command(
    name = "dioapprox",
    version,
    about = "Diophantine approximation experiments on quadrics and SL2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate points of height p^k, k <= max_k
    Enumerate {
        #[arg(long)]
        variety: VarietySpec,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_k: u32,
        /// Numerator bound for indefinite varieties (default p^max_k)
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximation profiles of targets against a census file, as CSV
    Omega {
        #[arg(long)]
        census: PathBuf,
        /// `random:n,seed`, a CSV file, or rows like `3/5,4/5,0;0.1,0.2,0.97`
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "2^-1..2^-12")]
        eps: String,
    },
    /// Predicted exponents of a built-in example, as JSON
    Predict {
        #[arg(long, required_unless_present = "all")]
        example: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Spherical functions on a regular tree or on SL2(R)
    Spectral {
        /// `q=<q> s=<s>`
        #[arg(long, num_args = 2, value_names = ["q=Q", "s=S"], conflicts_with = "real")]
        tree: Option<Vec<String>>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, requires = "t")]
        real: bool,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Run an experiment config and write its artifacts
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-check the verdicts of a saved report
    Compare {
        #[arg(long)]
        report: PathBuf,
    },
}

fn print_verdicts(verdicts: &[Verdict]) -> bool {
    for v in verdicts {
        let measured = v.measured.map_or("none".to_string(), |m| format!("{m:.4}"));
        println!(
            "{} {}: measured {measured}, expected {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.rule,
            v.expected
        );
    }
    verdicts.iter().all(|v| v.pass)
}

fn io_err(e: io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate {
            variety,
            p,
            max_k,
            cap,
            out,
        } => {
            let opts = EnumerateOptions {
                cap,
                ..Default::default()
            };
            let census = enumerate_points_with(&variety, Prime::new(p)?, max_k, &opts)?;
            println!("# {variety} p={p} max_k={max_k}");
            println!("k\theight\tbucket\tcumulative");
            for (k, (h, a)) in count_by_height(&census).into_iter().enumerate() {
                println!("{k}\t{h}\t{}\t{a}", census.bucket_len(k as u32));
            }
            for w in census.warnings() {
                eprintln!("warning: {w}");
            }
            if let Some(path) = out {
                write_census_file(&census, &path)?;
            }
            Ok(true)
        }
        Command::Omega { census, target, eps } => {
            let census = read_census_file(&census)?;
            let index = build_default_index(&census)?;
            let grid = parse_eps_spec(&eps)?;
            let profiles = parse_target_spec(&target, &index)?
                .iter()
                .map(|t| omega_profile(&index, t, &grid))
                .collect::<Result<Vec<_>>>()?;
            let stdout = io::stdout();
            write_profiles_csv(&profiles, stdout.lock()).map_err(io_err)?;
            Ok(true)
        }
        Command::Predict { example, all } => {
            let value = if all {
                prediction_table_json()
            } else {
                serde_json::to_value(predicted_exponents(example.as_deref().unwrap_or_default())?)?
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
            Ok(true)
        }
        Command::Spectral { tree, nmax, real, t } => {
            if real {
                let t = t.expect("clap enforces --t");
                let v = xi_real(&RealSphericalContext::new(t))?;
                println!("t\txi\tnodes\tdelta");
                println!("{t}\t{}\t{}\t{:e}", v.value, v.nodes, v.delta);
                return Ok(true);
            }
            let Some(kv) = tree else {
                return Err(Error::InvalidArgument(
                    "spectral needs --tree q=<q> s=<s> or --real --t <t>".into(),
                ));
            };
            let ctx = TreeSphericalContext::new(parse_keyed(&kv[0], "q")?, parse_keyed(&kv[1], "s")?)?;
            let l2 = lp_membership_test(&ctx, 2.0, nmax.max(64))?;
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "# q={} s={} eigenvalue={} boundedness={:?} L2={:?}",
                ctx.q(),
                ctx.s(),
                ctx.eigenvalue(),
                ctx.boundedness(),
                l2.verdict
            )
            .map_err(io_err)?;
            writeln!(out, "n\teta\txi").map_err(io_err)?;
            for (n, eta) in spherical_tree_recursion(&ctx, nmax).into_iter().enumerate() {
                writeln!(out, "{n}\t{eta}\t{}", xi_closed_form(ctx.q(), n)).map_err(io_err)?;
            }
            Ok(true)
        }
        Command::Experiment { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            let report = run_experiment(&config)?;
            for path in emit_report(&report, &[Format::Json, Format::Csv, Format::Plotdata])? {
                eprintln!("wrote {}", path.display());
            }
            Ok(print_verdicts(&report.verdicts))
        }
        Command::Compare { report } => {
            let report = load_report(&report)?;
            Ok(print_verdicts(&compare_with_prediction(&report)))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
