use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::ExperimentReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// `report.json`.
    Json,
    /// `profiles.csv`, one row per target and eps.
    Csv,
    /// Two-column log-log `plot_*.dat` series.
    Plotdata,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, report)?;
    writeln!(w).map_err(|e| Error::io(path, e))?;
    finish(w, path)
}

fn write_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "target_id,eps,omega_height,censored").map_err(io)?;
    for t in &report.targets {
        for (i, eps) in report.omega.epsilons.iter().enumerate() {
            match t.omegas.get(i) {
                Some(h) => writeln!(w, "{},{eps},{h},0", t.id),
                None => writeln!(w, "{},{eps},NA,1", t.id),
            }
            .map_err(io)?;
        }
    }
    finish(w, path)
}

fn write_plots(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let counting = dir.join("plot_counting.dat");
    let mut w = create(&counting)?;
    let io = |e| Error::io(&counting, e);
    writeln!(w, "# ln(height) ln(cumulative count)").map_err(io)?;
    for c in report.census.counts.iter().filter(|c| c.cumulative > 0) {
        writeln!(w, "{} {}", (c.height as f64).ln(), (c.cumulative as f64).ln()).map_err(io)?;
    }
    finish(w, &counting)?;

    let omega = dir.join("plot_omega.dat");
    let mut w = create(&omega)?;
    let io = |e| Error::io(&omega, e);
    writeln!(w, "# ln(1/eps) ln(median omega)").map_err(io)?;
    for p in &report.omega.pooled {
        if let Some(h) = p.median_omega {
            writeln!(w, "{} {}", -p.eps.ln(), (h as f64).ln()).map_err(io)?;
        }
    }
    finish(w, &omega)?;

    let covering = dir.join("plot_covering.dat");
    let mut w = create(&covering)?;
    let io = |e| Error::io(&covering, e);
    writeln!(w, "# ln(height cap) ln(covering radius)").map_err(io)?;
    for c in report.covering.curve.iter().filter(|c| c.radius > 0.0) {
        writeln!(w, "{} {}", (c.height_cap as f64).ln(), c.radius.ln()).map_err(io)?;
    }
    finish(w, &covering)?;
    Ok(vec![counting, omega, covering])
}

/// Writes the requested artifacts into `config.output_dir`, creating it if
/// needed, and returns the written paths.
pub fn emit_report(report: &ExperimentReport, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let dir = &report.config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Json => {
                let path = dir.join("report.json");
                write_json(report, &path)?;
                written.push(path);
            }
            Format::Csv => {
                let path = dir.join("profiles.csv");
                write_csv(report, &path)?;
                written.push(path);
            }
            Format::Plotdata => written.extend(write_plots(report, dir)?),
        }
    }
    Ok(written)
}

pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
