//! Text forms accepted on the command line.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::approx::{sample_targets, SpatialIndex, Target, DEFAULT_TARGET_BOX};
use crate::arith::RationalVector;
use crate::error::{Error, Result};

fn bad(what: &str, s: &str) -> Error {
    Error::InvalidArgument(format!("cannot parse {what} {s:?}"))
}

/// Parses an eps grid: `B^-a..B^-b` (with integer or decimal `B`) or an
/// explicit comma-separated list.
pub fn parse_eps_spec(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let power = |t: &str| -> Result<(f64, i32)> {
            let (b, e) = t.trim().split_once('^').ok_or_else(|| bad("eps range", s))?;
            let b: f64 = b.trim().parse().map_err(|_| bad("eps base", s))?;
            let e: i32 = e.trim().parse().map_err(|_| bad("eps exponent", s))?;
            Ok((b, e))
        };
        let ((b1, e1), (b2, e2)) = (power(lo)?, power(hi)?);
        if b1 != b2 || !(b1 > 1.0) || e1 >= 0 || e2 > e1 {
            return Err(bad("eps range", s));
        }
        return Ok((e2..=e1).rev().map(|e| b1.powi(e)).collect());
    }
    let grid: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad("eps value", t)))
        .collect::<Result<_>>()?;
    if grid.is_empty() || grid.iter().any(|e| !(*e > 0.0)) || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad("eps grid (positive, strictly decreasing)", s));
    }
    Ok(grid)
}

/// One coordinate row. Rows made only of integers and fractions `a/b`
/// become exact targets; anything else is read as `f64`.
pub fn parse_target_row(row: &str, index: &SpatialIndex) -> Result<Target> {
    let cells: Vec<&str> = row.split(',').map(str::trim).collect();
    let dim = index.variety().ambient_dim();
    if cells.len() != dim {
        return Err(Error::DimensionMismatch {
            left: cells.len(),
            right: dim,
        });
    }
    let exact: Option<Vec<BigRational>> = cells
        .iter()
        .map(|c| {
            if c.contains('/') {
                c.parse().ok()
            } else {
                c.parse::<BigInt>().ok().map(BigRational::from_integer)
            }
        })
        .collect();
    if let Some(coords) = exact {
        return Ok(Target::Exact(RationalVector::new(coords)?));
    }
    let xs: Vec<f64> = cells
        .iter()
        .map(|c| c.parse::<f64>().map_err(|_| bad("coordinate", c)))
        .collect::<Result<_>>()?;
    index.target_from_f64s(&xs)
}

/// Resolves `random:n,seed`, a CSV file of coordinate rows, or inline rows
/// separated by `;`.
pub fn parse_target_spec(spec: &str, index: &SpatialIndex) -> Result<Vec<Target>> {
    if let Some(rest) = spec.strip_prefix("random:") {
        let (n, seed) = rest.split_once(',').ok_or_else(|| bad("random target spec", spec))?;
        let n: usize = n.trim().parse().map_err(|_| bad("target count", spec))?;
        let seed: u64 = seed.trim().parse().map_err(|_| bad("seed", spec))?;
        return sample_targets(index.variety(), n, seed, DEFAULT_TARGET_BOX)
            .iter()
            .map(|x| index.target_from_f64s(x))
            .collect();
    }
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?
    } else {
        spec.replace(';', "\n")
    };
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_target_row(l, index))
        .collect()
}

/// `key=value` with the expected key.
pub fn parse_keyed<T: std::str::FromStr>(s: &str, key: &str) -> Result<T> {
    let (k, v) = s.split_once('=').ok_or_else(|| bad(key, s))?;
    if k.trim() != key {
        return Err(bad(key, s));
    }
    v.trim().parse().map_err(|_| bad(key, s))
}
