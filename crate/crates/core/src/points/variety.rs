use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The supported affine varieties over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarietySpec {
    /// `x_1^2 + ... + x_{d+1}^2 = 1`.
    Sphere { d: u32 },
    /// `c_1 x^2 + c_2 y^2 + c_3 z^2 = level`.
    Hyperboloid { coeffs: [i64; 3], level: i64 },
    /// `x_11 x_22 - x_12 x_21 = 1`, coordinates in row-major order.
    Sl2,
}

impl VarietySpec {
    pub fn sphere(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidVariety("sphere dimension must be >= 1".into()));
        }
        Ok(VarietySpec::Sphere { d })
    }

    pub fn hyperboloid(coeffs: [i64; 3], level: i64) -> Result<Self> {
        if coeffs.contains(&0) {
            return Err(Error::InvalidVariety(format!("degenerate form {coeffs:?}")));
        }
        if level == 0 {
            return Err(Error::InvalidVariety("hyperboloid level must be nonzero".into()));
        }
        Ok(VarietySpec::Hyperboloid { coeffs, level })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            VarietySpec::Sphere { d } => *d as usize + 1,
            VarietySpec::Hyperboloid { .. } => 3,
            VarietySpec::Sl2 => 4,
        }
    }

    /// Dimension of the variety itself.
    pub fn dim(&self) -> u32 {
        match self {
            VarietySpec::Sphere { d } => *d,
            VarietySpec::Hyperboloid { .. } => 2,
            VarietySpec::Sl2 => 3,
        }
    }

    /// Whether the set of points with a fixed denominator is finite, i.e.
    /// the defining form is definite of the same sign as the level.
    pub fn is_definite(&self) -> bool {
        match self {
            VarietySpec::Sphere { .. } => true,
            VarietySpec::Hyperboloid { coeffs, level } => coeffs.iter().all(|&c| c.signum() == level.signum()),
            VarietySpec::Sl2 => false,
        }
    }

    /// For hyperboloids: whether the quadratic form is isotropic over R.
    pub fn isotropic_over_reals(&self) -> bool {
        match self {
            VarietySpec::Hyperboloid { coeffs, .. } => coeffs.iter().any(|&c| c > 0) && coeffs.iter().any(|&c| c < 0),
            VarietySpec::Sphere { .. } => false,
            VarietySpec::Sl2 => true,
        }
    }

    /// Spheres are invariant under signed coordinate permutations, and so
    /// are the height and the sup metric.
    pub fn has_signed_permutation_symmetry(&self) -> bool {
        matches!(self, VarietySpec::Sphere { .. })
    }

    /// Exact check of the cleared equation `F(a) = level * den^2` for the
    /// point `a / den`.
    pub fn satisfies(&self, nums: &[i64], den: u64) -> bool {
        if nums.len() != self.ambient_dim() {
            return false;
        }
        let d2 = den as i128 * den as i128;
        let sq = |a: i64| a as i128 * a as i128;
        match self {
            VarietySpec::Sphere { .. } => nums.iter().map(|&a| sq(a)).sum::<i128>() == d2,
            VarietySpec::Hyperboloid { coeffs, level } => {
                coeffs.iter().zip(nums).map(|(&c, &a)| c as i128 * sq(a)).sum::<i128>() == *level as i128 * d2
            }
            VarietySpec::Sl2 => nums[0] as i128 * nums[3] as i128 - nums[1] as i128 * nums[2] as i128 == d2,
        }
    }

    /// Residual `F(x) - level` at a real point.
    pub fn residual(&self, x: &[f64]) -> f64 {
        match self {
            VarietySpec::Sphere { .. } => x.iter().map(|v| v * v).sum::<f64>() - 1.0,
            VarietySpec::Hyperboloid { coeffs, level } => {
                coeffs.iter().zip(x).map(|(&c, v)| c as f64 * v * v).sum::<f64>() - *level as f64
            }
            VarietySpec::Sl2 => x[0] * x[3] - x[1] * x[2] - 1.0,
        }
    }

    pub fn tag(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Sphere { d: 2 } => f.write_str("sphere2"),
            VarietySpec::Sphere { d: 3 } => f.write_str("sphere3"),
            VarietySpec::Sphere { d } => write!(f, "sphered:{d}"),
            VarietySpec::Hyperboloid { coeffs, level } => {
                write!(f, "hyperboloid:{},{},{},{}", coeffs[0], coeffs[1], coeffs[2], level)
            }
            VarietySpec::Sl2 => f.write_str("sl2"),
        }
    }
}

impl FromStr for VarietySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidVariety(format!("unrecognized variety tag {s:?}"));
        match s {
            "sphere2" => return VarietySpec::sphere(2),
            "sphere3" => return VarietySpec::sphere(3),
            "sl2" => return Ok(VarietySpec::Sl2),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("sphered:") {
            return VarietySpec::sphere(d.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix("hyperboloid:") {
            let parts = rest
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if parts.len() != 4 {
                return Err(bad());
            }
            return VarietySpec::hyperboloid([parts[0], parts[1], parts[2]], parts[3]);
        }
        Err(bad())
    }
}

impl Serialize for VarietySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

impl<'de> Deserialize<'de> for VarietySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
