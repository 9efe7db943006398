//! Fixed-precision dyadic real vectors.
//!
//! A real target is stored as integers `m_i` with value `m_i / 2^precision`.
//! Distances to rational points are then exact rationals; only the final
//! conversion to `f64` rounds, and it rounds up.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::{Rational, RationalVector};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealVector {
    mantissas: Vec<BigInt>,
    precision: u32,
}

fn round_to_scale(r: &Rational, scale: &BigInt) -> BigInt {
    let scaled = r * scale;
    // round half away from zero
    let twice = scaled.numer() * 2 + scaled.denom() * scaled.numer().signum();
    twice / (scaled.denom() * 2)
}

impl RealVector {
    pub fn from_f64s(coords: &[f64], precision: u32) -> Result<Self> {
        let rationals = coords
            .iter()
            .map(|&c| {
                BigRational::from_f64(c).ok_or_else(|| Error::InvalidArgument(format!("non-finite coordinate {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(&rationals, precision)
    }

    pub fn from_rationals(coords: &[Rational], precision: u32) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "real vector needs at least one coordinate".into(),
            ));
        }
        let scale = BigInt::one() << precision;
        Ok(RealVector {
            mantissas: coords.iter().map(|r| round_to_scale(r, &scale)).collect(),
            precision,
        })
    }

    pub fn dim(&self) -> usize {
        self.mantissas.len()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coord(&self, i: usize) -> Rational {
        Rational::new(self.mantissas[i].clone(), BigInt::one() << self.precision)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.coord(i).to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Absolute values sorted in decreasing order: the representative of the
    /// orbit under signed coordinate permutations.
    pub fn sorted_abs(&self) -> RealVector {
        let mut m: Vec<BigInt> = self.mantissas.iter().map(|x| x.abs()).collect();
        m.sort_by(|a, b| b.cmp(a));
        RealVector {
            mantissas: m,
            precision: self.precision,
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: n,
            });
        }
        Ok(())
    }

    /// Exact `max_i |x_i - a_i/den|`.
    pub fn distance_to_integers(&self, numerators: &[i64], den: u64) -> Result<Rational> {
        self.check_dim(numerators.len())?;
        let scale = BigInt::one() << self.precision;
        let den_big = BigInt::from(den);
        let mut best = BigInt::zero();
        for (m, &a) in self.mantissas.iter().zip(numerators) {
            let d = (m * &den_big - BigInt::from(a) * &scale).abs();
            if d > best {
                best = d;
            }
        }
        Ok(Rational::new(best, den_big * scale))
    }

    /// Exact test `max_i |x_i - a_i/den| <= eps`.
    pub fn within_integers(&self, numerators: &[i64], den: u64, eps: &Rational) -> bool {
        debug_assert_eq!(self.dim(), numerators.len());
        let scale = BigInt::one() << self.precision;
        let den_big = BigInt::from(den);
        let bound = eps.numer() * &den_big * &scale;
        self.mantissas.iter().zip(numerators).all(|(m, &a)| {
            let d = (m * &den_big - BigInt::from(a) * &scale).abs();
            d * eps.denom() <= bound
        })
    }

    /// Exact archimedean sup distance to a rational point.
    pub fn distance_to(&self, y: &RationalVector) -> Result<Rational> {
        self.check_dim(y.dim())?;
        let mut best = Rational::zero();
        for (i, c) in y.coords().iter().enumerate() {
            let d = (self.coord(i) - c).abs();
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }
}

/// Smallest `f64` that is `>= r`.
pub fn rational_to_f64_up(r: &Rational) -> f64 {
    let approx = r.to_f64().unwrap_or(f64::INFINITY);
    if !approx.is_finite() {
        return approx;
    }
    match BigRational::from_f64(approx) {
        Some(exact) if &exact < r => approx.next_up(),
        _ => approx,
    }
}
