//! Reproducible random targets on a variety.
//!
//! The generator is xoshiro256++ seeded from a `u64` through SplitMix64, so
//! a seed pins down every target on every platform. Uniform doubles take
//! the top 53 bits; Gaussians come from the Box–Muller cosine branch.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::points::VarietySpec;

/// Half-width of the coordinate box for targets on indefinite varieties.
pub const DEFAULT_TARGET_BOX: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct TargetSampler {
    rng: Xoshiro256PlusPlus,
}

impl TargetSampler {
    pub fn new(seed: u64) -> Self {
        TargetSampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn symmetric(&mut self, half_width: f64) -> f64 {
        (2.0 * self.uniform() - 1.0) * half_width
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform point on the unit sphere in `R^n`.
    pub fn sphere_point(&mut self, n: usize) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..n).map(|_| self.gaussian()).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return g.into_iter().map(|v| v / norm).collect();
            }
        }
    }

    /// A point of the variety. Spheres are sampled uniformly; a hyperboloid
    /// by its first two coordinates uniform in `[-box, box]^2` (rejecting
    /// where no real third coordinate exists, sign of the third coordinate
    /// random); `SL_2` by `x_11, x_12, x_21` uniform in the box, keeping
    /// samples whose solved `x_22` also lies in it.
    pub fn sample(&mut self, variety: &VarietySpec, half_width: f64) -> Vec<f64> {
        match variety {
            VarietySpec::Sphere { .. } => self.sphere_point(variety.ambient_dim()),
            VarietySpec::Hyperboloid { coeffs, level } => loop {
                let x = self.symmetric(half_width);
                let y = self.symmetric(half_width);
                let rest = *level as f64 - coeffs[0] as f64 * x * x - coeffs[1] as f64 * y * y;
                let z2 = rest / coeffs[2] as f64;
                if z2 >= 0.0 {
                    let z = z2.sqrt();
                    let z = if self.uniform() < 0.5 { -z } else { z };
                    return vec![x, y, z];
                }
            },
            VarietySpec::Sl2 => loop {
                let a = self.symmetric(half_width);
                let b = self.symmetric(half_width);
                let c = self.symmetric(half_width);
                if a.abs() < 1e-9 {
                    continue;
                }
                let d = (1.0 + b * c) / a;
                if d.abs() <= half_width {
                    return vec![a, b, c, d];
                }
            },
        }
    }
}

/// `n` targets from a fresh sampler.
pub fn sample_targets(variety: &VarietySpec, n: usize, seed: u64, half_width: f64) -> Vec<Vec<f64>> {
    let mut s = TargetSampler::new(seed);
    (0..n).map(|_| s.sample(variety, half_width)).collect()
}
