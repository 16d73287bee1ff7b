//! Synthetic test data, wrapped Gaussian noise and the cyclic mean squared
//! error.
//!
//! Noise is drawn from ChaCha8 seeded with [`rand_chacha::ChaCha8Rng::seed_from_u64`]
//! and turned into normal deviates with the Box–Muller transform
//! (`u₁ = 1 - U`, `u₂ = U'`, both outputs of each pair used in order), so a
//! given seed produces the same noise on every platform.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{geodesic_distance_value, wrap_value};
use crate::error::{Error, Result};
use crate::phase::{PhaseGrid, PhaseImage, PhaseSignal};

/// Ground-truth function of the signal benchmark on `[0, 1]`, before the
/// final wrap.
pub fn signal_profile(x: f64) -> f64 {
    if x <= 0.25 {
        -24.0 * PI * x * x + 0.75 * PI
    } else if x <= 0.375 {
        4.0 * PI * x - 0.25 * PI
    } else if x <= 0.5 {
        -PI * x - 0.375 * PI
    } else if x <= 0.875 {
        // stairs on ((3j+16)/32, (3j+19)/32], j = 0..=3
        let j = ((32.0 * x - 16.0) / 3.0).ceil() - 1.0;
        let j = j.clamp(0.0, 3.0);
        -(j + 7.0) / 8.0 * PI
    } else if x < 1.0 {
        1.5 * PI * (-35.0 / 7.0 - 1.0 / (1.0 - x)).exp() - 0.75 * PI
    } else {
        -0.75 * PI
    }
}

/// Samples the benchmark signal at `x = i / (n - 1)`, `i = 0..n`.
pub fn synth_signal_1d(n: usize) -> Result<PhaseSignal> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 samples, got {n}")));
    }
    let step = 1.0 / (n - 1) as f64;
    PhaseSignal::new((0..n).map(|i| signal_profile(i as f64 * step)).collect())
}

/// Geometry of the synthetic surface on `[0, 1]²`; `u` runs left to right,
/// `v` top to bottom.
pub mod surface {
    use super::*;

    pub const PLATE_HEIGHT: f64 = TAU;

    pub const STAIR_COUNT: usize = 5;
    pub const STAIR_HEIGHT: f64 = TAU / 5.0;
    /// Direction in which the stairs climb.
    pub const STAIR_ANGLE: f64 = FRAC_PI_3;

    pub const ELLIPSE_CENTER: (f64, f64) = (0.55, 0.45);
    pub const ELLIPSE_SEMI_AXES: (f64, f64) = (0.35, 0.15);
    pub const ELLIPSE_ANGLE: f64 = FRAC_PI_6;

    pub const DENT_CENTER: (f64, f64) = (0.75, 0.75);
    pub const DENT_RADIUS: f64 = 9.0 / 50.0;
    pub const DENT_DEPTH: f64 = 2.0 * TAU;

    /// Unit vector at `angle` counter-clockwise from the `u` axis, expressed
    /// in `(u, v)` with `v` pointing down.
    fn direction(angle: f64) -> (f64, f64) {
        (angle.cos(), -angle.sin())
    }

    /// Unwrapped height at `(u, v)`.
    pub fn height(u: f64, v: f64) -> f64 {
        let mut z = if u > v { PLATE_HEIGHT } else { -PLATE_HEIGHT };

        if u < 0.5 && v < 0.5 {
            let (du, dv) = direction(STAIR_ANGLE);
            // projection range over the quadrant corners
            let corners = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)];
            let proj = |p: (f64, f64)| p.0 * du + p.1 * dv;
            let lo = corners.iter().map(|&c| proj(c)).fold(f64::INFINITY, f64::min);
            let hi = corners.iter().map(|&c| proj(c)).fold(f64::NEG_INFINITY, f64::max);
            let t = (proj((u, v)) - lo) / (hi - lo);
            let k = ((t * STAIR_COUNT as f64).floor() as usize).min(STAIR_COUNT - 1);
            z = -PLATE_HEIGHT + k as f64 * STAIR_HEIGHT;
        }

        let (eu, ev) = direction(ELLIPSE_ANGLE);
        let (pu, pv) = (u - ELLIPSE_CENTER.0, v - ELLIPSE_CENTER.1);
        let s = pu * eu + pv * ev;
        let t = -pu * ev + pv * eu;
        let (a, b) = ELLIPSE_SEMI_AXES;
        if (s / a).powi(2) + (t / b).powi(2) <= 1.0 {
            z = PLATE_HEIGHT * s / a;
        }

        let r2 = (u - DENT_CENTER.0).powi(2) + (v - DENT_CENTER.1).powi(2);
        let rr = DENT_RADIUS * DENT_RADIUS;
        if r2 < rr {
            z -= DENT_DEPTH * (1.0 - r2 / rr).sqrt();
        }
        z
    }
}

/// The synthetic surface in both unwrapped and wrapped form.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSurface {
    pub unwrapped: Vec<f64>,
    pub wrapped: PhaseImage,
}

/// Samples the synthetic surface on an `n × m` grid covering `[0, 1]²`.
pub fn synth_surface_2d(n: usize, m: usize) -> Result<SyntheticSurface> {
    if n < 2 || m < 2 {
        return Err(Error::invalid(format!("surface needs at least 2x2 samples, got {n}x{m}")));
    }
    let mut unwrapped = Vec::with_capacity(n * m);
    for i in 0..n {
        let v = i as f64 / (n - 1) as f64;
        for j in 0..m {
            let u = j as f64 / (m - 1) as f64;
            unwrapped.push(surface::height(u, v));
        }
    }
    let wrapped = PhaseImage::new(n, m, unwrapped.clone())?;
    Ok(SyntheticSurface { unwrapped, wrapped })
}

/// Wrapped Gaussian noise: `N(0, σ²)` added before wrapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Self {
        NoiseSpec { sigma, seed }
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    pub fn apply_signal(&self, x: &PhaseSignal) -> Result<PhaseSignal> {
        PhaseSignal::new(add_wrapped_gaussian(x.as_slice(), self)?)
    }

    pub fn apply_image(&self, x: &PhaseImage) -> Result<PhaseImage> {
        PhaseImage::new(x.rows(), x.cols(), add_wrapped_gaussian(x.as_slice(), self)?)
    }
}

/// `n` standard normal deviates from the documented generator.
pub fn standard_normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n + 1);
    while out.len() < n {
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        out.push(r * c);
        out.push(r * s);
    }
    out.truncate(n);
    out
}

/// Adds wrapped Gaussian noise to every entry and wraps the result.
pub fn add_wrapped_gaussian(x: &[f64], spec: &NoiseSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if spec.sigma == 0.0 {
        return Ok(x.iter().map(|&v| wrap_value(v)).collect());
    }
    let noise = standard_normals(spec.seed, x.len());
    Ok(x.iter()
        .zip(noise)
        .map(|(&v, z)| wrap_value(v + spec.sigma * z))
        .collect())
}

/// Cyclic mean squared error: mean of squared geodesic distances.
pub fn cmse<G: PhaseGrid + ?Sized>(a: &G, b: &G) -> Result<f64> {
    if a.grid_shape() != b.grid_shape() {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            a.grid_shape(),
            b.grid_shape()
        )));
    }
    let n = a.values().len();
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&p, &q)| geodesic_distance_value(p, q).powi(2))
        .sum();
    Ok(sum / n as f64)
}
