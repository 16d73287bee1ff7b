//! Closed-form proximal mappings.
//!
//! On `ℝ^d` the mappings of `x ↦ λ|⟨x, w⟩ - a|` and `x ↦ λ(⟨x, w⟩ - a)²`
//! reduce to a shrinkage along `w`. On the circle the same shrinkage applies
//! to the wrapped difference `(⟨f, w⟩)_{2π}` for `w ∈ {b₁, b₂, b₁,₁}`, and
//! the squared-distance data term interpolates along the shorter arc.
//!
//! Objectives minimised here:
//!
//! * `p = 1`: `½ Σ d(f_j, x_j)² + λ d(x; w)`
//! * `p = 2`: `Σ d(f_j, x_j)² + λ d(x; w)²`
//! * data term: `Σ d(g_j, x_j)² + λ Σ d(f_j, x_j)²`

use std::f64::consts::{PI, TAU};

use crate::cyclic::{
    dot, fold_abs_difference, geodesic_distance_value, sgn, wrap_value, DifferenceWeight,
    WeightOrder,
};
use crate::error::{Error, Result};

/// Default band around π in which a wrapped difference counts as antipodal.
pub const DEFAULT_SEAM_TOLERANCE: f64 = 1e-9;

/// Exponent of the difference penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    One,
    Two,
}

impl TryFrom<u32> for Exponent {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        match p {
            1 => Ok(Exponent::One),
            2 => Ok(Exponent::Two),
            _ => Err(Error::invalid(format!("exponent must be 1 or 2, got {p}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxConfig {
    pub lambda: f64,
    pub exponent: Exponent,
    pub seam_tolerance: f64,
}

impl ProxConfig {
    pub fn new(lambda: f64, p: u32) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(ProxConfig {
            lambda,
            exponent: Exponent::try_from(p)?,
            seam_tolerance: DEFAULT_SEAM_TOLERANCE,
        })
    }

    pub fn with_seam_tolerance(mut self, tol: f64) -> Self {
        self.seam_tolerance = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if !(self.seam_tolerance >= 0.0) {
            return Err(Error::invalid("seam tolerance must be non-negative"));
        }
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "proximal parameter must be positive and finite, got {lambda}"
        )));
    }
    Ok(())
}

/// Minimiser of a proximal problem on `ℝ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealProx {
    pub minimizer: Vec<f64>,
    pub minimum: f64,
}

/// Minimiser(s) of a proximal problem on the torus `(S¹)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxResult {
    pub primary_minimizer: Vec<f64>,
    /// Second minimiser, present only when `|(⟨f, w⟩)_{2π}| = π`.
    pub secondary_minimizer: Option<Vec<f64>>,
    pub minimum_value: f64,
}

fn check_real_inputs(f: &[f64], w: &DifferenceWeight, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if f.len() != w.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} values for a weight of length {}",
            f.len(),
            w.len()
        )));
    }
    let norm_sq = w.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::invalid("weight vector must be nonzero"));
    }
    Ok(norm_sq)
}

/// Minimiser of `½‖f - x‖² + λ|⟨x, w⟩ - a|` over `ℝ^d` (soft shrinkage
/// along `w`).
pub fn prox_linear_abs_real(f: &[f64], w: &DifferenceWeight, a: f64, lambda: f64) -> Result<RealProx> {
    let norm_sq = check_real_inputs(f, w, lambda)?;
    let r = dot(f, w.entries()) - a;
    let s = sgn(r);
    let mu = r / norm_sq;
    let step = s * lambda.min(mu.abs());
    let minimizer = f.iter().zip(w.entries()).map(|(fj, wj)| fj - step * wj).collect();
    let minimum = if mu.abs() <= lambda {
        0.5 * norm_sq * mu * mu
    } else {
        norm_sq * (0.5 * lambda * lambda + lambda * (mu.abs() - lambda))
    };
    Ok(RealProx { minimizer, minimum })
}

/// Minimiser of `‖f - x‖² + λ(⟨x, w⟩ - a)²` over `ℝ^d`.
pub fn prox_linear_sq_real(f: &[f64], w: &DifferenceWeight, a: f64, lambda: f64) -> Result<RealProx> {
    let norm_sq = check_real_inputs(f, w, lambda)?;
    let r = dot(f, w.entries()) - a;
    let denom = 1.0 + lambda * norm_sq;
    let step = lambda * r / denom;
    let minimizer = f.iter().zip(w.entries()).map(|(fj, wj)| fj - step * wj).collect();
    Ok(RealProx {
        minimizer,
        minimum: lambda * r * r / denom,
    })
}

/// Value of the cyclic proximal objective at `x` (see the module docs for the
/// normalisation used for each exponent).
pub fn prox_objective(f: &[f64], x: &[f64], w: &DifferenceWeight, cfg: &ProxConfig) -> f64 {
    let data: f64 = f
        .iter()
        .zip(x)
        .map(|(&a, &b)| geodesic_distance_value(a, b).powi(2))
        .sum();
    let canon: Vec<f64> = x.iter().map(|&v| wrap_value(v)).collect();
    let diff = fold_abs_difference(dot(&canon, w.entries()));
    match cfg.exponent {
        Exponent::One => 0.5 * data + cfg.lambda * diff,
        Exponent::Two => data + cfg.lambda * diff * diff,
    }
}

/// Proximal mapping of `λ d(·; w)^p` on the torus for `w ∈ {b₁, b₂, b₁,₁}`.
///
/// Entries of `f` are read modulo 2π. When the wrapped difference sits on the
/// seam (within `cfg.seam_tolerance` of π) both minimisers are returned; the
/// primary one is `(f - s m w)_{2π}` with `s = sgn((⟨f, w⟩)_{2π})`.
pub fn prox_cyclic_diff(f: &[f64], w: &DifferenceWeight, cfg: &ProxConfig) -> Result<ProxResult> {
    cfg.validate()?;
    if w.order() == WeightOrder::General {
        return Err(Error::Unsupported(format!(
            "closed-form proximal mapping only exists for b1, b2 and b11, got {:?}",
            w.entries()
        )));
    }
    if f.len() != w.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} values for a weight of length {}",
            f.len(),
            w.len()
        )));
    }
    let f: Vec<f64> = f.iter().map(|&v| wrap_value(v)).collect();
    let norm_sq = w.norm_sq();
    let wrapped = wrap_value(dot(&f, w.entries()));
    let on_seam = (wrapped.abs() - PI).abs() <= cfg.seam_tolerance;
    let s = sgn(wrapped);
    let magnitude = if on_seam { PI } else { wrapped.abs() };
    let m = match cfg.exponent {
        Exponent::One => cfg.lambda.min(magnitude / norm_sq),
        Exponent::Two => cfg.lambda * magnitude / (1.0 + cfg.lambda * norm_sq),
    };
    let shifted = |sign: f64| -> Vec<f64> {
        f.iter()
            .zip(w.entries())
            .map(|(fj, wj)| wrap_value(fj - sign * m * wj))
            .collect()
    };
    let primary = shifted(s);
    let secondary = on_seam.then(|| shifted(-s));
    let minimum_value = prox_objective(&f, &primary, w, cfg);
    Ok(ProxResult {
        primary_minimizer: primary,
        secondary_minimizer: secondary,
        minimum_value,
    })
}

/// Shift applied to a pair `(a, b)` by the `b₁` mapping with parameter
/// `lambda`: the result is `((a + t)_{2π}, (b - t)_{2π})`.
#[inline]
pub(crate) fn b1_shift(a: f64, b: f64, lambda: f64) -> f64 {
    let r = wrap_value(b - a);
    sgn(r) * lambda.min(0.5 * r.abs())
}

/// Scalar step `s·m` of the `b₂` mapping; the update is `x - s m (1, -2, 1)`.
#[inline]
pub(crate) fn b2_step(a: f64, b: f64, c: f64, lambda: f64) -> f64 {
    let r = wrap_value(a - 2.0 * b + c);
    sgn(r) * lambda.min(r.abs() / 6.0)
}

/// Scalar step `s·m` of the `b₁,₁` mapping; the update is
/// `x - s m (-1, 1, 1, -1)`.
#[inline]
pub(crate) fn b11_step(a: f64, b: f64, c: f64, e: f64, lambda: f64) -> f64 {
    let r = wrap_value(-a + b + c - e);
    sgn(r) * lambda.min(0.25 * r.abs())
}

/// Componentwise minimiser of `Σ d(g_j, x_j)² + λ Σ d(f_j, x_j)²`.
///
/// Equidistant representatives (`|g_j - f_j| = π`) take the `v_j = 0` branch.
pub fn prox_data_sq(g: &[f64], f: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    if g.len() != f.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {} samples",
            g.len(),
            f.len()
        )));
    }
    Ok(g
        .iter()
        .zip(f)
        .map(|(&gj, &fj)| data_prox_scalar(wrap_value(gj), wrap_value(fj), lambda))
        .collect())
}

#[inline]
pub(crate) fn data_prox_scalar(g: f64, f: f64, lambda: f64) -> f64 {
    let diff = g - f;
    let v = if diff.abs() <= PI { 0.0 } else { sgn(diff) };
    // (g + λf)/(1 + λ) written as a step from g, exact when g = f
    let t = lambda / (1.0 + lambda);
    wrap_value(g + t * (f - g + TAU * v))
}

/// Best point of a uniform grid for a proximal objective.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMinimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Largest dimension accepted by [`brute_force_prox`].
pub const BRUTE_FORCE_MAX_DIM: usize = 4;

/// Exhaustive search of `objective` over the grid `-π + k·step`, `k ≥ 0`,
/// covering `[-π, π)^d` with `d = f.len()`. Intended as a test oracle.
pub fn brute_force_prox<F>(f: &[f64], objective: F, grid_step: f64) -> Result<GridMinimum>
where
    F: Fn(&[f64]) -> f64,
{
    let d = f.len();
    if d == 0 {
        return Err(Error::invalid("brute force search needs at least one dimension"));
    }
    if d > BRUTE_FORCE_MAX_DIM {
        return Err(Error::Unsupported(format!(
            "brute force search limited to {BRUTE_FORCE_MAX_DIM} dimensions, got {d}"
        )));
    }
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::invalid(format!("grid step must be positive, got {grid_step}")));
    }
    let n = grid_points(grid_step);
    let axis: Vec<f64> = (0..n).map(|k| -PI + k as f64 * grid_step).collect();

    let mut idx = vec![0usize; d];
    let mut x: Vec<f64> = vec![axis[0]; d];
    let mut best = GridMinimum {
        point: x.clone(),
        value: f64::INFINITY,
    };
    loop {
        let v = objective(&x);
        if v < best.value {
            best.value = v;
            best.point.copy_from_slice(&x);
        }
        // odometer increment, last axis fastest
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                x[k] = axis[idx[k]];
                break;
            }
            idx[k] = 0;
            x[k] = axis[0];
        }
    }
}

/// Number of grid points `-π + k·step` lying in `[-π, π)`.
pub fn grid_points(step: f64) -> usize {
    let n = (TAU / step - 1e-9).ceil();
    n.max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn real_abs_energy(x: &[f64], f: &[f64], w: &DifferenceWeight, a: f64, lambda: f64) -> f64 {
        let data: f64 = f.iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum();
        0.5 * data + lambda * (dot(x, w.entries()) - a).abs()
    }

    #[test]
    fn real_abs_example_beats_grid() {
        let b1 = DifferenceWeight::first();
        let f = [0.0, 1.0];
        let r = prox_linear_abs_real(&f, &b1, 0.0, 0.2).unwrap();
        assert!(close(&r.minimizer, &[0.2, 0.8], TOL));
        let e_hat = real_abs_energy(&r.minimizer, &f, &b1, 0.0, 0.2);
        assert!((e_hat - r.minimum).abs() < TOL);
        // grid over [-1, 2]² with step 1e-3
        let mut best = f64::INFINITY;
        for i in 0..=3000 {
            let y0 = -1.0 + i as f64 * 1e-3;
            for j in 0..=3000 {
                let y1 = -1.0 + j as f64 * 1e-3;
                best = best.min(real_abs_energy(&[y0, y1], &f, &b1, 0.0, 0.2));
            }
        }
        assert!(e_hat <= best + 1e-12);
    }

    #[test]
    fn real_abs_identity_when_on_target() {
        let b2 = DifferenceWeight::second();
        let f = [1.0, 0.0, -1.0];
        let r = prox_linear_abs_real(&f, &b2, 0.0, 10.0).unwrap();
        assert!(close(&r.minimizer, &f, 0.0));
        let b1 = DifferenceWeight::first();
        let r = prox_linear_abs_real(&[0.3, 0.8], &b1, 0.5, 3.0).unwrap();
        assert!(close(&r.minimizer, &[0.3, 0.8], 1e-15));
        assert_eq!(r.minimum, 0.0);
    }

    #[test]
    fn real_sq_examples() {
        let b1 = DifferenceWeight::first();
        let r = prox_linear_sq_real(&[0.0, 1.0], &b1, 0.0, 1.0).unwrap();
        assert!(close(&r.minimizer, &[1.0 / 3.0, 2.0 / 3.0], TOL));
        assert!((r.minimum - 1.0 / 3.0).abs() < TOL);
        let r = prox_linear_sq_real(&[0.0, 1.0], &b1, 1.0, 5.0).unwrap();
        assert!(close(&r.minimizer, &[0.0, 1.0], 0.0));
        assert_eq!(r.minimum, 0.0);
        let r = prox_linear_sq_real(&[0.0, 1.0], &b1, 0.0, 1e-12).unwrap();
        assert!(close(&r.minimizer, &[0.0, 1.0], 1e-11));
    }

    #[test]
    fn real_sq_normal_equations() {
        // (I + λ w wᵀ) x = f + λ a w, solved by elimination for d = 2
        let b1 = DifferenceWeight::first();
        let (f, a, lambda) = ([0.4, -1.3], 0.25, 0.7);
        let r = prox_linear_sq_real(&f, &b1, a, lambda).unwrap();
        let (m00, m01, m11) = (1.0 + lambda, -lambda, 1.0 + lambda);
        let (r0, r1) = (f[0] - lambda * a, f[1] + lambda * a);
        let det = m00 * m11 - m01 * m01;
        let x0 = (r0 * m11 - m01 * r1) / det;
        let x1 = (m00 * r1 - m01 * r0) / det;
        assert!(close(&r.minimizer, &[x0, x1], TOL));
    }

    #[test]
    fn invalid_real_inputs_rejected() {
        let w = DifferenceWeight::first();
        assert!(prox_linear_abs_real(&[0.0, 1.0], &w, 0.0, 0.0).is_err());
        assert!(prox_linear_sq_real(&[0.0], &w, 0.0, 1.0).is_err());
    }

    #[test]
    fn cyclic_seam_crossing_example() {
        let b1 = DifferenceWeight::first();
        let cfg = ProxConfig::new(1.0, 1).unwrap();
        let r = prox_cyclic_diff(&[PI - 0.1, -PI + 0.1], &b1, &cfg).unwrap();
        assert!(r.secondary_minimizer.is_none());
        assert!(close(&r.primary_minimizer, &[-PI, -PI], 1e-12));
        let grid = brute_force_prox(&[PI - 0.1, -PI + 0.1], |x| {
            prox_objective(&[PI - 0.1, -PI + 0.1], x, &b1, &cfg)
        }, 1e-3)
        .unwrap();
        assert!(r.minimum_value <= grid.value + 1e-12);
    }

    #[test]
    fn cyclic_antipodal_pair_has_two_minimizers() {
        let b1 = DifferenceWeight::first();
        let cfg = ProxConfig::new(1.0, 1).unwrap();
        let f = [0.0, -PI];
        let r = prox_cyclic_diff(&f, &b1, &cfg).unwrap();
        let second = r.secondary_minimizer.clone().expect("two minimizers");
        let m = (PI / 2.0).min(1.0);
        assert!(close(&r.primary_minimizer, &[-m, -PI + m], 1e-12));
        assert!(close(&second, &[m, PI - m], 1e-12));
        let e2 = prox_objective(&f, &second, &b1, &cfg);
        assert!((e2 - r.minimum_value).abs() < 1e-12);
    }

    #[test]
    fn cyclic_identity_when_difference_vanishes() {
        let cfg1 = ProxConfig::new(3.0, 1).unwrap();
        let cfg2 = ProxConfig::new(3.0, 2).unwrap();
        let cases: [(Vec<f64>, DifferenceWeight); 3] = [
            (vec![0.7, 0.7], DifferenceWeight::first()),
            (vec![-1.0, 0.0, 1.0], DifferenceWeight::second()),
            (vec![0.1, 0.5, 0.2, 0.6], DifferenceWeight::mixed()),
        ];
        for (f, w) in cases {
            for cfg in [&cfg1, &cfg2] {
                let r = prox_cyclic_diff(&f, &w, cfg).unwrap();
                assert!(close(&r.primary_minimizer, &f, 1e-15));
            }
        }
    }

    #[test]
    fn cyclic_rejects_general_weight() {
        let b3 = DifferenceWeight::binomial(3).unwrap();
        let cfg = ProxConfig::new(1.0, 1).unwrap();
        assert!(matches!(
            prox_cyclic_diff(&[0.0; 4], &b3, &cfg),
            Err(Error::Unsupported(_))
        ));
        assert!(ProxConfig::new(1.0, 3).is_err());
        assert!(ProxConfig::new(-1.0, 1).is_err());
    }

    #[test]
    fn scalar_kernels_agree_with_general_mapping() {
        let cfg = ProxConfig::new(0.3, 1).unwrap();
        let (a, b, c, e) = (2.9, -2.8, 0.4, -1.7);
        let r = prox_cyclic_diff(&[a, b], &DifferenceWeight::first(), &cfg).unwrap();
        let t = b1_shift(a, b, 0.3);
        assert!(close(&r.primary_minimizer, &[wrap_value(a + t), wrap_value(b - t)], 1e-15));
        let r = prox_cyclic_diff(&[a, b, c], &DifferenceWeight::second(), &cfg).unwrap();
        let t = b2_step(a, b, c, 0.3);
        let expect = [wrap_value(a - t), wrap_value(b + 2.0 * t), wrap_value(c - t)];
        assert!(close(&r.primary_minimizer, &expect, 1e-15));
        let r = prox_cyclic_diff(&[a, b, c, e], &DifferenceWeight::mixed(), &cfg).unwrap();
        let t = b11_step(a, b, c, e, 0.3);
        let expect = [
            wrap_value(a + t),
            wrap_value(b - t),
            wrap_value(c - t),
            wrap_value(e + t),
        ];
        assert!(close(&r.primary_minimizer, &expect, 1e-15));
    }

    #[test]
    fn data_prox_examples() {
        let g = [0.3, -2.0];
        assert!(close(&prox_data_sq(&g, &g, 2.0).unwrap(), &g, 1e-15));
        let x = prox_data_sq(&[-3.0 * PI / 4.0], &[3.0 * PI / 4.0], 1.0).unwrap();
        assert!((x[0] + PI).abs() < 1e-12);
        let energy = |y: f64| {
            geodesic_distance_value(-3.0 * PI / 4.0, y).powi(2)
                + geodesic_distance_value(3.0 * PI / 4.0, y).powi(2)
        };
        let e_hat = energy(x[0]);
        let mut y = -PI;
        while y < PI {
            assert!(e_hat <= energy(y) + 1e-12);
            y += 1e-5;
        }
        let small = prox_data_sq(&[1.0, -3.0], &[-2.0, 2.5], 1e-12).unwrap();
        assert!(close(&small, &[1.0, -3.0], 1e-10));
        assert!(prox_data_sq(&[0.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn brute_force_limits() {
        assert!(matches!(
            brute_force_prox(&[0.0; 5], |_| 0.0, 1.0),
            Err(Error::Unsupported(_))
        ));
        assert!(brute_force_prox(&[0.0; 2], |_| 0.0, 0.0).is_err());
        // constant objective: the first grid point wins, value is the constant
        let r = brute_force_prox(&[0.0; 2], |_| 1.5, 0.5).unwrap();
        assert_eq!(r.value, 1.5);
        assert_eq!(r.point, vec![-PI, -PI]);
        assert_eq!(grid_points(TAU / 2000.0), 2000);
    }
}
