//! Neighbour-distance diagnostics, lifting of dense circle-valued images to
//! the real line, and the sufficient conditions under which the CPPA
//! converges to a global minimiser.

use std::f64::consts::PI;

use crate::cyclic::{geodesic_distance_value, wrap_value};
use crate::error::{Error, Result};
use crate::phase::{PhaseGrid, PhaseImage, PhaseSignal};
use crate::solver::{image_regularizers, lambda_at, Params1D, Params2D, IMAGE_SUMMANDS, SIGNAL_SUMMANDS};

/// Lipschitz constant used in the convergence conditions.
pub const LIPSCHITZ_BOUND: f64 = 4.0;

/// Largest geodesic distance between 4-neighbours (adjacent samples for a
/// signal). Zero for a single sample.
pub fn d_inf_neighbors<G: PhaseGrid + ?Sized>(x: &G) -> f64 {
    worst_neighbor_pair(x).map_or(0.0, |(_, _, d)| d)
}

/// The neighbour pair attaining [`d_inf_neighbors`], first in row-major order.
fn worst_neighbor_pair<G: PhaseGrid + ?Sized>(x: &G) -> Option<((usize, usize), (usize, usize), f64)> {
    let (n, m) = x.grid_shape();
    let v = x.values();
    let mut worst: Option<((usize, usize), (usize, usize), f64)> = None;
    let mut consider = |a: (usize, usize), b: (usize, usize)| {
        let d = geodesic_distance_value(v[a.0 * m + a.1], v[b.0 * m + b.1]);
        if worst.is_none_or(|w| d > w.2) {
            worst = Some((a, b, d));
        }
    };
    for i in 0..n {
        for j in 0..m {
            if j + 1 < m {
                consider((i, j), (i, j + 1));
            }
            if i + 1 < n {
                consider((i, j), (i + 1, j));
            }
        }
    }
    worst
}

/// `max d(x_{i,j}, f_{i,j})`; `x ∈ S(f, δ)` iff the result is at most `δ`.
pub fn d_inf_between<G: PhaseGrid + ?Sized>(x: &G, f: &G) -> Result<f64> {
    if x.grid_shape() != f.grid_shape() {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            x.grid_shape(),
            f.grid_shape()
        )));
    }
    Ok(x.values()
        .iter()
        .zip(f.values())
        .map(|(&a, &b)| geodesic_distance_value(a, b))
        .fold(0.0, f64::max))
}

/// Order in which the lifting propagates from the anchor pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftOrder {
    /// First row left to right, then every column downward.
    #[default]
    RowFirst,
    /// First column downward, then every row left to right.
    ColumnFirst,
}

/// Real-valued image whose neighbour differences equal the geodesic
/// neighbour distances of the source image.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedImage {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    base_point: f64,
    anchor: f64,
}

impl LiftedImage {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    /// The point `q` with `exp_q(t) = (q + t)_{2π}`.
    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    /// Lifted value of the top-left pixel.
    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Maps the lifted values back to the circle via `exp_q`.
    pub fn project(&self) -> PhaseImage {
        PhaseImage::from_canonical(
            self.rows,
            self.cols,
            self.values.iter().map(|&t| wrap_value(self.base_point + t)).collect(),
        )
    }
}

/// Lifts `x` with the top-left pixel mapped to `anchor`.
///
/// Requires `d_inf_neighbors(x) < π/2`; the lifted image is then unique and
/// independent of the propagation order.
pub fn lift(x: &PhaseImage, anchor: f64) -> Result<LiftedImage> {
    lift_with_order(x, anchor, LiftOrder::RowFirst)
}

pub fn lift_with_order(x: &PhaseImage, anchor: f64, order: LiftOrder) -> Result<LiftedImage> {
    if !anchor.is_finite() {
        return Err(Error::invalid("anchor must be finite"));
    }
    if let Some((first, second, distance)) = worst_neighbor_pair(x) {
        if distance >= PI / 2.0 {
            return Err(Error::LiftPrecondition {
                first,
                second,
                distance,
                bound: PI / 2.0,
            });
        }
    }
    let (n, m) = x.shape();
    let src = x.as_slice();
    let mut v = vec![0.0; n * m];
    v[0] = anchor;
    let step = |from: usize, to: usize| wrap_value(src[to] - src[from]);
    match order {
        LiftOrder::RowFirst => {
            for j in 1..m {
                v[j] = v[j - 1] + step(j - 1, j);
            }
            for j in 0..m {
                for i in 1..n {
                    let (a, b) = ((i - 1) * m + j, i * m + j);
                    v[b] = v[a] + step(a, b);
                }
            }
        }
        LiftOrder::ColumnFirst => {
            for i in 1..n {
                v[i * m] = v[(i - 1) * m] + step((i - 1) * m, i * m);
            }
            for i in 0..n {
                for j in 1..m {
                    let (a, b) = (i * m + j - 1, i * m + j);
                    v[b] = v[a] + step(a, b);
                }
            }
        }
    }
    Ok(LiftedImage {
        rows: n,
        cols: m,
        values: v,
        base_point: wrap_value(src[0] - anchor),
        anchor,
    })
}

/// Lifts `x` with respect to the base point of `reference`, choosing the
/// anchor closest to the reference anchor.
pub fn lift_near(x: &PhaseImage, reference: &LiftedImage) -> Result<LiftedImage> {
    if x.shape() != (reference.rows, reference.cols) {
        return Err(Error::invalid("shape mismatch with the reference lifting"));
    }
    let f11 = wrap_value(reference.base_point + reference.anchor);
    lift(x, reference.anchor + wrap_value(x.get(0, 0) - f11))
}

/// Lifts a signal, seen as a single-row image.
pub fn lift_signal(x: &PhaseSignal, anchor: f64) -> Result<Vec<f64>> {
    let img = PhaseImage::from(x.clone());
    Ok(lift(&img, anchor)?.values)
}

/// Real-valued counterpart of the image energy: geodesic distances replaced
/// by absolute differences of the lifted values.
pub fn lifted_energy(x: &LiftedImage, f: &LiftedImage, params: &Params2D) -> Result<f64> {
    if (x.rows, x.cols) != (f.rows, f.cols) {
        return Err(Error::invalid("shape mismatch"));
    }
    let (n, m) = (x.rows, x.cols);
    let at = |i: usize, j: usize| x.get(i, j);
    let mut data = 0.0;
    let (mut v1, mut h1, mut v2, mut h2, mut dg) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..m {
            data += (at(i, j) - f.get(i, j)).powi(2);
            if i + 1 < n {
                v1 += (at(i + 1, j) - at(i, j)).abs();
            }
            if j + 1 < m {
                h1 += (at(i, j + 1) - at(i, j)).abs();
            }
            if i + 2 < n {
                v2 += (at(i, j) - 2.0 * at(i + 1, j) + at(i + 2, j)).abs();
            }
            if j + 2 < m {
                h2 += (at(i, j) - 2.0 * at(i, j + 1) + at(i, j + 2)).abs();
            }
            if i + 1 < n && j + 1 < m {
                dg += (-at(i, j) + at(i + 1, j) + at(i, j + 1) - at(i + 1, j + 1)).abs();
            }
        }
    }
    Ok(0.5 * data
        + params.alpha[0] * v1
        + params.alpha[1] * h1
        + params.beta[0] * v2
        + params.beta[1] * h2
        + params.gamma * dg)
}

/// Evidence for the sufficient convergence conditions of the CPPA.
///
/// The three conditions are
/// (a) `d_inf_neighbors(f) < π/8`,
/// (b) `TV₁(f) + TV₂ʰᵛ(f) + TV₂ᵈ(f) ≤ ε² / m` with `m` the largest weight,
/// (c) `√(ε² + 2‖λ‖₂² L² c (c+1)) + 2‖λ‖_∞ c L < π/16`.
///
/// `‖λ‖₂` is computed from the schedule truncated at the cycle budget, so
/// the left side of (c) is a lower bound for the infinite sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCheck {
    pub d_inf_f: f64,
    pub tv_budget: f64,
    pub max_weight: f64,
    pub epsilon: f64,
    /// `‖λ‖₂²` of the truncated schedule.
    pub lambda_l2_sq: f64,
    pub lambda_inf: f64,
    pub lipschitz: f64,
    /// Number of summands in the splitting (6 for signals, 15 for images).
    pub summands: usize,
}

impl ConvergenceCheck {
    /// Condition (a).
    pub fn dense(&self) -> bool {
        self.d_inf_f < PI / 8.0
    }

    /// Condition (b).
    pub fn weights_small(&self) -> bool {
        self.tv_budget <= self.epsilon * self.epsilon / self.max_weight
    }

    /// Left side of condition (c).
    pub fn iterate_radius(&self) -> f64 {
        let c = self.summands as f64;
        let l = self.lipschitz;
        (self.epsilon * self.epsilon + 2.0 * self.lambda_l2_sq * l * l * c * (c + 1.0)).sqrt()
            + 2.0 * self.lambda_inf * c * l
    }

    /// Condition (c).
    pub fn schedule_small(&self) -> bool {
        self.iterate_radius() < PI / 16.0
    }

    pub fn all_satisfied(&self) -> bool {
        self.dense() && self.weights_small() && self.schedule_small()
    }
}

fn schedule_norms(lambda0: f64, max_cycles: usize) -> Result<(f64, f64)> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::invalid("lambda0 must be positive"));
    }
    if max_cycles == 0 {
        return Err(Error::invalid("max_cycles must be at least 1"));
    }
    // summed from the small end for accuracy
    let l2: f64 = (1..=max_cycles).rev().map(|k| lambda_at(lambda0, k).powi(2)).sum();
    Ok((l2, lambda0))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Evaluates the convergence conditions for an image problem.
pub fn check_convergence_conditions(
    f: &PhaseImage,
    params: &Params2D,
    lambda0: f64,
    max_cycles: usize,
    epsilon: f64,
) -> Result<ConvergenceCheck> {
    check_epsilon(epsilon)?;
    let (lambda_l2_sq, lambda_inf) = schedule_norms(lambda0, max_cycles)?;
    Ok(ConvergenceCheck {
        d_inf_f: d_inf_neighbors(f),
        tv_budget: image_regularizers(f).total(),
        max_weight: params.max_weight(),
        epsilon,
        lambda_l2_sq,
        lambda_inf,
        lipschitz: LIPSCHITZ_BOUND,
        summands: IMAGE_SUMMANDS,
    })
}

/// Evaluates the convergence conditions for a signal problem.
pub fn check_convergence_conditions_1d(
    f: &PhaseSignal,
    params: &Params1D,
    lambda0: f64,
    max_cycles: usize,
    epsilon: f64,
) -> Result<ConvergenceCheck> {
    check_epsilon(epsilon)?;
    let (lambda_l2_sq, lambda_inf) = schedule_norms(lambda0, max_cycles)?;
    let img = PhaseImage::from(f.clone());
    let r = image_regularizers(&img);
    Ok(ConvergenceCheck {
        d_inf_f: d_inf_neighbors(f),
        tv_budget: r.tv1_horizontal + r.tv2_horizontal,
        max_weight: params.alpha.max(params.beta),
        epsilon,
        lambda_l2_sq,
        lambda_inf,
        lipschitz: LIPSCHITZ_BOUND,
        summands: SIGNAL_SUMMANDS,
    })
}
