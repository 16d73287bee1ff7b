//! Cyclic proximal point algorithm (CPPA) for first and second order TV of
//! circle-valued signals and images.
//!
//! The objective is split into summands whose proximal mappings have closed
//! forms. One cycle applies them in a fixed order, each reading the iterate
//! left by the previous one. Inside a summand the blocks (pairs, triples or
//! 2×2 cells) touch disjoint samples, so they are updated in place.
//!
//! Signals (`J = J₁ + … + J₆`):
//!
//! | summand | term | blocks |
//! |---|---|---|
//! | J₁ | data | every sample |
//! | J₂, J₃ | α TV₁ | pairs starting at even / odd positions |
//! | J₄–J₆ | β TV₂ | triples starting at positions ≡ 0, 1, 2 (mod 3) |
//!
//! Images (`J = J₁ + … + J₁₅`): data, then α₁ (vertical) and α₂
//! (horizontal) first order phases, β₁ and β₂ second order phases, and the
//! four γ phases of 2×2 cells in the order (0,0), (1,0), (0,1), (1,1) of
//! (row, column) offsets.
//!
//! The step in cycle `k = 1, 2, …` is `λ_k = λ₀ / k`.

use std::f64::consts::PI;

use crate::cyclic::{d1, d11, d2, geodesic_distance_value, wrap_value};
use crate::error::{Error, Result};
use crate::phase::{PhaseImage, PhaseSignal};
use crate::prox::{b11_step, b1_shift, b2_step, data_prox_scalar};

/// Number of summands in the signal splitting.
pub const SIGNAL_SUMMANDS: usize = 6;
/// Number of summands in the image splitting.
pub const IMAGE_SUMMANDS: usize = 15;

/// Parameters of the signal functional `F + α TV₁ + β TV₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Params1D {
    pub alpha: f64,
    pub beta: f64,
    pub lambda0: f64,
    pub max_cycles: usize,
    /// Stop once the iterate change of a cycle drops below this value.
    pub early_stop: Option<f64>,
    /// Record `J(x⁽ᵏ⁾)` after every cycle.
    pub record_energy: bool,
}

impl Params1D {
    /// `λ₀ = π` and 4000 cycles.
    pub fn new(alpha: f64, beta: f64) -> Self {
        Params1D {
            alpha,
            beta,
            lambda0: PI,
            max_cycles: 4000,
            early_stop: None,
            record_energy: true,
        }
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    pub fn with_cycles(mut self, cycles: usize) -> Self {
        self.max_cycles = cycles;
        self
    }

    pub fn with_early_stop(mut self, tol: f64) -> Self {
        self.early_stop = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_weight("alpha", self.alpha)?;
        check_weight("beta", self.beta)?;
        if self.alpha.max(self.beta) <= 0.0 {
            return Err(Error::invalid("at least one of alpha and beta must be positive"));
        }
        check_schedule(self.lambda0, self.max_cycles, self.early_stop)
    }
}

/// Parameters of the image functional
/// `F + α TV₁ + β TV₂ʰᵛ + γ TV₂ᵈ`. Index 0 of `alpha` and `beta` weighs
/// differences between consecutive rows (vertical), index 1 differences
/// along a row (horizontal).
#[derive(Debug, Clone, PartialEq)]
pub struct Params2D {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub gamma: f64,
    pub lambda0: f64,
    pub max_cycles: usize,
    pub early_stop: Option<f64>,
    pub record_energy: bool,
}

impl Params2D {
    /// `λ₀ = π` and 4000 cycles.
    pub fn new(alpha: [f64; 2], beta: [f64; 2], gamma: f64) -> Self {
        Params2D {
            alpha,
            beta,
            gamma,
            lambda0: PI,
            max_cycles: 4000,
            early_stop: None,
            record_energy: true,
        }
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    pub fn with_cycles(mut self, cycles: usize) -> Self {
        self.max_cycles = cycles;
        self
    }

    pub fn with_early_stop(mut self, tol: f64) -> Self {
        self.early_stop = Some(tol);
        self
    }

    /// Largest of the five regularisation weights.
    pub fn max_weight(&self) -> f64 {
        self.alpha
            .iter()
            .chain(self.beta.iter())
            .fold(self.gamma, |m, &v| m.max(v))
    }

    pub fn validate(&self) -> Result<()> {
        check_weight("alpha1", self.alpha[0])?;
        check_weight("alpha2", self.alpha[1])?;
        check_weight("beta1", self.beta[0])?;
        check_weight("beta2", self.beta[1])?;
        check_weight("gamma", self.gamma)?;
        if self.max_weight() <= 0.0 {
            return Err(Error::invalid("at least one regularisation weight must be positive"));
        }
        check_schedule(self.lambda0, self.max_cycles, self.early_stop)
    }
}

fn check_weight(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
    }
    Ok(())
}

fn check_schedule(lambda0: f64, cycles: usize, early_stop: Option<f64>) -> Result<()> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::invalid(format!("lambda0 must be positive, got {lambda0}")));
    }
    if cycles == 0 {
        return Err(Error::invalid("max_cycles must be at least 1"));
    }
    if let Some(tol) = early_stop {
        if !(tol >= 0.0) {
            return Err(Error::invalid("early-stop tolerance must be non-negative"));
        }
    }
    Ok(())
}

/// Step size of cycle `k ≥ 1`.
#[inline]
pub fn lambda_at(lambda0: f64, k: usize) -> f64 {
    lambda0 / k as f64
}

/// Output of a CPPA run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub result: T,
    /// `J(x⁽ᵏ⁾)` per cycle; empty when energy recording is off.
    pub energy_trace: Vec<f64>,
    /// `(Σ d(x⁽ᵏ⁾, x⁽ᵏ⁻¹⁾)²)^{1/2}` per cycle.
    pub change_trace: Vec<f64>,
    /// `max d(x⁽ᵏ⁾, f)` per cycle.
    pub deviation_trace: Vec<f64>,
    pub cycles_run: usize,
}

impl<T> SolveReport<T> {
    pub fn final_energy(&self) -> Option<f64> {
        self.energy_trace.last().copied()
    }
}

// ---------------------------------------------------------------------------
// energies

fn data_term(x: &[f64], f: &[f64]) -> f64 {
    0.5 * x
        .iter()
        .zip(f)
        .map(|(&a, &b)| geodesic_distance_value(a, b).powi(2))
        .sum::<f64>()
}

fn tv1_signal(x: &[f64]) -> f64 {
    x.windows(2).map(|w| d1(w[0], w[1])).sum()
}

fn tv2_signal(x: &[f64]) -> f64 {
    x.windows(3).map(|w| d2(w[0], w[1], w[2])).sum()
}

/// `J(x) = ½ Σ d(fᵢ, xᵢ)² + α Σ d₁ + β Σ d₂` for signals.
pub fn energy_1d(x: &PhaseSignal, f: &PhaseSignal, params: &Params1D) -> Result<f64> {
    if x.len() != f.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {} samples",
            x.len(),
            f.len()
        )));
    }
    Ok(energy_1d_raw(x.as_slice(), f.as_slice(), params.alpha, params.beta))
}

fn energy_1d_raw(x: &[f64], f: &[f64], alpha: f64, beta: f64) -> f64 {
    let mut e = data_term(x, f);
    if alpha != 0.0 {
        e += alpha * tv1_signal(x);
    }
    if beta != 0.0 {
        e += beta * tv2_signal(x);
    }
    e
}

/// The individual regularisers of an image; see [`image_regularizers`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImageRegularizers {
    /// Σ d(x_{i,j}, x_{i+1,j})
    pub tv1_vertical: f64,
    /// Σ d(x_{i,j}, x_{i,j+1})
    pub tv1_horizontal: f64,
    /// Σ d₂(x_{i-1,j}, x_{i,j}, x_{i+1,j})
    pub tv2_vertical: f64,
    /// Σ d₂(x_{i,j-1}, x_{i,j}, x_{i,j+1})
    pub tv2_horizontal: f64,
    /// Σ d₁,₁ over all 2×2 cells
    pub tv2_diagonal: f64,
}

impl ImageRegularizers {
    /// `TV₁ + TV₂ʰᵛ + TV₂ᵈ` with unit weights.
    pub fn total(&self) -> f64 {
        self.tv1_vertical + self.tv1_horizontal + self.tv2_vertical + self.tv2_horizontal + self.tv2_diagonal
    }

    pub fn weighted(&self, params: &Params2D) -> f64 {
        params.alpha[0] * self.tv1_vertical
            + params.alpha[1] * self.tv1_horizontal
            + params.beta[0] * self.tv2_vertical
            + params.beta[1] * self.tv2_horizontal
            + params.gamma * self.tv2_diagonal
    }
}

/// Unweighted first and second order cyclic variations of an image.
pub fn image_regularizers(x: &PhaseImage) -> ImageRegularizers {
    regularizers_raw(x.as_slice(), x.rows(), x.cols())
}

fn regularizers_raw(x: &[f64], n: usize, m: usize) -> ImageRegularizers {
    let at = |i: usize, j: usize| x[i * m + j];
    let mut r = ImageRegularizers::default();
    for i in 0..n {
        for j in 0..m {
            if i + 1 < n {
                r.tv1_vertical += d1(at(i, j), at(i + 1, j));
            }
            if j + 1 < m {
                r.tv1_horizontal += d1(at(i, j), at(i, j + 1));
            }
            if i + 2 < n {
                r.tv2_vertical += d2(at(i, j), at(i + 1, j), at(i + 2, j));
            }
            if j + 2 < m {
                r.tv2_horizontal += d2(at(i, j), at(i, j + 1), at(i, j + 2));
            }
            if i + 1 < n && j + 1 < m {
                r.tv2_diagonal += d11(at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1));
            }
        }
    }
    r
}

/// `J(x)` for images.
pub fn energy_2d(x: &PhaseImage, f: &PhaseImage, params: &Params2D) -> Result<f64> {
    if x.shape() != f.shape() {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            x.shape(),
            f.shape()
        )));
    }
    Ok(energy_2d_raw(x.as_slice(), f.as_slice(), x.rows(), x.cols(), params))
}

fn energy_2d_raw(x: &[f64], f: &[f64], n: usize, m: usize, params: &Params2D) -> f64 {
    data_term(x, f) + regularizers_raw(x, n, m).weighted(params)
}

// ---------------------------------------------------------------------------
// block enumeration
//
// Each summand is described by the index tuples it acts on. The solver loops
// below visit the same tuples; `split_terms_*` evaluates them so the split can
// be checked against the energy.

/// Start positions of a phase with block length `len` and stride `stride`.
fn phase_starts(n: usize, phase: usize, len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (phase..n).step_by(stride).take_while(move |&s| s + len <= n)
}

/// Values of the six summands `J₁, …, J₆` at `x`.
pub fn split_terms_1d(x: &PhaseSignal, f: &PhaseSignal, params: &Params1D) -> Result<[f64; SIGNAL_SUMMANDS]> {
    if x.len() != f.len() {
        return Err(Error::invalid("length mismatch"));
    }
    let (x, n) = (x.as_slice(), x.len());
    let mut out = [0.0; SIGNAL_SUMMANDS];
    out[0] = data_term(x, f.as_slice());
    for nu in 0..2 {
        out[1 + nu] = params.alpha * phase_starts(n, nu, 2, 2).map(|s| d1(x[s], x[s + 1])).sum::<f64>();
    }
    for nu in 0..3 {
        out[3 + nu] = params.beta
            * phase_starts(n, nu, 3, 3)
                .map(|s| d2(x[s], x[s + 1], x[s + 2]))
                .sum::<f64>();
    }
    Ok(out)
}

/// Values of the fifteen summands `J₁, …, J₁₅` at `x`.
pub fn split_terms_2d(x: &PhaseImage, f: &PhaseImage, params: &Params2D) -> Result<[f64; IMAGE_SUMMANDS]> {
    if x.shape() != f.shape() {
        return Err(Error::invalid("shape mismatch"));
    }
    let (n, m) = x.shape();
    let at = |i: usize, j: usize| x.get(i, j);
    let mut out = [0.0; IMAGE_SUMMANDS];
    out[0] = data_term(x.as_slice(), f.as_slice());
    for nu in 0..2 {
        let mut v = 0.0;
        let mut h = 0.0;
        for j in 0..m {
            v += phase_starts(n, nu, 2, 2).map(|s| d1(at(s, j), at(s + 1, j))).sum::<f64>();
        }
        for i in 0..n {
            h += phase_starts(m, nu, 2, 2).map(|s| d1(at(i, s), at(i, s + 1))).sum::<f64>();
        }
        out[1 + nu] = params.alpha[0] * v;
        out[3 + nu] = params.alpha[1] * h;
    }
    for nu in 0..3 {
        let mut v = 0.0;
        let mut h = 0.0;
        for j in 0..m {
            v += phase_starts(n, nu, 3, 3)
                .map(|s| d2(at(s, j), at(s + 1, j), at(s + 2, j)))
                .sum::<f64>();
        }
        for i in 0..n {
            h += phase_starts(m, nu, 3, 3)
                .map(|s| d2(at(i, s), at(i, s + 1), at(i, s + 2)))
                .sum::<f64>();
        }
        out[5 + nu] = params.beta[0] * v;
        out[8 + nu] = params.beta[1] * h;
    }
    for (p, (mu, nu)) in DIAGONAL_PHASES.iter().enumerate() {
        let mut s = 0.0;
        for i in phase_starts(n, *mu, 2, 2) {
            for j in phase_starts(m, *nu, 2, 2) {
                s += d11(at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1));
            }
        }
        out[11 + p] = params.gamma * s;
    }
    Ok(out)
}

/// (row offset, column offset) of the four 2×2-cell phases, in cycle order.
pub const DIAGONAL_PHASES: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

// ---------------------------------------------------------------------------
// substeps

fn data_step(x: &mut [f64], f: &[f64], lambda: f64) {
    for (xi, &fi) in x.iter_mut().zip(f) {
        *xi = data_prox_scalar(*xi, fi, lambda);
    }
}

/// `b₁` mapping on the pairs `(s, s + stride)` for `s = start, start + 2·stride, …`
/// within a strided line of `len` samples starting at `base`.
#[inline]
fn pair_phase(x: &mut [f64], base: usize, stride: usize, len: usize, phase: usize, lambda: f64) {
    let mut k = phase;
    while k + 1 < len {
        let a = base + k * stride;
        let b = a + stride;
        let t = b1_shift(x[a], x[b], lambda);
        if t != 0.0 {
            x[a] = wrap_value(x[a] + t);
            x[b] = wrap_value(x[b] - t);
        }
        k += 2;
    }
}

#[inline]
fn triple_phase(x: &mut [f64], base: usize, stride: usize, len: usize, phase: usize, lambda: f64) {
    let mut k = phase;
    while k + 2 < len {
        let a = base + k * stride;
        let b = a + stride;
        let c = b + stride;
        let t = b2_step(x[a], x[b], x[c], lambda);
        if t != 0.0 {
            x[a] = wrap_value(x[a] - t);
            x[b] = wrap_value(x[b] + 2.0 * t);
            x[c] = wrap_value(x[c] - t);
        }
        k += 3;
    }
}

fn cell_phase(x: &mut [f64], n: usize, m: usize, mu: usize, nu: usize, lambda: f64) {
    let mut i = mu;
    while i + 1 < n {
        let mut j = nu;
        while j + 1 < m {
            let p00 = i * m + j;
            let p10 = p00 + m;
            let p01 = p00 + 1;
            let p11 = p10 + 1;
            let t = b11_step(x[p00], x[p10], x[p01], x[p11], lambda);
            if t != 0.0 {
                x[p00] = wrap_value(x[p00] + t);
                x[p10] = wrap_value(x[p10] - t);
                x[p01] = wrap_value(x[p01] - t);
                x[p11] = wrap_value(x[p11] + t);
            }
            j += 2;
        }
        i += 2;
    }
}

/// One full cycle `x ← prox_{λJ₆} ∘ … ∘ prox_{λJ₁}(x)` for signals.
pub fn cycle_1d(x: &mut [f64], f: &[f64], alpha: f64, beta: f64, lambda: f64) {
    let n = x.len();
    data_step(x, f, lambda);
    if alpha > 0.0 {
        for nu in 0..2 {
            pair_phase(x, 0, 1, n, nu, lambda * alpha);
        }
    }
    if beta > 0.0 {
        for nu in 0..3 {
            triple_phase(x, 0, 1, n, nu, lambda * beta);
        }
    }
}

/// One full cycle of the fifteen image substeps.
pub fn cycle_2d(x: &mut [f64], f: &[f64], n: usize, m: usize, params: &Params2D, lambda: f64) {
    data_step(x, f, lambda);
    let [a1, a2] = params.alpha;
    let [b1, b2] = params.beta;
    for nu in 0..2 {
        if a1 > 0.0 {
            for j in 0..m {
                pair_phase(x, j, m, n, nu, lambda * a1);
            }
        }
    }
    for nu in 0..2 {
        if a2 > 0.0 {
            for i in 0..n {
                pair_phase(x, i * m, 1, m, nu, lambda * a2);
            }
        }
    }
    for nu in 0..3 {
        if b1 > 0.0 {
            for j in 0..m {
                triple_phase(x, j, m, n, nu, lambda * b1);
            }
        }
    }
    for nu in 0..3 {
        if b2 > 0.0 {
            for i in 0..n {
                triple_phase(x, i * m, 1, m, nu, lambda * b2);
            }
        }
    }
    if params.gamma > 0.0 {
        for (mu, nu) in DIAGONAL_PHASES {
            cell_phase(x, n, m, mu, nu, lambda * params.gamma);
        }
    }
}

fn change_norm(prev: &[f64], next: &[f64]) -> f64 {
    prev.iter()
        .zip(next)
        .map(|(&a, &b)| geodesic_distance_value(a, b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn max_deviation(x: &[f64], f: &[f64]) -> f64 {
    x.iter()
        .zip(f)
        .map(|(&a, &b)| geodesic_distance_value(a, b))
        .fold(0.0, f64::max)
}

struct Traces {
    energy: Vec<f64>,
    change: Vec<f64>,
    deviation: Vec<f64>,
}

fn run_cycles(
    x: &mut Vec<f64>,
    f: &[f64],
    lambda0: f64,
    max_cycles: usize,
    early_stop: Option<f64>,
    record_energy: bool,
    mut cycle: impl FnMut(&mut [f64], f64),
    energy: impl Fn(&[f64]) -> f64,
) -> Traces {
    let mut traces = Traces {
        energy: Vec::with_capacity(if record_energy { max_cycles } else { 0 }),
        change: Vec::with_capacity(max_cycles),
        deviation: Vec::with_capacity(max_cycles),
    };
    let mut prev = x.clone();
    for k in 1..=max_cycles {
        prev.copy_from_slice(x);
        cycle(x, lambda_at(lambda0, k));
        let change = change_norm(&prev, x);
        traces.change.push(change);
        traces.deviation.push(max_deviation(x, f));
        if record_energy {
            traces.energy.push(energy(x));
        }
        if early_stop.is_some_and(|tol| change < tol) {
            break;
        }
    }
    traces
}

/// Denoises a signal by running the CPPA on `F + α TV₁ + β TV₂`, starting
/// from `f`.
pub fn cppa_denoise_1d(f: &PhaseSignal, params: &Params1D) -> Result<SolveReport<PhaseSignal>> {
    params.validate()?;
    let n = f.len();
    if params.beta > 0.0 && n < 3 {
        return Err(Error::invalid(format!(
            "second order regularisation needs at least 3 samples, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::invalid(format!("signal needs at least 2 samples, got {n}")));
    }
    let fv = f.as_slice();
    let mut x = fv.to_vec();
    let (alpha, beta) = (params.alpha, params.beta);
    let traces = run_cycles(
        &mut x,
        fv,
        params.lambda0,
        params.max_cycles,
        params.early_stop,
        params.record_energy,
        |x, lambda| cycle_1d(x, fv, alpha, beta, lambda),
        |x| energy_1d_raw(x, fv, alpha, beta),
    );
    Ok(SolveReport {
        result: PhaseSignal::from_canonical(x),
        cycles_run: traces.change.len(),
        energy_trace: traces.energy,
        change_trace: traces.change,
        deviation_trace: traces.deviation,
    })
}

/// Denoises an image by running the CPPA on
/// `F + α TV₁ + β TV₂ʰᵛ + γ TV₂ᵈ`, starting from `f`.
pub fn cppa_denoise_2d(f: &PhaseImage, params: &Params2D) -> Result<SolveReport<PhaseImage>> {
    params.validate()?;
    let (n, m) = f.shape();
    if params.beta[0] > 0.0 && n < 3 {
        return Err(Error::invalid(format!(
            "vertical second order regularisation needs at least 3 rows, got {n}"
        )));
    }
    if params.beta[1] > 0.0 && m < 3 {
        return Err(Error::invalid(format!(
            "horizontal second order regularisation needs at least 3 columns, got {m}"
        )));
    }
    if params.gamma > 0.0 && (n < 2 || m < 2) {
        return Err(Error::invalid(format!(
            "diagonal regularisation needs at least a 2x2 image, got {n}x{m}"
        )));
    }
    if (params.alpha[0] > 0.0 && n < 2) || (params.alpha[1] > 0.0 && m < 2) {
        return Err(Error::invalid(format!(
            "first order regularisation along a dimension of size 1 ({n}x{m})"
        )));
    }
    let fv = f.as_slice();
    let mut x = fv.to_vec();
    let traces = run_cycles(
        &mut x,
        fv,
        params.lambda0,
        params.max_cycles,
        params.early_stop,
        params.record_energy,
        |x, lambda| cycle_2d(x, fv, n, m, params, lambda),
        |x| energy_2d_raw(x, fv, n, m, params),
    );
    Ok(SolveReport {
        result: PhaseImage::from_canonical(n, m, x),
        cycles_run: traces.change.len(),
        energy_trace: traces.energy,
        change_trace: traces.change,
        deviation_trace: traces.deviation,
    })
}
