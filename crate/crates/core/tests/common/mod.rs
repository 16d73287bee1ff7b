//! Oracles shared by the integration tests. Nothing here calls the closed
//! forms under test: distances are computed as minima over integer shifts.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_angles(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-PI..PI)).collect()
}

/// `min_k |t - 2πk|` by scanning the nearest integer shifts.
pub fn circle_norm(t: f64) -> f64 {
    let k0 = (t / TAU).round();
    [-1.0, 0.0, 1.0]
        .iter()
        .map(|dk| (t - TAU * (k0 + dk)).abs())
        .fold(f64::INFINITY, f64::min)
}

/// `x_i = -π + i·step` on the grid with `n` points.
pub fn grid_value(i: usize, n: usize) -> f64 {
    -PI + i as f64 * (TAU / n as f64)
}

/// Prox objective in shifted form:
/// `c Σ min_k |f_j - x_j - 2πk|² + λ (min_σ |⟨x, w⟩ - 2πσ|)^p`, with
/// `c = 1/2` for `p = 1` and `c = 1` for `p = 2`.
pub fn prox_objective_oracle(f: &[f64], x: &[f64], w: &[i64], lambda: f64, p: u32) -> f64 {
    let c = if p == 1 { 0.5 } else { 1.0 };
    let data: f64 = f.iter().zip(x).map(|(a, b)| circle_norm(a - b).powi(2)).sum();
    let dot: f64 = x.iter().zip(w).map(|(a, &b)| a * b as f64).sum();
    c * data + lambda * circle_norm(dot).powi(p as i32)
}

/// Minimum of the data part over the grid for every residue
/// `s = Σ w_j i_j mod n`. Since `Σ w_j = 0`, `⟨x, w⟩ = s·2π/n (mod 2π)` on the
/// grid, so minimising over residues is the same as searching every grid
/// point.
pub struct ResidueTable {
    pub n: usize,
    /// `min Σ_j d(f_j, x_j)²` over grid points with residue `s`.
    pub data_min: Vec<f64>,
}

impl ResidueTable {
    pub fn new(f: &[f64], w: &[i64], n: usize) -> Self {
        assert_eq!(f.len(), w.len());
        let nn = n as i64;
        let tables: Vec<Vec<f64>> = f
            .iter()
            .map(|&fj| (0..n).map(|i| circle_norm(fj - grid_value(i, n)).powi(2)).collect())
            .collect();
        let mut g = vec![f64::INFINITY; n];
        for (i, &h) in tables[0].iter().enumerate() {
            let s = (w[0] * i as i64).rem_euclid(nn) as usize;
            g[s] = g[s].min(h);
        }
        for (table, &wj) in tables.iter().zip(w).skip(1) {
            let mut next = vec![f64::INFINITY; n];
            for (i, &h) in table.iter().enumerate() {
                let shift = (wj * i as i64).rem_euclid(nn) as usize;
                for (s, &gs) in g.iter().enumerate() {
                    let t = s + shift;
                    let t = if t >= n { t - n } else { t };
                    let v = gs + h;
                    if v < next[t] {
                        next[t] = v;
                    }
                }
            }
            g = next;
        }
        ResidueTable { n, data_min: g }
    }

    /// Grid minimum of the prox objective for `(λ, p)`.
    pub fn minimum(&self, lambda: f64, p: u32) -> f64 {
        let c = if p == 1 { 0.5 } else { 1.0 };
        let step = TAU / self.n as f64;
        self.data_min
            .iter()
            .enumerate()
            .map(|(s, &g)| c * g + lambda * circle_norm(s as f64 * step).powi(p as i32))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Bound on how much the prox objective can drop between a point and the
/// nearest grid node: Lipschitz constant times the half-cell diagonal.
pub fn prox_grid_tolerance(w: &[i64], lambda: f64, p: u32, n: usize) -> f64 {
    let d = w.len() as f64;
    let step = TAU / n as f64;
    let norm_w = (w.iter().map(|v| (v * v) as f64).sum::<f64>()).sqrt();
    let (data_lip, reg_lip) = if p == 1 {
        (PI * d.sqrt(), lambda * norm_w)
    } else {
        (2.0 * PI * d.sqrt(), 2.0 * PI * lambda * norm_w)
    };
    (data_lip + reg_lip) * 0.5 * step * d.sqrt()
}

/// Exhaustive grid minimum of the three-sample signal energy
/// `½ Σ d(f_j, x_j)² + α (d(x₁,x₂) + d(x₂,x₃)) + β d₂(x₁,x₂,x₃)`.
pub fn signal3_grid_minimum(f: &[f64; 3], alpha: f64, beta: f64, n: usize) -> f64 {
    let step = TAU / n as f64;
    let data: Vec<Vec<f64>> = f
        .iter()
        .map(|&fj| (0..n).map(|i| 0.5 * circle_norm(fj - grid_value(i, n)).powi(2)).collect())
        .collect();
    // first differences k in (-n, n), stored at k + n
    let t1: Vec<f64> = (0..2 * n).map(|k| alpha * circle_norm((k as f64 - n as f64) * step)).collect();
    // second differences k in (-2n, 2n), stored at k + 2n
    let t2: Vec<f64> = (0..4 * n).map(|k| beta * circle_norm((k as f64 - 2.0 * n as f64) * step)).collect();
    let mut best = f64::INFINITY;
    for i1 in 0..n {
        for i2 in 0..n {
            let head = data[0][i1] + data[1][i2] + t1[i2 + n - i1];
            if head >= best {
                continue;
            }
            let off1 = n - i2;
            let off2 = 2 * n + i1 - 2 * i2;
            let mut inner = f64::INFINITY;
            for i3 in 0..n {
                let v = data[2][i3] + t1[i3 + off1] + t2[i3 + off2];
                if v < inner {
                    inner = v;
                }
            }
            best = best.min(head + inner);
        }
    }
    best
}

/// Lipschitz-based tolerance for [`signal3_grid_minimum`].
pub fn signal3_grid_tolerance(alpha: f64, beta: f64, n: usize) -> f64 {
    let step = TAU / n as f64;
    let lip = PI * 3f64.sqrt() + alpha * 2.0 * 2f64.sqrt() + beta * 6f64.sqrt();
    lip * 0.5 * step * 3f64.sqrt()
}

/// Median of a non-empty sample.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
