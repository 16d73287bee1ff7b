//! Arithmetic on the circle S¹ represented by angles in `[-π, π)`.
//!
//! Points of the circle are stored as their canonical representative in the
//! half-open interval `[-π, π)`. Odd multiples of π therefore map to `-π`.
//! Finite differences of circle-valued vectors are measured by the
//! *absolute cyclic difference* `d(x; w)`, the smallest absolute value of
//! `⟨x, w⟩` over all ways of cutting the circle to unroll the points onto the
//! real line.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on the component sum of a [`DifferenceWeight`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Canonical representative of `x` modulo 2π in `[-π, π)`.
///
/// Non-finite input propagates as NaN. Use [`wrap`] for a checked version.
#[inline]
pub fn wrap_value(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let mut y = x % TAU;
    if y >= PI {
        y -= TAU;
    } else if y < -PI {
        y += TAU;
    }
    if y >= PI {
        -PI
    } else {
        y
    }
}

/// Checked wrap map: the unique `y ∈ [-π, π)` with `y ≡ x (mod 2π)`.
pub fn wrap(x: f64) -> Result<Angle> {
    Angle::new(x)
}

/// Sign function with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A point on the circle, stored as its representative in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
#[repr(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    /// The seam point, represented by `-π`.
    pub const SEAM: Angle = Angle(-PI);

    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("angle must be finite, got {x}")));
        }
        Ok(Angle(wrap_value(x)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Arc length between `self` and `other`, in `[0, π]`.
    #[inline]
    pub fn distance(self, other: Angle) -> f64 {
        geodesic_distance_value(self.0, other.0)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Arc-length distance between two points of the circle.
pub fn geodesic_distance(p: Angle, q: Angle) -> f64 {
    geodesic_distance_value(p.0, q.0)
}

/// [`geodesic_distance`] on raw representatives (any real numbers).
#[inline]
pub fn geodesic_distance_value(p: f64, q: f64) -> f64 {
    wrap_value(q - p).abs()
}

/// Which finite difference a weight vector encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightOrder {
    /// `b₁ = (-1, 1)`
    First,
    /// `b₂ = (1, -2, 1)`
    Second,
    /// `b₁,₁ = (-1, 1, 1, -1)`
    Mixed,
    General,
}

/// Weight vector `w` with zero component sum; `Δ(x; w) = ⟨x, w⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceWeight {
    entries: Vec<f64>,
    order: WeightOrder,
}

impl DifferenceWeight {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::invalid("difference weight needs at least 2 entries"));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("difference weight entries must be finite"));
        }
        let sum: f64 = entries.iter().sum();
        if sum.abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "difference weight must sum to zero, got {sum}"
            )));
        }
        if entries.iter().all(|&v| v == 0.0) {
            return Err(Error::invalid("difference weight must be nonzero"));
        }
        let order = match entries.as_slice() {
            [a, b] if *a == -1.0 && *b == 1.0 => WeightOrder::First,
            [a, b, c] if *a == 1.0 && *b == -2.0 && *c == 1.0 => WeightOrder::Second,
            [a, b, c, d] if *a == -1.0 && *b == 1.0 && *c == 1.0 && *d == -1.0 => {
                WeightOrder::Mixed
            }
            _ => WeightOrder::General,
        };
        Ok(DifferenceWeight { entries, order })
    }

    /// `b₁ = (-1, 1)`
    pub fn first() -> Self {
        DifferenceWeight {
            entries: vec![-1.0, 1.0],
            order: WeightOrder::First,
        }
    }

    /// `b₂ = (1, -2, 1)`
    pub fn second() -> Self {
        DifferenceWeight {
            entries: vec![1.0, -2.0, 1.0],
            order: WeightOrder::Second,
        }
    }

    /// `b₁,₁ = (-1, 1, 1, -1)`
    pub fn mixed() -> Self {
        DifferenceWeight {
            entries: vec![-1.0, 1.0, 1.0, -1.0],
            order: WeightOrder::Mixed,
        }
    }

    /// Forward difference of order `n`: binomial coefficients with alternating
    /// signs, `(b_n)_j = (-1)^{j+n-1} C(n, j-1)` for `j = 1..=n+1`.
    pub fn binomial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("difference order must be at least 1"));
        }
        let mut entries = Vec::with_capacity(n + 1);
        let mut c = 1.0_f64;
        for k in 0..=n {
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            entries.push(sign * c);
            c = c * (n - k) as f64 / (k + 1) as f64;
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order(&self) -> WeightOrder {
        self.order
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|w| w * w).sum()
    }

    pub fn norm_l1(&self) -> f64 {
        self.entries.iter().map(|w| w.abs()).sum()
    }
}

fn check_len(x: &[f64], w: &DifferenceWeight) -> Result<()> {
    if x.len() != w.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} values for a weight of length {}",
            x.len(),
            w.len()
        )));
    }
    Ok(())
}

/// Finite difference `Δ(x; w) = ⟨x, w⟩` of a real vector.
pub fn delta(x: &[f64], w: &DifferenceWeight) -> Result<f64> {
    check_len(x, w)?;
    Ok(dot(x, w.entries()))
}

#[inline]
pub(crate) fn dot(x: &[f64], w: &[f64]) -> f64 {
    x.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// Absolute cyclic difference `d(x; w)` for an arbitrary zero-sum weight.
///
/// The entries of `x` are taken modulo 2π. The points are sorted ascending
/// (stable, so equal angles keep their input order) and the `d` candidate
/// unrollings obtained by lifting the `k - 1` smallest points by 2π are
/// enumerated; the result is the smallest `|Δ|` among them.
pub fn abs_cyclic_diff_general(x: &[f64], w: &DifferenceWeight) -> Result<f64> {
    check_len(x, w)?;
    let canon: Vec<f64> = x.iter().map(|&v| wrap_value(v)).collect();
    let mut order: Vec<usize> = (0..canon.len()).collect();
    order.sort_by(|&a, &b| canon[a].total_cmp(&canon[b]));

    let base = dot(&canon, w.entries());
    let mut best = base.abs();
    // Candidate k adds 2π·Σ_{j<k} (Pw)_j to the base difference.
    let mut shift = 0.0;
    for &idx in order.iter().take(canon.len() - 1) {
        shift += w.entries()[idx];
        let cand = (base + TAU * shift).abs();
        if cand < best {
            best = cand;
        }
    }
    Ok(best)
}

/// Absolute cyclic difference for `b₁`, `b₂` or `b₁,₁` via the closed form
/// `d(x; w) = |(Δ(x; w))_{2π}|`, evaluated branch-wise on `|Δ|`.
pub fn abs_cyclic_diff_closed(x: &[f64], w: &DifferenceWeight) -> Result<f64> {
    if w.order() == WeightOrder::General {
        return Err(Error::Unsupported(format!(
            "closed-form cyclic difference only exists for b1, b2 and b11, got {:?}",
            w.entries()
        )));
    }
    check_len(x, w)?;
    let canon: Vec<f64> = x.iter().map(|&v| wrap_value(v)).collect();
    Ok(fold_abs_difference(dot(&canon, w.entries())))
}

/// Maps a difference `Δ` with `|Δ| < 4π` to `|(Δ)_{2π}|`.
#[inline]
pub fn fold_abs_difference(delta: f64) -> f64 {
    let a = delta.abs();
    if a <= PI {
        a
    } else if a <= TAU {
        TAU - a
    } else if a <= 3.0 * PI {
        a - TAU
    } else if a < 2.0 * TAU {
        2.0 * TAU - a
    } else {
        wrap_value(delta).abs()
    }
}

/// `d₁(a, b)`
#[inline]
pub(crate) fn d1(a: f64, b: f64) -> f64 {
    fold_abs_difference(b - a)
}

/// `d₂(a, b, c)`
#[inline]
pub(crate) fn d2(a: f64, b: f64, c: f64) -> f64 {
    fold_abs_difference(a - 2.0 * b + c)
}

/// `d₁,₁(a, b, c, e)`
#[inline]
pub(crate) fn d11(a: f64, b: f64, c: f64, e: f64) -> f64 {
    fold_abs_difference(-a + b + c - e)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn wrap_examples() {
        assert!((wrap(3.0 * PI).unwrap().value() + PI).abs() < TOL);
        assert_eq!(wrap(-PI / 2.0).unwrap().value(), -PI / 2.0);
        assert_eq!(wrap(PI).unwrap().value(), -PI);
        assert_eq!(wrap(-PI).unwrap().value(), -PI);
        assert!(wrap(f64::NAN).is_err());
        assert!(wrap(f64::INFINITY).is_err());
    }

    #[test]
    fn wrap_stays_half_open_near_seam() {
        for k in -50..50 {
            let base = (2 * k + 1) as f64 * PI;
            for eps in [0.0, 1e-15, -1e-15, 1e-12, -1e-12] {
                let y = wrap_value(base + eps);
                assert!((-PI..PI).contains(&y), "wrap({}) = {}", base + eps, y);
            }
        }
        let y = wrap_value(-PI - f64::EPSILON);
        assert!((-PI..PI).contains(&y));
    }

    #[test]
    fn distance_examples() {
        let a = |x: f64| Angle::new(x).unwrap();
        assert!((geodesic_distance(a(0.0), a(PI / 2.0)) - PI / 2.0).abs() < TOL);
        assert!((geodesic_distance(a(3.0 * PI / 4.0), a(-3.0 * PI / 4.0)) - PI / 2.0).abs() < TOL);
        assert!((geodesic_distance(a(0.0), a(-PI)) - PI).abs() < TOL);
        assert_eq!(geodesic_distance(a(1.0), a(1.0)), 0.0);
    }

    #[test]
    fn delta_examples() {
        let b1 = DifferenceWeight::first();
        let b2 = DifferenceWeight::second();
        let b11 = DifferenceWeight::mixed();
        assert!(delta(&[0.0, PI / 2.0, PI], &b2).unwrap().abs() < TOL);
        assert_eq!(delta(&[1.0, 1.0, 1.0, 1.0], &b11).unwrap(), 0.0);
        assert_eq!(delta(&[0.0, 1.0], &b1).unwrap(), 1.0);
        assert!(delta(&[0.0, 1.0, 2.0], &b1).is_err());
    }

    #[test]
    fn weight_validation() {
        assert!(DifferenceWeight::new(vec![1.0, 1.0]).is_err());
        assert!(DifferenceWeight::new(vec![0.0, 0.0]).is_err());
        assert!(DifferenceWeight::new(vec![1.0]).is_err());
        assert_eq!(
            DifferenceWeight::new(vec![1.0, -2.0, 1.0]).unwrap().order(),
            WeightOrder::Second
        );
        assert_eq!(DifferenceWeight::binomial(1).unwrap(), DifferenceWeight::first());
        assert_eq!(DifferenceWeight::binomial(2).unwrap(), DifferenceWeight::second());
        assert_eq!(
            DifferenceWeight::binomial(3).unwrap().entries(),
            &[-1.0, 3.0, -3.0, 1.0]
        );
    }

    #[test]
    fn general_difference_point_values() {
        let b2 = DifferenceWeight::second();
        let b3 = DifferenceWeight::binomial(3).unwrap();
        assert!(abs_cyclic_diff_general(&[-PI, 0.0, -PI], &b2).unwrap() < TOL);
        let x: Vec<f64> = [-15.0, -13.0, 12.0, 14.0].iter().map(|v| v * PI / 16.0).collect();
        let d3 = abs_cyclic_diff_general(&x, &b3).unwrap();
        assert!((d3 - 18.0 * PI / 16.0).abs() < TOL);
        // The naive wrapped difference disagrees for third order.
        let naive = wrap_value(delta(&x, &b3).unwrap()).abs();
        assert!((naive - 14.0 * PI / 16.0).abs() < TOL);
        for c in [-PI, -1.0, 0.0, 2.5] {
            assert!(abs_cyclic_diff_general(&[c, c, c], &b2).unwrap() < TOL);
        }
    }

    #[test]
    fn closed_difference_point_values() {
        let b1 = DifferenceWeight::first();
        let b2 = DifferenceWeight::second();
        assert!(abs_cyclic_diff_closed(&[-PI, 0.0, -PI], &b2).unwrap() < TOL);
        let d = abs_cyclic_diff_closed(&[3.0 * PI / 4.0, -3.0 * PI / 4.0], &b1).unwrap();
        assert!((d - PI / 2.0).abs() < TOL);
        assert!(abs_cyclic_diff_closed(&[0.1, 0.2, 0.3], &b2).unwrap() < TOL);
        let b3 = DifferenceWeight::binomial(3).unwrap();
        assert!(matches!(
            abs_cyclic_diff_closed(&[0.0; 4], &b3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn fold_matches_wrap() {
        let mut x = -4.0 * PI + 1e-9;
        while x < 4.0 * PI {
            assert!((fold_abs_difference(x) - wrap_value(x).abs()).abs() < 1e-12);
            x += 0.01;
        }
    }
}
