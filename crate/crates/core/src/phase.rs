//! Containers for circle-valued signals and images.

use crate::cyclic::wrap_value;
use crate::error::{Error, Result};

/// A one-dimensional circle-valued signal with canonical samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSignal {
    samples: Vec<f64>,
}

impl PhaseSignal {
    /// Builds a signal, wrapping every sample into `[-π, π)`.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("a phase signal needs at least one sample"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite")));
        }
        Ok(PhaseSignal {
            samples: samples.into_iter().map(wrap_value).collect(),
        })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub(crate) fn from_canonical(samples: Vec<f64>) -> Self {
        debug_assert!(samples.iter().all(|v| (-std::f64::consts::PI..std::f64::consts::PI).contains(v)));
        PhaseSignal { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.samples
    }
}

/// A circle-valued image stored row-major with `rows × cols` pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseImage {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl PhaseImage {
    /// Builds an image from row-major pixels, wrapping each into `[-π, π)`.
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if pixels.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} pixels for a {rows}x{cols} image, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "pixel ({}, {}) is not finite",
                i / cols,
                i % cols
            )));
        }
        Ok(PhaseImage {
            rows,
            cols,
            pixels: pixels.into_iter().map(wrap_value).collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                pixels.push(f(i, j));
            }
        }
        Self::new(rows, cols, pixels)
    }

    pub fn constant(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub(crate) fn from_canonical(rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        PhaseImage { rows, cols, pixels }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pixels[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.pixels
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.pixels[i * self.cols..(i + 1) * self.cols]
    }
}

impl From<PhaseSignal> for PhaseImage {
    /// A signal of length `n` becomes a `1 × n` image.
    fn from(s: PhaseSignal) -> Self {
        let n = s.len();
        PhaseImage::from_canonical(1, n, s.into_vec())
    }
}

impl TryFrom<PhaseImage> for PhaseSignal {
    type Error = Error;

    /// Accepts `1 × n` and `n × 1` images.
    fn try_from(img: PhaseImage) -> Result<Self> {
        if img.rows != 1 && img.cols != 1 {
            return Err(Error::invalid(format!(
                "expected a single row or column, got a {}x{} image",
                img.rows, img.cols
            )));
        }
        Ok(PhaseSignal::from_canonical(img.pixels))
    }
}

/// Read access shared by signals and images; a signal is a single row.
pub trait PhaseGrid {
    fn grid_shape(&self) -> (usize, usize);
    fn values(&self) -> &[f64];
}

impl PhaseGrid for PhaseSignal {
    fn grid_shape(&self) -> (usize, usize) {
        (1, self.samples.len())
    }

    fn values(&self) -> &[f64] {
        &self.samples
    }
}

impl PhaseGrid for PhaseImage {
    fn grid_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn values(&self) -> &[f64] {
        &self.pixels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn construction_wraps() {
        let s = PhaseSignal::new(vec![PI, 3.0 * PI / 2.0]).unwrap();
        assert_eq!(s.as_slice()[0], -PI);
        assert!((s.as_slice()[1] + PI / 2.0).abs() < 1e-15);
        assert!(PhaseSignal::new(vec![]).is_err());
        assert!(PhaseSignal::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn image_shape_checks() {
        assert!(PhaseImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(PhaseImage::new(0, 2, vec![]).is_err());
        let img = PhaseImage::from_fn(2, 3, |i, j| (i * 3 + j) as f64 * 0.1).unwrap();
        assert_eq!(img.get(1, 2), 0.5);
        assert_eq!(img.row(1), &[0.30000000000000004, 0.4, 0.5]);
        assert!(PhaseSignal::try_from(img).is_err());
        let col = PhaseImage::constant(4, 1, 0.2).unwrap();
        assert_eq!(PhaseSignal::try_from(col).unwrap().len(), 4);
    }
}
