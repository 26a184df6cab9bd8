//! Patch extraction and overlap-counted placement.
//!
//! A stacked patch is the column-major vectorization of an m x m block from
//! each channel, concatenated in [r; g; b] order into a length-3m² vector.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::image::{ColorImage, CHANNELS};

/// Location of a patch's top-left corner within an image of the pyramid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchIndex {
    pub row: usize,
    pub col: usize,
    /// Pyramid level the position refers to; 0 is the base image.
    pub scale_level: usize,
}

impl PatchIndex {
    pub fn new(row: usize, col: usize) -> Self {
        PatchIndex {
            row,
            col,
            scale_level: 0,
        }
    }

    pub fn at_level(row: usize, col: usize, scale_level: usize) -> Self {
        PatchIndex {
            row,
            col,
            scale_level,
        }
    }

    pub fn fits(&self, img: &ColorImage, m_side: usize) -> bool {
        self.row + m_side <= img.height() && self.col + m_side <= img.width()
    }
}

/// Extracts the stacked RGB patch at `idx` as a 3·m_side² vector.
pub fn extract_stacked_patch(
    img: &ColorImage,
    idx: &PatchIndex,
    m_side: usize,
) -> Result<DVector<f64>> {
    if !idx.fits(img, m_side) {
        return Err(Error::invalid(format!(
            "patch {}x{} at ({}, {}) exceeds {}x{} image",
            m_side,
            m_side,
            idx.row,
            idx.col,
            img.width(),
            img.height()
        )));
    }
    let m = m_side * m_side;
    let mut out = DVector::zeros(CHANNELS * m);
    for c in 0..CHANNELS {
        let base = c * m;
        for pc in 0..m_side {
            for pr in 0..m_side {
                out[base + pc * m_side + pr] = img.get(c, idx.row + pr, idx.col + pc);
            }
        }
    }
    Ok(out)
}

/// Writes a stacked patch into the image at `idx`, overwriting pixels.
pub fn write_patch(img: &mut ColorImage, idx: &PatchIndex, m_side: usize, patch: &[f64]) {
    let m = m_side * m_side;
    debug_assert_eq!(patch.len(), CHANNELS * m);
    for c in 0..CHANNELS {
        let base = c * m;
        for pc in 0..m_side {
            for pr in 0..m_side {
                img.set(c, idx.row + pr, idx.col + pc, patch[base + pc * m_side + pr]);
            }
        }
    }
}

/// Accumulates a stacked patch into `canvas` and bumps the per-pixel overlap
/// count in `weights`; dividing by the counts afterwards averages overlaps.
pub fn place_patch_accumulate(
    canvas: &mut ColorImage,
    weights: &mut [f64],
    idx: &PatchIndex,
    m_side: usize,
    patch: &[f64],
) {
    let m = m_side * m_side;
    debug_assert_eq!(patch.len(), CHANNELS * m);
    debug_assert_eq!(weights.len(), canvas.width() * canvas.height());
    let width = canvas.width();
    for c in 0..CHANNELS {
        let base = c * m;
        for pc in 0..m_side {
            for pr in 0..m_side {
                let (row, col) = (idx.row + pr, idx.col + pc);
                let v = canvas.get(c, row, col) + patch[base + pc * m_side + pr];
                canvas.set(c, row, col, v);
                if c == 0 {
                    weights[row * width + col] += 1.0;
                }
            }
        }
    }
}

/// Divides every accumulated sample by its overlap count.
pub fn normalize_accumulated(canvas: &mut ColorImage, weights: &[f64]) {
    for c in 0..CHANNELS {
        for (v, &w) in canvas.plane_mut(c).iter_mut().zip(weights) {
            debug_assert!(w > 0.0, "uncovered pixel during normalization");
            *v /= w;
        }
    }
}
