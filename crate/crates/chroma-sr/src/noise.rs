//! Blind per-channel noise estimation.
//!
//! Each channel is convolved with a fixed 3x3 high-pass mask whose response
//! to unit-variance white noise has a known standard deviation; the median
//! absolute response then yields a robust sigma estimate that texture
//! contaminates far less than a variance would.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::ColorImage;

/// Laplacian-difference high-pass mask.
const MASK: [[f64; 3]; 3] = [[1.0, -2.0, 1.0], [-2.0, 4.0, -2.0], [1.0, -2.0, 1.0]];

/// sqrt(sum of squared mask entries): response std per unit noise std.
const MASK_NORM: f64 = 6.0;

/// Median of |N(0,1)| in units of sigma.
const MAD_TO_SIGMA: f64 = 0.6745;

/// Lower clamp so the data weights 1/sigma stay bounded.
pub const SIGMA_FLOOR: f64 = 0.5;

/// Pixels dropped from each side of the high-pass response before taking the
/// median; boundary effects bias the tails otherwise.
const BORDER: usize = 2;

const MIN_DIM: usize = 16;

/// Per-channel noise standard deviations on the [0, 255] scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseProfile {
    pub sigma_r: f64,
    pub sigma_g: f64,
    pub sigma_b: f64,
}

impl NoiseProfile {
    pub fn new(sigma_r: f64, sigma_g: f64, sigma_b: f64) -> Self {
        NoiseProfile {
            sigma_r: sigma_r.max(SIGMA_FLOOR),
            sigma_g: sigma_g.max(SIGMA_FLOOR),
            sigma_b: sigma_b.max(SIGMA_FLOOR),
        }
    }

    pub fn sigmas(&self) -> [f64; 3] {
        [self.sigma_r, self.sigma_g, self.sigma_b]
    }

    pub fn variances(&self) -> [f64; 3] {
        self.sigmas().map(|s| s * s)
    }

    /// Mean of the per-channel variances; drives the NLM bandwidth and the
    /// singular-value weight constant.
    pub fn mean_variance(&self) -> f64 {
        let v = self.variances();
        (v[0] + v[1] + v[2]) / 3.0
    }
}

/// Estimates the additive white Gaussian noise standard deviation of one
/// plane. The estimate is clamped below by [`SIGMA_FLOOR`].
pub fn estimate_channel_sigma(plane: &[f64], width: usize, height: usize) -> Result<f64> {
    if width < MIN_DIM || height < MIN_DIM {
        return Err(Error::invalid(format!(
            "noise estimation needs at least {}x{}, got {}x{}",
            MIN_DIM, MIN_DIM, width, height
        )));
    }
    let lo_r = 1.max(BORDER);
    let hi_r = height - 1 - BORDER;
    let lo_c = 1.max(BORDER);
    let hi_c = width - 1 - BORDER;
    let mut responses = Vec::with_capacity((hi_r - lo_r + 1) * (hi_c - lo_c + 1));
    for row in lo_r..=hi_r {
        for col in lo_c..=hi_c {
            let mut acc = 0.0;
            for (dr, mask_row) in MASK.iter().enumerate() {
                for (dc, &m) in mask_row.iter().enumerate() {
                    acc += m * plane[(row + dr - 1) * width + (col + dc - 1)];
                }
            }
            responses.push(acc.abs());
        }
    }
    responses.sort_by(|a, b| a.partial_cmp(b).expect("finite responses"));
    let n = responses.len();
    let median = if n % 2 == 1 {
        responses[n / 2]
    } else {
        0.5 * (responses[n / 2 - 1] + responses[n / 2])
    };
    Ok((median / (MAD_TO_SIGMA * MASK_NORM)).max(SIGMA_FLOOR))
}

/// Estimates the channel-wise noise profile of a color image.
pub fn estimate_noise_profile(img: &ColorImage) -> Result<NoiseProfile> {
    let (w, h) = (img.width(), img.height());
    Ok(NoiseProfile {
        sigma_r: estimate_channel_sigma(img.plane(0), w, h)?,
        sigma_g: estimate_channel_sigma(img.plane(1), w, h)?,
        sigma_b: estimate_channel_sigma(img.plane(2), w, h)?,
    })
}

/// Per-channel noise variances; the `noise` CLI subcommand emits these.
pub fn report_variances(img: &ColorImage) -> Result<[f64; 3]> {
    Ok(estimate_noise_profile(img)?.variances())
}
