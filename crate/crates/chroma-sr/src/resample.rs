//! Separable bicubic resampling (Keys a = -0.5), the degradation operator
//! built from it, and multi-scale pyramid construction.
//!
//! Downscaling with antialiasing widens the kernel support by the inverse
//! scale ratio, matching the reference resize convention. Boundaries are
//! handled by clamp-to-edge replication, which keeps every operator linear,
//! and per-sample weight normalization preserves constants exactly.

use crate::error::{Error, Result};
use crate::image::{ColorImage, CHANNELS};

/// Keys cubic convolution kernel with a = -0.5.
pub fn keys_kernel(x: f64) -> f64 {
    let a = -0.5;
    let x = x.abs();
    if x <= 1.0 {
        (a + 2.0) * x * x * x - (a + 3.0) * x * x + 1.0
    } else if x < 2.0 {
        a * x * x * x - 5.0 * a * x * x + 8.0 * a * x - 4.0 * a
    } else {
        0.0
    }
}

/// Per-output-sample contribution run along one axis: first clamped source
/// index plus the merged, normalized weights of the contiguous source run.
#[derive(Debug, Clone)]
struct AxisPlan {
    src_len: usize,
    dst_len: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

impl AxisPlan {
    fn build(src_len: usize, dst_len: usize, antialias: bool) -> AxisPlan {
        let scale = dst_len as f64 / src_len as f64;
        let kernel_width = if antialias && scale < 1.0 {
            1.0 / scale
        } else {
            1.0
        };
        let radius = 2.0 * kernel_width;
        let mut rows = Vec::with_capacity(dst_len);
        for i in 0..dst_len {
            let u = (i as f64 + 0.5) / scale - 0.5;
            let j_lo = (u - radius).ceil() as isize;
            let j_hi = (u + radius).floor() as isize;
            let raw: Vec<f64> = (j_lo..=j_hi)
                .map(|j| keys_kernel((u - j as f64) / kernel_width))
                .collect();
            let total: f64 = raw.iter().sum();
            let clamp = |j: isize| j.clamp(0, src_len as isize - 1) as usize;
            let lo = clamp(j_lo);
            let hi = clamp(j_hi);
            let mut merged = vec![0.0; hi - lo + 1];
            for (k, j) in (j_lo..=j_hi).enumerate() {
                merged[clamp(j) - lo] += raw[k] / total;
            }
            rows.push((lo, merged));
        }
        AxisPlan {
            src_len,
            dst_len,
            rows,
        }
    }

    /// out[i] = sum_k w[i][k] * src[lo[i] + k], applied to a strided lane.
    fn apply(&self, src: &[f64], src_stride: usize, dst: &mut [f64], dst_stride: usize) {
        for (i, (lo, weights)) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for (k, &w) in weights.iter().enumerate() {
                acc += w * src[(lo + k) * src_stride];
            }
            dst[i * dst_stride] = acc;
        }
    }

    /// Exact transpose of `apply`: scatters dst-domain values back to src.
    fn apply_adjoint(&self, src: &[f64], src_stride: usize, dst: &mut [f64], dst_stride: usize) {
        for (i, (lo, weights)) in self.rows.iter().enumerate() {
            let v = src[i * src_stride];
            for (k, &w) in weights.iter().enumerate() {
                dst[(lo + k) * dst_stride] += w * v;
            }
        }
    }
}

fn resize_plane(
    plane: &[f64],
    width: usize,
    height: usize,
    plan_x: &AxisPlan,
    plan_y: &AxisPlan,
) -> Vec<f64> {
    let (tw, th) = (plan_x.dst_len, plan_y.dst_len);
    // Horizontal pass over each source row, then vertical pass per column.
    let mut mid = vec![0.0; tw * height];
    for row in 0..height {
        plan_x.apply(&plane[row * width..], 1, &mut mid[row * tw..], 1);
    }
    let mut out = vec![0.0; tw * th];
    for col in 0..tw {
        plan_y.apply(&mid[col..], tw, &mut out[col..], tw);
    }
    out
}

/// Bicubic resize to an arbitrary target size.
///
/// With `antialias` set and a shrinking axis, the kernel support widens by the
/// inverse scale so the resample low-passes before decimating.
pub fn bicubic_resize(
    img: &ColorImage,
    target_w: usize,
    target_h: usize,
    antialias: bool,
) -> Result<ColorImage> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::invalid(format!(
            "resize target {}x{} must be positive",
            target_w, target_h
        )));
    }
    let plan_x = AxisPlan::build(img.width(), target_w, antialias);
    let plan_y = AxisPlan::build(img.height(), target_h, antialias);
    let mut planes: [Vec<f64>; CHANNELS] = Default::default();
    for (c, out_plane) in planes.iter_mut().enumerate() {
        *out_plane = resize_plane(img.plane(c), img.width(), img.height(), &plan_x, &plan_y);
    }
    ColorImage::from_planes(target_w, target_h, planes)
}

/// Degradation operator: antialiased bicubic downscale by an integer factor,
/// fusing the blur and decimation of the observation model into one linear map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegradationModel {
    factor: usize,
}

impl DegradationModel {
    pub fn new(factor: usize) -> Result<Self> {
        if factor < 2 {
            return Err(Error::invalid(format!(
                "degradation factor {} must be at least 2",
                factor
            )));
        }
        Ok(DegradationModel { factor })
    }

    pub fn factor(&self) -> usize {
        self.factor
    }
}

fn replicate_pad(img: &ColorImage, pad_w: usize, pad_h: usize) -> ColorImage {
    let (w, h) = (img.width() + pad_w, img.height() + pad_h);
    let mut out = ColorImage::new(w, h);
    for c in 0..CHANNELS {
        for row in 0..h {
            for col in 0..w {
                out.set(c, row, col, img.get_clamped(c, row as isize, col as isize));
            }
        }
    }
    out
}

/// Applies DH: replicate-pads to a multiple of the factor if needed, then
/// downscales by exactly 1/factor with antialiasing.
pub fn degrade(hr: &ColorImage, model: &DegradationModel) -> Result<ColorImage> {
    let d = model.factor;
    let pad_w = (d - hr.width() % d) % d;
    let pad_h = (d - hr.height() % d) % d;
    let padded;
    let src = if pad_w > 0 || pad_h > 0 {
        padded = replicate_pad(hr, pad_w, pad_h);
        &padded
    } else {
        hr
    };
    bicubic_resize(src, src.width() / d, src.height() / d, true)
}

/// Exact adjoint of [`degrade`] for factor-divisible HR dimensions; the output
/// is `factor` times the LR size on each axis.
pub fn degrade_adjoint(lr: &ColorImage, model: &DegradationModel) -> ColorImage {
    let d = model.factor;
    let (hr_w, hr_h) = (lr.width() * d, lr.height() * d);
    let plan_x = AxisPlan::build(hr_w, lr.width(), true);
    let plan_y = AxisPlan::build(hr_h, lr.height(), true);
    let mut planes: [Vec<f64>; CHANNELS] = Default::default();
    for (c, out_plane) in planes.iter_mut().enumerate() {
        // Forward order is horizontal then vertical, so the adjoint runs
        // the vertical transpose first.
        let mut mid = vec![0.0; lr.width() * hr_h];
        for col in 0..lr.width() {
            plan_y.apply_adjoint(&lr.plane(c)[col..], lr.width(), &mut mid[col..], lr.width());
        }
        let mut out = vec![0.0; hr_w * hr_h];
        for row in 0..hr_h {
            plan_x.apply_adjoint(&mid[row * lr.width()..], 1, &mut out[row * hr_w..], 1);
        }
        *out_plane = out;
    }
    ColorImage::from_planes(hr_w, hr_h, planes).expect("plane sizes derived from dimensions")
}

/// Builds the scale pyramid: level 0 is the input, level i has dimensions
/// round(dims * ratio^i), each produced by antialiased bicubic resize of the
/// input.
pub fn build_pyramid(
    img: &ColorImage,
    ratio: f64,
    levels: usize,
    min_size: usize,
) -> Result<Vec<ColorImage>> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config {
            fields: vec!["pyramid_ratio".into()],
        });
    }
    let mut out = Vec::with_capacity(levels + 1);
    out.push(img.clone());
    for i in 1..=levels {
        let f = ratio.powi(i as i32);
        let w = (img.width() as f64 * f).round() as usize;
        let h = (img.height() as f64 * f).round() as usize;
        if w < min_size || h < min_size {
            return Err(Error::Config {
                fields: vec![format!(
                    "pyramid_levels (level {} is {}x{}, below the {} patch size)",
                    i, w, h, min_size
                )],
            });
        }
        out.push(bicubic_resize(img, w, h, true)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_image(w: usize, h: usize) -> ColorImage {
        let mut img = ColorImage::new(w, h);
        for c in 0..CHANNELS {
            for row in 0..h {
                for col in 0..w {
                    img.set(c, row, col, (row * w + col) as f64 + 10.0 * c as f64);
                }
            }
        }
        img
    }

    /// Independent dense oracle: evaluates the widened Keys kernel for every
    /// output/input pair directly, row pass then column pass.
    fn oracle_resize_plane(
        plane: &[f64],
        w: usize,
        h: usize,
        tw: usize,
        th: usize,
        antialias: bool,
    ) -> Vec<f64> {
        let resample_1d = |src: &[f64], dst_len: usize| -> Vec<f64> {
            let src_len = src.len();
            let scale = dst_len as f64 / src_len as f64;
            let kw = if antialias && scale < 1.0 { 1.0 / scale } else { 1.0 };
            (0..dst_len)
                .map(|i| {
                    let u = (i as f64 + 0.5) / scale - 0.5;
                    let lo = (u - 2.0 * kw).ceil() as isize;
                    let hi = (u + 2.0 * kw).floor() as isize;
                    let weights: Vec<f64> =
                        (lo..=hi).map(|j| keys_kernel((u - j as f64) / kw)).collect();
                    let total: f64 = weights.iter().sum();
                    (lo..=hi)
                        .zip(&weights)
                        .map(|(j, wgt)| {
                            let jc = j.clamp(0, src_len as isize - 1) as usize;
                            wgt / total * src[jc]
                        })
                        .sum()
                })
                .collect()
        };
        let mut mid = vec![0.0; tw * h];
        for row in 0..h {
            let out = resample_1d(&plane[row * w..(row + 1) * w], tw);
            mid[row * tw..(row + 1) * tw].copy_from_slice(&out);
        }
        let mut out = vec![0.0; tw * th];
        for col in 0..tw {
            let column: Vec<f64> = (0..h).map(|r| mid[r * tw + col]).collect();
            for (r, v) in resample_1d(&column, th).into_iter().enumerate() {
                out[r * tw + col] = v;
            }
        }
        out
    }

    #[test]
    fn constant_partition_of_unity() {
        let img = ColorImage::filled(11, 7, 100.0);
        for (tw, th, aa) in [(5, 3, true), (23, 17, false), (11, 7, true), (2, 2, true)] {
            let out = bicubic_resize(&img, tw, th, aa).unwrap();
            for c in 0..CHANNELS {
                for &v in out.plane(c) {
                    assert!((v - 100.0).abs() < 1e-9, "{}x{} aa={} gave {}", tw, th, aa, v);
                }
            }
        }
    }

    #[test]
    fn factor_one_is_identity() {
        let img = ramp_image(9, 6);
        let out = bicubic_resize(&img, 9, 6, true).unwrap();
        for c in 0..CHANNELS {
            for (a, b) in img.plane(c).iter().zip(out.plane(c)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ramp_downscale_matches_dense_oracle() {
        let img = ramp_image(8, 8);
        let out = bicubic_resize(&img, 4, 4, true).unwrap();
        for c in 0..CHANNELS {
            let expect = oracle_resize_plane(img.plane(c), 8, 8, 4, 4, true);
            for (a, b) in out.plane(c).iter().zip(&expect) {
                assert!((a - b).abs() < 1e-12, "got {} want {}", a, b);
            }
        }
    }

    #[test]
    fn upscale_matches_dense_oracle() {
        let img = ramp_image(5, 4);
        let out = bicubic_resize(&img, 11, 9, false).unwrap();
        for c in 0..CHANNELS {
            let expect = oracle_resize_plane(img.plane(c), 5, 4, 11, 9, false);
            for (a, b) in out.plane(c).iter().zip(&expect) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_target_rejected() {
        let img = ColorImage::filled(4, 4, 1.0);
        assert!(matches!(
            bicubic_resize(&img, 0, 4, true),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn degrade_constant() {
        let model = DegradationModel::new(3).unwrap();
        let img = ColorImage::filled(12, 12, 50.0);
        let out = degrade(&img, &model).unwrap();
        assert_eq!((out.width(), out.height()), (4, 4));
        for c in 0..CHANNELS {
            for &v in out.plane(c) {
                assert!((v - 50.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degrade_pads_non_divisible() {
        let model = DegradationModel::new(3).unwrap();
        let img = ColorImage::filled(13, 14, 77.0);
        let out = degrade(&img, &model).unwrap();
        assert_eq!((out.width(), out.height()), (5, 5));
        for &v in out.plane(0) {
            assert!((v - 77.0).abs() < 1e-9);
        }
    }

    #[test]
    fn degrade_factor_below_two_rejected() {
        assert!(matches!(
            DegradationModel::new(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn adjoint_inner_product_identity() {
        use rand::{Rng, SeedableRng};
        let model = DegradationModel::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let mut u = ColorImage::new(12, 12);
            let mut v = ColorImage::new(4, 4);
            for c in 0..CHANNELS {
                for x in u.plane_mut(c) {
                    *x = rng.random_range(-1.0..1.0);
                }
                for x in v.plane_mut(c) {
                    *x = rng.random_range(-1.0..1.0);
                }
            }
            let du = degrade(&u, &model).unwrap();
            let atv = degrade_adjoint(&v, &model);
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for c in 0..CHANNELS {
                lhs += du
                    .plane(c)
                    .iter()
                    .zip(v.plane(c))
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
                rhs += u
                    .plane(c)
                    .iter()
                    .zip(atv.plane(c))
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
            }
            let scale = lhs.abs().max(rhs.abs()).max(1e-12);
            assert!(
                ((lhs - rhs) / scale).abs() < 1e-8,
                "<Du,v>={} vs <u,Dᵀv>={}",
                lhs,
                rhs
            );
        }
    }

    #[test]
    fn adjoint_of_constant_is_interior_constant() {
        let model = DegradationModel::new(3).unwrap();
        let lr = ColorImage::filled(8, 8, 9.0);
        let hr = degrade_adjoint(&lr, &model);
        // Interior columns of the transposed operator all share one sum; only
        // clamp-affected border bands may differ.
        let margin = 8;
        let reference = hr.get(0, margin, margin);
        for row in margin..hr.height() - margin {
            for col in margin..hr.width() - margin {
                assert!((hr.get(0, row, col) - reference).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pyramid_dimensions_follow_rounded_ratio() {
        let img = ColorImage::filled(100, 100, 1.0);
        let pyr = build_pyramid(&img, 0.8, 6, 6).unwrap();
        let dims: Vec<usize> = pyr.iter().map(|l| l.width()).collect();
        assert_eq!(dims, vec![100, 80, 64, 51, 41, 33, 26]);
        assert_eq!(pyr.len(), 7);
    }

    #[test]
    fn pyramid_zero_levels_is_input_only() {
        let img = ramp_image(10, 10);
        let pyr = build_pyramid(&img, 0.8, 0, 6).unwrap();
        assert_eq!(pyr.len(), 1);
        assert_eq!(pyr[0], img);
    }

    #[test]
    fn pyramid_constant_stays_constant() {
        let img = ColorImage::filled(40, 40, 33.0);
        let pyr = build_pyramid(&img, 0.8, 4, 6).unwrap();
        for level in &pyr {
            for &v in level.plane(1) {
                assert!((v - 33.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pyramid_error_names_offending_level() {
        let img = ColorImage::filled(10, 10, 1.0);
        let err = build_pyramid(&img, 0.5, 3, 6).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("level 2"), "unexpected message: {}", msg);
    }
}
