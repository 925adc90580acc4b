//! Aesthetic feature metrics computed per snapshot: Benford's-law
//! deviation, Global Contrast Factor, Hasler-Süsstrunk colorfulness, and
//! mean hue. All four are pure functions of pixel data.

use std::io::{self, Write};

use crate::color::rgb_to_hsv;
use crate::imaging::{ImageBuffer, Pixel};

/// The four feature values of one snapshot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureRecord {
    pub step: u64,
    /// Normalized deviation from Benford's distribution in `[0, 1]`;
    /// higher means less natural.
    pub benford: f64,
    /// Global Contrast Factor, `>= 0`; higher means richer contrast.
    pub gcf: f64,
    /// Hasler-Süsstrunk colorfulness, `>= 0`.
    pub colorfulness: f64,
    /// Arithmetic mean of per-pixel HSV hue, degrees in `[0, 360)`.
    pub mean_hue: f64,
}

impl FeatureRecord {
    pub fn compute(step: u64, img: &ImageBuffer) -> Self {
        FeatureRecord {
            step,
            benford: benford_feature(img),
            gcf: global_contrast_factor(img),
            colorfulness: colorfulness(img),
            mean_hue: mean_hue(img),
        }
    }
}

/// BT.709 luma of an sRGB pixel, on the 0..=255 scale.
fn bt709_luma(px: Pixel) -> f64 {
    0.2126 * px[0] as f64 + 0.7152 * px[1] as f64 + 0.0722 * px[2] as f64
}

/// Benford's leading-digit proportions `p_i = log10(1 + 1/i)`, `i = 1..9`.
pub fn benford_proportions() -> [f64; 9] {
    std::array::from_fn(|i| (1.0 + 1.0 / (i as f64 + 1.0)).log10())
}

/// Normalized deviation of already-sorted histogram proportions from
/// Benford's distribution.
///
/// `proportions` must be sorted descending and sum to 1. The raw deviation
/// `d = Σ|q_i − p_i|` is divided by the deviation of the worst sorted
/// histogram, which concentrates all mass in one bin, so the result is 1
/// for a single-color image, 0 for an exactly Benford-shaped histogram,
/// and in `[0, 1]` in between.
pub fn benford_from_sorted(proportions: &[f64; 9]) -> f64 {
    debug_assert!(proportions.windows(2).all(|w| w[0] >= w[1]));
    let reference = benford_proportions();
    let deviation =
        |q: &[f64; 9]| -> f64 { q.iter().zip(&reference).map(|(q, p)| (q - p).abs()).sum() };
    let mut single_bin = [0.0; 9];
    single_bin[0] = 1.0;
    deviation(proportions) / deviation(&single_bin)
}

/// Benford's-law feature of an image: the 9-bin luminance histogram
/// (BT.709 luma, equal-width bins over 0..=255) is sorted descending,
/// normalized, and scored with [`benford_from_sorted`].
pub fn benford_feature(img: &ImageBuffer) -> f64 {
    let mut counts = [0u64; 9];
    for &px in img.pixels() {
        let bin = (bt709_luma(px) / 255.0 * 9.0) as usize;
        counts[bin.min(8)] += 1;
    }
    let total = img.pixels().len() as f64;
    let mut proportions: [f64; 9] = counts.map(|c| c as f64 / total);
    proportions.sort_by(|a, b| b.total_cmp(a));
    benford_from_sorted(&proportions)
}

/// Superpixel edge lengths of the nine GCF resolutions.
pub const GCF_SUPERPIXEL_SIZES: [usize; 9] = [1, 2, 4, 8, 16, 25, 50, 100, 200];

/// The nine published GCF resolution weights
/// `w_i = (−0.406385·i/9 + 0.334573)·i/9 + 0.0877526`, `i = 1..9`.
pub fn gcf_weights() -> [f64; 9] {
    std::array::from_fn(|idx| {
        let x = (idx as f64 + 1.0) / 9.0;
        (-0.406385 * x + 0.334573) * x + 0.0877526
    })
}

/// Global Contrast Factor: the weighted sum over nine resolutions of the
/// average local lightness contrast.
///
/// Pixels become linear luminance via gamma 2.2 on BT.709 luma, each
/// superpixel averages the linear values of its block, lightness is
/// `L = 100·sqrt(linear)`, and local contrast is the mean absolute
/// L-difference to the existing 4-neighbors. Image extents that do not
/// divide by a superpixel size truncate the trailing partial blocks; an
/// image smaller than the superpixel contributes zero contrast at that
/// resolution.
pub fn global_contrast_factor(img: &ImageBuffer) -> f64 {
    let linear: Vec<f64> = img
        .pixels()
        .iter()
        .map(|&px| (bt709_luma(px) / 255.0).powf(2.2))
        .collect();
    let weights = gcf_weights();
    GCF_SUPERPIXEL_SIZES
        .iter()
        .zip(weights)
        .map(|(&size, weight)| weight * mean_local_contrast(&linear, img.rows(), img.cols(), size))
        .sum()
}

fn mean_local_contrast(linear: &[f64], rows: usize, cols: usize, size: usize) -> f64 {
    let super_rows = rows / size;
    let super_cols = cols / size;
    if super_rows == 0 || super_cols == 0 {
        return 0.0;
    }
    let mut lightness = vec![0.0f64; super_rows * super_cols];
    for i in 0..super_rows {
        for j in 0..super_cols {
            let mut sum = 0.0;
            for r in i * size..(i + 1) * size {
                for c in j * size..(j + 1) * size {
                    sum += linear[r * cols + c];
                }
            }
            lightness[i * super_cols + j] = 100.0 * (sum / (size * size) as f64).sqrt();
        }
    }
    let mut total = 0.0;
    for i in 0..super_rows {
        for j in 0..super_cols {
            let here = lightness[i * super_cols + j];
            let mut sum = 0.0;
            let mut neighbors = 0u32;
            if i > 0 {
                sum += (here - lightness[(i - 1) * super_cols + j]).abs();
                neighbors += 1;
            }
            if i + 1 < super_rows {
                sum += (here - lightness[(i + 1) * super_cols + j]).abs();
                neighbors += 1;
            }
            if j > 0 {
                sum += (here - lightness[i * super_cols + j - 1]).abs();
                neighbors += 1;
            }
            if j + 1 < super_cols {
                sum += (here - lightness[i * super_cols + j + 1]).abs();
                neighbors += 1;
            }
            if neighbors > 0 {
                total += sum / neighbors as f64;
            }
        }
    }
    total / (super_rows * super_cols) as f64
}

/// Hasler-Süsstrunk colorfulness: with per-pixel opponent components
/// `rg = R − G` and `yb = (R+G)/2 − B` on 0..=255 channels,
/// `M = sqrt(σ_rg² + σ_yb²) + 0.3·sqrt(μ_rg² + μ_yb²)` using population
/// standard deviations.
pub fn colorfulness(img: &ImageBuffer) -> f64 {
    let count = img.pixels().len() as f64;
    let mut sum_rg = 0.0;
    let mut sum_yb = 0.0;
    let mut sum_rg_sq = 0.0;
    let mut sum_yb_sq = 0.0;
    for &[r, g, b] in img.pixels() {
        let (r, g, b) = (r as f64, g as f64, b as f64);
        let rg = r - g;
        let yb = 0.5 * (r + g) - b;
        sum_rg += rg;
        sum_yb += yb;
        sum_rg_sq += rg * rg;
        sum_yb_sq += yb * yb;
    }
    let mean_rg = sum_rg / count;
    let mean_yb = sum_yb / count;
    let var_rg = (sum_rg_sq / count - mean_rg * mean_rg).max(0.0);
    let var_yb = (sum_yb_sq / count - mean_yb * mean_yb).max(0.0);
    (var_rg + var_yb).sqrt() + 0.3 * (mean_rg * mean_rg + mean_yb * mean_yb).sqrt()
}

/// Arithmetic mean of per-pixel HSV hue in degrees. Achromatic pixels
/// contribute hue 0. This is the raw mean, not the circular mean, so a
/// half-red, half-blue image scores (0 + 240) / 2 = 120.
pub fn mean_hue(img: &ImageBuffer) -> f64 {
    let sum: f64 = img.pixels().iter().map(|&px| rgb_to_hsv(px).0).sum();
    sum / img.pixels().len() as f64
}

/// Scores a stream of snapshots, one [`FeatureRecord`] per snapshot in
/// order. Snapshots must arrive in increasing step order.
pub fn feature_series<'a, I>(snapshots: I) -> Vec<FeatureRecord>
where
    I: IntoIterator<Item = (u64, &'a ImageBuffer)>,
{
    let mut records: Vec<FeatureRecord> = Vec::new();
    for (step, img) in snapshots {
        debug_assert!(records.last().is_none_or(|last| last.step < step));
        records.push(FeatureRecord::compute(step, img));
    }
    records
}

/// Writes feature records as CSV: header
/// `step,benford,gcf,colorfulness,mean_hue`, floats with six decimals,
/// LF line endings.
pub fn write_csv<W: Write>(mut writer: W, records: &[FeatureRecord]) -> io::Result<()> {
    writer.write_all(b"step,benford,gcf,colorfulness,mean_hue\n")?;
    for r in records {
        writeln!(
            writer,
            "{},{:.6},{:.6},{:.6},{:.6}",
            r.step, r.benford, r.gcf, r.colorfulness, r.mean_hue
        )?;
    }
    Ok(())
}
