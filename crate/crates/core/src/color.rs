//! RGB to HSV conversion and back (hexcone model, hue in degrees).

use crate::imaging::Pixel;

/// Converts an 8-bit RGB pixel to `(hue, saturation, value)` with hue in
/// `[0, 360)` degrees and saturation/value in `[0, 1]`.
///
/// Achromatic pixels (including black) report hue 0 and saturation 0.
pub fn rgb_to_hsv(px: Pixel) -> (f64, f64, f64) {
    let r = px[0] as f64 / 255.0;
    let g = px[1] as f64 / 255.0;
    let b = px[2] as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let value = max;
    let saturation = if max == 0.0 { 0.0 } else { delta / max };
    let hue = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    (hue, saturation, value)
}

/// Converts `(hue, saturation, value)` back to an 8-bit RGB pixel. Hue may
/// be any angle in degrees; channels are rounded half-up to 8 bits.
pub fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> Pixel {
    let h = hue.rem_euclid(360.0) / 60.0;
    let chroma = value * saturation;
    let x = chroma * (1.0 - (h % 2.0 - 1.0).abs());
    let (r1, g1, b1) = match h as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = value - chroma;
    [to_byte(r1 + m), to_byte(g1 + m), to_byte(b1 + m)]
}

fn to_byte(channel: f64) -> u8 {
    (channel * 255.0).round().clamp(0.0, 255.0) as u8
}
