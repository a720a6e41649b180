//! RGB to HSI conversion and the band-difference primitive used by the
//! clustering phase.
//!
//! Hue is in degrees on `[0, 360)`, saturation and intensity on `[0, 1]`.
//! Distances normalise hue by 360 and compare it circularly so that every
//! component contributes on a commensurate scale.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::raster::{ImageRaster, Rgb};

/// Hue, saturation and intensity of a single pixel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HsiPixel {
    pub h: f64,
    pub s: f64,
    pub i: f64,
}

impl HsiPixel {
    pub const fn new(h: f64, s: f64, i: f64) -> Self {
        HsiPixel { h, s, i }
    }
}

/// Converts an RGB sample to HSI.
///
/// Achromatic samples (including black) take `h = 0, s = 0`. Hue comes from
/// the arccos form and is reflected to `360 − θ` when blue exceeds green.
pub fn rgb_to_hsi(rgb: Rgb) -> HsiPixel {
    let r = f64::from(rgb.r) / 255.0;
    let g = f64::from(rgb.g) / 255.0;
    let b = f64::from(rgb.b) / 255.0;
    let sum = r + g + b;
    let i = sum / 3.0;
    if rgb.r == rgb.g && rgb.g == rgb.b {
        return HsiPixel { h: 0.0, s: 0.0, i };
    }

    let min = r.min(g).min(b);
    let s = (1.0 - 3.0 * min / sum).clamp(0.0, 1.0);

    let num = 0.5 * ((r - g) + (r - b));
    let den = libm::sqrt((r - g) * (r - g) + (r - b) * (g - b));
    // den > 0 whenever the channels are not all equal
    let theta = libm::acos((num / den).clamp(-1.0, 1.0)) * 180.0 / PI;
    let mut h = if rgb.b <= rgb.g { theta } else { 360.0 - theta };
    if h >= 360.0 {
        h -= 360.0;
    }
    HsiPixel { h, s, i }
}

/// Inverse of [`rgb_to_hsi`], rounding each channel to the nearest 8-bit value.
///
/// Used to synthesise colors with prescribed hue offsets; not exact for every
/// input because of the 8-bit quantisation.
pub fn hsi_to_rgb(p: HsiPixel) -> Rgb {
    let h = p.h.rem_euclid_deg();
    let (s, i) = (p.s.clamp(0.0, 1.0), p.i.clamp(0.0, 1.0));
    let sector = |hh: f64| {
        let lo = i * (1.0 - s);
        let hi = i * (1.0 + s * deg_cos(hh) / deg_cos(60.0 - hh));
        let rest = 3.0 * i - (lo + hi);
        (lo, hi, rest)
    };
    let (r, g, b) = if h < 120.0 {
        let (b, r, g) = sector(h);
        (r, g, b)
    } else if h < 240.0 {
        let (r, g, b) = sector(h - 120.0);
        (r, g, b)
    } else {
        let (g, b, r) = sector(h - 240.0);
        (r, g, b)
    };
    let q = |v: f64| libm::round(v.clamp(0.0, 1.0) * 255.0) as u8;
    Rgb::new(q(r), q(g), q(b))
}

fn deg_cos(deg: f64) -> f64 {
    libm::cos(deg * PI / 180.0)
}

trait DegreesExt {
    fn rem_euclid_deg(self) -> f64;
}

impl DegreesExt for f64 {
    fn rem_euclid_deg(self) -> f64 {
        let r = libm::fmod(self, 360.0);
        if r < 0.0 {
            r + 360.0
        } else {
            r
        }
    }
}

/// Circular hue difference in degrees, in `[0, 180]`.
pub fn hue_difference(a: f64, b: f64) -> f64 {
    let d = libm::fabs(a - b);
    d.min(360.0 - d)
}

/// Manhattan distance between two HSI pixels with circular, normalised hue.
/// The result lies in `[0, 2.5]`.
pub fn hsi_manhattan(a: HsiPixel, b: HsiPixel) -> f64 {
    hue_difference(a.h, b.h) / 360.0 + libm::fabs(a.s - b.s) + libm::fabs(a.i - b.i)
}

/// Whether `p` is within `theta_band` of `seed`.
pub fn similarity_flag(p: HsiPixel, seed: HsiPixel, theta_band: f64) -> bool {
    hsi_manhattan(p, seed) <= theta_band
}

/// A raster converted to HSI once, shared by the clustering phases.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiImage {
    width: usize,
    height: usize,
    pixels: Vec<HsiPixel>,
}

impl HsiImage {
    pub fn from_raster(image: &ImageRaster) -> Self {
        HsiImage {
            width: image.width(),
            height: image.height(),
            pixels: image.pixels().iter().map(|&p| rgb_to_hsi(p)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[HsiPixel] {
        &self.pixels
    }

    pub fn pixel(&self, index: usize) -> HsiPixel {
        self.pixels[index]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        libm::fabs(a - b) < 1e-12
    }

    #[test]
    fn primaries() {
        let red = rgb_to_hsi(Rgb::new(255, 0, 0));
        assert!(close(red.h, 0.0) && close(red.s, 1.0) && close(red.i, 1.0 / 3.0));
        let green = rgb_to_hsi(Rgb::new(0, 255, 0));
        assert!(close(green.h, 120.0) && close(green.s, 1.0) && close(green.i, 1.0 / 3.0));
        let blue = rgb_to_hsi(Rgb::new(0, 0, 255));
        assert!(close(blue.h, 240.0) && close(blue.s, 1.0));
    }

    #[test]
    fn achromatic_convention() {
        let gray = rgb_to_hsi(Rgb::new(128, 128, 128));
        assert_eq!(gray.h, 0.0);
        assert_eq!(gray.s, 0.0);
        assert!(close(gray.i, 128.0 / 255.0));
        assert_eq!(rgb_to_hsi(Rgb::BLACK), HsiPixel::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn circular_hue_distance() {
        let a = HsiPixel::new(10.0, 0.5, 0.5);
        let b = HsiPixel::new(350.0, 0.5, 0.5);
        assert!(close(hsi_manhattan(a, b), 20.0 / 360.0));
        assert_eq!(hsi_manhattan(a, a), 0.0);
        let lo = HsiPixel::new(0.0, 0.0, 0.0);
        let hi = HsiPixel::new(180.0, 1.0, 1.0);
        assert!(close(hsi_manhattan(lo, hi), 2.5));
    }

    #[test]
    fn flag_is_inclusive_at_threshold() {
        let seed = HsiPixel::new(0.0, 0.5, 0.5);
        let p = HsiPixel::new(0.0, 0.75, 0.5);
        assert!(similarity_flag(seed, seed, 0.0));
        assert!(similarity_flag(p, seed, 0.25));
        assert!(!similarity_flag(p, seed, 0.2499));
    }

    #[test]
    fn inverse_recovers_saturated_primaries() {
        for rgb in [
            Rgb::new(255, 0, 0),
            Rgb::new(0, 255, 0),
            Rgb::new(0, 0, 255),
            Rgb::new(200, 120, 40),
            Rgb::new(30, 160, 90),
        ] {
            assert_eq!(hsi_to_rgb(rgb_to_hsi(rgb)), rgb);
        }
    }

    fn arb_hsi() -> impl Strategy<Value = HsiPixel> {
        (0.0f64..360.0, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(h, s, i)| HsiPixel::new(h, s, i))
    }

    proptest! {
        #[test]
        fn conversion_stays_in_range(r: u8, g: u8, b: u8) {
            let p = rgb_to_hsi(Rgb::new(r, g, b));
            prop_assert!((0.0..360.0).contains(&p.h));
            prop_assert!((0.0..=1.0).contains(&p.s));
            prop_assert!((0.0..=1.0).contains(&p.i));
        }

        #[test]
        fn manhattan_is_a_metric(a in arb_hsi(), b in arb_hsi(), c in arb_hsi()) {
            let ab = hsi_manhattan(a, b);
            prop_assert!((0.0..=2.5).contains(&ab));
            prop_assert_eq!(ab, hsi_manhattan(b, a));
            prop_assert_eq!(hsi_manhattan(a, a), 0.0);
            prop_assert!(hsi_manhattan(a, c) <= ab + hsi_manhattan(b, c) + 1e-12);
        }

        #[test]
        fn flag_is_monotone_in_theta(a in arb_hsi(), b in arb_hsi(), t1 in 0.0f64..2.5, dt in 0.0f64..1.0) {
            if similarity_flag(a, b, t1) {
                prop_assert!(similarity_flag(a, b, t1 + dt));
            }
        }
    }
}
