use gridrough_core::colorspace::hsi_to_rgb;
use gridrough_core::{rgb_to_hsi, Rgb};

/// Hue from the hexagonal projection, which agrees with the arccos form.
fn oracle(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let (r, g, b) = (f64::from(r) / 255.0, f64::from(g) / 255.0, f64::from(b) / 255.0);
    let i = (r + g + b) / 3.0;
    if r == g && g == b {
        return (0.0, 0.0, i);
    }
    let h = (3f64.sqrt() * (g - b)).atan2(2.0 * r - g - b).to_degrees().rem_euclid(360.0);
    let s = 1.0 - r.min(g).min(b) / i;
    (h, s, i)
}

fn hue_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % 360.0;
    d.min(360.0 - d)
}

#[test]
fn matches_the_projection_oracle_on_a_lattice() {
    let steps: Vec<u8> = (0..=255).step_by(5).collect();
    for &r in &steps {
        for &g in &steps {
            for &b in &steps {
                let p = rgb_to_hsi(Rgb { r, g, b });
                let (h, s, i) = oracle(r, g, b);
                assert!(hue_gap(p.h, h) < 1e-9, "{r},{g},{b}: h {} vs {h}", p.h);
                assert!((p.s - s).abs() < 1e-9, "{r},{g},{b}: s {} vs {s}", p.s);
                assert!((p.i - i).abs() < 1e-9, "{r},{g},{b}: i {} vs {i}", p.i);
            }
        }
    }
}

#[test]
fn primaries_sit_at_their_sector_starts() {
    let cases = [((255, 0, 0), 0.0), ((0, 255, 0), 120.0), ((0, 0, 255), 240.0), ((255, 255, 0), 60.0)];
    for ((r, g, b), h) in cases {
        let p = rgb_to_hsi(Rgb { r, g, b });
        assert!(hue_gap(p.h, h) < 1e-9, "{r},{g},{b}: {}", p.h);
        assert!((p.s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn inverse_recovers_every_lattice_colour() {
    for r in (0..=255u8).step_by(15) {
        for g in (0..=255u8).step_by(15) {
            for b in (0..=255u8).step_by(15) {
                let back = hsi_to_rgb(rgb_to_hsi(Rgb { r, g, b }));
                let off = [(back.r, r), (back.g, g), (back.b, b)]
                    .iter()
                    .map(|&(x, y)| (i16::from(x) - i16::from(y)).abs())
                    .max()
                    .unwrap();
                assert!(off <= 1, "{r},{g},{b} came back as {back:?}");
            }
        }
    }
}
