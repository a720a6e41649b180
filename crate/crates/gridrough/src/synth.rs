//! Synthetic solid-color scenes with exact ground truth.
//!
//! Each distinct color is one ground-truth region. Truth rasters use the
//! scene colors themselves as palette colors, so the rendered image and its
//! truth map are the same pixels and only the sidecar differs.

use std::f64::consts::PI;

use gridrough_core::colorspace::hsi_to_rgb;
use gridrough_core::{HsiPixel, ImageRaster, LabelId, LabelRaster, Palette, Rgb};

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Disk { cx: f64, cy: f64, r: f64 },
    Ring { cx: f64, cy: f64, r_in: f64, r_out: f64 },
    /// Vertical bar on the left plus a horizontal bar along the bottom.
    L { x0: f64, y0: f64, w: f64, h: f64, thick: f64 },
    /// Open at the top.
    U { x0: f64, y0: f64, w: f64, h: f64, thick: f64 },
    /// Archimedean band `r = pitch · φ / 2π` for `φ ∈ [0, 2π·turns]`.
    Spiral { cx: f64, cy: f64, pitch: f64, turns: f64, thick: f64 },
}

impl Shape {
    /// Whether the pixel centre `(x + ½, y + ½)` lies inside.
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
        let in_rect = |x0: f64, y0: f64, x1: f64, y1: f64| px >= x0 && px < x1 && py >= y0 && py < y1;
        match *self {
            Shape::Rect { x0, y0, x1, y1 } => in_rect(x0, y0, x1, y1),
            Shape::Disk { cx, cy, r } => (px - cx).powi(2) + (py - cy).powi(2) <= r * r,
            Shape::Ring { cx, cy, r_in, r_out } => {
                let d2 = (px - cx).powi(2) + (py - cy).powi(2);
                d2 >= r_in * r_in && d2 <= r_out * r_out
            }
            Shape::L { x0, y0, w, h, thick } => {
                in_rect(x0, y0, x0 + thick, y0 + h) || in_rect(x0, y0 + h - thick, x0 + w, y0 + h)
            }
            Shape::U { x0, y0, w, h, thick } => {
                in_rect(x0, y0, x0 + thick, y0 + h)
                    || in_rect(x0 + w - thick, y0, x0 + w, y0 + h)
                    || in_rect(x0, y0 + h - thick, x0 + w, y0 + h)
            }
            Shape::Spiral { cx, cy, pitch, turns, thick } => {
                let (dx, dy) = (px - cx, py - cy);
                let r = dx.hypot(dy);
                let phi = dy.atan2(dx).rem_euclid(2.0 * PI);
                let max_phi = 2.0 * PI * turns;
                let mut k = 0.0;
                loop {
                    let angle = phi + 2.0 * PI * k;
                    if angle > max_phi {
                        return false;
                    }
                    if (r - pitch * angle / (2.0 * PI)).abs() <= thick / 2.0 {
                        return true;
                    }
                    k += 1.0;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub shape: Shape,
    pub color: Rgb,
    pub name: String,
}

/// A background plus layers painted in order, later layers on top.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub width: usize,
    pub height: usize,
    pub background: Rgb,
    pub background_name: String,
    pub layers: Vec<Layer>,
}

impl Scene {
    pub fn new(width: usize, height: usize, background: Rgb, name: &str) -> Self {
        Scene {
            width,
            height,
            background,
            background_name: name.to_string(),
            layers: Vec::new(),
        }
    }

    pub fn with(mut self, shape: Shape, color: Rgb, name: &str) -> Self {
        self.layers.push(Layer {
            shape,
            color,
            name: name.to_string(),
        });
        self
    }

    pub fn render(&self) -> ImageRaster {
        ImageRaster::from_fn(self.width, self.height, |x, y| {
            self.layers
                .iter()
                .rev()
                .find(|l| l.shape.contains(x, y))
                .map_or(self.background, |l| l.color)
        })
        .expect("scene dimensions are positive")
    }

    /// One label per distinct color, numbered by first appearance among the
    /// background and the layers, named after the first owner of the color.
    pub fn palette(&self) -> Palette {
        let mut palette = Palette::new();
        let owners = std::iter::once((self.background, self.background_name.as_str()))
            .chain(self.layers.iter().map(|l| (l.color, l.name.as_str())));
        for (color, name) in owners {
            if palette.id_for_color(color).filter(|id| !id.is_unclassified()).is_none() {
                let id = LabelId(palette.len() as u32);
                palette.insert(id, name, color).expect("ids are small");
            }
        }
        palette
    }

    pub fn truth(&self) -> LabelRaster {
        LabelRaster::from_image(&self.render(), self.palette()).expect("every scene color is in the palette")
    }

    /// Number of distinct colors actually visible.
    pub fn visible_regions(&self) -> usize {
        let mut colors: Vec<Rgb> = self.render().into_pixels();
        colors.sort_unstable();
        colors.dedup();
        colors.len()
    }
}

pub const RED: Rgb = Rgb::new(220, 20, 20);
pub const GREEN: Rgb = Rgb::new(20, 170, 40);
pub const BLUE: Rgb = Rgb::new(20, 40, 220);
pub const YELLOW: Rgb = Rgb::new(230, 210, 20);
pub const MAGENTA: Rgb = Rgb::new(200, 20, 200);
pub const CYAN: Rgb = Rgb::new(20, 200, 210);
pub const GREY: Rgb = Rgb::new(128, 128, 128);
pub const WHITE: Rgb = Rgb::new(250, 250, 250);

/// Two colors of equal saturation and intensity whose hues differ by `delta` degrees.
pub fn shade_pair(base_hue: f64, delta: f64) -> (Rgb, Rgb) {
    let at = |h: f64| hsi_to_rgb(HsiPixel { h, s: 0.8, i: 0.5 });
    (at(base_hue), at(base_hue + delta))
}

pub const NAMES: [&str; 8] = ["halves", "stripes", "ring", "disks", "l-shape", "u-shape", "spiral", "two-shade"];

/// Fixed scenes, 128×128 unless noted.
pub fn named(name: &str) -> Option<Scene> {
    let s = 128.0;
    let scene = match name {
        "halves" => Scene::new(128, 128, BLUE, "water").with(
            Shape::Rect { x0: 64.0, y0: 0.0, x1: s, y1: s },
            GREEN,
            "land",
        ),
        "stripes" => Scene::new(120, 120, RED, "red")
            .with(Shape::Rect { x0: 40.0, y0: 0.0, x1: 80.0, y1: 120.0 }, GREEN, "green")
            .with(Shape::Rect { x0: 80.0, y0: 0.0, x1: 120.0, y1: 120.0 }, BLUE, "blue"),
        "ring" => Scene::new(128, 128, GREEN, "field").with(
            Shape::Ring { cx: 64.0, cy: 64.0, r_in: 24.0, r_out: 44.0 },
            BLUE,
            "ring",
        ),
        "disks" => Scene::new(128, 128, GREY, "background")
            .with(Shape::Disk { cx: 36.0, cy: 36.0, r: 22.0 }, RED, "red_disk")
            .with(Shape::Disk { cx: 92.0, cy: 90.0, r: 26.0 }, CYAN, "cyan_disk"),
        "l-shape" => Scene::new(128, 128, WHITE, "background").with(
            Shape::L { x0: 20.0, y0: 16.0, w: 90.0, h: 96.0, thick: 28.0 },
            MAGENTA,
            "l_shape",
        ),
        "u-shape" => Scene::new(128, 128, GREY, "background").with(
            Shape::U { x0: 16.0, y0: 20.0, w: 96.0, h: 92.0, thick: 26.0 },
            YELLOW,
            "u_shape",
        ),
        "spiral" => Scene::new(128, 128, WHITE, "background").with(
            Shape::Spiral { cx: 64.0, cy: 64.0, pitch: 30.0, turns: 2.0, thick: 16.0 },
            BLUE,
            "spiral",
        ),
        "two-shade" => {
            let (a, b) = shade_pair(200.0, 10.0);
            Scene::new(128, 128, a, "shade_a").with(Shape::Rect { x0: 64.0, y0: 0.0, x1: s, y1: s }, b, "shade_b")
        }
        _ => return None,
    };
    Some(scene)
}

/// Twenty 128×128 scenes of convex (rectangles, disks) and concave (rings,
/// L/U shapes, spirals) solid-color shapes over contrasting backgrounds.
pub fn shape_suite() -> Vec<(String, Scene)> {
    let bg = |c: Rgb, n: &str| Scene::new(128, 128, c, n);
    let rect = |x0: f64, y0: f64, x1: f64, y1: f64| Shape::Rect { x0, y0, x1, y1 };
    let disk = |cx: f64, cy: f64, r: f64| Shape::Disk { cx, cy, r };
    let ring = |cx: f64, cy: f64, r_in: f64, r_out: f64| Shape::Ring { cx, cy, r_in, r_out };
    let l = |x0: f64, y0: f64, w: f64, h: f64, thick: f64| Shape::L { x0, y0, w, h, thick };
    let u = |x0: f64, y0: f64, w: f64, h: f64, thick: f64| Shape::U { x0, y0, w, h, thick };
    let spiral = |pitch: f64, turns: f64, thick: f64| Shape::Spiral { cx: 64.0, cy: 64.0, pitch, turns, thick };

    let scenes = vec![
        ("rect", bg(GREY, "bg").with(rect(24.0, 30.0, 100.0, 90.0), RED, "a")),
        ("rect-offgrid", bg(WHITE, "bg").with(rect(13.0, 21.0, 77.0, 111.0), BLUE, "a")),
        ("two-rects", bg(GREY, "bg").with(rect(8.0, 8.0, 60.0, 56.0), GREEN, "a").with(rect(70.0, 64.0, 120.0, 120.0), MAGENTA, "b")),
        ("disk", bg(WHITE, "bg").with(disk(64.0, 64.0, 40.0), RED, "a")),
        ("disk-offcentre", bg(GREY, "bg").with(disk(50.0, 70.0, 33.0), CYAN, "a")),
        ("two-disks", bg(WHITE, "bg").with(disk(36.0, 40.0, 26.0), GREEN, "a").with(disk(90.0, 88.0, 28.0), BLUE, "b")),
        ("rect-and-disk", bg(GREY, "bg").with(rect(10.0, 12.0, 58.0, 116.0), YELLOW, "a").with(disk(94.0, 64.0, 26.0), BLUE, "b")),
        ("ring", bg(GREEN, "bg").with(ring(64.0, 64.0, 24.0, 44.0), BLUE, "a")),
        ("ring-thin", bg(WHITE, "bg").with(ring(64.0, 64.0, 30.0, 46.0), RED, "a")),
        ("ring-core", bg(GREY, "bg").with(ring(64.0, 64.0, 26.0, 50.0), MAGENTA, "a").with(disk(64.0, 64.0, 14.0), YELLOW, "b")),
        ("l", bg(WHITE, "bg").with(l(20.0, 16.0, 90.0, 96.0, 28.0), MAGENTA, "a")),
        ("l-thin", bg(GREY, "bg").with(l(14.0, 10.0, 100.0, 104.0, 20.0), GREEN, "a")),
        ("u", bg(GREY, "bg").with(u(16.0, 20.0, 96.0, 92.0, 26.0), YELLOW, "a")),
        ("u-wide", bg(WHITE, "bg").with(u(6.0, 10.0, 116.0, 100.0, 22.0), BLUE, "a")),
        ("spiral", bg(WHITE, "bg").with(spiral(30.0, 2.0, 16.0), BLUE, "a")),
        ("spiral-red", bg(GREY, "bg").with(spiral(32.0, 1.75, 18.0), RED, "a")),
        ("l-and-disk", bg(WHITE, "bg").with(l(8.0, 8.0, 70.0, 80.0, 22.0), RED, "a").with(disk(92.0, 40.0, 22.0), CYAN, "b")),
        ("u-and-rect", bg(GREY, "bg").with(u(8.0, 8.0, 72.0, 72.0, 20.0), GREEN, "a").with(rect(88.0, 84.0, 124.0, 124.0), RED, "b")),
        ("ring-and-l", bg(WHITE, "bg").with(ring(40.0, 44.0, 14.0, 32.0), BLUE, "a").with(l(72.0, 60.0, 50.0, 60.0, 18.0), MAGENTA, "b")),
        ("three-shapes", bg(GREY, "bg").with(disk(32.0, 32.0, 22.0), RED, "a").with(ring(96.0, 36.0, 12.0, 26.0), BLUE, "b").with(u(20.0, 70.0, 96.0, 52.0, 18.0), YELLOW, "c")),
    ];
    scenes.into_iter().map(|(n, s)| (n.to_string(), s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gridrough_core::rgb_to_hsi;

    #[test]
    fn shapes_cover_the_expected_pixels() {
        let ring = Shape::Ring { cx: 10.0, cy: 10.0, r_in: 4.0, r_out: 8.0 };
        assert!(!ring.contains(9, 9));
        assert!(ring.contains(15, 9));
        assert!(!ring.contains(0, 0));
        let u = Shape::U { x0: 0.0, y0: 0.0, w: 10.0, h: 10.0, thick: 2.0 };
        assert!(u.contains(0, 0) && u.contains(9, 0) && u.contains(5, 9));
        assert!(!u.contains(5, 5));
        let l = Shape::L { x0: 0.0, y0: 0.0, w: 10.0, h: 10.0, thick: 2.0 };
        assert!(l.contains(0, 0) && l.contains(9, 9) && !l.contains(9, 0));
    }

    #[test]
    fn every_suite_scene_is_nontrivial() {
        let suite = shape_suite();
        assert_eq!(suite.len(), 20);
        for (name, scene) in &suite {
            let regions = scene.visible_regions();
            assert_eq!(regions, scene.palette().len(), "{name}");
            assert!(regions >= 2, "{name}");
            let truth = scene.truth();
            assert_eq!(truth.to_image(), scene.render(), "{name}");
        }
    }

    #[test]
    fn named_scenes_exist() {
        for name in NAMES {
            assert!(named(name).is_some(), "{name}");
        }
        assert!(named("nope").is_none());
    }

    #[test]
    fn shade_pair_hues_are_ten_degrees_apart() {
        let (a, b) = shade_pair(200.0, 10.0);
        let (ha, hb) = (rgb_to_hsi(a).h, rgb_to_hsi(b).h);
        assert!(((hb - ha) - 10.0).abs() < 1.0, "{ha} {hb}");
    }
}
