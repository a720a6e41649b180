//! In-memory raster types: RGB images and palette-backed label maps.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// An 8-bit RGB sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb::new(0, 0, 0);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb { r, g, b }
    }
}

impl From<[u8; 3]> for Rgb {
    fn from([r, g, b]: [u8; 3]) -> Self {
        Rgb { r, g, b }
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.r, self.g, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RasterError {
    #[error("raster dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("raster dimensions {width}x{height} overflow the addressable pixel count")]
    DimensionOverflow { width: usize, height: usize },
    #[error("expected {expected} samples for the raster, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("label {0} is not present in the palette")]
    UnknownLabel(LabelId),
    #[error("the reserved unclassified id cannot be a palette entry")]
    ReservedLabel,
}

fn checked_area(width: usize, height: usize) -> Result<usize, RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::EmptyDimensions { width, height });
    }
    width
        .checked_mul(height)
        .ok_or(RasterError::DimensionOverflow { width, height })
}

/// A row-major RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRaster {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl ImageRaster {
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self, RasterError> {
        let expected = checked_area(width, height)?;
        if pixels.len() != expected {
            return Err(RasterError::LengthMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(ImageRaster {
            width,
            height,
            pixels,
        })
    }

    /// An image where every pixel has the same color.
    pub fn filled(width: usize, height: usize, color: Rgb) -> Result<Self, RasterError> {
        let n = checked_area(width, height)?;
        Ok(ImageRaster {
            width,
            height,
            pixels: alloc::vec![color; n],
        })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> Rgb,
    ) -> Result<Self, RasterError> {
        let n = checked_area(width, height)?;
        let mut pixels = Vec::with_capacity(n);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(ImageRaster {
            width,
            height,
            pixels,
        })
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

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Option<Rgb> {
        if x < self.width && y < self.height {
            Some(self.pixels[y * self.width + x])
        } else {
            None
        }
    }

    pub fn into_pixels(self) -> Vec<Rgb> {
        self.pixels
    }
}

/// Identifier of a class label inside a [`LabelRaster`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    /// Reserved id for pixels no rule could classify. Always rendered black.
    pub const UNCLASSIFIED: LabelId = LabelId(u32::MAX);

    pub fn is_unclassified(self) -> bool {
        self == Self::UNCLASSIFIED
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unclassified() {
            f.write_str("unclassified")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteEntry {
    pub name: String,
    pub color: Rgb,
}

/// Mapping from label id to a display name and color.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Palette {
    entries: BTreeMap<LabelId, PaletteEntry>,
}

impl Palette {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        id: LabelId,
        name: impl Into<String>,
        color: Rgb,
    ) -> Result<(), RasterError> {
        if id.is_unclassified() {
            return Err(RasterError::ReservedLabel);
        }
        self.entries.insert(
            id,
            PaletteEntry {
                name: name.into(),
                color,
            },
        );
        Ok(())
    }

    pub fn get(&self, id: LabelId) -> Option<&PaletteEntry> {
        self.entries.get(&id)
    }

    pub fn contains(&self, id: LabelId) -> bool {
        self.entries.contains_key(&id)
    }

    /// Display color of `id`; the unclassified id is black.
    pub fn color_of(&self, id: LabelId) -> Option<Rgb> {
        if id.is_unclassified() {
            Some(Rgb::BLACK)
        } else {
            self.entries.get(&id).map(|e| e.color)
        }
    }

    /// Label whose palette color is `color`, lowest id first. Black maps to
    /// unclassified unless a palette entry claims it.
    pub fn id_for_color(&self, color: Rgb) -> Option<LabelId> {
        self.entries
            .iter()
            .find(|(_, e)| e.color == color)
            .map(|(&id, _)| id)
            .or((color == Rgb::BLACK).then_some(LabelId::UNCLASSIFIED))
    }

    pub fn id_for_name(&self, name: &str) -> Option<LabelId> {
        self.entries
            .iter()
            .find(|(_, e)| e.name == name)
            .map(|(&id, _)| id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LabelId, &PaletteEntry)> {
        self.entries.iter().map(|(&id, e)| (id, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A row-major per-pixel label map with its palette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRaster {
    width: usize,
    height: usize,
    labels: Vec<LabelId>,
    palette: Palette,
}

impl LabelRaster {
    pub fn new(
        width: usize,
        height: usize,
        labels: Vec<LabelId>,
        palette: Palette,
    ) -> Result<Self, RasterError> {
        let expected = checked_area(width, height)?;
        if labels.len() != expected {
            return Err(RasterError::LengthMismatch {
                expected,
                actual: labels.len(),
            });
        }
        if let Some(&bad) = labels
            .iter()
            .find(|l| !l.is_unclassified() && !palette.contains(**l))
        {
            return Err(RasterError::UnknownLabel(bad));
        }
        Ok(LabelRaster {
            width,
            height,
            labels,
            palette,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    /// Renders every label to its palette color.
    pub fn to_image(&self) -> ImageRaster {
        let pixels = self
            .labels
            .iter()
            .map(|&l| self.palette.color_of(l).unwrap_or(Rgb::BLACK))
            .collect();
        ImageRaster {
            width: self.width,
            height: self.height,
            pixels,
        }
    }

    /// Recovers labels from a rendered image by palette color lookup.
    pub fn from_image(image: &ImageRaster, palette: Palette) -> Result<Self, RasterError> {
        let mut labels = Vec::with_capacity(image.len());
        for &px in image.pixels() {
            match palette.id_for_color(px) {
                Some(id) => labels.push(id),
                None => return Err(RasterError::UnknownLabel(LabelId::UNCLASSIFIED)),
            }
        }
        LabelRaster::new(image.width(), image.height(), labels, palette)
    }
}
