//! Label maps on disk: a palette-colored P6 image plus a `<stem>.palette`
//! sidecar with one `<id> <name> <r> <g> <b>` line per label.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gridrough_core::{LabelId, LabelRaster, Palette, RasterError, Rgb};
use thiserror::Error;

use crate::ppm::{self, PpmFileError};

#[derive(Debug, Error)]
pub enum PaletteError {
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Ppm(#[from] PpmFileError),
    #[error("{path}: color {color} is not in the palette")]
    UnknownColor { path: String, color: Rgb },
    #[error("{path}: {source}")]
    Raster {
        path: String,
        #[source]
        source: RasterError,
    },
}

/// Path of the sidecar belonging to `image`: same directory and stem.
pub fn sidecar_path(image: &Path) -> PathBuf {
    image.with_extension("palette")
}

pub fn format_palette(palette: &Palette) -> String {
    let mut out = String::new();
    for (id, e) in palette.iter() {
        writeln!(out, "{} {} {}", id, e.name, e.color).unwrap();
    }
    out
}

pub fn parse_palette(text: &str, origin: &str) -> Result<Palette, PaletteError> {
    let mut palette = Palette::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| PaletteError::Syntax {
            path: origin.to_string(),
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [id, name, r, g, b] = fields[..] else {
            return Err(err(format!("expected `<id> <name> <r> <g> <b>`, got {} fields", fields.len())));
        };
        let id: u32 = id.parse().map_err(|_| err(format!("bad label id {id:?}")))?;
        let channel = |s: &str| s.parse::<u8>().map_err(|_| err(format!("bad channel value {s:?}")));
        let color = Rgb::new(channel(r)?, channel(g)?, channel(b)?);
        if palette.contains(LabelId(id)) {
            return Err(err(format!("label id {id} listed twice")));
        }
        palette
            .insert(LabelId(id), name, color)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(palette)
}

pub fn load_palette(path: &Path) -> Result<Palette, PaletteError> {
    let text = fs::read_to_string(path).map_err(|source| PaletteError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_palette(&text, &path.display().to_string())
}

/// Writes `labels` as a P6 image at `path` and its palette beside it.
pub fn save_label_map(labels: &LabelRaster, path: &Path) -> std::io::Result<()> {
    ppm::save_ppm(&labels.to_image(), path)?;
    fs::write(sidecar_path(path), format_palette(labels.palette()))
}

/// Reads a label map written by [`save_label_map`]. Black pixels not claimed
/// by a palette entry decode as unclassified.
pub fn load_label_map(path: &Path) -> Result<LabelRaster, PaletteError> {
    let image = ppm::load_ppm(path)?;
    let palette = load_palette(&sidecar_path(path))?;
    decode_with(&image, palette, path)
}

pub(crate) fn decode_with(
    image: &gridrough_core::ImageRaster,
    palette: Palette,
    path: &Path,
) -> Result<LabelRaster, PaletteError> {
    if let Some(&bad) = image.pixels().iter().find(|&&px| palette.id_for_color(px).is_none()) {
        return Err(PaletteError::UnknownColor {
            path: path.display().to_string(),
            color: bad,
        });
    }
    LabelRaster::from_image(image, palette).map_err(|source| PaletteError::Raster {
        path: path.display().to_string(),
        source,
    })
}
