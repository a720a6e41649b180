//! PPM (P3 ASCII / P6 binary, maxval 255) reading and writing.
//!
//! Header comments (`#` to end of line) are accepted anywhere whitespace is.
//! Every parse failure carries the byte offset where it was detected, and a
//! failed parse never yields a partial raster.

use std::fs;
use std::path::Path;

use gridrough_core::{ImageRaster, Rgb};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PpmErrorKind {
    #[error("malformed magic number (expected P3 or P6)")]
    BadMagic,
    #[error("expected a decimal number")]
    BadNumber,
    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u64),
    #[error("image dimensions must be positive")]
    ZeroDimension,
    #[error("dimensions {width}x{height} overflow")]
    DimensionOverflow { width: u64, height: u64 },
    #[error("sample value {0} exceeds maxval 255")]
    SampleOutOfRange(u64),
    #[error("missing whitespace after header")]
    MissingSeparator,
    #[error("truncated pixel data: {needed} more bytes needed")]
    Truncated { needed: usize },
    #[error("unexpected end of file")]
    UnexpectedEof,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct PpmError {
    pub offset: usize,
    pub kind: PpmErrorKind,
}

impl PpmError {
    fn at(offset: usize, kind: PpmErrorKind) -> Self {
        PpmError { offset, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpmEncoding {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<u64, PpmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        if start >= self.data.len() {
            return Err(PpmError::at(start, PpmErrorKind::UnexpectedEof));
        }
        let mut value: u64 = 0;
        while let Some(&b) = self.data.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or(PpmError::at(start, PpmErrorKind::BadNumber))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PpmError::at(start, PpmErrorKind::BadNumber));
        }
        match self.data.get(self.pos) {
            None => {}
            Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
            Some(_) => return Err(PpmError::at(self.pos, PpmErrorKind::BadNumber)),
        }
        Ok(value)
    }
}

/// Parses a PPM byte stream.
pub fn parse_ppm(data: &[u8]) -> Result<ImageRaster, PpmError> {
    let encoding = match data.get(..2) {
        Some(b"P3") => PpmEncoding::Ascii,
        Some(b"P6") => PpmEncoding::Binary,
        _ => return Err(PpmError::at(0, PpmErrorKind::BadMagic)),
    };
    if let Some(b) = data.get(2) {
        if !(b.is_ascii_whitespace() || *b == b'#') {
            return Err(PpmError::at(0, PpmErrorKind::BadMagic));
        }
    }
    let mut cur = Cursor { data, pos: 2 };
    let width_at = cur.pos;
    let width = cur.number()?;
    let height = cur.number()?;
    if width == 0 || height == 0 {
        return Err(PpmError::at(width_at, PpmErrorKind::ZeroDimension));
    }
    let maxval_at = cur.pos;
    let maxval = cur.number()?;
    if maxval != 255 {
        cur.pos = maxval_at;
        cur.skip_space_and_comments();
        return Err(PpmError::at(cur.pos, PpmErrorKind::UnsupportedMaxval(maxval)));
    }
    let overflow = PpmError::at(width_at, PpmErrorKind::DimensionOverflow { width, height });
    let count = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
        .filter(|n| n.checked_mul(3).is_some())
        .ok_or(overflow)?;
    let (w, h) = (width as usize, height as usize);

    let pixels = match encoding {
        PpmEncoding::Binary => {
            match data.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                Some(_) => return Err(PpmError::at(cur.pos, PpmErrorKind::MissingSeparator)),
                None => return Err(PpmError::at(cur.pos, PpmErrorKind::Truncated { needed: count * 3 })),
            }
            let available = data.len() - cur.pos;
            if available < count * 3 {
                return Err(PpmError::at(
                    data.len(),
                    PpmErrorKind::Truncated {
                        needed: count * 3 - available,
                    },
                ));
            }
            data[cur.pos..cur.pos + count * 3]
                .chunks_exact(3)
                .map(|c| Rgb::new(c[0], c[1], c[2]))
                .collect()
        }
        PpmEncoding::Ascii => {
            let mut pixels = Vec::with_capacity(count.min(data.len() / 6 + 1));
            let mut sample = || -> Result<u8, PpmError> {
                cur.skip_space_and_comments();
                let at = cur.pos;
                if at >= data.len() {
                    return Err(PpmError::at(at, PpmErrorKind::Truncated { needed: 1 }));
                }
                let v = cur.number()?;
                u8::try_from(v).map_err(|_| PpmError::at(at, PpmErrorKind::SampleOutOfRange(v)))
            };
            for _ in 0..count {
                let r = sample()?;
                let g = sample()?;
                let b = sample()?;
                pixels.push(Rgb::new(r, g, b));
            }
            pixels
        }
    };
    Ok(ImageRaster::new(w, h, pixels).expect("length matches parsed header"))
}

/// Serialises an image as PPM.
pub fn encode_ppm(image: &ImageRaster, encoding: PpmEncoding) -> Vec<u8> {
    let header = format!(
        "{}\n{} {}\n255\n",
        match encoding {
            PpmEncoding::Ascii => "P3",
            PpmEncoding::Binary => "P6",
        },
        image.width(),
        image.height()
    );
    let mut out = header.into_bytes();
    match encoding {
        PpmEncoding::Binary => {
            out.reserve(image.len() * 3);
            for p in image.pixels() {
                out.extend_from_slice(&[p.r, p.g, p.b]);
            }
        }
        PpmEncoding::Ascii => {
            for row in image.pixels().chunks(image.width()) {
                let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
                out.extend_from_slice(line.join("  ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum PpmFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        #[source]
        source: PpmError,
    },
}

pub fn load_ppm(path: &Path) -> Result<ImageRaster, PpmFileError> {
    let data = fs::read(path).map_err(|source| PpmFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_ppm(&data).map_err(|source| PpmFileError::Format {
        path: path.display().to_string(),
        source,
    })
}

pub fn save_ppm(image: &ImageRaster, path: &Path) -> std::io::Result<()> {
    fs::write(path, encode_ppm(image, PpmEncoding::Binary))
}
