//! Owned RGB image buffers, PNG input/output, hue-rotation recoloring, and
//! paint-coverage tracking.

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat, ImageReader};

use crate::color::{hsv_to_rgb, rgb_to_hsv};
use crate::error::{Error, Result};
use crate::walk::{GridDims, Position};

/// 8-bit RGB triple.
pub type Pixel = [u8; 3];

/// An owned `rows x cols` RGB raster, stored row-major, with value
/// semantics: cloning yields an independent copy and equality compares
/// every pixel.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    dims: GridDims,
    pixels: Vec<Pixel>,
}

impl ImageBuffer {
    pub fn solid(dims: GridDims, fill: Pixel) -> Self {
        ImageBuffer {
            dims,
            pixels: vec![fill; dims.cell_count()],
        }
    }

    pub fn from_fn(dims: GridDims, mut f: impl FnMut(Position) -> Pixel) -> Self {
        let pixels = dims.positions().map(&mut f).collect();
        ImageBuffer { dims, pixels }
    }

    pub fn from_pixels(dims: GridDims, pixels: Vec<Pixel>) -> Result<Self> {
        if pixels.len() != dims.cell_count() {
            return Err(Error::DataLength {
                dims,
                expected: dims.cell_count(),
                got: pixels.len(),
            });
        }
        Ok(ImageBuffer { dims, pixels })
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn rows(&self) -> usize {
        self.dims.rows()
    }

    pub fn cols(&self) -> usize {
        self.dims.cols()
    }

    #[inline]
    pub fn get(&self, pos: Position) -> Pixel {
        self.pixels[self.dims.index_of(pos)]
    }

    #[inline]
    pub fn set(&mut self, pos: Position, pixel: Pixel) {
        let index = self.dims.index_of(pos);
        self.pixels[index] = pixel;
    }

    /// All pixels in row-major order.
    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }
}

impl fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ImageBuffer({})", self.dims)
    }
}

/// Reads an 8-bit PNG into an [`ImageBuffer`].
///
/// Gray and gray+alpha inputs are expanded to RGB, an alpha channel is
/// discarded, and anything that is not 8 bits per channel (or not PNG at
/// all) is rejected.
pub fn load_png(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::ImageNotFound {
            path: path.to_path_buf(),
        },
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let decoded =
        image::load(BufReader::new(file), ImageFormat::Png).map_err(|source| Error::Decode {
            path: path.to_path_buf(),
            source,
        })?;
    let rgb = match decoded {
        DynamicImage::ImageRgb8(img) => img,
        img @ (DynamicImage::ImageRgba8(_)
        | DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)) => img.into_rgb8(),
        other => {
            return Err(Error::UnsupportedPixelFormat {
                path: path.to_path_buf(),
                format: format!("{:?}", other.color()),
            })
        }
    };
    let dims = GridDims::new(rgb.height() as usize, rgb.width() as usize)?;
    let pixels = rgb.pixels().map(|p| p.0).collect();
    ImageBuffer::from_pixels(dims, pixels)
}

/// Reads only the header of a PNG and returns its dimensions.
pub fn png_dimensions(path: impl AsRef<Path>) -> Result<GridDims> {
    let path = path.as_ref();
    let mut reader = ImageReader::open(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::ImageNotFound {
            path: path.to_path_buf(),
        },
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    reader.set_format(ImageFormat::Png);
    let (width, height) = reader.into_dimensions().map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    GridDims::new(height as usize, width as usize)
}

/// Writes an [`ImageBuffer`] as an 8-bit RGB PNG.
///
/// The file appears atomically: pixels are encoded to a sibling temporary
/// file which is then renamed into place, so a concurrent reader never
/// observes a partially written image.
pub fn save_png(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let flat: Vec<u8> = img
        .pixels()
        .iter()
        .flat_map(|px| px.iter().copied())
        .collect();
    let encoded = image::RgbImage::from_raw(img.cols() as u32, img.rows() as u32, flat)
        .expect("pixel count matches dimensions");
    let tmp = temp_sibling(path);
    encoded
        .save_with_format(&tmp, ImageFormat::Png)
        .map_err(|source| Error::Encode {
            path: path.to_path_buf(),
            source,
        })?;
    fs::rename(&tmp, path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".tmp");
    PathBuf::from(name)
}

/// Which pixels have been painted at least once, plus the painted total,
/// so coverage queries are O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaintedBitmap {
    dims: GridDims,
    painted: Vec<bool>,
    count: usize,
}

impl PaintedBitmap {
    pub fn new(dims: GridDims) -> Self {
        PaintedBitmap {
            dims,
            painted: vec![false; dims.cell_count()],
            count: 0,
        }
    }

    pub fn mark(&mut self, pos: Position) {
        let index = self.dims.index_of(pos);
        if !self.painted[index] {
            self.painted[index] = true;
            self.count += 1;
        }
    }

    pub fn is_painted(&self, pos: Position) -> bool {
        self.painted[self.dims.index_of(pos)]
    }

    pub fn painted_count(&self) -> usize {
        self.count
    }

    pub fn is_full(&self) -> bool {
        self.count == self.dims.cell_count()
    }

    /// Painted fraction in `[0, 1]`.
    pub fn fraction(&self) -> f64 {
        self.count as f64 / self.dims.cell_count() as f64
    }
}

/// A hue rotation in degrees, normalized to `[0, 360)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HueShiftSpec {
    degrees: f64,
}

impl HueShiftSpec {
    pub fn new(degrees: f64) -> Self {
        HueShiftSpec {
            degrees: degrees.rem_euclid(360.0),
        }
    }

    pub fn degrees(self) -> f64 {
        self.degrees
    }
}

/// Returns a copy of `img` with every pixel's hue rotated by the given
/// angle; saturation and value are preserved.
pub fn recolor(img: &ImageBuffer, shift: HueShiftSpec) -> ImageBuffer {
    ImageBuffer::from_fn(img.dims(), |pos| {
        let (h, s, v) = rgb_to_hsv(img.get(pos));
        hsv_to_rgb(h + shift.degrees(), s, v)
    })
}
