//! Planar RGB raster type plus file I/O.
//!
//! Pixels are stored per channel as row-major `f64` on the [0, 255] intensity
//! scale. Values may leave that range during optimization; quantization back
//! to 8 bits happens only when writing a PNG.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const CHANNELS: usize = 3;

/// Planar 3-channel image, channel order r, g, b.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    planes: [Vec<f64>; CHANNELS],
}

impl ColorImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let plane = vec![value; width * height];
        ColorImage {
            width,
            height,
            planes: [plane.clone(), plane.clone(), plane],
        }
    }

    /// Builds an image from three equally sized row-major planes.
    pub fn from_planes(width: usize, height: usize, planes: [Vec<f64>; CHANNELS]) -> Result<Self> {
        for plane in &planes {
            if plane.len() != width * height {
                return Err(Error::invalid(format!(
                    "plane length {} does not match {}x{}",
                    plane.len(),
                    width,
                    height
                )));
            }
        }
        Ok(ColorImage {
            width,
            height,
            planes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn plane(&self, channel: usize) -> &[f64] {
        &self.planes[channel]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [f64] {
        &mut self.planes[channel]
    }

    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> f64 {
        self.planes[channel][row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, channel: usize, row: usize, col: usize, value: f64) {
        self.planes[channel][row * self.width + col] = value;
    }

    /// Sample with clamp-to-edge semantics; `row`/`col` may be out of range.
    #[inline]
    pub fn get_clamped(&self, channel: usize, row: isize, col: isize) -> f64 {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.get(channel, r, c)
    }

    /// Luminance plane 0.299 r + 0.587 g + 0.114 b.
    pub fn luminance(&self) -> Vec<f64> {
        let [r, g, b] = &self.planes;
        r.iter()
            .zip(g.iter())
            .zip(b.iter())
            .map(|((&r, &g), &b)| 0.299 * r + 0.587 * g + 0.114 * b)
            .collect()
    }

    /// Clamps every sample into [0, 255].
    pub fn clamped(&self) -> ColorImage {
        let mut out = self.clone();
        for plane in &mut out.planes {
            for v in plane.iter_mut() {
                *v = v.clamp(0.0, 255.0);
            }
        }
        out
    }

    /// Crops `shave` pixels from each border.
    pub fn shaved(&self, shave: usize) -> Result<ColorImage> {
        if shave == 0 {
            return Ok(self.clone());
        }
        if 2 * shave >= self.width || 2 * shave >= self.height {
            return Err(Error::invalid(format!(
                "shave {} leaves no pixels in {}x{} image",
                shave, self.width, self.height
            )));
        }
        let (w, h) = (self.width - 2 * shave, self.height - 2 * shave);
        let mut out = ColorImage::new(w, h);
        for c in 0..CHANNELS {
            for row in 0..h {
                for col in 0..w {
                    out.set(c, row, col, self.get(c, row + shave, col + shave));
                }
            }
        }
        Ok(out)
    }

    /// Reads an 8-bit PNG or JPEG file.
    pub fn read(path: &Path) -> Result<ColorImage> {
        let dynamic = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        let rgb = dynamic.to_rgb8();
        let (width, height) = (rgb.width() as usize, rgb.height() as usize);
        let mut planes = [
            vec![0.0; width * height],
            vec![0.0; width * height],
            vec![0.0; width * height],
        ];
        for (i, pixel) in rgb.pixels().enumerate() {
            for c in 0..CHANNELS {
                planes[c][i] = pixel.0[c] as f64;
            }
        }
        ColorImage::from_planes(width, height, planes)
    }

    /// Writes an 8-bit PNG, clamping and rounding each sample.
    pub fn write_png(&self, path: &Path) -> Result<()> {
        let mut data = Vec::with_capacity(self.width * self.height * CHANNELS);
        for i in 0..self.width * self.height {
            for c in 0..CHANNELS {
                data.push(self.planes[c][i].clamp(0.0, 255.0).round() as u8);
            }
        }
        let buffer: image::RgbImage =
            image::ImageBuffer::from_raw(self.width as u32, self.height as u32, data)
                .expect("buffer sized from image dimensions");
        buffer.save(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })
    }
}

const FIXTURE_MAGIC: &[u8; 4] = b"CSR1";

/// Writes the flat binary fixture format: 16-byte header (magic "CSR1",
/// width, height, plane count as little-endian u32) followed by each plane's
/// row-major little-endian f64 samples.
pub fn write_fixture(img: &ColorImage, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_fixture_header(&mut w, img.width, img.height, CHANNELS as u32)
        .map_err(io_err)?;
    for plane in &img.planes {
        for &v in plane {
            w.write_all(&v.to_le_bytes()).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

/// Dumps an arbitrary column-major matrix as a single-plane fixture
/// (width = columns, height = rows). Used for group debugging.
pub fn write_matrix_fixture(matrix: &nalgebra::DMatrix<f64>, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_fixture_header(&mut w, matrix.ncols(), matrix.nrows(), 1).map_err(io_err)?;
    for row in 0..matrix.nrows() {
        for col in 0..matrix.ncols() {
            w.write_all(&matrix[(row, col)].to_le_bytes()).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

pub fn read_fixture(path: &Path) -> Result<ColorImage> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut r = BufReader::new(file);
    let mut header = [0u8; 16];
    r.read_exact(&mut header).map_err(io_err)?;
    if &header[0..4] != FIXTURE_MAGIC {
        return Err(Error::invalid(format!(
            "bad fixture magic in {}",
            path.display()
        )));
    }
    let width = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let planes_n = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    if planes_n != CHANNELS {
        return Err(Error::invalid(format!(
            "fixture {} holds {} planes, expected {}",
            path.display(),
            planes_n,
            CHANNELS
        )));
    }
    let mut planes = [
        vec![0.0; width * height],
        vec![0.0; width * height],
        vec![0.0; width * height],
    ];
    let mut buf = [0u8; 8];
    for plane in &mut planes {
        for v in plane.iter_mut() {
            r.read_exact(&mut buf).map_err(io_err)?;
            *v = f64::from_le_bytes(buf);
        }
    }
    ColorImage::from_planes(width, height, planes)
}

fn write_fixture_header<W: Write>(
    w: &mut W,
    width: usize,
    height: usize,
    planes: u32,
) -> std::io::Result<()> {
    w.write_all(FIXTURE_MAGIC)?;
    w.write_all(&(width as u32).to_le_bytes())?;
    w.write_all(&(height as u32).to_le_bytes())?;
    w.write_all(&planes.to_le_bytes())
}
