//! Binary 16-bit PGM (P5) images as `ndarray` grids, rows top to bottom.

use image::codecs::pnm::{GraymapHeader, PnmEncoder, PnmHeader, SampleEncoding};
use image::{ImageBuffer, ImageFormat, Luma};
use ndarray::Array2;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Maps `values` linearly from `[lo, hi]` onto `0..=65535`, clamping.
pub fn quantize(values: &Array2<f64>, lo: f64, hi: f64) -> Result<Array2<u16>> {
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::config(format!(
            "invalid quantization range [{lo}, {hi}]"
        )));
    }
    Ok(values.mapv(|v| {
        let u = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
        (u * 65535.0).round() as u16
    }))
}

pub fn write_pgm16<W: Write>(pixels: &Array2<u16>, out: W) -> Result<()> {
    let (rows, cols) = pixels.dim();
    let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(cols as u32, rows as u32, pixels.iter().copied().collect())
            .ok_or_else(|| Error::Encoding("pixel buffer does not match the image size".into()))?;
    let header = GraymapHeader {
        encoding: SampleEncoding::Binary,
        height: rows as u32,
        width: cols as u32,
        maxwhite: 65535,
    };
    let encoder = PnmEncoder::new(out).with_header(PnmHeader::from(header));
    buf.write_with_encoder(encoder)
        .map_err(|e| Error::Encoding(e.to_string()))
}

pub fn save_pgm16(pixels: &Array2<u16>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_pgm16(pixels, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Decodes an 8- or 16-bit PGM into values in `[0, 1]`.
pub fn decode_pgm(bytes: &[u8]) -> Result<Array2<f64>> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
        .map_err(|e| Error::Encoding(format!("not a readable PGM: {e}")))?;
    let gray = img.into_luma16();
    let (w, h) = gray.dimensions();
    let data: Vec<f64> = gray
        .into_raw()
        .into_iter()
        .map(|v| v as f64 / 65535.0)
        .collect();
    Array2::from_shape_vec((h as usize, w as usize), data)
        .map_err(|e| Error::Encoding(e.to_string()))
}

pub fn load_pgm(path: &Path) -> Result<Array2<f64>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_bit_roundtrip_is_big_endian() {
        let px = Array2::from_shape_vec((2, 3), vec![0u16, 1, 256, 65535, 4660, 7]).unwrap();
        let mut bytes = Vec::new();
        write_pgm16(&px, &mut bytes).unwrap();
        assert!(bytes.starts_with(b"P5"));
        let body = &bytes[bytes.len() - 12..];
        let header: Vec<&str> = std::str::from_utf8(&bytes[..bytes.len() - 12])
            .unwrap()
            .split_whitespace()
            .collect();
        assert_eq!(header, ["P5", "3", "2", "65535"]);
        assert_eq!(&body[..6], &[0, 0, 0, 1, 1, 0]);
        let back = decode_pgm(&bytes).unwrap();
        assert_eq!(back.dim(), (2, 3));
        assert!((back[[1, 1]] * 65535.0 - 4660.0).abs() < 1e-9);
    }

    #[test]
    fn reads_eight_bit() {
        let mut bytes = b"P5\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 255]);
        let v = decode_pgm(&bytes).unwrap();
        assert_eq!(v[[0, 0]], 0.0);
        assert_eq!(v[[0, 1]], 1.0);
    }

    #[test]
    fn quantize_clamps() {
        let v = Array2::from_shape_vec((1, 3), vec![-1.0, 0.5, 2.0]).unwrap();
        let q = quantize(&v, 0.0, 1.0).unwrap();
        assert_eq!(q.as_slice().unwrap(), &[0, 32768, 65535]);
        assert!(quantize(&v, 1.0, 1.0).is_err());
    }
}
