//! Big-endian IDX image and label files.

use std::path::Path;

use super::dataset::{Dataset, Sample, Task};
use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxImages {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl IdxImages {
    pub fn image(&self, i: usize) -> &[u8] {
        let n = self.rows * self.cols;
        &self.pixels[i * n..(i + 1) * n]
    }
}

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Format(format!("truncated header at byte {offset}")))
}

fn check_magic(bytes: &[u8], expected: u32) -> Result<()> {
    let magic = read_u32(bytes, 0)?;
    if magic != expected {
        return Err(Error::Format(format!(
            "bad magic number {magic:#010x}, expected {expected:#010x}"
        )));
    }
    Ok(())
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    check_magic(bytes, IMAGE_MAGIC)?;
    let count = read_u32(bytes, 4)? as usize;
    let rows = read_u32(bytes, 8)? as usize;
    let cols = read_u32(bytes, 12)? as usize;
    let need = count * rows * cols;
    let body = &bytes[16..];
    if body.len() < need {
        return Err(Error::Format(format!(
            "truncated image data: expected {need} bytes, found {}",
            body.len()
        )));
    }
    Ok(IdxImages {
        count,
        rows,
        cols,
        pixels: body[..need].to_vec(),
    })
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    check_magic(bytes, LABEL_MAGIC)?;
    let count = read_u32(bytes, 4)? as usize;
    let body = &bytes[8..];
    if body.len() < count {
        return Err(Error::Format(format!(
            "truncated label data: expected {count} bytes, found {}",
            body.len()
        )));
    }
    Ok(body[..count].to_vec())
}

/// Row `i` holds the fraction of source cell `j` covered by output cell `i`,
/// divided by the output cell's width.
fn area_weights(src: usize, dst: usize) -> Vec<Vec<f64>> {
    let step = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let (lo, hi) = (i as f64 * step, (i + 1) as f64 * step);
            (0..src)
                .map(|j| {
                    let overlap = (hi.min(j as f64 + 1.0) - lo.max(j as f64)).max(0.0);
                    overlap / step
                })
                .collect()
        })
        .collect()
}

/// Area-averaged resize of a `rows × cols` image to `size × size`.
pub fn downsample(image: &[u8], rows: usize, cols: usize, size: usize) -> Vec<f64> {
    let wr = area_weights(rows, size);
    let wc = area_weights(cols, size);
    let mut out = vec![0.0; size * size];
    for (i, row_w) in wr.iter().enumerate() {
        for (j, col_w) in wc.iter().enumerate() {
            let mut acc = 0.0;
            for (r, &a) in row_w.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (c, &b) in col_w.iter().enumerate() {
                    if b != 0.0 {
                        acc += a * b * image[r * cols + c] as f64;
                    }
                }
            }
            out[i * size + j] = acc;
        }
    }
    out
}

/// Digits 0 and 1 from an IDX pair, resized to `size × size` with pixels mapped
/// linearly from `[0, 255]` to `[0, angle_scale]`.
pub fn images_to_dataset(
    images: &IdxImages,
    labels: &[u8],
    size: usize,
    angle_scale: f64,
) -> Result<Dataset> {
    if images.count != labels.len() {
        return Err(Error::Format(format!(
            "{} images but {} labels",
            images.count,
            labels.len()
        )));
    }
    let samples = (0..images.count)
        .filter(|&i| labels[i] <= 1)
        .map(|i| {
            let small = downsample(images.image(i), images.rows, images.cols, size);
            Sample {
                features: small.iter().map(|p| p / 255.0 * angle_scale).collect(),
                label: labels[i] as f64,
            }
        })
        .collect();
    Dataset::new(Task::Classification, size * size, samples)
}

pub fn load_idx_images(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    size: usize,
    angle_scale: f64,
) -> Result<Dataset> {
    let images = parse_idx_images(&std::fs::read(images_path)?)?;
    let labels = parse_idx_labels(&std::fs::read(labels_path)?)?;
    images_to_dataset(&images, &labels, size, angle_scale)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn image_file(values: &[u8]) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
        b.extend_from_slice(&(values.len() as u32).to_be_bytes());
        b.extend_from_slice(&28u32.to_be_bytes());
        b.extend_from_slice(&28u32.to_be_bytes());
        for &v in values {
            b.extend(std::iter::repeat(v).take(28 * 28));
        }
        b
    }

    fn label_file(labels: &[u8]) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
        b.extend_from_slice(&(labels.len() as u32).to_be_bytes());
        b.extend_from_slice(labels);
        b
    }

    #[test]
    fn header_of_four_image_fixture() {
        let imgs = parse_idx_images(&image_file(&[0, 255, 7, 9])).unwrap();
        assert_eq!((imgs.count, imgs.rows, imgs.cols), (4, 28, 28));
    }

    #[test]
    fn constant_images_map_to_constant_features() {
        let imgs = parse_idx_images(&image_file(&[0, 255, 100])).unwrap();
        let labels = parse_idx_labels(&label_file(&[0, 1, 7])).unwrap();
        let d = images_to_dataset(&imgs, &labels, 12, PI).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.dim(), 144);
        assert!(d.samples()[0].features.iter().all(|&v| v == 0.0));
        assert!(d.samples()[1].features.iter().all(|&v| (v - PI).abs() < 1e-12));
    }

    #[test]
    fn malformed_files_rejected() {
        let mut bad = image_file(&[1]);
        bad[3] = 0x01;
        assert!(parse_idx_images(&bad).is_err());
        let full = image_file(&[1, 2]);
        assert!(parse_idx_images(&full[..full.len() - 1]).is_err());
        assert!(parse_idx_labels(&label_file(&[0, 1])[..9]).is_err());
        let imgs = parse_idx_images(&image_file(&[1, 2])).unwrap();
        assert!(images_to_dataset(&imgs, &[0], 12, PI).is_err());
    }

    #[test]
    fn even_downsample_is_block_mean() {
        let img: Vec<u8> = (0..16).collect();
        let out = downsample(&img, 4, 4, 2);
        assert_eq!(out, vec![2.5, 4.5, 10.5, 12.5]);
    }
}
