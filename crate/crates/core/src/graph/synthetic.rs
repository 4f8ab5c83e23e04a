use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::Image;
use crate::error::{Error, Result};

/// A noisy background with one brighter square block.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub image: Image,
    pub block_row: usize,
    pub block_col: usize,
    pub block_size: usize,
}

impl SyntheticScene {
    pub fn in_block(&self, pixel: usize) -> bool {
        let (r, c) = (pixel / self.image.width(), pixel % self.image.width());
        (self.block_row..self.block_row + self.block_size).contains(&r)
            && (self.block_col..self.block_col + self.block_size).contains(&c)
    }
}

const BACKGROUND_MEAN: f64 = 0.5;
const BLOCK_MEAN: f64 = 0.85;
const NOISE_SD: f64 = 0.08;

/// Seeded `size × size` image: Gaussian clutter around 0.5 and a
/// `block × block` patch around 0.85 placed at least one block away from the
/// border. Intensities are clipped to `[0, 1]` and quantized to 8 bits, so
/// the image survives a PGM round trip unchanged.
pub fn synthetic_anomaly_image(size: usize, block: usize, seed: u64) -> Result<SyntheticScene> {
    if block == 0 || size < 3 * block {
        return Err(Error::InvalidArgument(format!(
            "image size {size} must be at least three block widths ({block})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, NOISE_SD).expect("positive standard deviation");
    let block_row = rng.gen_range(block..=size - 2 * block);
    let block_col = rng.gen_range(block..=size - 2 * block);
    let mut pixels = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            let inside = (block_row..block_row + block).contains(&r) && (block_col..block_col + block).contains(&c);
            let mean = if inside { BLOCK_MEAN } else { BACKGROUND_MEAN };
            let v: f64 = (mean + noise.sample(&mut rng)).clamp(0.0, 1.0);
            pixels.push((v * 255.0).round() / 255.0);
        }
    }
    Ok(SyntheticScene {
        image: Image::new(size, size, pixels)?,
        block_row,
        block_col,
        block_size: block,
    })
}
