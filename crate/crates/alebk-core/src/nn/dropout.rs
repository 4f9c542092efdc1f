//! Inverted dropout: units are zeroed with probability `rate` during training
//! and survivors are scaled by `1 / (1 - rate)`, so inference is a plain
//! forward pass with no masking.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::{Error, Result};

/// Draws a multiplicative dropout mask of `len` factors, each either `0` or
/// `1 / (1 - rate)`.
pub fn dropout_mask<R: Rng>(rng: &mut R, len: usize, rate: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::InvalidInput(format!(
            "dropout rate must be in [0, 1), got {rate}"
        )));
    }
    let keep_scale = 1.0 / (1.0 - rate);
    Ok((0..len)
        .map(|_| {
            if rng.random::<f64>() < rate {
                0.0
            } else {
                keep_scale
            }
        })
        .collect())
}

/// Applies a mask produced by [`dropout_mask`].
pub fn dropout_apply(input: &[f64], mask: &[f64]) -> Result<Vec<f64>> {
    if input.len() != mask.len() {
        return Err(Error::ShapeMismatch(format!(
            "dropout mask length {} does not match input length {}",
            mask.len(),
            input.len()
        )));
    }
    Ok(input.iter().zip(mask).map(|(&x, &m)| x * m).collect())
}

/// The backward pass multiplies by the same mask.
pub fn dropout_backward(grad_out: &[f64], mask: &[f64]) -> Result<Vec<f64>> {
    dropout_apply(grad_out, mask)
}
