//! 2x2 stride-2 max pooling with floor semantics on odd extents.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::tensor::Tensor;
use crate::{Error, Result};

/// Spatial extent after one pooling step.
pub fn pooled_extent(dim: usize) -> usize {
    dim / 2
}

/// Max pooling over non-overlapping 2x2 windows.
///
/// Returns the pooled tensor and, per output element, the linear index of the
/// winning input element (used by the backward pass). An odd trailing row or
/// column is dropped.
pub fn maxpool2d_forward(input: &Tensor) -> Result<(Tensor, Vec<u32>)> {
    let shape = input.shape();
    if shape.len() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "pool input must be [H, W, C], got {shape:?}"
        )));
    }
    let (h, w, c) = (shape[0], shape[1], shape[2]);
    if h < 2 || w < 2 {
        return Err(Error::InvalidInput(format!(
            "pool input {h}x{w} is smaller than the 2x2 window"
        )));
    }
    let (oh, ow) = (pooled_extent(h), pooled_extent(w));
    let x = input.data();
    let mut out = vec![0.0f64; oh * ow * c];
    let mut argmax = vec![0u32; oh * ow * c];

    for py in 0..oh {
        for px in 0..ow {
            let out_base = (py * ow + px) * c;
            for ch in 0..c {
                let mut best_idx = ((2 * py) * w + 2 * px) * c + ch;
                let mut best = x[best_idx];
                for dy in 0..2 {
                    for dx in 0..2 {
                        let idx = ((2 * py + dy) * w + 2 * px + dx) * c + ch;
                        if x[idx] > best {
                            best = x[idx];
                            best_idx = idx;
                        }
                    }
                }
                out[out_base + ch] = best;
                argmax[out_base + ch] = best_idx as u32;
            }
        }
    }
    Ok((Tensor::new(vec![oh, ow, c], out)?, argmax))
}

/// Scatters the output gradient back to the argmax positions.
pub fn maxpool2d_backward(
    argmax: &[u32],
    grad_out: &Tensor,
    input_shape: &[usize],
) -> Result<Tensor> {
    if argmax.len() != grad_out.len() {
        return Err(Error::ShapeMismatch(format!(
            "argmax length {} does not match grad_out length {}",
            argmax.len(),
            grad_out.len()
        )));
    }
    let mut grad_in = Tensor::zeros(input_shape.to_vec());
    let gx = grad_in.data_mut();
    for (&idx, &g) in argmax.iter().zip(grad_out.data()) {
        gx[idx as usize] += g;
    }
    Ok(grad_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_pools_to_same_constant() {
        let input = Tensor::filled(vec![6, 6, 2], 4.25);
        let (out, _) = maxpool2d_forward(&input).unwrap();
        assert_eq!(out.shape(), &[3, 3, 2]);
        assert!(out.data().iter().all(|&v| v == 4.25));
    }

    #[test]
    fn four_by_four_matches_brute_force_windows() {
        let input = Tensor::new(vec![4, 4, 1], (1..=16).map(f64::from).collect()).unwrap();
        let (out, _) = maxpool2d_forward(&input).unwrap();
        assert_eq!(out.data(), [6.0, 8.0, 14.0, 16.0]);
    }

    #[test]
    fn shape_chain_50_25_12_6() {
        assert_eq!(pooled_extent(50), 25);
        assert_eq!(pooled_extent(25), 12);
        assert_eq!(pooled_extent(12), 6);

        let mut t = Tensor::zeros(vec![50, 50, 1]);
        for _ in 0..3 {
            t = maxpool2d_forward(&t).unwrap().0;
        }
        assert_eq!(t.shape(), &[6, 6, 1]);
    }

    #[test]
    fn odd_trailing_row_and_column_are_dropped() {
        let input = Tensor::new(vec![3, 5, 1], (0..15).map(f64::from).collect()).unwrap();
        let (out, _) = maxpool2d_forward(&input).unwrap();
        assert_eq!(out.shape(), &[1, 2, 1]);
        assert_eq!(out.data(), [6.0, 8.0]);
    }

    #[test]
    fn rejects_input_smaller_than_window() {
        let input = Tensor::zeros(vec![1, 5, 2]);
        assert!(matches!(
            maxpool2d_forward(&input),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn backward_routes_gradient_to_window_maxima() {
        let input = Tensor::new(vec![2, 2, 1], vec![1.0, 7.0, 3.0, 2.0]).unwrap();
        let (_, argmax) = maxpool2d_forward(&input).unwrap();
        let grad_out = Tensor::new(vec![1, 1, 1], vec![5.0]).unwrap();
        let grad_in = maxpool2d_backward(&argmax, &grad_out, &[2, 2, 1]).unwrap();
        assert_eq!(grad_in.data(), [0.0, 5.0, 0.0, 0.0]);
    }
}
